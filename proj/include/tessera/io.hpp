#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"
#include "tessera/characteristics.hpp"
#include "tessera/raster.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

inline constexpr int kSchemaVersion = 1;

using AnyTessellation = std::variant<Tessellation2, Tessellation3, RasterTessellation>;

/// Shortest decimal that reads back to the same double ("nan", "inf", "-inf" otherwise).
std::string format_double(double x);

nlohmann::json window_to_json(const Window2& w);
nlohmann::json window_to_json(const Window3& w);
Window2 window2_from_json(const nlohmann::json& j);
Window3 window3_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Tessellation2& t);
nlohmann::json to_json(const Tessellation3& t);
nlohmann::json to_json(const RasterTessellation& t);
nlohmann::json to_json(const AnyTessellation& t);
/// Throws FormatError on a schema mismatch or malformed document.
AnyTessellation from_json(const nlohmann::json& j);

std::string dump(const nlohmann::json& j);
void export_tessellation(const AnyTessellation& t, const std::string& path);
AnyTessellation import_tessellation(const std::string& path);

/// Rows: name,estimate,se,oracle,z (oracle and z empty when unknown).
void write_report_csv(std::ostream& os, const CharacteristicsReport& r, const OracleValues* oracle = nullptr);

enum class ColorBy { cell, generator, leaf };
ColorBy parse_color_by(const std::string& s);

/// Cells as polygons with index-hashed fill and black strokes; rasters as row runs.
std::string render_svg(const Tessellation2& t, ColorBy color = ColorBy::cell, double width_px = 800.0);
std::string render_svg(const RasterTessellation& t, ColorBy color = ColorBy::cell, double width_px = 800.0);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace tessera

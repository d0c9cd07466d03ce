#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tessera/characteristics.hpp"
#include "tessera/io.hpp"

namespace tessera {

/// Reads a JSON object with dotted error paths and rejects unknown keys on finish().
class ParamReader {
public:
    ParamReader(const nlohmann::json& j, std::string path);

    [[nodiscard]] bool has(const std::string& key) const;
    double number(const std::string& key, std::optional<double> fallback = std::nullopt);
    double positive(const std::string& key, std::optional<double> fallback = std::nullopt);
    long long integer(const std::string& key, std::optional<long long> fallback = std::nullopt);
    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt);
    bool flag(const std::string& key, bool fallback);
    const nlohmann::json& raw(const std::string& key);
    ParamReader child(const std::string& key);
    [[nodiscard]] std::string where(const std::string& key) const { return path_ + "." + key; }
    void finish() const;

private:
    const nlohmann::json& j_;
    std::string path_;
    std::vector<std::string> used_;
};

/// Model names accepted by generate(); pv2, pv3 and pdt are Poisson-Voronoi and
/// Poisson-Delaunay shorthands with periodic or plus-sampled default windows.
const std::vector<std::string>& model_names();

AnyTessellation generate(const std::string& model, const nlohmann::json& params, const Seed& seed);

/// Closed-form mean values for the model, when known.
std::optional<OracleValues> oracle_for(const std::string& model, const nlohmann::json& params);

/// Per-replicate measurements of any tessellation kind.
Measurements measure_any(const AnyTessellation& t, const CentroidRule& rule = {});
int dimension(const AnyTessellation& t);

struct SweepRow {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double oracle = 0.0;
    double z = 0.0;
    bool has_oracle = false;
};

struct SweepTable {
    std::string model;
    std::size_t replicates = 0;
    CharacteristicsReport report;
    std::vector<SweepRow> rows;
    /// Largest |z| over rows with an oracle (0 if none).
    [[nodiscard]] double max_abs_z() const;
};

/// Replicate r uses Seed{seed, r, 0}; replicates run in parallel and are pooled
/// in index order, so the table does not depend on the thread count.
SweepTable monte_carlo_sweep(const std::string& model, const nlohmann::json& params, std::size_t n_reps,
                             std::uint64_t seed);

void write_sweep_csv(std::ostream& os, const SweepTable& t);

/// Factorial grid "key=v1,v2;key2=lo:hi:step" expanded into parameter sets.
/// Keys may be JSON pointers ("/window/margin") or top-level names.
std::vector<std::vector<std::pair<std::string, nlohmann::json>>> parse_grid(const std::string& spec);
nlohmann::json apply_setting(nlohmann::json params, const std::vector<std::pair<std::string, nlohmann::json>>& setting);

}  // namespace tessera

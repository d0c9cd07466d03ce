#include "tessera/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tessera/errors.hpp"
#include "tessera/rng.hpp"

namespace tessera {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

template <int D>
json vec_json(const Vec<D>& v) {
    json a = json::array();
    for (int i = 0; i < D; ++i) a.push_back(v[i]);
    return a;
}

template <int D>
Vec<D> vec_from(const json& j) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(D)) throw FormatError("expected a point of dimension " + std::to_string(D));
    Vec<D> v{};
    for (int i = 0; i < D; ++i) v[i] = j.at(i).get<double>();
    return v;
}

template <int D>
json points_json(const std::vector<Vec<D>>& pts) {
    json a = json::array();
    for (const auto& p : pts) a.push_back(vec_json<D>(p));
    return a;
}

template <int D>
std::vector<Vec<D>> points_from(const json& j) {
    std::vector<Vec<D>> out;
    out.reserve(j.size());
    for (const auto& p : j) out.push_back(vec_from<D>(p));
    return out;
}

template <int D>
json window_json(const Window<D>& w) {
    return {{"lo", vec_json<D>(w.lo)}, {"hi", vec_json<D>(w.hi)}, {"edge_mode", to_string(w.mode)}, {"margin", w.margin}};
}

template <int D>
Window<D> window_from(const json& j) {
    try {
        Window<D> w;
        w.lo = vec_from<D>(j.at("lo"));
        w.hi = vec_from<D>(j.at("hi"));
        w.mode = parse_edge_mode(j.value("edge_mode", std::string("none")));
        w.margin = j.value("margin", 0.0);
        w.validate();
        return w;
    } catch (const ParameterError& e) {
        throw FormatError(std::string("window: ") + e.what());
    }
}

template <int D>
json pattern_json(const PointPattern<D>& p) {
    json j = {{"points", points_json<D>(p.points)}};
    if (!p.radii.empty()) j["radii"] = p.radii;
    if (!p.weights.empty()) j["weights"] = p.weights;
    if (!p.times.empty()) j["times"] = p.times;
    if (!p.matrices.empty()) j["matrices"] = p.matrices;
    if (p.saturated) j["saturated"] = true;
    return j;
}

template <int D>
PointPattern<D> pattern_from(const json& j, const Window<D>& w) {
    PointPattern<D> p;
    p.window = w;
    p.points = points_from<D>(j.at("points"));
    if (j.contains("radii")) p.radii = j["radii"].get<std::vector<double>>();
    if (j.contains("weights")) p.weights = j["weights"].get<std::vector<double>>();
    if (j.contains("times")) p.times = j["times"].get<std::vector<double>>();
    if (j.contains("matrices")) p.matrices = j["matrices"].get<std::vector<Matrix<D>>>();
    p.saturated = j.value("saturated", false);
    return p;
}

template <int D>
json generator_json(const PointPattern<D>& p, int g) {
    if (g < 0 || static_cast<std::size_t>(g) >= p.size()) return nullptr;
    json marks = json::object();
    if (!p.radii.empty()) marks["radius"] = p.radii[g];
    if (!p.weights.empty()) marks["weight"] = p.weights[g];
    if (!p.times.empty()) marks["time"] = p.times[g];
    if (!p.matrices.empty()) marks["matrix"] = p.matrices[g];
    return {{"index", g}, {"coords", vec_json<D>(p.points[g])}, {"marks", marks}};
}

int generator_from(const json& j) { return j.is_null() ? -1 : j.at("index").get<int>(); }

template <class E>
json edges_json(const std::vector<E>& edges, bool periodic, json& data) {
    json a = json::array();
    data = json::array();
    for (const auto& e : edges) {
        a.push_back({e.v0, e.v1});
        json d = {{"a", vec_json(e.a)}, {"b", vec_json(e.b)}, {"cells", e.cells}, {"boundary", e.boundary}};
        if (periodic) d["shift"] = e.shift;
        data.push_back(std::move(d));
    }
    return a;
}

template <class E, int D>
std::vector<E> edges_from(const json& a, const json& data) {
    if (a.size() != data.size()) throw FormatError("edges and edge_data differ in length");
    std::vector<E> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto& e = out[i];
        e.v0 = a[i].at(0).get<int>();
        e.v1 = a[i].at(1).get<int>();
        const auto& d = data[i];
        e.a = vec_from<D>(d.at("a"));
        e.b = vec_from<D>(d.at("b"));
        e.cells = d.at("cells").get<std::vector<int>>();
        e.boundary = d.at("boundary").get<bool>();
        if (d.contains("shift")) e.shift = d["shift"].get<std::array<int, D>>();
    }
    return out;
}

json empty_json(const std::vector<EmptyCell>& v) {
    json a = json::array();
    for (const auto& e : v) a.push_back({{"generator", e.generator}, {"reason", e.reason}});
    return a;
}

std::vector<EmptyCell> empty_from(const json& a) {
    std::vector<EmptyCell> out;
    for (const auto& e : a) out.push_back({e.at("generator").get<int>(), e.at("reason").get<std::string>()});
    return out;
}

json header(const char* kind, const std::string& model, const json& params, std::uint64_t seed) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    j["model"] = model;
    j["params"] = params;
    j["seed"] = seed;
    return j;
}

void check_header(const json& j) {
    if (!j.is_object()) throw FormatError("document is not a JSON object");
    if (!j.contains("schema_version")) throw FormatError("document has no schema_version");
    const int v = j["schema_version"].get<int>();
    if (v != kSchemaVersion)
        throw FormatError("unsupported schema_version " + std::to_string(v) + " (expected " + std::to_string(kSchemaVersion) + ")");
}

Tessellation2 t2_from(const json& j) {
    Tessellation2 t;
    t.model = j.at("model").get<std::string>();
    t.params = j.at("params");
    t.seed = j.at("seed").get<std::uint64_t>();
    t.window = window_from<2>(j.at("window"));
    const auto& shape = j.at("window").at("shape");
    if (shape.is_array()) t.shape = ConvexPolygon::from_trusted_ring(points_from<2>(shape));
    t.generators = pattern_from<2>(j.at("generators"), t.window);
    t.vertices = points_from<2>(j.at("vertices"));
    t.vertex_boundary = j.at("vertex_boundary").get<std::vector<std::uint8_t>>();
    if (t.vertex_boundary.size() != t.vertices.size()) throw FormatError("vertex_boundary length mismatch");
    t.edges = edges_from<Edge2, 2>(j.at("edges"), j.at("edge_data"));
    for (const auto& c : j.at("cells")) {
        Cell2 cell;
        cell.polygon = ConvexPolygon::from_trusted_ring(points_from<2>(c.at("polygon")));
        cell.ring = c.at("vertex_ring").get<std::vector<int>>();
        cell.corner = c.at("corner").get<std::vector<std::uint8_t>>();
        if (c.contains("shift")) cell.shift = c["shift"].get<std::vector<Shift2>>();
        else cell.shift.assign(cell.ring.size(), Shift2{0, 0});
        if (cell.corner.size() != cell.ring.size() || cell.shift.size() != cell.ring.size())
            throw FormatError("cell ring annotations differ in length");
        for (int v : cell.ring)
            if (v < 0 || static_cast<std::size_t>(v) >= t.vertices.size()) throw FormatError("cell refers to a missing vertex");
        cell.generator = generator_from(c.at("generator"));
        cell.tag = c.value("tag", -1LL);
        cell.neighbors = c.at("neighbors").get<std::vector<int>>();
        t.cells.push_back(std::move(cell));
    }
    t.empty_cells = empty_from(j.value("empty_cells", json::array()));
    for (const auto& s : j.value("segments", json::array())) t.segments.push_back({vec_from<2>(s.at(0)), vec_from<2>(s.at(1))});
    t.warnings = j.value("warnings", std::vector<std::string>{});
    t.face_to_face = j.at("face_to_face").get<bool>();
    t.normal = j.at("normal").get<bool>();
    return t;
}

Tessellation3 t3_from(const json& j) {
    Tessellation3 t;
    t.model = j.at("model").get<std::string>();
    t.params = j.at("params");
    t.seed = j.at("seed").get<std::uint64_t>();
    t.window = window_from<3>(j.at("window"));
    t.generators = pattern_from<3>(j.at("generators"), t.window);
    t.vertices = points_from<3>(j.at("vertices"));
    t.vertex_boundary = j.at("vertex_boundary").get<std::vector<std::uint8_t>>();
    if (t.vertex_boundary.size() != t.vertices.size()) throw FormatError("vertex_boundary length mismatch");
    t.edges = edges_from<Edge3, 3>(j.at("edges"), j.at("edge_data"));
    for (const auto& f : j.at("facets")) {
        Facet3 facet;
        facet.vertex_ids = f.at("vertex_ids").get<std::vector<int>>();
        facet.loop = points_from<3>(f.at("loop"));
        facet.cells = f.at("cells").get<std::vector<int>>();
        facet.boundary = f.at("boundary").get<bool>();
        t.facets.push_back(std::move(facet));
    }
    for (const auto& c : j.at("cells")) {
        Cell3 cell;
        cell.polyhedron = ConvexPolyhedron(points_from<3>(c.at("vertices")), c.at("facet_loops").get<std::vector<std::vector<int>>>());
        cell.vertex_ids = c.at("vertex_ids").get<std::vector<int>>();
        if (c.contains("shift")) cell.shift = c["shift"].get<std::vector<Shift3>>();
        else cell.shift.assign(cell.vertex_ids.size(), Shift3{0, 0, 0});
        cell.generator = generator_from(c.at("generator"));
        cell.tag = c.value("tag", -1LL);
        cell.neighbors = c.at("neighbors").get<std::vector<int>>();
        t.cells.push_back(std::move(cell));
    }
    t.empty_cells = empty_from(j.value("empty_cells", json::array()));
    t.warnings = j.value("warnings", std::vector<std::string>{});
    t.face_to_face = j.at("face_to_face").get<bool>();
    t.normal = j.at("normal").get<bool>();
    return t;
}

RasterTessellation raster_from(const json& j) {
    RasterTessellation r;
    r.model = j.at("model").get<std::string>();
    r.params = j.at("params");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.window = window_from<2>(j.at("window"));
    r.nx = j.at("resolution").at(0).get<int>();
    r.ny = j.at("resolution").at(1).get<int>();
    r.pixel = j.at("pixel").get<double>();
    if (r.nx <= 0 || r.ny <= 0) throw FormatError("raster resolution must be positive");
    const std::size_t n = static_cast<std::size_t>(r.nx) * r.ny;
    r.labels.reserve(n);
    for (const auto& run : j.at("labels")) {
        const auto v = run.at(0).get<std::int32_t>();
        const auto k = run.at(1).get<std::size_t>();
        if (r.labels.size() + k > n) throw FormatError("raster runs exceed the grid");
        r.labels.insert(r.labels.end(), k, v);
    }
    if (r.labels.size() != n) throw FormatError("raster runs do not fill the grid");
    r.generators = pattern_from<2>(j.at("generators"), r.window);
    r.leaf_ids = j.value("leaf_ids", std::vector<std::int64_t>{});
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
}

}  // namespace

json window_to_json(const Window2& w) { return window_json<2>(w); }
json window_to_json(const Window3& w) { return window_json<3>(w); }
Window2 window2_from_json(const json& j) { return window_from<2>(j); }
Window3 window3_from_json(const json& j) { return window_from<3>(j); }

json to_json(const Tessellation2& t) {
    const bool periodic = t.window.mode == EdgeMode::periodic;
    json j = header("tessellation2", t.model, t.params, t.seed);
    j["window"] = window_json<2>(t.window);
    j["window"]["shape"] = t.shape.empty() ? json("box") : points_json<2>(t.shape.ring());
    j["generators"] = pattern_json<2>(t.generators);
    j["vertices"] = points_json<2>(t.vertices);
    j["vertex_boundary"] = t.vertex_boundary;
    json data;
    j["edges"] = edges_json(t.edges, periodic, data);
    j["edge_data"] = std::move(data);
    json cells = json::array();
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const auto& c = t.cells[i];
        json cj = {{"id", i},
                   {"vertex_ring", c.ring},
                   {"corner", c.corner},
                   {"polygon", points_json<2>(c.polygon.ring())},
                   {"generator", generator_json<2>(t.generators, c.generator)},
                   {"tag", c.tag},
                   {"neighbors", c.neighbors}};
        if (periodic) cj["shift"] = c.shift;
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    j["empty_cells"] = empty_json(t.empty_cells);
    json segs = json::array();
    for (const auto& s : t.segments) segs.push_back({vec_json<2>(s[0]), vec_json<2>(s[1])});
    j["segments"] = std::move(segs);
    j["warnings"] = t.warnings;
    j["face_to_face"] = t.face_to_face;
    j["normal"] = t.normal;
    return j;
}

json to_json(const Tessellation3& t) {
    const bool periodic = t.window.mode == EdgeMode::periodic;
    json j = header("tessellation3", t.model, t.params, t.seed);
    j["window"] = window_json<3>(t.window);
    j["window"]["shape"] = "box";
    j["generators"] = pattern_json<3>(t.generators);
    j["vertices"] = points_json<3>(t.vertices);
    j["vertex_boundary"] = t.vertex_boundary;
    json data;
    j["edges"] = edges_json(t.edges, periodic, data);
    j["edge_data"] = std::move(data);
    json facets = json::array();
    for (const auto& f : t.facets)
        facets.push_back({{"vertex_ids", f.vertex_ids}, {"loop", points_json<3>(f.loop)}, {"cells", f.cells}, {"boundary", f.boundary}});
    j["facets"] = std::move(facets);
    json cells = json::array();
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const auto& c = t.cells[i];
        json cj = {{"id", i},
                   {"vertices", points_json<3>(c.polyhedron.vertices())},
                   {"facet_loops", c.polyhedron.facets()},
                   {"vertex_ids", c.vertex_ids},
                   {"generator", generator_json<3>(t.generators, c.generator)},
                   {"tag", c.tag},
                   {"neighbors", c.neighbors}};
        if (periodic) cj["shift"] = c.shift;
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    j["empty_cells"] = empty_json(t.empty_cells);
    j["warnings"] = t.warnings;
    j["face_to_face"] = t.face_to_face;
    j["normal"] = t.normal;
    return j;
}

json to_json(const RasterTessellation& r) {
    json j = header("raster", r.model, r.params, r.seed);
    j["window"] = window_json<2>(r.window);
    j["window"]["shape"] = "box";
    j["resolution"] = {r.nx, r.ny};
    j["pixel"] = r.pixel;
    json runs = json::array();
    for (std::size_t i = 0; i < r.labels.size();) {
        std::size_t k = i;
        while (k < r.labels.size() && r.labels[k] == r.labels[i]) ++k;
        runs.push_back({r.labels[i], k - i});
        i = k;
    }
    j["labels"] = std::move(runs);
    j["generators"] = pattern_json<2>(r.generators);
    if (!r.leaf_ids.empty()) j["leaf_ids"] = r.leaf_ids;
    j["warnings"] = r.warnings;
    return j;
}

json to_json(const AnyTessellation& t) {
    return std::visit([](const auto& x) { return to_json(x); }, t);
}

AnyTessellation from_json(const json& j) {
    check_header(j);
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "tessellation2") return t2_from(j);
        if (kind == "tessellation3") return t3_from(j);
        if (kind == "raster") return raster_from(j);
        throw FormatError("unknown document kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed tessellation document: ") + e.what());
    }
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ResourceError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw ResourceError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void export_tessellation(const AnyTessellation& t, const std::string& path) { write_text(path, dump(to_json(t))); }

AnyTessellation import_tessellation(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

void write_report_csv(std::ostream& os, const CharacteristicsReport& r, const OracleValues* oracle) {
    os << "name,estimate,se,oracle,z\n";
    for (const auto& [name, e] : r.values) {
        os << name << ',' << format_double(e.value) << ',' << format_double(e.se) << ',';
        if (oracle && oracle->has(name)) {
            const double o = (*oracle)[name];
            os << format_double(o) << ',';
            if (e.se > 0.0 && std::isfinite(e.se)) os << format_double((e.value - o) / e.se);
            else if (e.value == o) os << '0';
            else os << "nan";
        } else {
            os << ',';
        }
        os << '\n';
    }
}

ColorBy parse_color_by(const std::string& s) {
    if (s == "cell") return ColorBy::cell;
    if (s == "generator") return ColorBy::generator;
    if (s == "leaf") return ColorBy::leaf;
    throw ParameterError("--color-by must be cell, generator or leaf");
}

namespace {

std::string fill_color(long long key) {
    const std::uint64_t h = splitmix64(static_cast<std::uint64_t>(key) ^ 0x5bd1e995ULL);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<unsigned>(80 + (h & 0xff) % 176),
                  static_cast<unsigned>(80 + ((h >> 8) & 0xff) % 176), static_cast<unsigned>(80 + ((h >> 16) & 0xff) % 176));
    return buf;
}

std::string fmt3(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    std::string s(buf);
    if (s == "-0.000") s = "0.000";
    return s;
}

struct Frame {
    Vec2 lo, hi;
    double scale;
    [[nodiscard]] double X(double x) const { return (x - lo[0]) * scale; }
    [[nodiscard]] double Y(double y) const { return (hi[1] - y) * scale; }
};

std::string svg_open(const Frame& f) {
    const double w = (f.hi[0] - f.lo[0]) * f.scale, h = (f.hi[1] - f.lo[1]) * f.scale;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt3(w) << "\" height=\"" << fmt3(h) << "\" viewBox=\"0 0 "
       << fmt3(w) << ' ' << fmt3(h) << "\">\n";
    return os.str();
}

}  // namespace

std::string render_svg(const Tessellation2& t, ColorBy color, double width_px) {
    const ConvexPolygon dom = t.domain();
    Vec2 lo{{INFINITY, INFINITY}}, hi{{-INFINITY, -INFINITY}};
    for (const auto& p : dom.ring())
        for (int i = 0; i < 2; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    const Frame f{lo, hi, width_px / (hi[0] - lo[0])};
    std::ostringstream os;
    os << svg_open(f);
    os << "<g stroke=\"black\" stroke-width=\"1\" stroke-linejoin=\"round\">\n";
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const auto& c = t.cells[i];
        long long key = static_cast<long long>(i);
        if (color == ColorBy::generator && c.generator >= 0) key = c.generator;
        if (color == ColorBy::leaf && c.tag >= 0) key = c.tag;
        os << "<polygon fill=\"" << fill_color(key) << "\" points=\"";
        bool first = true;
        for (const auto& p : c.polygon.ring()) {
            if (!first) os << ' ';
            first = false;
            os << fmt3(f.X(p[0])) << ',' << fmt3(f.Y(p[1]));
        }
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string render_svg(const RasterTessellation& r, ColorBy color, double width_px) {
    const Frame f{r.window.lo, {{r.window.lo[0] + r.nx * r.pixel, r.window.lo[1] + r.ny * r.pixel}}, width_px / (r.nx * r.pixel)};
    std::ostringstream os;
    os << svg_open(f);
    os << "<g shape-rendering=\"crispEdges\" stroke=\"none\">\n";
    const double px = r.pixel * f.scale;
    for (int iy = 0; iy < r.ny; ++iy) {
        for (int ix = 0; ix < r.nx;) {
            const auto l = r.at(ix, iy);
            int k = ix;
            while (k < r.nx && r.at(k, iy) == l) ++k;
            long long key = l;
            if (color == ColorBy::leaf && static_cast<std::size_t>(l) < r.leaf_ids.size()) key = r.leaf_ids[l];
            os << "<rect x=\"" << fmt3(ix * px) << "\" y=\"" << fmt3((r.ny - 1 - iy) * px) << "\" width=\"" << fmt3((k - ix) * px)
               << "\" height=\"" << fmt3(px) << "\" fill=\"" << fill_color(key) << "\"/>\n";
            ix = k;
        }
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace tessera

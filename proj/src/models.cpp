#include "tessera/models.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>

#include "tessera/arrangement.hpp"
#include "tessera/delaunay.hpp"
#include "tessera/division.hpp"
#include "tessera/errors.hpp"
#include "tessera/power.hpp"
#include "tessera/raster.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tessera {

using nlohmann::json;

namespace {
const json& empty_object() {
    static const json e = json::object();
    return e;
}
}  // namespace

ParamReader::ParamReader(const json& j, std::string path) : j_(j.is_null() ? empty_object() : j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParameterError(path_ + ": expected an object");
}

bool ParamReader::has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

const json& ParamReader::raw(const std::string& key) {
    used_.push_back(key);
    if (!j_.contains(key)) throw ParameterError(where(key) + ": required");
    return j_.at(key);
}

double ParamReader::number(const std::string& key, std::optional<double> fallback) {
    used_.push_back(key);
    if (!has(key)) {
        if (fallback) return *fallback;
        throw ParameterError(where(key) + ": required");
    }
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ParameterError(where(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParameterError(where(key) + ": must be finite");
    return x;
}

double ParamReader::positive(const std::string& key, std::optional<double> fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ParameterError(where(key) + ": must be > 0");
    return x;
}

long long ParamReader::integer(const std::string& key, std::optional<long long> fallback) {
    used_.push_back(key);
    if (!has(key)) {
        if (fallback) return *fallback;
        throw ParameterError(where(key) + ": required");
    }
    const auto& v = j_.at(key);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return static_cast<long long>(v.get<double>());
    throw ParameterError(where(key) + ": expected an integer");
}

std::string ParamReader::text(const std::string& key, std::optional<std::string> fallback) {
    used_.push_back(key);
    if (!has(key)) {
        if (fallback) return *fallback;
        throw ParameterError(where(key) + ": required");
    }
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ParameterError(where(key) + ": expected a string");
    return v.get<std::string>();
}

bool ParamReader::flag(const std::string& key, bool fallback) {
    used_.push_back(key);
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw ParameterError(where(key) + ": expected true or false");
    return j_.at(key).get<bool>();
}

ParamReader ParamReader::child(const std::string& key) {
    used_.push_back(key);
    return ParamReader(has(key) ? j_.at(key) : empty_object(), where(key));
}

void ParamReader::finish() const {
    for (const auto& [k, v] : j_.items())
        if (std::find(used_.begin(), used_.end(), k) == used_.end()) throw ParameterError(where(k) + ": unknown parameter");
}

const std::vector<std::string>& model_names() {
    static const std::vector<std::string> names{"voronoi", "laguerre", "delaunay", "beta-delaunay", "lloyd", "plt",
                                                "php3d", "stit", "division", "gilbert", "acs", "dead-leaves",
                                                "iterate", "raster", "pv2", "pv3", "pdt"};
    return names;
}

namespace {

template <int D>
Window<D> read_window(ParamReader& pr, EdgeMode default_mode, double default_margin) {
    ParamReader w = pr.child("window");
    Window<D> out;
    for (int i = 0; i < D; ++i) out.hi[i] = 1.0;
    auto read_vec = [&](const char* key, Vec<D>& v) {
        if (!w.has(key)) return;
        const json& a = w.raw(key);
        if (!a.is_array() || a.size() != static_cast<std::size_t>(D))
            throw ParameterError(w.where(key) + ": expected an array of " + std::to_string(D) + " numbers");
        for (int i = 0; i < D; ++i) {
            if (!a[i].is_number()) throw ParameterError(w.where(key) + ": expected numbers");
            v[i] = a[i].get<double>();
        }
    };
    read_vec("lo", out.lo);
    read_vec("hi", out.hi);
    const std::string mode = w.text("edge_mode", std::string(to_string(default_mode)));
    try {
        out.mode = parse_edge_mode(mode);
    } catch (const ParameterError& e) {
        throw ParameterError(w.where("edge_mode") + ": " + e.what());
    }
    out.margin = w.number("margin", default_margin);
    w.finish();
    try {
        out.validate();
    } catch (const ParameterError& e) {
        throw ParameterError(pr.where("window") + ": " + e.what());
    }
    return out;
}

MarkDistribution read_marks(ParamReader m) {
    const std::string dist = m.text("dist");
    MarkDistribution d;
    if (dist == "constant") d = MarkDistribution::constant(m.number("value"));
    else if (dist == "uniform") d = MarkDistribution::uniform(m.number("lo"), m.number("hi"));
    else if (dist == "lognormal") d = MarkDistribution::lognormal(m.number("mu"), m.number("sigma"));
    else if (dist == "gamma") d = MarkDistribution::gamma(m.number("shape"), m.number("scale"));
    else throw ParameterError(m.where("dist") + ": unknown distribution '" + dist + "' (constant, uniform, lognormal, gamma)");
    m.finish();
    try {
        d.validate();
    } catch (const ParameterError& e) {
        throw ParameterError(m.where("dist") + ": " + e.what());
    }
    return d;
}

DirectionRose read_rose(ParamReader& pr, int dim) {
    if (!pr.has("rose")) return DirectionRose::isotropic(dim);
    const json& r = pr.raw("rose");
    try {
        if (r.is_string()) {
            const auto s = r.get<std::string>();
            if (s == "isotropic") return DirectionRose::isotropic(dim);
            if (s == "axis" || s == "axis_aligned") return DirectionRose::axis_aligned(dim);
            throw ParameterError("unknown rose '" + s + "' (isotropic, axis)");
        }
        ParamReader rr(r, pr.where("rose"));
        const std::string type = rr.text("type");
        if (type == "isotropic") {
            rr.finish();
            return DirectionRose::isotropic(dim);
        }
        if (type == "discrete") {
            std::vector<std::array<double, 3>> dirs;
            if (rr.has("angles")) {
                if (dim != 2) throw ParameterError("angles describe planar roses only");
                for (double a : rr.raw("angles").get<std::vector<double>>()) dirs.push_back({std::cos(a), std::sin(a), 0.0});
            } else {
                for (const auto& v : rr.raw("directions")) {
                    std::array<double, 3> d{0, 0, 0};
                    for (std::size_t i = 0; i < v.size() && i < 3; ++i) d[i] = v[i].get<double>();
                    dirs.push_back(d);
                }
            }
            auto probs = rr.raw("probs").get<std::vector<double>>();
            rr.finish();
            return DirectionRose::discrete(dim, std::move(dirs), std::move(probs));
        }
        if (type == "density") {
            if (dim != 2) throw ParameterError("density roses are planar");
            auto w = rr.raw("weights").get<std::vector<double>>();
            rr.finish();
            return DirectionRose::density(std::move(w));
        }
        throw ParameterError("unknown rose type '" + type + "' (isotropic, discrete, density)");
    } catch (const json::exception& e) {
        throw ParameterError(pr.where("rose") + ": " + e.what());
    } catch (const ParameterError& e) {
        const std::string msg = e.what();
        if (msg.rfind("params", 0) == 0) throw;
        throw ParameterError(pr.where("rose") + ": " + msg);
    }
}

template <int D>
PointPattern<D> read_points(ParamReader& pr, const Window<D>& w, const Seed& seed) {
    if (!pr.has("points")) {
        const double lambda = pr.positive("lambda");
        return sample_poisson<D>(w, lambda, seed.derive("points"));
    }
    ParamReader p = pr.child("points");
    const std::string process = p.text("process", std::string("poisson"));
    PointPattern<D> out;
    if (process == "poisson") {
        out = sample_poisson<D>(w, p.positive("lambda"), seed.derive("points"));
    } else if (process == "binomial") {
        const long long n = p.integer("n");
        if (n < 1) throw ParameterError(p.where("n") + ": must be >= 1");
        out = sample_binomial<D>(w, static_cast<std::size_t>(n), seed.derive("points"));
    } else if (process == "matern") {
        out = sample_matern_cluster<D>(w, p.positive("lambda_parent"), p.positive("mean_offspring"), p.positive("radius"),
                                       seed.derive("points"));
    } else if (process == "ssi") {
        const long long n = p.integer("n");
        if (n < 1) throw ParameterError(p.where("n") + ": must be >= 1");
        const long long attempts = p.integer("max_attempts", 1000000);
        out = sample_ssi<D>(w, static_cast<std::size_t>(n), p.positive("r"), static_cast<std::size_t>(std::max(1LL, attempts)),
                            seed.derive("points"));
    } else if (process == "explicit") {
        const json& a = p.raw("coords");
        out.window = w;
        for (const auto& v : a) {
            if (!v.is_array() || v.size() != static_cast<std::size_t>(D))
                throw ParameterError(p.where("coords") + ": expected points of dimension " + std::to_string(D));
            Vec<D> x{};
            for (int i = 0; i < D; ++i) x[i] = v[i].get<double>();
            out.points.push_back(x);
        }
        if (p.has("radii")) out.radii = p.raw("radii").get<std::vector<double>>();
        if (p.has("weights")) out.weights = p.raw("weights").get<std::vector<double>>();
    } else {
        throw ParameterError(p.where("process") + ": unknown process '" + process + "' (poisson, binomial, matern, ssi, explicit)");
    }
    p.finish();
    if (out.empty()) throw ParameterError(pr.where("points") + ": the realization has no points");
    return out;
}

/// Default plus margin: the generator-based default, or the one implied by "lambda".
template <int D>
double lambda_margin(const json& params) {
    double lambda = 0.0;
    if (params.contains("lambda") && params["lambda"].is_number()) lambda = params["lambda"].get<double>();
    if (params.contains("points") && params["points"].is_object()) {
        const auto& p = params["points"];
        if (p.contains("lambda") && p["lambda"].is_number()) lambda = p["lambda"].get<double>();
        if (p.contains("n") && p["n"].is_number()) lambda = p["n"].get<double>();
        if (p.contains("lambda_parent") && p["lambda_parent"].is_number() && p.contains("mean_offspring"))
            lambda = p["lambda_parent"].get<double>() * p["mean_offspring"].get<double>();
    }
    return lambda > 0.0 ? default_margin<D>(lambda) : 0.5;
}

double number_or(const json& params, const char* key, double fallback) {
    return params.contains(key) && params[key].is_number() ? params[key].get<double>() : fallback;
}

template <class T>
AnyTessellation finish(T t, const std::string& model, const json& params, const Seed& seed) {
    t.model = model;
    t.params = params;
    t.seed = seed.master;
    return t;
}

Tessellation2 as_planar(AnyTessellation t, const std::string& where) {
    if (auto* p = std::get_if<Tessellation2>(&t)) return std::move(*p);
    throw ParameterError(where + ": model must produce a planar polygonal tessellation");
}

AnyTessellation generate_impl(const std::string& model, const json& params, const Seed& seed) {
    ParamReader pr(params, "params");

    if (model == "voronoi" || model == "laguerre" || model == "pv2" || model == "pv3" || model == "lloyd") {
        int dim = static_cast<int>(pr.integer("dim", model == "pv3" ? 3 : 2));
        if (model == "pv2" && dim != 2) throw ParameterError("params.dim: pv2 is planar");
        if (model == "pv3" && dim != 3) throw ParameterError("params.dim: pv3 is spatial");
        if (dim != 2 && dim != 3) throw ParameterError("params.dim: must be 2 or 3");
        if (model == "lloyd" && dim != 2) throw ParameterError("params.dim: lloyd iterations are planar");
        const EdgeMode mode = model == "pv2" ? EdgeMode::periodic : model == "pv3" ? EdgeMode::plus : EdgeMode::none;
        const bool lag = model == "laguerre";
        auto marks = [&](auto p) {
            if (!lag) return p;
            if (!pr.has("radii") && !p.radii.empty()) return p;
            return attach_marks(std::move(p), read_marks(pr.child("radii")), seed.derive("radii"), MarkTarget::radius);
        };
        if (dim == 2) {
            const Window2 w = read_window<2>(pr, mode, lambda_margin<2>(params));
            auto p = marks(read_points<2>(pr, w, seed));
            const long long iterations = model == "lloyd" ? pr.integer("iterations") : 0;
            if (iterations < 0) throw ParameterError("params.iterations: must be >= 0");
            pr.finish();
            if (model == "lloyd") {
                auto res = lloyd_centroidal(p, static_cast<int>(iterations));
                std::ostringstream os;
                os << "final displacement " << format_double(res.displacements.empty() ? 0.0 : res.displacements.back());
                res.tessellation.warnings.push_back(os.str());
                return finish(std::move(res.tessellation), model, params, seed);
            }
            return finish(lag ? laguerre(p) : voronoi(p), model, params, seed);
        }
        const Window3 w = read_window<3>(pr, mode, lambda_margin<3>(params));
        auto p = marks(read_points<3>(pr, w, seed));
        pr.finish();
        return finish(lag ? laguerre(p) : voronoi(p), model, params, seed);
    }

    if (model == "delaunay" || model == "pdt") {
        const Window2 w = read_window<2>(pr, model == "pdt" ? EdgeMode::periodic : EdgeMode::none, lambda_margin<2>(params));
        auto p = read_points<2>(pr, w, seed);
        pr.finish();
        return finish(delaunay(p), model, params, seed);
    }

    if (model == "beta-delaunay") {
        BetaDelaunayParams bp;
        bp.gamma = pr.positive("gamma");
        bp.beta = pr.number("beta");
        const std::string variant = pr.text("variant", std::string("beta"));
        if (variant == "beta") bp.variant = BetaVariant::beta;
        else if (variant == "beta_prime" || variant == "beta'") bp.variant = BetaVariant::beta_prime;
        else throw ParameterError("params.variant: must be beta or beta_prime");
        bp.h_max = pr.number("h_max", 0.0);
        bp.margin = pr.number("margin", 1.0);
        const Window2 w = read_window<2>(pr, EdgeMode::none, 0.0);
        pr.finish();
        return finish(beta_delaunay(w, bp, seed), model, params, seed);
    }

    if (model == "plt" || model == "stit") {
        const char* key = model == "plt" ? "lambda" : "a";
        const double v = pr.positive(key);
        const Window2 w = read_window<2>(pr, EdgeMode::plus, 3.0 * M_PI / (2.0 * v));
        const DirectionRose rose = read_rose(pr, 2);
        pr.finish();
        return finish(model == "plt" ? poisson_line_tessellation(w, v, rose, seed) : stit(w, v, rose, seed), model, params, seed);
    }

    if (model == "php3d") {
        const double v = pr.positive("lambda");
        const Window3 w = read_window<3>(pr, EdgeMode::plus, 3.0 / v);
        const DirectionRose rose = read_rose(pr, 3);
        pr.finish();
        return finish(poisson_plane_tessellation(w, v, rose, seed), model, params, seed);
    }

    if (model == "division") {
        DivisionConfig cfg;
        cfg.lifetime = parse_lifetime(pr.text("lifetime", std::string("L_STIT")));
        cfg.division = parse_division(pr.text("division", std::string("D_STIT")));
        cfg.asa_min_angle = pr.number("asa_min_angle", 0.0);
        cfg.stop_time = pr.number("stop_time", 0.0);
        const long long target = pr.integer("target_cells", 0);
        if (target < 0) throw ParameterError("params.target_cells: must be >= 0");
        cfg.target_cells = static_cast<std::size_t>(target);
        const long long maxc = pr.integer("max_cells", 1000000);
        if (maxc < 1) throw ParameterError("params.max_cells: must be >= 1");
        cfg.max_cells = static_cast<std::size_t>(maxc);
        cfg.rose = read_rose(pr, 2);
        const Window2 w = read_window<2>(pr, EdgeMode::none, 0.0);
        pr.finish();
        return finish(cell_division(w, cfg, seed), model, params, seed);
    }

    if (model == "gilbert") {
        const double lambda = pr.positive("lambda");
        const std::string mode = pr.text("mode", std::string("isotropic"));
        GilbertMode gm;
        if (mode == "isotropic") gm = GilbertMode::isotropic;
        else if (mode == "rectangular") gm = GilbertMode::rectangular;
        else throw ParameterError("params.mode: must be isotropic or rectangular");
        const Window2 w = read_window<2>(pr, EdgeMode::none, 0.0);
        pr.finish();
        return finish(gilbert(w, lambda, gm, seed), model, params, seed);
    }

    if (model == "acs") {
        const double lambda = pr.positive("lambda");
        const Window2 w = read_window<2>(pr, EdgeMode::plus, 20.0 / lambda);
        pr.finish();
        return finish(acs(w, lambda, seed), model, params, seed);
    }

    if (model == "dead-leaves") {
        LeafModel lm;
        const std::string shape = pr.text("shape", std::string("disc"));
        if (shape == "disc") lm.shape = LeafModel::Shape::disc;
        else if (shape == "triangle") lm.shape = LeafModel::Shape::triangle;
        else if (shape == "polygon") lm.shape = LeafModel::Shape::polygon;
        else throw ParameterError("params.shape: must be disc, triangle or polygon");
        lm.size = read_marks(pr.child("size"));
        if (lm.shape == LeafModel::Shape::polygon) {
            for (const auto& v : pr.raw("polygon")) {
                if (!v.is_array() || v.size() != 2) throw ParameterError("params.polygon: expected [x, y] pairs");
                lm.polygon.push_back({{v[0].get<double>(), v[1].get<double>()}});
            }
        }
        const long long res = pr.integer("resolution", 256);
        const Window2 w = read_window<2>(pr, EdgeMode::none, 0.0);
        pr.finish();
        RasterTessellation r = dead_leaves(w, lm, static_cast<int>(res), seed);
        r.params = params;
        r.seed = seed.master;
        return r;
    }

    if (model == "raster") {
        const RasterModel rm = parse_raster_model(pr.text("metric", std::string("voronoi_l2")));
        const long long res = pr.integer("resolution", 256);
        const Window2 w = read_window<2>(pr, EdgeMode::none, lambda_margin<2>(params));
        auto p = read_points<2>(pr, w, seed);
        if (pr.has("radii")) p = attach_marks(std::move(p), read_marks(pr.child("radii")), seed.derive("radii"), MarkTarget::radius);
        if (pr.has("weights")) p = attach_marks(std::move(p), read_marks(pr.child("weights")), seed.derive("weights"), MarkTarget::weight);
        if (pr.has("ellipses")) {
            ParamReader e = pr.child("ellipses");
            const auto major = e.raw("major").get<std::pair<double, double>>();
            const auto minor = e.raw("minor").get<std::pair<double, double>>();
            e.finish();
            p = attach_ellipse_marks(std::move(p), major, minor, seed.derive("ellipses"));
        }
        if (rm == RasterModel::johnson_mehl && p.radii.empty()) p.radii.assign(p.size(), 0.0);
        if (rm == RasterModel::multiplicative && p.weights.empty()) p.weights.assign(p.size(), 1.0);
        if (rm == RasterModel::gbpd) {
            if (p.matrices.empty()) p.matrices.assign(p.size(), Matrix<2>{{1, 0, 0, 1}});
            if (p.weights.empty()) {
                p.weights.assign(p.size(), 0.0);
                for (std::size_t i = 0; i < p.radii.size(); ++i) p.weights[i] = p.radii[i] * p.radii[i];
            }
        }
        pr.finish();
        RasterTessellation r = raster_assign(p, rm, static_cast<int>(res));
        r.params = params;
        r.seed = seed.master;
        return r;
    }

    if (model == "iterate") {
        ParamReader base = pr.child("base");
        const std::string base_model = base.text("model");
        const json base_params = base.has("params") ? base.raw("params") : json::object();
        base.finish();
        ParamReader comp = pr.child("component");
        const std::string comp_model = comp.text("model");
        const json comp_params = comp.has("params") ? comp.raw("params") : json::object();
        comp.finish();
        const std::string mode = pr.text("mode", std::string("nest"));
        IterateMode im;
        if (mode == "nest") im = IterateMode::nest;
        else if (mode == "superpose") im = IterateMode::superpose;
        else throw ParameterError("params.mode: must be nest or superpose");
        const double p = pr.number("p", 1.0);
        if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("params.p: must lie in [0, 1]");
        pr.finish();
        const Tessellation2 t0 = as_planar(generate(base_model, base_params, seed.derive("base")), "params.base");
        ComponentGenerator gen = [comp_model, comp_params](const Window2& w, const Seed& s) {
            json cp = comp_params;
            json wj = window_to_json(w);
            if (cp.contains("window") && cp["window"].contains("edge_mode")) wj["edge_mode"] = cp["window"]["edge_mode"];
            if (cp.contains("window") && cp["window"].contains("margin")) wj["margin"] = cp["window"]["margin"];
            cp["window"] = wj;
            return as_planar(generate(comp_model, cp, s), "params.component");
        };
        return finish(iterate(t0, gen, im, p, seed), model, params, seed);
    }

    throw ParameterError("unknown model '" + model + "'");
}

}  // namespace

AnyTessellation generate(const std::string& model, const json& params, const Seed& seed) {
    try {
        return generate_impl(model, params, seed);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("params: ") + e.what());
    }
}

std::optional<OracleValues> oracle_for(const std::string& model, const json& params) {
    auto lambda_of = [&]() -> double {
        if (params.contains("points")) {
            const auto& p = params["points"];
            if (p.value("process", std::string("poisson")) != "poisson") return 0.0;
            return number_or(p, "lambda", 0.0);
        }
        return number_or(params, "lambda", 0.0);
    };
    const int dim = static_cast<int>(number_or(params, "dim", model == "pv3" ? 3 : 2));
    if (model == "pv2" || model == "pv3" || (model == "voronoi" && !params.contains("radii"))) {
        const double l = lambda_of();
        if (l > 0.0) return oracle_poisson_voronoi(l, dim);
        return std::nullopt;
    }
    if (model == "pdt" || model == "delaunay") {
        const double l = lambda_of();
        if (l > 0.0) return oracle_poisson_delaunay(l);
        return std::nullopt;
    }
    const bool isotropic = !params.contains("rose") || params["rose"] == "isotropic";
    if (model == "plt" && isotropic) return oracle_poisson_line(number_or(params, "lambda", 1.0));
    if (model == "stit" && isotropic) return oracle_stit(number_or(params, "a", 1.0));
    if (model == "acs") {
        const auto plt = oracle_poisson_line(number_or(params, "lambda", 1.0));
        OracleValues o;
        o.model = "acs";
        for (const char* k : {"A2", "gamma2", "mu2"}) o.values[k] = plt[k];
        o.values["frac_T"] = 1.0;
        return o;
    }
    return std::nullopt;
}

int dimension(const AnyTessellation& t) { return std::holds_alternative<Tessellation3>(t) ? 3 : 2; }

Measurements measure_any(const AnyTessellation& t, const CentroidRule& rule) {
    if (const auto* a = std::get_if<Tessellation2>(&t)) return measure(*a, rule);
    if (const auto* b = std::get_if<Tessellation3>(&t)) return measure(*b, rule);
    return measure_raster(std::get<RasterTessellation>(t));
}

double SweepTable::max_abs_z() const {
    double m = 0.0;
    for (const auto& r : rows)
        if (r.has_oracle) m = std::max(m, std::isnan(r.z) ? INFINITY : std::fabs(r.z));
    return m;
}

SweepTable monte_carlo_sweep(const std::string& model, const json& params, std::size_t n_reps, std::uint64_t seed) {
    if (n_reps < 1) throw ParameterError("--reps must be >= 1");
    // Validate the configuration once before fanning out.
    (void)generate(model, params, Seed{seed, 0, 0});
    std::vector<Measurements> reps(n_reps);
    std::vector<int> dims(n_reps, 2);
    std::vector<std::exception_ptr> errors(n_reps);
    const long long n = static_cast<long long>(n_reps);
#ifdef _OPENMP
    omp_set_max_active_levels(1);
#endif
#pragma omp parallel for schedule(dynamic, 1)
    for (long long r = 0; r < n; ++r) {
        try {
            const AnyTessellation t = generate(model, params, Seed{seed, static_cast<std::uint64_t>(r), 0});
            dims[r] = dimension(t);
            reps[r] = measure_any(t);
        } catch (...) {
            errors[r] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    SweepTable out;
    out.model = model;
    out.replicates = n_reps;
    out.report = pool(reps, dims.front());
    const auto oracle = oracle_for(model, params);
    for (const auto& [name, e] : out.report.values) {
        SweepRow row;
        row.name = name;
        row.estimate = e.value;
        row.se = e.se;
        if (oracle && oracle->has(name)) {
            row.has_oracle = true;
            row.oracle = (*oracle)[name];
            const double diff = row.estimate - row.oracle;
            if (row.se > 0.0 && std::isfinite(row.se)) row.z = diff / row.se;
            else row.z = std::fabs(diff) <= 1e-9 * std::max(1.0, std::fabs(row.oracle)) ? 0.0 : NAN;
        }
        out.rows.push_back(row);
    }
    return out;
}

void write_sweep_csv(std::ostream& os, const SweepTable& t) {
    os << "name,estimate,se,oracle,z\n";
    for (const auto& r : t.rows) {
        os << r.name << ',' << format_double(r.estimate) << ',' << format_double(r.se) << ',';
        if (r.has_oracle) os << format_double(r.oracle) << ',' << format_double(r.z);
        else os << ',';
        os << '\n';
    }
}

namespace {

json parse_value(const std::string& s) {
    try {
        return json::parse(s);
    } catch (const json::exception&) {
        return s;
    }
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<std::vector<std::pair<std::string, json>>> parse_grid(const std::string& spec) {
    std::vector<std::pair<std::string, std::vector<json>>> axes;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        part = trim(part);
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos || eq == 0) throw ParameterError("--grid: expected key=values in '" + part + "'");
        const std::string key = trim(part.substr(0, eq));
        const std::string vals = trim(part.substr(eq + 1));
        std::vector<json> values;
        if (std::count(vals.begin(), vals.end(), ':') == 2 && vals.find(',') == std::string::npos) {
            double lo, hi, step;
            char c1, c2;
            std::istringstream vs(vals);
            if (!(vs >> lo >> c1 >> hi >> c2 >> step) || !(step > 0.0) || hi < lo)
                throw ParameterError("--grid: bad range '" + vals + "' (lo:hi:step)");
            const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
            if (count > 100000) throw ParameterError("--grid: range too long");
            for (long long i = 0; i < count; ++i) values.push_back(lo + static_cast<double>(i) * step);
        } else {
            std::stringstream vs(vals);
            std::string v;
            while (std::getline(vs, v, ',')) values.push_back(parse_value(trim(v)));
        }
        if (values.empty()) throw ParameterError("--grid: no values for '" + key + "'");
        axes.push_back({key, std::move(values)});
    }
    if (axes.empty()) throw ParameterError("--grid: empty grid");
    std::vector<std::vector<std::pair<std::string, json>>> out{{}};
    for (const auto& [key, values] : axes) {
        std::vector<std::vector<std::pair<std::string, json>>> next;
        for (const auto& base : out)
            for (const auto& v : values) {
                auto s = base;
                s.push_back({key, v});
                next.push_back(std::move(s));
            }
        out = std::move(next);
    }
    return out;
}

json apply_setting(json params, const std::vector<std::pair<std::string, json>>& setting) {
    if (params.is_null()) params = json::object();
    for (const auto& [key, v] : setting) {
        try {
            const json::json_pointer ptr(key.front() == '/' ? key : "/" + key);
            params[ptr] = v;
        } catch (const json::exception& e) {
            throw ParameterError("--grid: bad key '" + key + "': " + e.what());
        }
    }
    return params;
}

}  // namespace tessera

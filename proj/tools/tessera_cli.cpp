#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "tessera/characteristics.hpp"
#include "tessera/errors.hpp"
#include "tessera/io.hpp"
#include "tessera/models.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace tessera;
using nlohmann::json;

namespace {

json load_params(const std::string& path) {
    if (path.empty()) return json::object();
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ParameterError("params file '" + path + "' is not valid JSON: " + e.what());
    }
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_text(path, text);
}

CentroidRule parse_centroid(const std::string& s) {
    if (s == "gravity" || s == "gravity_center") return {CentroidRule::Kind::gravity_center};
    if (s == "circumball" || s == "circumball_center") return {CentroidRule::Kind::circumball_center};
    throw ParameterError("--centroid must be gravity or circumball");
}

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("TESSERA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) throw ParameterError("TESSERA_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random tessellation generator and estimator"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads for replicate loops (default: TESSERA_THREADS or all cores)")
        ->check(CLI::PositiveNumber);

    std::string model, params_path, out, in, centroid = "gravity", color_by = "cell", grid;
    std::uint64_t seed = 1;
    std::size_t reps = 100, n = 1000;
    double threshold = 4.0, lambda = 1.0;

    auto* gen = app.add_subcommand("generate", "Simulate one realization and write it as JSON");
    gen->add_option("--model", model, "Model name")->required();
    gen->add_option("--params", params_path, "JSON parameter file");
    gen->add_option("--seed", seed, "Master seed");
    gen->add_option("--out", out, "Output JSON file (- for stdout)")->required();

    auto* stats = app.add_subcommand("stats", "Estimate characteristics of a stored tessellation");
    stats->add_option("--in", in, "Tessellation JSON")->required();
    stats->add_option("--centroid", centroid, "gravity or circumball");
    stats->add_option("--out", out, "Output CSV (- for stdout)");

    auto* val = app.add_subcommand("validate", "Monte Carlo comparison against closed-form values");
    val->add_option("--model", model, "Model name")->required();
    val->add_option("--params", params_path, "JSON parameter file");
    val->add_option("--reps", reps, "Replicates")->check(CLI::PositiveNumber);
    val->add_option("--seed", seed, "Master seed");
    val->add_option("--threshold", threshold, "Largest admissible |z|")->check(CLI::PositiveNumber);
    val->add_option("--out", out, "Output CSV (- for stdout)");

    auto* ren = app.add_subcommand("render", "Draw a planar tessellation as SVG");
    ren->add_option("--in", in, "Tessellation JSON")->required();
    ren->add_option("--out", out, "Output SVG")->required();
    ren->add_option("--color-by", color_by, "cell, generator or leaf");

    auto* sw = app.add_subcommand("sweep", "Factorial study, one CSV row per setting");
    sw->add_option("--model", model, "Model name")->required();
    sw->add_option("--params", params_path, "Base JSON parameter file");
    sw->add_option("--grid", grid, "key=v1,v2;key2=lo:hi:step")->required();
    sw->add_option("--reps", reps, "Replicates per setting")->check(CLI::PositiveNumber);
    sw->add_option("--seed", seed, "Master seed");
    sw->add_option("--out", out, "Output CSV (- for stdout)");

    auto* tc = app.add_subcommand("typical-cell", "Direct sampler of the typical cell");
    tc->add_option("--model", model, "pdt")->required();
    tc->add_option("--lambda", lambda, "Intensity")->required();
    tc->add_option("--n", n, "Number of cells")->check(CLI::PositiveNumber);
    tc->add_option("--seed", seed, "Master seed");
    tc->add_option("--out", out, "Output CSV (- for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const int nt = resolve_threads(threads);
#ifdef _OPENMP
        if (nt > 0) omp_set_num_threads(nt);
#else
        (void)nt;
#endif
        if (*gen) {
            const AnyTessellation t = generate(model, load_params(params_path), Seed{seed, 0, 0});
            emit(out, dump(to_json(t)));
            return 0;
        }
        if (*stats) {
            const AnyTessellation t = import_tessellation(in);
            const CentroidRule rule = parse_centroid(centroid);
            const CharacteristicsReport r = pool({measure_any(t, rule)}, dimension(t));
            std::ostringstream os;
            write_report_csv(os, r);
            emit(out, os.str());
            return 0;
        }
        if (*val) {
            const json params = load_params(params_path);
            const SweepTable t = monte_carlo_sweep(model, params, reps, seed);
            std::ostringstream os;
            write_sweep_csv(os, t);
            emit(out, os.str());
            if (!oracle_for(model, params)) {
                std::cerr << "validate: no closed-form values for model '" << model << "'\n";
                return 1;
            }
            if (t.max_abs_z() > threshold) {
                for (const auto& r : t.rows)
                    if (r.has_oracle && !(std::fabs(r.z) <= threshold))
                        std::cerr << "validate: " << r.name << " z = " << format_double(r.z) << '\n';
                return 1;
            }
            return 0;
        }
        if (*ren) {
            const AnyTessellation t = import_tessellation(in);
            const ColorBy c = parse_color_by(color_by);
            if (const auto* a = std::get_if<Tessellation2>(&t)) emit(out, render_svg(*a, c));
            else if (const auto* r = std::get_if<RasterTessellation>(&t)) emit(out, render_svg(*r, c));
            else throw ParameterError("render: 3D tessellations are not drawn; export the JSON instead");
            return 0;
        }
        if (*sw) {
            const json base = load_params(params_path);
            const auto settings = parse_grid(grid);
            std::vector<std::string> names;
            std::ostringstream os;
            bool first = true;
            for (const auto& s : settings) {
                const json p = apply_setting(base, s);
                const SweepTable t = monte_carlo_sweep(model, p, reps, seed);
                if (first) {
                    for (const auto& [key, v] : s) os << key << ',';
                    for (const auto& r : t.rows) {
                        names.push_back(r.name);
                        os << r.name << ',' << r.name << "_se,";
                    }
                    os << "replicates\n";
                    first = false;
                }
                for (const auto& [key, v] : s) os << (v.is_number() ? format_double(v.get<double>()) : v.dump()) << ',';
                std::map<std::string, const SweepRow*> by;
                for (const auto& r : t.rows) by[r.name] = &r;
                for (const auto& nm : names) {
                    auto it = by.find(nm);
                    if (it == by.end()) os << ",,";
                    else os << format_double(it->second->estimate) << ',' << format_double(it->second->se) << ',';
                }
                os << t.replicates << '\n';
            }
            emit(out, os.str());
            return 0;
        }
        if (*tc) {
            if (model != "pdt") throw ParameterError("typical-cell: only --model pdt has a direct sampler");
            if (!(lambda > 0.0)) throw ParameterError("--lambda must be > 0");
            Rng rng(Seed{seed, 0, hash_tag("typical-cell")});
            std::ostringstream os;
            os << "index,area,perimeter\n";
            for (std::size_t i = 0; i < n; ++i) {
                const ConvexPolygon c = sample_pdt_typical_cell(lambda, rng);
                os << i << ',' << format_double(c.area()) << ',' << format_double(c.perimeter()) << '\n';
            }
            emit(out, os.str());
            return 0;
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const InsufficientSampleError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

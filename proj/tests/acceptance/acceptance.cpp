#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tessera/characteristics.hpp"
#include "tessera/division.hpp"
#include "tessera/models.hpp"
#include "tessera/power.hpp"
#include "tessera/raster.hpp"

using namespace tessera;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " FAILED(" << what << ")";
        }
    }
};

double rel(double est, double ref) { return std::fabs(est / ref - 1.0); }

// One-sided sign test: P(X >= k) for X ~ Bin(n, 1/2).
double sign_test(std::size_t k, std::size_t n) {
    if (k == 0) return 1.0;
    const boost::math::binomial_distribution<double> b(static_cast<double>(n), 0.5);
    return boost::math::cdf(boost::math::complement(b, static_cast<double>(k) - 1.0));
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

template <class T>
T as(const AnyTessellation& t) {
    return std::get<T>(t);
}

// Areas of cells whose gravity centre lies in the window.
void typical_areas(const Tessellation2& t, std::vector<double>& out, std::size_t limit) {
    const Box2 ref = reference_box(t.window);
    for (const auto& c : t.cells) {
        if (out.size() >= limit) return;
        const Vec2 g = c.polygon.centroid();
        if (g[0] >= ref.lo[0] && g[0] < ref.hi[0] && g[1] >= ref.lo[1] && g[1] < ref.hi[1]) out.push_back(c.polygon.area());
    }
}

Outcome check_pv2_means() {
    Outcome o;
    const auto t = monte_carlo_sweep("pv2", {{"lambda", 100.0}}, 300, 101);
    const std::map<std::string, double> target{{"gamma0", 200.0}, {"gamma1", 300.0}, {"gamma2", 100.0},
                                               {"L1", 2.0 / 30.0}, {"P2", 0.4}, {"A2", 0.01}};
    for (const auto& [name, v] : target) {
        const auto e = t.report.values.at(name);
        const double z = e.se > 0 ? (e.value - v) / e.se : (e.value == v ? 0.0 : INFINITY);
        o.detail << " " << name << "=" << e.value << " z=" << z;
        o.require(std::fabs(z) < 4.0 && rel(e.value, v) < 0.03, name);
    }
    return o;
}

Outcome check_torus_exactness() {
    Outcome o;
    std::size_t bad = 0;
    const int reps = 300;
    for (int r = 0; r < reps; ++r) {
        const auto t = as<Tessellation2>(generate("pv2", {{"lambda", 100.0}}, Seed{102, static_cast<std::uint64_t>(r)}));
        const long long V = t.vertices.size(), E = t.edges.size(), F = t.cells.size();
        if (V - E + F != 0 || V != 2 * F || E != 3 * F) ++bad;
    }
    o.detail << " realizations=" << reps << " violations=" << bad;
    o.require(bad == 0, "counts");
    return o;
}

Outcome check_pv3_means() {
    Outcome o;
    const double lambda = 100.0;
    const auto t = monte_carlo_sweep("pv3", {{"lambda", lambda}}, 100, 103);
    const double mu1 = t.report["mu1"], mu2 = t.report["mu2"], n30 = t.report["N30"];
    const double r1 = 5.832 * std::pow(lambda, 2.0 / 3.0), r2 = 2.910 * std::pow(lambda, 1.0 / 3.0);
    o.detail << " mu1=" << mu1 << "/" << r1 << " mu2=" << mu2 << "/" << r2 << " N30=" << n30 << "/27.07";
    o.require(rel(mu1, r1) < 0.05, "mu1");
    o.require(rel(mu2, r2) < 0.05, "mu2");
    o.require(rel(n30, 27.07) < 0.05, "N30");
    return o;
}

Outcome check_plt_means() {
    Outcome o;
    const json params{{"lambda", M_PI}, {"window", {{"lo", {0, 0}}, {"hi", {10, 10}}, {"edge_mode", "plus"}, {"margin", 2.0}}}};
    const auto t = monte_carlo_sweep("plt", params, 500, 104);
    const double L1 = t.report["L1"], A2 = t.report["A2"], g0 = t.report["gamma0"], fx = t.report["frac_X"];
    o.detail << " L1=" << L1 << " A2=" << A2 << " gamma0=" << g0 << " frac_X=" << fx;
    o.require(rel(L1, 0.5) < 0.03, "L1");
    o.require(rel(A2, 1.0 / M_PI) < 0.03, "A2");
    o.require(rel(g0, M_PI) < 0.03, "gamma0");
    o.require(fx == 1.0, "frac_X");
    return o;
}

Outcome check_pdt() {
    Outcome o;
    const double lambda = 100.0;
    std::size_t bad = 0;
    std::vector<double> simulated;
    for (std::uint64_t r = 0; simulated.size() < 2000 || r < 20; ++r) {
        const auto t = as<Tessellation2>(generate("pdt", {{"lambda", lambda}}, Seed{105, r}));
        if (t.cells.size() != 2 * t.vertices.size()) ++bad;
        for (const auto& c : t.cells)
            if (simulated.size() < 2000) simulated.push_back(c.polygon.area());
    }
    Rng rng(Seed{106});
    double sum = 0.0;
    std::vector<double> direct;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double a = sample_pdt_typical_cell(lambda, rng).area();
        sum += a;
        if (direct.size() < 2000) direct.push_back(a);
    }
    const double mean = sum / n, ks = ks_statistic(direct, simulated);
    o.detail << " ratio_violations=" << bad << " sampler_mean=" << mean << "/" << 1.0 / (2 * lambda) << " KS=" << ks;
    o.require(bad == 0, "ratio");
    o.require(rel(mean, 1.0 / (2 * lambda)) < 0.02, "area");
    o.require(ks < 0.05, "KS");
    return o;
}

Outcome check_stit_vs_plt() {
    Outcome o;
    const double a = 20.0;
    const json window{{"lo", {0, 0}}, {"hi", {1, 1}}, {"edge_mode", "plus"}, {"margin", 0.3}};
    const auto t = monte_carlo_sweep("stit", {{"a", a}, {"window", window}}, 300, 107);
    const double mu1 = t.report["mu1"], ft = t.report["frac_T"];
    std::vector<double> s, p;
    for (std::uint64_t r = 0; s.size() < 2000; ++r)
        typical_areas(as<Tessellation2>(generate("stit", {{"a", a}, {"window", window}}, Seed{108, r})), s, 2000);
    for (std::uint64_t r = 0; p.size() < 2000; ++r)
        typical_areas(as<Tessellation2>(generate("plt", {{"lambda", a}, {"window", window}}, Seed{109, r})), p, 2000);
    const double ks = ks_statistic(s, p);
    o.detail << " mu1=" << mu1 << " frac_T=" << ft << " KS=" << ks;
    o.require(mu1 >= 19.4 && mu1 <= 20.6, "mu1");
    o.require(ft == 1.0, "frac_T");
    o.require(ks < 0.05, "KS");
    return o;
}

Outcome check_degeneration() {
    Outcome o;
    double worst = 0.0;
    bool shape = true;
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto p = sample_poisson<2>(Window2::unit(), 100.0, Seed{110, s});
        const auto v = voronoi(p);
        p.radii.assign(p.size(), 0.05);
        const auto l = laguerre(p);
        if (l.cells.size() != v.cells.size()) {
            shape = false;
            continue;
        }
        for (std::size_t i = 0; i < v.cells.size(); ++i) {
            const auto& a = v.cells[i].polygon.ring();
            const auto& b = l.cells[i].polygon.ring();
            if (a.size() != b.size()) {
                shape = false;
                continue;
            }
            for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, distance(a[k], b[k]));
        }
    }
    auto p = sample_poisson<2>(Window2::unit(), 100.0, Seed{111});
    Rng rng(Seed{111}.derive("radii"));
    for (std::size_t i = 0; i < p.size(); ++i) p.radii.push_back(rng.uniform(0.025, 0.075));
    const auto exact = laguerre(p);
    for (double r : p.radii) {
        p.weights.push_back(r * r);
        p.matrices.push_back({1, 0, 0, 1});
    }
    const double agree = label_agreement(raster_assign(p, RasterModel::gbpd, 1024), rasterize(exact, 1024));
    o.detail << " max_vertex_distance=" << worst << " gbpd_agreement=" << agree;
    o.require(shape && worst <= 1e-9, "laguerre");
    o.require(agree >= 0.999, "gbpd");
    return o;
}

Outcome check_johnson_mehl() {
    Outcome o;
    double worst = 0.0;
    for (double lambda : {1.0, 100.0, 1000.0}) {
        const double v = oracle_johnson_mehl_mu(lambda, MarkDistribution::constant(0.0), 2, 1);
        worst = std::max(worst, std::fabs(v - 2 * std::sqrt(lambda)));
    }
    o.detail << " max_abs_error=" << worst;
    o.require(worst <= 1e-6, "delta0");
    return o;
}

Outcome check_acs() {
    Outcome o;
    const double lambda = 20.0;
    const json window{{"lo", {0, 0}}, {"hi", {1, 1}}, {"edge_mode", "plus"}, {"margin", 1.0}};
    const auto t = monte_carlo_sweep("acs", {{"lambda", lambda}, {"window", window}}, 500, 112);
    const double A2 = t.report["A2"], ref = oracle_poisson_line(lambda)["A2"];
    o.detail << " A2=" << A2 << " plt=" << ref;
    o.require(rel(A2, ref) < 0.05, "A2");
    return o;
}

Outcome check_zero_cell_bias() {
    Outcome o;
    const std::size_t reps = 1000;
    std::size_t larger = 0;
    double zsum = 0.0, tsum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto t = as<Tessellation2>(generate("pv2", {{"lambda", 100.0}}, Seed{113, r}));
        const double z = t.cells[static_cast<std::size_t>(zero_cell(t, {{0.5, 0.5}}))].polygon.area();
        const double typ = t.total_area() / static_cast<double>(t.cells.size());
        larger += z > typ;
        zsum += z;
        tsum += typ;
    }
    const double p = sign_test(larger, reps);
    o.detail << " zero_mean=" << zsum / reps << " typical_mean=" << tsum / reps << " wins=" << larger << "/" << reps
             << " p=" << p;
    o.require(zsum > tsum, "means");
    o.require(p < 0.001, "sign test");
    return o;
}

Outcome check_division_variants() {
    Outcome o;
    const std::size_t seeds = 100;
    std::size_t cv_wins = 0, rd_wins = 0;
    auto run = [](Lifetime l, Division d, std::uint64_t s) {
        DivisionConfig cfg;
        cfg.lifetime = l;
        cfg.division = d;
        cfg.target_cells = 100;
        return cell_division(Window2::unit(), cfg, Seed{114, s});
    };
    auto cv = [](const Tessellation2& t) {
        double m = 0.0, q = 0.0;
        for (const auto& c : t.cells) m += c.polygon.area();
        m /= static_cast<double>(t.cells.size());
        for (const auto& c : t.cells) q += (c.polygon.area() - m) * (c.polygon.area() - m);
        return std::sqrt(q / static_cast<double>(t.cells.size())) / m;
    };
    auto rd = [](const Tessellation2& t) {
        double s = 0.0;
        for (const auto& c : t.cells) s += c.polygon.roundness();
        return s / static_cast<double>(t.cells.size());
    };
    for (std::uint64_t s = 0; s < seeds; ++s) {
        const auto stit = run(Lifetime::stit, Division::stit, s);
        cv_wins += cv(run(Lifetime::area, Division::stit, s)) < cv(stit);
        rd_wins += rd(run(Lifetime::stit, Division::rdssq, s)) > rd(stit);
    }
    const double p_cv = sign_test(cv_wins, seeds), p_rd = sign_test(rd_wins, seeds);
    o.detail << " cv_wins=" << cv_wins << "/" << seeds << " p=" << p_cv << " rd_wins=" << rd_wins << "/" << seeds
             << " p=" << p_rd;
    o.require(p_cv < 0.01, "L_AREA cv");
    o.require(p_rd < 0.01, "D_RDSSQ rd");
    return o;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome check_determinism() {
    Outcome o;
    const std::string dir = "acceptance_determinism";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir + "/params.json") << R"({"lambda": 100})" << "\n";
    }
    auto run = [&](const std::string& tag, int threads) {
        const std::string out = dir + "/" + tag + ".csv";
        const std::string cmd = std::string(TESSERA_CLI_PATH) + " --threads " + std::to_string(threads) +
                                " validate --model pv2 --params " + dir + "/params.json --reps 300 --seed 7 --out " + out;
        const int rc = std::system(cmd.c_str());
        return std::make_pair(rc, slurp(out));
    };
    const auto a = run("first", 1), b = run("second", 1), c = run("threads8", 8);
    o.detail << " exit=" << a.first << "," << b.first << "," << c.first << " bytes=" << a.second.size();
    o.require(a.first == 0 && b.first == 0 && c.first == 0, "exit");
    o.require(!a.second.empty() && a.second == b.second, "repeat");
    o.require(a.second == c.second, "threads");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"poisson-voronoi planar mean values", check_pv2_means},
        {"poisson-voronoi torus counts", check_torus_exactness},
        {"poisson-voronoi spatial mean values", check_pv3_means},
        {"poisson line tessellation", check_plt_means},
        {"poisson-delaunay", check_pdt},
        {"stit", check_stit_vs_plt},
        {"degeneration identities", check_degeneration},
        {"johnson-mehl oracle", check_johnson_mehl},
        {"arak-clifford-surgailis", check_acs},
        {"zero cell", check_zero_cell_bias},
        {"division variants", check_division_variants},
        {"determinism", check_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("criterion %2zu %s: %s%s (%.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.str().c_str(), sec);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}

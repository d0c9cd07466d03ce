#include <cmath>
#include <set>

#include "doctest.h"
#include "tessera/lines.hpp"
#include "tessera/points.hpp"

using namespace tessera;

TEST_CASE("poisson counts") {
    double sum = 0.0, sum_plus = 0.0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        sum += static_cast<double>(sample_poisson<2>(Window2::unit(), 100.0, Seed{1, static_cast<std::uint64_t>(r)}).size());
        const auto p = sample_poisson<2>(Window2::unit(EdgeMode::plus, 0.2), 100.0, Seed{2, static_cast<std::uint64_t>(r)});
        sum_plus += static_cast<double>(p.size());
        for (const auto& x : p.points) REQUIRE((x[0] >= -0.2 && x[0] <= 1.2 && x[1] >= -0.2 && x[1] <= 1.2));
    }
    CHECK(std::fabs(sum / reps - 100.0) < 3 * std::sqrt(100.0 / reps));
    CHECK(std::fabs(sum_plus / reps - 196.0) < 3 * std::sqrt(196.0 / reps));
    const auto a = sample_poisson<3>(Window3::unit(), 50.0, Seed{3});
    const auto b = sample_poisson<3>(Window3::unit(), 50.0, Seed{3});
    CHECK(a.points == b.points);
    CHECK_THROWS_AS(sample_poisson<2>(Window2::unit(), 1e9, Seed{1}), ParameterError);
    CHECK_THROWS_AS(sample_poisson<2>(Window2::unit(), -1.0, Seed{1}), ParameterError);
}

TEST_CASE("counts in disjoint boxes are uncorrelated") {
    const int reps = 2000;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int r = 0; r < reps; ++r) {
        const auto p = sample_poisson<2>(Window2::unit(), 50.0, Seed{4, static_cast<std::uint64_t>(r)});
        double a = 0, b = 0;
        for (const auto& x : p.points) (x[0] < 0.5 ? a : b) += 1;
        sa += a;
        sb += b;
        sab += a * b;
        saa += a * a;
        sbb += b * b;
    }
    const double ma = sa / reps, mb = sb / reps;
    const double corr = (sab / reps - ma * mb) / std::sqrt((saa / reps - ma * ma) * (sbb / reps - mb * mb));
    CHECK(std::fabs(corr) < 3.0 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("seed streams") {
    const Seed s{7, 3, 0};
    CHECK(s.derive("marks").stream_key() != s.derive("points").stream_key());
    CHECK(s.with_replicate(4).stream_key() != s.stream_key());
    CHECK(Seed{7, 3, 0}.stream_key() == s.stream_key());
    Rng a(s), b(s);
    for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());
}

TEST_CASE("matern cluster process") {
    const int reps = 1000;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r)
        sum += static_cast<double>(sample_matern_cluster<2>(Window2::unit(), 10.0, 10.0, 0.05, Seed{5, static_cast<std::uint64_t>(r)}).size());
    // Variance per realization is about lambda_p * m * (1 + m) over the window.
    CHECK(std::fabs(sum / reps - 100.0) < 3 * std::sqrt(1100.0 / reps));
    CHECK(sample_matern_cluster<2>(Window2::unit(), 10.0, 0.0, 0.05, Seed{1}).empty());
    const auto z = sample_matern_cluster<2>(Window2::unit(), 10.0, 5.0, 0.0, Seed{6});
    std::set<std::pair<double, double>> distinct;
    for (const auto& p : z.points) distinct.insert({p[0], p[1]});
    CHECK(distinct.size() < z.size());
}

TEST_CASE("simple sequential inhibition") {
    const auto b = sample_ssi<2>(Window2::unit(), 50, 0.0, 1000, Seed{7});
    CHECK(b.size() == 50);
    int saturated = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto p = sample_ssi<2>(Window2::unit(), 200, 0.05, 1000000, Seed{8, s});
        saturated += p.saturated;
        if (s < 5)
            for (std::size_t i = 0; i < p.size(); ++i)
                for (std::size_t j = i + 1; j < p.size(); ++j) CHECK(distance(p.points[i], p.points[j]) >= 0.05);
    }
    CHECK(saturated <= 1);
    const auto full = sample_ssi<2>(Window2::unit(), 10000, 0.2, 20000, Seed{9});
    CHECK(full.saturated);
}

TEST_CASE("independent marks") {
    auto p = sample_poisson<2>(Window2::unit(), 400.0, Seed{10});
    const auto c = attach_marks(p, MarkDistribution::constant(0.05), Seed{11});
    for (double r : c.radii) CHECK(r == 0.05);
    const auto u = attach_marks(p, MarkDistribution::uniform(0.025, 0.075), Seed{12});
    double m = 0.0;
    for (double r : u.radii) m += r;
    m /= static_cast<double>(u.size());
    CHECK(std::fabs(m - 0.05) < 3 * std::sqrt(0.05 * 0.05 / 12.0 / static_cast<double>(u.size())));
    PointPattern2 e;
    e.window = Window2::unit();
    CHECK(attach_marks(e, MarkDistribution::constant(1.0), Seed{1}).radii.empty());
}

TEST_CASE("ellipse marks are positive definite") {
    auto p = attach_ellipse_marks(sample_poisson<2>(Window2::unit(), 50.0, Seed{13}), {0.4, 0.7}, {0.1, 0.4}, Seed{14});
    for (const auto& m : p.matrices) {
        CHECK(min_eigenvalue<2>(m) > 0.0);
        const auto ax = decompose_ellipse(m);
        CHECK(ax.a >= ax.b);
        CHECK((ax.a >= 0.1 && ax.a <= 0.7));
    }
    CHECK_NOTHROW(p.validate());
    p.matrices[0] = {1, 0, 0, -1};
    CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("thinned poisson") {
    const int reps = 500;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r)
        sum += static_cast<double>(sample_poisson_thinned<2>(Window2::unit(), 200.0, [](const Vec2& x) { return 200.0 * x[0]; },
                                                             Seed{15, static_cast<std::uint64_t>(r)})
                                       .size());
    CHECK(std::fabs(sum / reps - 100.0) < 3 * std::sqrt(100.0 / reps));
}

TEST_CASE("poisson lines") {
    const auto sq = ConvexPolygon::unit_square();
    const int reps = 2000;
    double count = 0.0, length = 0.0;
    for (int r = 0; r < reps; ++r) {
        Rng rng(Seed{16, static_cast<std::uint64_t>(r)});
        count += static_cast<double>(sample_poisson_lines(sq, M_PI, DirectionRose::isotropic(), rng).size());
        Rng rng2(Seed{17, static_cast<std::uint64_t>(r)});
        for (const auto& h : sample_poisson_lines(sq, 2.0, DirectionRose::isotropic(), rng2)) length += chord_length(sq, h);
    }
    CHECK(std::fabs(count / reps - 4.0) < 3 * std::sqrt(4.0 / reps));
    CHECK(length / reps == doctest::Approx(2.0).epsilon(0.05));
    Rng rng(Seed{18});
    CHECK(sample_poisson_lines(sq, 1e-12, DirectionRose::isotropic(), rng).empty());
}

TEST_CASE("line directions follow the rose") {
    const auto rose = DirectionRose::discrete(2, {{1, 0, 0}, {0, 1, 0}, {M_SQRT1_2, M_SQRT1_2, 0}}, {0.5, 0.3, 0.2});
    Rng rng(Seed{19});
    std::array<double, 3> seen{};
    const auto sq = ConvexPolygon::unit_square();
    std::size_t n = 0;
    while (n < 2000000) {
        for (const auto& h : sample_poisson_lines(sq, 500.0, rose, rng)) {
            const double ax = std::fabs(h.normal[0]), ay = std::fabs(h.normal[1]);
            seen[ax > 0.9 ? 0 : ay > 0.9 ? 1 : 2] += 1;
            ++n;
        }
    }
    // Expected shares are weighted by the width of the square in each direction.
    const std::array<double, 3> w{0.5, 0.3, 0.2 * std::sqrt(2.0)};
    const double tot = w[0] + w[1] + w[2];
    double chi2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double e = static_cast<double>(n) * w[i] / tot;
        chi2 += (seen[i] - e) * (seen[i] - e) / e;
    }
    CHECK(chi2 < 9.21);
}

TEST_CASE("poisson planes") {
    const int reps = 2000;
    double one = 0.0, two = 0.0;
    for (int r = 0; r < reps; ++r) {
        one += static_cast<double>(sample_poisson_planes(Window3::unit(), 1.0, DirectionRose::isotropic(3), Seed{20, static_cast<std::uint64_t>(r)}).size());
        two += static_cast<double>(sample_poisson_planes(Window3::unit(), 2.0, DirectionRose::isotropic(3), Seed{21, static_cast<std::uint64_t>(r)}).size());
    }
    CHECK(std::fabs(one / reps - 1.5) < 3 * std::sqrt(1.5 / reps));
    CHECK(std::fabs(two / reps - 3.0) < 3 * std::sqrt(3.0 / reps));
    CHECK(sample_poisson_planes(Window3::unit(), 0.0, DirectionRose::isotropic(3), Seed{1}).empty());
}

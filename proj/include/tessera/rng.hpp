#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tessera {

/// Master seed plus replicate index and purpose tag. Identical triples produce
/// bit-identical substreams on every platform.
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t replicate = 0;
    std::uint64_t tag = 0;

    /// Child stream for a named purpose, e.g. seed.derive("marks").
    [[nodiscard]] Seed derive(std::string_view purpose) const;
    [[nodiscard]] Seed with_replicate(std::uint64_t index) const {
        return {master, index, tag};
    }
    [[nodiscard]] std::uint64_t stream_key() const;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_tag(std::string_view s);

/// Random source with hand-written variate algorithms. The engine is
/// mt19937_64 (fully specified by the standard); distributions are implemented
/// here so that results do not depend on the standard library vendor.
class Rng {
public:
    explicit Rng(const Seed& seed) : engine_(seed.stream_key()) {}
    explicit Rng(std::uint64_t raw) : engine_(splitmix64(raw)) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    bool coin() { return (engine_() >> 63) != 0; }

    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    double exponential(double rate);
    double gamma(double shape, double scale);
    double lognormal(double mu, double sigma);
    std::uint64_t poisson(double mean);

private:
    std::uint64_t poisson_small(double mean);
    std::uint64_t poisson_ptrs(double mean);

    std::mt19937_64 engine_;
};

}  // namespace tessera

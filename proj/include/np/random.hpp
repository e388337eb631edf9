#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace np {

/// Deterministic seed derivation: child = mix(master, role tag, index).
/// Adding a run with a new index or tag never perturbs existing streams,
/// so experiment grids stay reproducible when extended.
std::uint64_t child_seed(std::uint64_t master, std::string_view role, std::uint64_t index);

/// Seeded double-precision source. The raw engine is std::mt19937_64;
/// uniform doubles are built from the top 53 bits and normals via
/// Box-Muller, so the value stream is fixed by the seed alone and does
/// not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform();

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal draw.
    double normal();

    /// Fisher-Yates index helper: uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace np

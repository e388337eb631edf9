#pragma once

#include "np/core.hpp"

#include <cstdint>

namespace np {

/// Random Fourier frequencies approximating the rbf kernel
/// exp(-g * ||x-y||^2). One row per cos/sin pair; the mapped feature
/// space has dimension 2 * num_pairs. Immutable after construction
/// unless the hidden layer is being trained, in which case the owning
/// model mutates the rows between steps.
struct FrequencyBank {
    Mat freqs;              // num_pairs x dim_in
    double bandwidth = 0.0; // g

    int dim_in() const { return static_cast<int>(freqs.cols()); }
    int num_pairs() const { return static_cast<int>(freqs.rows()); }
};

/// Draws num_pairs i.i.d. rows from N(0, 2g*I_d). Deterministic for a
/// fixed seed: mt19937_64 driving a Box-Muller transform (see Rng).
FrequencyBank sample_bank(int dim_in, int num_pairs, double bandwidth, std::uint64_t seed);

/// Maps x to sqrt(1/D) * [cos(a1'x), sin(a1'x), ..., cos(aD'x), sin(aD'x)].
/// The result always has unit Euclidean norm.
Vec transform(const FrequencyBank& bank, const Vec& x);

/// In-place variant for hot loops; `features` is resized to 2D.
void transform_into(const FrequencyBank& bank, const Vec& x, Vec& features);

/// Inner product of the two mapped points; a Monte-Carlo estimate of
/// exp(-g * ||x-y||^2) that concentrates as num_pairs grows.
double kernel_estimate(const FrequencyBank& bank, const Vec& x, const Vec& y);

} // namespace np

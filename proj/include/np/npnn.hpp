#pragma once

#include "np/core.hpp"
#include "np/rff.hpp"
#include "np/trace.hpp"

#include <cstdint>
#include <span>

namespace np {

/// Single-hidden-layer network with a random-Fourier hidden layer:
/// f(x) = w' phi(x) + b, trained online against the Lagrangian
/// Neyman-Pearson objective. All learnable parameters plus the shared
/// loop state live here so a snapshot captures the full run.
struct ModelState {
    FrequencyBank bank;
    Vec weights; // 2 * num_pairs, interleaved (cos_1, sin_1, cos_2, ...)
    double bias = 0.0;
    NpCore core;
    std::uint64_t seed = 0; // run seed, recorded for reproducibility

    explicit ModelState(const Hyperparams& hp) : core(hp) {}
};

/// Loss-term gradients of l(y * f(x)) at the current state; the cost
/// weight mu and the weight decay are applied by sgd_step.
struct Gradients {
    Vec weights;
    double bias = 0.0;
    Mat freqs; // num_pairs x dim_in, one row per frequency
};

/// Fresh model: frequency bank sampled from the seed, output weights and
/// bias uniform in [-0.01, 0.01], multiplier at its initial value.
ModelState init_model(int dim_in, const Hyperparams& hp, std::uint64_t seed);

double forward(const ModelState& state, const Vec& x);

/// sgn(f(x)) with the tie at zero mapped to -1.
int predict(const ModelState& state, const Vec& x);

Gradients gradients(const ModelState& state, const LabeledSample& sample);

/// One prequential step: decide, count, window, then descend on w, b and
/// (when train_hidden) the frequency rows, then the multiplier ascent and
/// rate decay. Returns the decision made before any update.
int sgd_step(ModelState& state, const LabeledSample& sample);

struct StreamResult {
    ModelState state;
    RunTrace trace;
};

/// Folds sgd_step over the stream from a fresh seeded model.
StreamResult run_stream(const Hyperparams& hp, std::span<const LabeledSample> stream,
                        std::uint64_t seed);

} // namespace np

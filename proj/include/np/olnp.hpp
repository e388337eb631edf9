#pragma once

#include "np/core.hpp"
#include "np/trace.hpp"

#include <cstdint>
#include <span>

namespace np {

/// Linear online Neyman-Pearson baseline: the identical Lagrangian SGD
/// loop with the identity feature map f(x) = w'x + b.
struct LinearState {
    Vec weights; // dim_in
    double bias = 0.0;
    NpCore core;
    std::uint64_t seed = 0;

    explicit LinearState(const Hyperparams& hp) : core(hp) {}
};

LinearState init_linear(int dim_in, const Hyperparams& hp, std::uint64_t seed);

double linear_forward(const LinearState& state, const Vec& x);
int linear_predict(const LinearState& state, const Vec& x);

/// Same contract as sgd_step with grad_w = s*x, grad_b = s and no hidden
/// layer; the multiplier/window/rate machinery is the shared NpCore.
int linear_step(LinearState& state, const LabeledSample& sample);

struct LinearStreamResult {
    LinearState state;
    RunTrace trace;
};

LinearStreamResult run_stream_linear(const Hyperparams& hp,
                                     std::span<const LabeledSample> stream, std::uint64_t seed);

} // namespace np

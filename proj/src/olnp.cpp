#include "np/olnp.hpp"

#include "np/random.hpp"

#include <stdexcept>
#include <string>

namespace np {

LinearState init_linear(int dim_in, const Hyperparams& hp, std::uint64_t seed) {
    hp.validate();
    if (dim_in < 1)
        throw std::invalid_argument("init_linear: dim_in must be >= 1");
    LinearState state(hp);
    state.seed = seed;
    Rng rng(child_seed(seed, "weights", 0));
    state.weights.resize(dim_in);
    for (int i = 0; i < dim_in; ++i)
        state.weights[i] = rng.uniform(-0.01, 0.01);
    state.bias = rng.uniform(-0.01, 0.01);
    return state;
}

double linear_forward(const LinearState& state, const Vec& x) {
    if (x.size() != state.weights.size())
        throw std::invalid_argument("linear_forward: x has dimension " + std::to_string(x.size()) +
                                    ", model expects " + std::to_string(state.weights.size()));
    return state.weights.dot(x) + state.bias;
}

int linear_predict(const LinearState& state, const Vec& x) {
    return NpCore::decide(linear_forward(state, x));
}

int linear_step(LinearState& state, const LabeledSample& sample) {
    const double f = linear_forward(state, sample.x);
    const int decision = NpCore::decide(f);

    state.core.observe(sample.label, decision);
    const double mu = state.core.cost_weight(sample.label);

    const double m = sample.label * f;
    const double loss = sigmoid_loss(m);
    const double s = -loss * sigmoid_loss(-m) * sample.label;

    const double eta = state.core.learning_rate;
    const double lambda = state.core.params.regularization;
    state.weights -= eta * (lambda * state.weights + (mu * s) * sample.x);
    state.bias -= eta * mu * s;

    state.core.finish_step(sample.label, loss);
    return decision;
}

LinearStreamResult run_stream_linear(const Hyperparams& hp,
                                     std::span<const LabeledSample> stream, std::uint64_t seed) {
    if (stream.empty())
        throw std::invalid_argument("run_stream_linear: empty stream");
    const int dim = static_cast<int>(stream.front().x.size());
    LinearStreamResult result{init_linear(dim, hp, seed), RunTrace{}};
    result.trace.reserve(stream.size());
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (stream[i].x.size() != dim)
            throw std::invalid_argument("run_stream_linear: dimension mismatch at index " +
                                        std::to_string(i));
        const int decision = linear_step(result.state, stream[i]);
        result.trace.push(stream[i].label, decision);
    }
    return result;
}

} // namespace np

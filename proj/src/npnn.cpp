#include "np/npnn.hpp"

#include "np/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace np {

ModelState init_model(int dim_in, const Hyperparams& hp, std::uint64_t seed) {
    hp.validate();
    ModelState state(hp);
    state.seed = seed;
    state.bank = sample_bank(dim_in, hp.num_pairs, hp.bandwidth, child_seed(seed, "bank", 0));
    Rng rng(child_seed(seed, "weights", 0));
    state.weights.resize(2 * hp.num_pairs);
    for (int i = 0; i < state.weights.size(); ++i)
        state.weights[i] = rng.uniform(-0.01, 0.01);
    state.bias = rng.uniform(-0.01, 0.01);
    return state;
}

double forward(const ModelState& state, const Vec& x) {
    if (state.weights.size() != 2 * state.bank.num_pairs())
        throw std::logic_error("forward: weights do not match the bank");
    return state.weights.dot(transform(state.bank, x)) + state.bias;
}

int predict(const ModelState& state, const Vec& x) {
    return NpCore::decide(forward(state, x));
}

Gradients gradients(const ModelState& state, const LabeledSample& sample) {
    const int pairs = state.bank.num_pairs();
    const double scale = std::sqrt(1.0 / static_cast<double>(pairs));
    const Vec features = transform(state.bank, sample.x);
    const double f = state.weights.dot(features) + state.bias;
    const double m = sample.label * f;
    // l^2(m) * exp(m) == l(m) * l(-m); the product form never overflows.
    const double s = -sigmoid_loss(m) * sigmoid_loss(-m) * sample.label;

    Gradients g;
    g.weights = s * features;
    g.bias = s;
    g.freqs.resize(pairs, state.bank.dim_in());
    for (int i = 0; i < pairs; ++i) {
        const double cos_i = features[2 * i] / scale;
        const double sin_i = features[2 * i + 1] / scale;
        const double coeff =
            s * scale * (-state.weights[2 * i] * sin_i + state.weights[2 * i + 1] * cos_i);
        g.freqs.row(i) = coeff * sample.x.transpose();
    }
    return g;
}

int sgd_step(ModelState& state, const LabeledSample& sample) {
    Vec features;
    transform_into(state.bank, sample.x, features);
    const double f = state.weights.dot(features) + state.bias;
    const int decision = NpCore::decide(f);

    state.core.observe(sample.label, decision);
    const double mu = state.core.cost_weight(sample.label);

    const double m = sample.label * f;
    const double loss = sigmoid_loss(m);
    const double s = -loss * sigmoid_loss(-m) * sample.label;

    const double eta = state.core.learning_rate;
    const double lambda = state.core.params.regularization;

    if (state.core.params.train_hidden) {
        // Frequency-row coefficients need the pre-update weights; with
        // features = scale * (cos, sin), scale * sin_i == features[2i+1].
        const int pairs = state.bank.num_pairs();
        Vec coeffs(pairs);
        for (int i = 0; i < pairs; ++i)
            coeffs[i] = s * (-state.weights[2 * i] * features[2 * i + 1] +
                             state.weights[2 * i + 1] * features[2 * i]);
        state.weights -= eta * (lambda * state.weights + (mu * s) * features);
        state.bias -= eta * mu * s;
        for (int i = 0; i < pairs; ++i)
            state.bank.freqs.row(i) -= (eta * mu * coeffs[i]) * sample.x.transpose();
    } else {
        state.weights -= eta * (lambda * state.weights + (mu * s) * features);
        state.bias -= eta * mu * s;
    }

    state.core.finish_step(sample.label, loss);
    return decision;
}

StreamResult run_stream(const Hyperparams& hp, std::span<const LabeledSample> stream,
                        std::uint64_t seed) {
    if (stream.empty())
        throw std::invalid_argument("run_stream: empty stream");
    const int dim = static_cast<int>(stream.front().x.size());
    StreamResult result{init_model(dim, hp, seed), RunTrace{}};
    result.trace.reserve(stream.size());
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (stream[i].x.size() != dim)
            throw std::invalid_argument("run_stream: dimension mismatch at index " +
                                        std::to_string(i));
        const int decision = sgd_step(result.state, stream[i]);
        result.trace.push(stream[i].label, decision);
    }
    return result;
}

} // namespace np

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace np {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct LabeledSample {
    Vec x;
    int label = -1; // -1 or +1
};

/// Sigmoid surrogate for the 0-1 error: l(m) = 1/(1+exp(m)).
/// Decreasing, range (0,1), stable for any finite margin.
double sigmoid_loss(double margin);

/// Training knobs shared by the nonlinear model and the linear baseline.
/// The linear baseline ignores bandwidth, num_pairs and train_hidden.
struct Hyperparams {
    double tau = 0.1;              // target false positive rate, in (0,1)
    double bandwidth = 1.0;        // rbf exponent g in exp(-g * ||x-y||^2)
    int num_pairs = 64;            // D cos/sin pairs -> 2D hidden nodes
    double regularization = 0.0;   // weight decay, also drives the rate schedule
    double learning_rate = 0.01;   // eta_1
    double multiplier_gain = 5e-4; // beta_1, step size of the multiplier ascent
    double multiplier_init = 1.0;  // gamma_1
    int window = 200;              // W_s, negatives kept by the FPR window
    int warmup = 20;               // window fill required before multiplier updates
    bool train_hidden = true;      // whether the frequency rows receive SGD updates
    bool stochastic_multiplier = false; // per-step additive ascent instead of the windowed update

    /// Throws std::invalid_argument on hard violations. Soft issues (gain/rate
    /// ratio outside [0.01, 0.1]) are appended to `warnings` when given.
    void validate(std::vector<std::string>* warnings = nullptr) const;
};

/// Ring buffer of 0-1 errors on the most recent negative-class instances.
/// A stored 1 means the model said positive on a negative (a false positive).
class FprWindow {
public:
    explicit FprWindow(int capacity);

    void push(bool false_positive);
    int count() const { return count_; }
    int capacity() const { return static_cast<int>(bits_.size()); }

    /// Mean of the stored bits; requires count() > 0.
    double estimate() const;

    /// Stored bits oldest first (snapshot serialization).
    std::vector<std::uint8_t> contents() const;
    void restore(const std::vector<std::uint8_t>& bits);

private:
    std::vector<std::uint8_t> bits_;
    int head_ = 0; // next write position
    int count_ = 0;
    int sum_ = 0;
};

/// Lower clamps keeping the multiplier strictly positive: the multiplicative
/// update can otherwise annihilate or sign-flip gamma when the gain is large.
inline constexpr double kMultiplierFloor = 1e-6;
inline constexpr double kUpdateFactorFloor = 0.1;

/// One windowed multiplier step: gamma * (1 + gain * (fpr_estimate - tau)),
/// factor clamped below at kUpdateFactorFloor, result at kMultiplierFloor.
double multiplier_update(double multiplier, double gain, double fpr_estimate, double tau);

/// State and machinery of the Lagrangian loop shared by both models:
/// the multiplier, class counters, rate schedule and the FPR window.
/// Models differ only in the feature map and its gradient.
struct NpCore {
    Hyperparams params;
    double multiplier = 1.0;
    std::uint64_t step = 0; // t, samples processed
    std::uint64_t num_pos = 0;
    std::uint64_t num_neg = 0;
    double learning_rate = 0.0;   // eta_t
    double multiplier_gain = 0.0; // beta_t
    FprWindow window;

    explicit NpCore(const Hyperparams& hp);

    /// sgn with the tie at zero mapped to -1.
    static int decide(double score) { return score > 0.0 ? +1 : -1; }

    /// Counts the incoming sample and, for negatives, records the 0-1 error.
    /// Must run before cost_weight for the same sample.
    void observe(int label, int decision);

    /// mu_t: t/n_pos for positives, multiplier * t/n_neg for negatives.
    double cost_weight(int label) const;

    /// Multiplier update followed by the rate decay eta_1 * (1 + lambda*t)^-1.
    /// `loss_value` is l(y*f), consumed only by the stochastic variant.
    void finish_step(int label, double loss_value);
};

} // namespace np

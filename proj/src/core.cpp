#include "np/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace np {

double sigmoid_loss(double margin) {
    if (margin > 0.0) {
        const double e = std::exp(-margin);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(margin));
}

void Hyperparams::validate(std::vector<std::string>* warnings) const {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("tau must be in (0,1)");
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("bandwidth must be positive");
    if (num_pairs < 1)
        throw std::invalid_argument("num_pairs must be >= 1");
    if (regularization < 0.0)
        throw std::invalid_argument("regularization must be >= 0");
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("learning_rate must be positive");
    if (!(multiplier_gain > 0.0))
        throw std::invalid_argument("multiplier_gain must be positive");
    if (!(multiplier_init > 0.0))
        throw std::invalid_argument("multiplier_init must be positive");
    if (window < 1)
        throw std::invalid_argument("window must be >= 1");
    if (warmup < 1)
        throw std::invalid_argument("warmup must be >= 1");
    if (warnings) {
        const double ratio = multiplier_gain / learning_rate;
        if (ratio < 0.01 || ratio > 0.1)
            warnings->push_back("multiplier_gain/learning_rate = " + std::to_string(ratio) +
                                " is outside the usual operating range [0.01, 0.1]");
    }
}

FprWindow::FprWindow(int capacity) {
    if (capacity < 1)
        throw std::invalid_argument("FprWindow capacity must be >= 1");
    bits_.assign(static_cast<std::size_t>(capacity), 0);
}

void FprWindow::push(bool false_positive) {
    const std::uint8_t bit = false_positive ? 1 : 0;
    if (count_ == capacity())
        sum_ -= bits_[static_cast<std::size_t>(head_)]; // evict oldest
    else
        ++count_;
    bits_[static_cast<std::size_t>(head_)] = bit;
    sum_ += bit;
    head_ = (head_ + 1) % capacity();
}

double FprWindow::estimate() const {
    if (count_ == 0)
        throw std::logic_error("FprWindow::estimate on empty window");
    return static_cast<double>(sum_) / static_cast<double>(count_);
}

std::vector<std::uint8_t> FprWindow::contents() const {
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(count_));
    const int cap = capacity();
    int idx = (head_ - count_ + cap * 2) % cap; // oldest
    for (int i = 0; i < count_; ++i) {
        out.push_back(bits_[static_cast<std::size_t>(idx)]);
        idx = (idx + 1) % cap;
    }
    return out;
}

void FprWindow::restore(const std::vector<std::uint8_t>& bits) {
    if (static_cast<int>(bits.size()) > capacity())
        throw std::invalid_argument("FprWindow::restore: more bits than capacity");
    std::fill(bits_.begin(), bits_.end(), 0);
    head_ = 0;
    count_ = 0;
    sum_ = 0;
    for (std::uint8_t b : bits)
        push(b != 0);
}

double multiplier_update(double multiplier, double gain, double fpr_estimate, double tau) {
    const double factor = std::max(1.0 + gain * (fpr_estimate - tau), kUpdateFactorFloor);
    return std::max(multiplier * factor, kMultiplierFloor);
}

NpCore::NpCore(const Hyperparams& hp)
    : params(hp),
      multiplier(hp.multiplier_init),
      learning_rate(hp.learning_rate),
      multiplier_gain(hp.multiplier_gain),
      window(hp.window) {}

void NpCore::observe(int label, int decision) {
    if (label != -1 && label != +1)
        throw std::invalid_argument("label must be -1 or +1");
    ++step;
    if (label == +1) {
        ++num_pos;
    } else {
        ++num_neg;
        window.push(decision == +1);
    }
}

double NpCore::cost_weight(int label) const {
    if (label == +1) {
        if (num_pos == 0)
            throw std::logic_error("cost_weight: no positives counted yet");
        return static_cast<double>(step) / static_cast<double>(num_pos);
    }
    if (num_neg == 0)
        throw std::logic_error("cost_weight: no negatives counted yet");
    return multiplier * static_cast<double>(step) / static_cast<double>(num_neg);
}

void NpCore::finish_step(int label, double loss_value) {
    if (params.stochastic_multiplier) {
        double ascent = -params.tau;
        if (label == -1)
            ascent += static_cast<double>(step) / static_cast<double>(num_neg) * loss_value;
        multiplier = std::max(multiplier + multiplier_gain * ascent, kMultiplierFloor);
    } else if (label == -1 && window.count() >= std::min(window.capacity(), params.warmup)) {
        multiplier = multiplier_update(multiplier, multiplier_gain, window.estimate(), params.tau);
    }
    const double denom = 1.0 + params.regularization * static_cast<double>(step);
    learning_rate = params.learning_rate / denom;
    multiplier_gain = params.multiplier_gain / denom;
}

} // namespace np

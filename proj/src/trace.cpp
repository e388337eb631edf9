#include "np/trace.hpp"

#include <limits>

namespace np {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void RunTrace::reserve(std::size_t n) {
    labels.reserve(n);
    decisions.reserve(n);
    cum_fpr.reserve(n);
    cum_tpr.reserve(n);
}

void RunTrace::push(int label, int decision) {
    labels.push_back(static_cast<std::int8_t>(label));
    decisions.push_back(static_cast<std::int8_t>(decision));
    if (label == +1) {
        ++positives;
        if (decision == +1)
            ++true_positives;
    } else {
        ++negatives;
        if (decision == +1)
            ++false_positives;
    }
    cum_fpr.push_back(final_fpr());
    cum_tpr.push_back(final_tpr());
}

double RunTrace::final_fpr() const {
    if (negatives == 0)
        return kNaN;
    return static_cast<double>(false_positives) / static_cast<double>(negatives);
}

double RunTrace::final_tpr() const {
    if (positives == 0)
        return kNaN;
    return static_cast<double>(true_positives) / static_cast<double>(positives);
}

} // namespace np

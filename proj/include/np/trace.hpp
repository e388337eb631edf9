#pragma once

#include <cstdint>
#include <vector>

namespace np {

/// Prequential decision log with time-accumulated error rates.
/// cum_fpr(t) and cum_tpr(t) hold NaN until the respective class has
/// appeared in the stream.
struct RunTrace {
    std::vector<std::int8_t> labels;
    std::vector<std::int8_t> decisions;
    std::vector<double> cum_fpr;
    std::vector<double> cum_tpr;

    void reserve(std::size_t n);
    void push(int label, int decision);
    std::size_t size() const { return labels.size(); }

    /// Final accumulated rates; NaN when the class never appeared.
    double final_fpr() const;
    double final_tpr() const;

    std::uint64_t false_positives = 0;
    std::uint64_t true_positives = 0;
    std::uint64_t negatives = 0;
    std::uint64_t positives = 0;
};

} // namespace np

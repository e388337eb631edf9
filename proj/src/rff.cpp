#include "np/rff.hpp"

#include "np/random.hpp"

#include <cmath>
#include <stdexcept>

namespace np {

FrequencyBank sample_bank(int dim_in, int num_pairs, double bandwidth, std::uint64_t seed) {
    if (dim_in < 1)
        throw std::invalid_argument("sample_bank: dim_in must be >= 1");
    if (num_pairs < 1)
        throw std::invalid_argument("sample_bank: num_pairs must be >= 1");
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("sample_bank: bandwidth must be positive");

    FrequencyBank bank;
    bank.bandwidth = bandwidth;
    bank.freqs.resize(num_pairs, dim_in);

    Rng rng(seed);
    const double sigma = std::sqrt(2.0 * bandwidth); // N(0, 2g*I)
    for (int i = 0; i < num_pairs; ++i)
        for (int j = 0; j < dim_in; ++j)
            bank.freqs(i, j) = sigma * rng.normal();
    return bank;
}

void transform_into(const FrequencyBank& bank, const Vec& x, Vec& features) {
    if (x.size() != bank.dim_in())
        throw std::invalid_argument("transform: x has dimension " + std::to_string(x.size()) +
                                    ", bank expects " + std::to_string(bank.dim_in()));
    const int pairs = bank.num_pairs();
    const double scale = std::sqrt(1.0 / static_cast<double>(pairs));
    features.resize(2 * pairs);
    const Vec projection = bank.freqs * x;
    for (int i = 0; i < pairs; ++i) {
        features[2 * i] = scale * std::cos(projection[i]);
        features[2 * i + 1] = scale * std::sin(projection[i]);
    }
}

Vec transform(const FrequencyBank& bank, const Vec& x) {
    Vec features;
    transform_into(bank, x, features);
    return features;
}

double kernel_estimate(const FrequencyBank& bank, const Vec& x, const Vec& y) {
    return transform(bank, x).dot(transform(bank, y));
}

} // namespace np

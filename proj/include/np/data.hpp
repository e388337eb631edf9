#pragma once

#include "np/core.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace np {

struct Dataset {
    std::vector<LabeledSample> samples;
    int dim = 0;
    std::uint64_t num_pos = 0;
    std::uint64_t num_neg = 0;
    std::string provenance;

    std::size_t size() const { return samples.size(); }
};

/// Validates uniform dimension and labels in {-1,+1}, fills the counters.
Dataset make_dataset(std::vector<LabeledSample> samples, std::string provenance);

/// Relabels so the smaller class is the positive (target) class; no-op
/// when positives are already the minority (ties keep labels as loaded).
Dataset with_minority_positive(Dataset ds);

// --- file formats -----------------------------------------------------

/// Delimited text, one sample per row. label_column < 0 counts from the
/// end (-1 = last). Labels may be {-1,+1} or {0,1}; 0 maps to -1.
Dataset load_delimited(const std::filesystem::path& path, int label_column = -1,
                       char delimiter = ',', bool has_header = false);

/// Writes the canonical delimited form: features then label, same delimiter.
void save_delimited(const Dataset& ds, const std::filesystem::path& path, char delimiter = ',');

/// Sparse "label idx:value ..." rows with 1-based strictly increasing
/// indices; the dense dimension is the maximum index seen in the file.
Dataset load_sparse(const std::filesystem::path& path);

void save_sparse(const Dataset& ds, const std::filesystem::path& path);

// --- permutation and normalization -------------------------------------

/// Seeded uniform shuffle; first ceil(fraction * N) samples become the
/// training sequence, the rest the test sequence.
std::pair<Dataset, Dataset> permute_and_split(const Dataset& ds, std::uint64_t seed,
                                              double train_fraction = 0.75);

/// Seeded uniform shuffle of the whole dataset (epoch randomization).
Dataset shuffled(const Dataset& ds, std::uint64_t seed);

enum class NormKind { none, zscore, unitnorm };

/// Feature scaling fitted on a training fold and applied frozen elsewhere.
/// zscore: per-feature (x - mean) / std with constant features mapped to 0.
/// unitnorm: per-row x / ||x||_2 with zero rows left unchanged.
struct Normalizer {
    NormKind kind = NormKind::none;
    Vec mean;     // zscore only
    Vec inv_std;  // zscore only; 0 where the feature is constant

    static Normalizer fit(NormKind kind, const Dataset& ds);
    Vec apply(const Vec& x) const;
    Dataset apply(const Dataset& ds) const;
};

// --- synthetic problems with known oracles ------------------------------

/// Standard normal CDF.
double normal_cdf(double x);
/// Standard normal quantile (inverse CDF), p in (0,1).
double normal_quantile(double p);

/// Analytic Neyman-Pearson test for the symmetric two-Gaussian problem:
/// classes N(+-sep/2 * e1, I). The optimal test at target rate tau
/// thresholds x1, with closed-form detection power.
struct TwoGaussianOracle {
    double separation = 0.0;

    double threshold(double tau) const;
    /// Phi(Phi^-1(tau) + separation)
    double tpr(double tau) const;
};

struct TwoGaussians {
    Dataset dataset;
    TwoGaussianOracle oracle;
};

/// Balanced two-Gaussian stream: n/2 positives at +sep/2*e1, n/2 negatives
/// at -sep/2*e1, identity covariance, seeded shuffle.
TwoGaussians gen_two_gaussians(int n, int dim, double separation, std::uint64_t seed);

/// Radially separable 2-d problem: positives uniform on the inner disk,
/// negatives uniform on the annulus [inner, outer], Gaussian noise added
/// to the radius. No linear classifier does well here.
Dataset gen_ring(int n, double inner_radius, double outer_radius, double noise,
                 std::uint64_t seed);

} // namespace np

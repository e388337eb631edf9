#pragma once

#include "np/data.hpp"
#include "np/npnn.hpp"
#include "np/olnp.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace np {

// --- rates and the NP-score ---------------------------------------------

/// Empirical 0-1 rates; a rate is absent when its class never appeared.
struct Rates {
    std::optional<double> fpr;
    std::optional<double> tpr;
    std::optional<double> miss;
};

Rates rates_from_decisions(std::span<const std::int8_t> labels,
                           std::span<const std::int8_t> decisions);

struct NpScoreParams {
    double tau = 0.1;
    double kappa = 10.0; // weight of the constraint violation

    static NpScoreParams with_default_kappa(double tau);
};

/// kappa * max(fpr - tau, 0) + miss; lower is better.
double np_score(double fpr, double miss, const NpScoreParams& params);

// --- ROC assembly ---------------------------------------------------------

struct RocPoint {
    double tfpr = 0.0; // target rate the model was trained for
    double fpr = 0.0;  // achieved
    double tpr = 0.0;  // achieved
};

/// Trapezoid area under (x, y) points sorted by x and augmented with the
/// (0,0) and (1,1) anchors. Duplicate x contribute zero width.
double trapezoid_auc(std::vector<std::pair<double, double>> points);

/// Curve over a TFPR grid. auc integrates TPR against the target rate
/// (the headline number); auc_vs_fpr integrates against the achieved FPR.
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
    double auc_vs_fpr = 0.0;
};

RocCurve assemble_roc(std::vector<RocPoint> points);

// --- trained models -------------------------------------------------------

enum class ModelKind { npnn, olnp };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// A model after training, used for frozen test-set evaluation.
struct TrainedModel {
    std::variant<ModelState, LinearState> state;

    int predict(const Vec& x) const;
    double score(const Vec& x) const;
};

/// Runs the online learner over the training sequence. epochs > 1
/// concatenates seeded reshuffles of the training sequence (training
/// only; evaluation always sees the plain data once).
TrainedModel train_on(const Dataset& train, ModelKind kind, const Hyperparams& hp, int epochs,
                      std::uint64_t seed);

/// Frozen predictions over a dataset.
Rates evaluate_on(const TrainedModel& model, const Dataset& test);

// --- the experiment protocol ----------------------------------------------

struct ProtocolConfig {
    ModelKind kind = ModelKind::npnn;
    Hyperparams params;
    std::vector<double> tfpr_grid{0.05, 0.1, 0.2, 0.3, 0.4};
    int permutations = 15;
    double split = 0.75;
    int epochs = 1;
    NormKind normalization = NormKind::none;
    bool minority_positive = true;
    std::uint64_t seed = 1;
    int threads = 1;
};

/// mean/std over the runs that produced a value (std = 0 for one run).
struct Aggregate {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stddev = std::numeric_limits<double>::quiet_NaN();
    int n = 0;
};

Aggregate aggregate(const std::vector<double>& values);

struct GridPointSummary {
    double tau = 0.0;
    Aggregate tpr, fpr, np;
};

struct ProtocolSummary {
    std::string dataset;
    ModelKind kind = ModelKind::npnn;
    std::vector<GridPointSummary> points;
    Aggregate auc;        // TPR against TFPR, per permutation
    Aggregate auc_vs_fpr; // TPR against achieved FPR, per permutation
};

/// One permutation: train per grid point on `train`, evaluate on `test`,
/// assemble the curve. Throws ProtocolError when a training fold lacks a
/// class (the NP trade-off is unlearnable without both).
RocCurve roc_over_grid(const Dataset& train, const Dataset& test, const ProtocolConfig& config,
                       std::uint64_t perm_chain);

/// The full protocol: `permutations` seeded shuffles, split into
/// train/test, one model per (permutation, grid point) job, aggregated
/// as mean +- std. Jobs run on `threads` workers; results do not depend
/// on the pool size.
ProtocolSummary protocol_run(const Dataset& ds, const ProtocolConfig& config);

// --- cross-validation -------------------------------------------------------

struct CvConfig {
    std::vector<double> bandwidth_grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10};
    std::vector<int> pairs_per_dim_grid{2, 5, 10, 20, 40, 80, 100};
    int folds = 3;
};

struct CvCell {
    double bandwidth = 0.0;
    int num_pairs = 0;
    double mean_np_score = 0.0;
};

struct CvResult {
    double bandwidth = 0.0;
    int num_pairs = 0;
    std::vector<CvCell> table;
};

/// 3-fold stratified cross-validation on the training data, selecting the
/// (bandwidth, num_pairs) pair with the lowest mean validation NP-score.
/// Ties prefer fewer pairs, then a smaller bandwidth.
CvResult cross_validate(const Dataset& train, const ProtocolConfig& base, const CvConfig& cv);

} // namespace np

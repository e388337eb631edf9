#include "np/eval.hpp"

#include "np/errors.hpp"
#include "np/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace np {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Rates rates_from_decisions(std::span<const std::int8_t> labels,
                           std::span<const std::int8_t> decisions) {
    if (labels.size() != decisions.size())
        throw std::invalid_argument("rates_from_decisions: size mismatch");
    std::uint64_t pos = 0, neg = 0, tp = 0, fp = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == +1) {
            ++pos;
            if (decisions[i] == +1)
                ++tp;
        } else {
            ++neg;
            if (decisions[i] == +1)
                ++fp;
        }
    }
    Rates r;
    if (neg > 0)
        r.fpr = static_cast<double>(fp) / static_cast<double>(neg);
    if (pos > 0) {
        r.tpr = static_cast<double>(tp) / static_cast<double>(pos);
        r.miss = 1.0 - *r.tpr;
    }
    return r;
}

NpScoreParams NpScoreParams::with_default_kappa(double tau) {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("np_score: tau must be in (0,1)");
    return {tau, 1.0 / tau};
}

double np_score(double fpr, double miss, const NpScoreParams& params) {
    if (!(fpr >= 0.0 && fpr <= 1.0))
        throw std::invalid_argument("np_score: fpr must be in [0,1]");
    if (!(miss >= 0.0 && miss <= 1.0))
        throw std::invalid_argument("np_score: miss must be in [0,1]");
    if (!(params.tau > 0.0 && params.tau < 1.0))
        throw std::invalid_argument("np_score: tau must be in (0,1)");
    if (!(params.kappa >= 0.0))
        throw std::invalid_argument("np_score: kappa must be >= 0");
    return params.kappa * std::max(fpr - params.tau, 0.0) + miss;
}

double trapezoid_auc(std::vector<std::pair<double, double>> points) {
    points.emplace_back(0.0, 0.0);
    points.emplace_back(1.0, 1.0);
    std::sort(points.begin(), points.end());
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        area += (points[i].first - points[i - 1].first) *
                0.5 * (points[i].second + points[i - 1].second);
    return area;
}

RocCurve assemble_roc(std::vector<RocPoint> points) {
    RocCurve curve;
    curve.points = std::move(points);
    bool complete = !curve.points.empty();
    for (const auto& p : curve.points)
        if (!std::isfinite(p.fpr) || !std::isfinite(p.tpr))
            complete = false;
    if (!complete) {
        curve.auc = kNaN;
        curve.auc_vs_fpr = kNaN;
        return curve;
    }
    std::vector<std::pair<double, double>> by_tfpr, by_fpr;
    for (const auto& p : curve.points) {
        by_tfpr.emplace_back(p.tfpr, p.tpr);
        by_fpr.emplace_back(p.fpr, p.tpr);
    }
    curve.auc = trapezoid_auc(std::move(by_tfpr));
    curve.auc_vs_fpr = trapezoid_auc(std::move(by_fpr));
    return curve;
}

std::string to_string(ModelKind kind) {
    return kind == ModelKind::npnn ? "npnn" : "olnp";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "npnn")
        return ModelKind::npnn;
    if (name == "olnp")
        return ModelKind::olnp;
    throw std::invalid_argument("unknown model kind: '" + name + "'");
}

int TrainedModel::predict(const Vec& x) const {
    return NpCore::decide(score(x));
}

double TrainedModel::score(const Vec& x) const {
    if (std::holds_alternative<ModelState>(state))
        return forward(std::get<ModelState>(state), x);
    return linear_forward(std::get<LinearState>(state), x);
}

namespace {

std::vector<LabeledSample> concatenated_epochs(const Dataset& train, int epochs,
                                               std::uint64_t seed) {
    if (epochs < 1)
        throw std::invalid_argument("epochs must be >= 1");
    std::vector<LabeledSample> stream = train.samples;
    stream.reserve(train.size() * static_cast<std::size_t>(epochs));
    for (int e = 1; e < epochs; ++e) {
        Dataset pass = shuffled(train, child_seed(seed, "epoch", static_cast<std::uint64_t>(e)));
        stream.insert(stream.end(), pass.samples.begin(), pass.samples.end());
    }
    return stream;
}

} // namespace

TrainedModel train_on(const Dataset& train, ModelKind kind, const Hyperparams& hp, int epochs,
                      std::uint64_t seed) {
    const auto stream = concatenated_epochs(train, epochs, seed);
    if (kind == ModelKind::npnn)
        return {run_stream(hp, stream, seed).state};
    return {run_stream_linear(hp, stream, seed).state};
}

Rates evaluate_on(const TrainedModel& model, const Dataset& test) {
    std::vector<std::int8_t> labels, decisions;
    labels.reserve(test.size());
    decisions.reserve(test.size());
    for (const auto& s : test.samples) {
        labels.push_back(static_cast<std::int8_t>(s.label));
        decisions.push_back(static_cast<std::int8_t>(model.predict(s.x)));
    }
    return rates_from_decisions(labels, decisions);
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty())
        throw std::invalid_argument("tfpr grid must be nonempty");
    double prev = 0.0;
    for (double tau : grid) {
        if (!(tau > 0.0 && tau < 1.0))
            throw std::invalid_argument("tfpr grid values must be in (0,1)");
        if (tau <= prev)
            throw std::invalid_argument("tfpr grid must be strictly increasing");
        prev = tau;
    }
}

} // namespace

RocCurve roc_over_grid(const Dataset& train, const Dataset& test, const ProtocolConfig& config,
                       std::uint64_t perm_chain) {
    check_grid(config.tfpr_grid);
    if (train.num_pos == 0 || train.num_neg == 0)
        throw ProtocolError("training fold '" + train.provenance + "' is missing the " +
                            (train.num_pos == 0 ? std::string("positive") : std::string("negative")) +
                            " class");

    const auto stream_base = concatenated_epochs(train, config.epochs, perm_chain);

    std::vector<RocPoint> points;
    points.reserve(config.tfpr_grid.size());
    for (std::size_t gi = 0; gi < config.tfpr_grid.size(); ++gi) {
        Hyperparams hp = config.params;
        hp.tau = config.tfpr_grid[gi];
        const std::uint64_t model_seed = child_seed(perm_chain, "model", gi);
        TrainedModel model = config.kind == ModelKind::npnn
                                 ? TrainedModel{run_stream(hp, stream_base, model_seed).state}
                                 : TrainedModel{run_stream_linear(hp, stream_base, model_seed).state};
        const Rates rates = evaluate_on(model, test);
        points.push_back({hp.tau, rates.fpr.value_or(kNaN), rates.tpr.value_or(kNaN)});
    }
    return assemble_roc(std::move(points));
}

Aggregate aggregate(const std::vector<double>& values) {
    std::vector<double> present;
    for (double v : values)
        if (std::isfinite(v))
            present.push_back(v);
    Aggregate agg;
    agg.n = static_cast<int>(present.size());
    if (agg.n == 0)
        return agg;
    double sum = 0.0;
    for (double v : present)
        sum += v;
    agg.mean = sum / agg.n;
    if (agg.n == 1) {
        agg.stddev = 0.0;
        return agg;
    }
    double ss = 0.0;
    for (double v : present)
        ss += (v - agg.mean) * (v - agg.mean);
    agg.stddev = std::sqrt(ss / (agg.n - 1));
    return agg;
}

ProtocolSummary protocol_run(const Dataset& ds, const ProtocolConfig& config) {
    check_grid(config.tfpr_grid);
    if (config.permutations < 1)
        throw std::invalid_argument("permutations must be >= 1");
    if (ds.samples.empty())
        throw std::invalid_argument("protocol_run: empty dataset");
    if (ds.num_pos == 0 || ds.num_neg == 0)
        throw ProtocolError("dataset '" + ds.provenance + "' does not contain both classes");

    const Dataset base = config.minority_positive ? with_minority_positive(ds) : ds;

    const int n_perm = config.permutations;
    std::vector<RocCurve> curves(static_cast<std::size_t>(n_perm));
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            const int p = next.fetch_add(1);
            if (p >= n_perm)
                return;
            try {
                const std::uint64_t perm_chain =
                    child_seed(config.seed, "perm", static_cast<std::uint64_t>(p));
                auto [train, test] = permute_and_split(base, child_seed(perm_chain, "split", 0),
                                                       config.split);
                const Normalizer norm = Normalizer::fit(config.normalization, train);
                curves[static_cast<std::size_t>(p)] =
                    roc_over_grid(norm.apply(train), norm.apply(test), config, perm_chain);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
    };

    const int pool = std::max(1, std::min(config.threads, n_perm));
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(pool));
        for (int i = 0; i < pool; ++i)
            threads.emplace_back(worker);
        for (auto& t : threads)
            t.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    ProtocolSummary summary;
    summary.dataset = ds.provenance;
    summary.kind = config.kind;
    for (std::size_t gi = 0; gi < config.tfpr_grid.size(); ++gi) {
        const double tau = config.tfpr_grid[gi];
        const NpScoreParams score_params = NpScoreParams::with_default_kappa(tau);
        std::vector<double> tprs, fprs, scores;
        for (const auto& curve : curves) {
            const RocPoint& pt = curve.points[gi];
            tprs.push_back(pt.tpr);
            fprs.push_back(pt.fpr);
            if (std::isfinite(pt.fpr) && std::isfinite(pt.tpr))
                scores.push_back(np_score(pt.fpr, 1.0 - pt.tpr, score_params));
            else
                scores.push_back(kNaN);
        }
        summary.points.push_back({tau, aggregate(tprs), aggregate(fprs), aggregate(scores)});
    }
    std::vector<double> aucs, aucs_fpr;
    for (const auto& curve : curves) {
        aucs.push_back(curve.auc);
        aucs_fpr.push_back(curve.auc_vs_fpr);
    }
    summary.auc = aggregate(aucs);
    summary.auc_vs_fpr = aggregate(aucs_fpr);
    return summary;
}

CvResult cross_validate(const Dataset& train, const ProtocolConfig& base, const CvConfig& cv) {
    if (base.kind != ModelKind::npnn)
        throw ConfigError("cross-validation tunes the kernel layer; model must be npnn");
    if (cv.folds < 2)
        throw std::invalid_argument("cross_validate: folds must be >= 2");
    if (cv.bandwidth_grid.empty() || cv.pairs_per_dim_grid.empty())
        throw std::invalid_argument("cross_validate: empty grid");
    if (train.num_pos < static_cast<std::uint64_t>(cv.folds) ||
        train.num_neg < static_cast<std::uint64_t>(cv.folds))
        throw ProtocolError("cross_validate: need at least " + std::to_string(cv.folds) +
                            " samples of each class, got " + std::to_string(train.num_pos) +
                            "+ / " + std::to_string(train.num_neg) + "-");

    // stratified folds: shuffle within each class, deal round-robin
    Dataset perm = shuffled(train, child_seed(base.seed, "cv-shuffle", 0));
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(cv.folds));
    std::size_t pos_seen = 0, neg_seen = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const std::size_t k = perm.samples[i].label == +1 ? pos_seen++ : neg_seen++;
        folds[k % static_cast<std::size_t>(cv.folds)].push_back(i);
    }

    const NpScoreParams score_params = NpScoreParams::with_default_kappa(base.params.tau);

    CvResult result;
    bool have_best = false;
    double best_score = 0.0;

    // candidates ordered so the tie-break (fewer pairs, then smaller
    // bandwidth) is simply "first strictly better wins"
    std::vector<std::pair<int, double>> candidates;
    for (int mult : cv.pairs_per_dim_grid)
        for (double g : cv.bandwidth_grid)
            candidates.emplace_back(mult * train.dim, g);
    std::sort(candidates.begin(), candidates.end());

    std::uint64_t cell = 0;
    for (const auto& [pairs, bandwidth] : candidates) {
        Hyperparams hp = base.params;
        hp.bandwidth = bandwidth;
        hp.num_pairs = pairs;
        double total = 0.0;
        for (int f = 0; f < cv.folds; ++f) {
            std::vector<LabeledSample> fit, val;
            for (int k = 0; k < cv.folds; ++k)
                for (std::size_t idx : folds[static_cast<std::size_t>(k)])
                    (k == f ? val : fit).push_back(perm.samples[idx]);
            const Dataset fit_ds = make_dataset(std::move(fit), perm.provenance + "[cv-fit]");
            const Dataset val_ds = make_dataset(std::move(val), perm.provenance + "[cv-val]");
            const TrainedModel model =
                train_on(fit_ds, base.kind, hp, base.epochs,
                         child_seed(base.seed, "cv-model", cell * static_cast<std::uint64_t>(cv.folds) +
                                                              static_cast<std::uint64_t>(f)));
            const Rates rates = evaluate_on(model, val_ds);
            total += np_score(rates.fpr.value(), rates.miss.value(), score_params);
        }
        const double mean_score = total / cv.folds;
        result.table.push_back({bandwidth, pairs, mean_score});
        if (!have_best || mean_score < best_score) {
            have_best = true;
            best_score = mean_score;
            result.bandwidth = bandwidth;
            result.num_pairs = pairs;
        }
        ++cell;
    }
    return result;
}

} // namespace np

#include "np/data.hpp"

#include "np/errors.hpp"
#include "np/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace np {

namespace {

double parse_cell(const std::string& cell, std::size_t line_no) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (begin != end && *begin == '+')
        ++begin; // from_chars rejects a leading plus
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
    return value;
}

int coerce_label(double value, std::size_t line_no) {
    if (value == 1.0)
        return +1;
    if (value == -1.0 || value == 0.0)
        return -1;
    throw ParseError("line " + std::to_string(line_no) + ": label must be -1, 0 or +1, got " +
                     std::to_string(value));
}

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Dataset make_dataset(std::vector<LabeledSample> samples, std::string provenance) {
    Dataset ds;
    ds.provenance = std::move(provenance);
    ds.samples = std::move(samples);
    if (!ds.samples.empty())
        ds.dim = static_cast<int>(ds.samples.front().x.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const auto& s = ds.samples[i];
        if (static_cast<int>(s.x.size()) != ds.dim)
            throw SchemaError("sample " + std::to_string(i) + " has dimension " +
                              std::to_string(s.x.size()) + ", expected " + std::to_string(ds.dim));
        if (s.label != -1 && s.label != +1)
            throw SchemaError("sample " + std::to_string(i) + " has label " +
                              std::to_string(s.label));
        if (s.label == +1)
            ++ds.num_pos;
        else
            ++ds.num_neg;
    }
    return ds;
}

Dataset with_minority_positive(Dataset ds) {
    if (ds.num_pos > ds.num_neg) {
        for (auto& s : ds.samples)
            s.label = -s.label;
        std::swap(ds.num_pos, ds.num_neg);
    }
    return ds;
}

Dataset load_delimited(const std::filesystem::path& path, int label_column, char delimiter,
                       bool has_header) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path.string());

    std::vector<LabeledSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1)
            continue;
        line = trimmed(line);
        if (line.empty())
            continue;

        std::vector<std::string> cells;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, delimiter))
            cells.push_back(trimmed(cell));

        const int ncols = static_cast<int>(cells.size());
        const int lcol = label_column >= 0 ? label_column : ncols + label_column;
        if (lcol < 0 || lcol >= ncols)
            throw ParseError("line " + std::to_string(line_no) + ": label column " +
                             std::to_string(label_column) + " out of range for " +
                             std::to_string(ncols) + " columns");

        LabeledSample s;
        s.x.resize(ncols - 1);
        int k = 0;
        for (int c = 0; c < ncols; ++c) {
            const double v = parse_cell(cells[static_cast<std::size_t>(c)], line_no);
            if (c == lcol)
                s.label = coerce_label(v, line_no);
            else
                s.x[k++] = v;
        }
        if (!samples.empty() && s.x.size() != samples.front().x.size())
            throw SchemaError("line " + std::to_string(line_no) + ": row has " +
                              std::to_string(s.x.size()) + " features, expected " +
                              std::to_string(samples.front().x.size()));
        samples.push_back(std::move(s));
    }
    return make_dataset(std::move(samples), path.string());
}

void save_delimited(const Dataset& ds, const std::filesystem::path& path, char delimiter) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write " + path.string());
    out.precision(17);
    for (const auto& s : ds.samples) {
        for (int j = 0; j < s.x.size(); ++j)
            out << s.x[j] << delimiter;
        out << s.label << '\n';
    }
}

Dataset load_sparse(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path.string());

    struct SparseRow {
        int label;
        std::vector<std::pair<int, double>> entries;
    };
    std::vector<SparseRow> rows;
    int max_index = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trimmed(line);
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string token;
        ss >> token;
        SparseRow row;
        row.label = coerce_label(parse_cell(token, line_no), line_no);
        int prev_index = 0;
        while (ss >> token) {
            const auto colon = token.find(':');
            if (colon == std::string::npos)
                throw ParseError("line " + std::to_string(line_no) + ": expected index:value, got '" +
                                 token + "'");
            const double idx_val = parse_cell(token.substr(0, colon), line_no);
            const int index = static_cast<int>(idx_val);
            if (idx_val != index || index < 1)
                throw ParseError("line " + std::to_string(line_no) + ": index must be a positive integer, got '" +
                                 token.substr(0, colon) + "'");
            if (index <= prev_index)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": indices must be strictly increasing (saw " +
                                 std::to_string(index) + " after " + std::to_string(prev_index) + ")");
            row.entries.emplace_back(index, parse_cell(token.substr(colon + 1), line_no));
            prev_index = index;
            max_index = std::max(max_index, index);
        }
        rows.push_back(std::move(row));
    }

    std::vector<LabeledSample> samples;
    samples.reserve(rows.size());
    for (auto& row : rows) {
        LabeledSample s;
        s.label = row.label;
        s.x = Vec::Zero(max_index);
        for (auto& [index, value] : row.entries)
            s.x[index - 1] = value;
        samples.push_back(std::move(s));
    }
    return make_dataset(std::move(samples), path.string());
}

void save_sparse(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write " + path.string());
    out.precision(17);
    for (const auto& s : ds.samples) {
        out << (s.label > 0 ? "+1" : "-1");
        for (int j = 0; j < s.x.size(); ++j)
            if (s.x[j] != 0.0)
                out << ' ' << (j + 1) << ':' << s.x[j];
        out << '\n';
    }
}

Dataset shuffled(const Dataset& ds, std::uint64_t seed) {
    std::vector<LabeledSample> samples = ds.samples;
    Rng rng(seed);
    for (std::size_t i = samples.size(); i > 1; --i)
        std::swap(samples[i - 1], samples[rng.below(i)]);
    return make_dataset(std::move(samples), ds.provenance);
}

std::pair<Dataset, Dataset> permute_and_split(const Dataset& ds, std::uint64_t seed,
                                              double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must be in (0,1)");
    Dataset perm = shuffled(ds, seed);
    const std::size_t n_train = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(perm.size())));
    std::vector<LabeledSample> train(perm.samples.begin(),
                                     perm.samples.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<LabeledSample> test(perm.samples.begin() + static_cast<std::ptrdiff_t>(n_train),
                                    perm.samples.end());
    return {make_dataset(std::move(train), ds.provenance + "[train]"),
            make_dataset(std::move(test), ds.provenance + "[test]")};
}

Normalizer Normalizer::fit(NormKind kind, const Dataset& ds) {
    Normalizer norm;
    norm.kind = kind;
    if (kind != NormKind::zscore)
        return norm;
    if (ds.samples.empty())
        throw std::invalid_argument("Normalizer::fit: empty dataset");
    const int d = ds.dim;
    const double n = static_cast<double>(ds.size());
    norm.mean = Vec::Zero(d);
    for (const auto& s : ds.samples)
        norm.mean += s.x;
    norm.mean /= n;
    Vec var = Vec::Zero(d);
    for (const auto& s : ds.samples)
        var += (s.x - norm.mean).cwiseAbs2();
    var /= n;
    norm.inv_std.resize(d);
    for (int j = 0; j < d; ++j)
        norm.inv_std[j] = var[j] > 0.0 ? 1.0 / std::sqrt(var[j]) : 0.0; // constant feature -> 0
    return norm;
}

Vec Normalizer::apply(const Vec& x) const {
    switch (kind) {
    case NormKind::none:
        return x;
    case NormKind::zscore:
        if (x.size() != mean.size())
            throw std::invalid_argument("Normalizer::apply: dimension mismatch");
        return (x - mean).cwiseProduct(inv_std);
    case NormKind::unitnorm: {
        const double norm2 = x.norm();
        return norm2 > 0.0 ? Vec(x / norm2) : x;
    }
    }
    return x;
}

Dataset Normalizer::apply(const Dataset& ds) const {
    if (kind == NormKind::none)
        return ds;
    std::vector<LabeledSample> samples;
    samples.reserve(ds.size());
    for (const auto& s : ds.samples)
        samples.push_back({apply(s.x), s.label});
    return make_dataset(std::move(samples), ds.provenance);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    // Acklam's rational approximation, then one Halley step against erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double TwoGaussianOracle::threshold(double tau) const {
    return -0.5 * separation - normal_quantile(tau);
}

double TwoGaussianOracle::tpr(double tau) const {
    return normal_cdf(normal_quantile(tau) + separation);
}

TwoGaussians gen_two_gaussians(int n, int dim, double separation, std::uint64_t seed) {
    if (n < 2)
        throw std::invalid_argument("gen_two_gaussians: n must be >= 2");
    if (dim < 1)
        throw std::invalid_argument("gen_two_gaussians: dim must be >= 1");
    if (!(separation >= 0.0))
        throw std::invalid_argument("gen_two_gaussians: separation must be >= 0");

    Rng rng(child_seed(seed, "two-gaussians", 0));
    std::vector<LabeledSample> samples;
    samples.reserve(static_cast<std::size_t>(n));
    const int n_pos = n / 2;
    for (int i = 0; i < n; ++i) {
        LabeledSample s;
        s.label = i < n_pos ? +1 : -1;
        s.x.resize(dim);
        for (int j = 0; j < dim; ++j)
            s.x[j] = rng.normal();
        s.x[0] += (s.label > 0 ? +0.5 : -0.5) * separation;
        samples.push_back(std::move(s));
    }
    std::ostringstream tag;
    tag << "two-gaussians(n=" << n << ",dim=" << dim << ",sep=" << separation << ")";
    Dataset ds = shuffled(make_dataset(std::move(samples), tag.str()),
                          child_seed(seed, "two-gaussians-order", 0));
    return {std::move(ds), TwoGaussianOracle{separation}};
}

Dataset gen_ring(int n, double inner_radius, double outer_radius, double noise,
                 std::uint64_t seed) {
    if (n < 2)
        throw std::invalid_argument("gen_ring: n must be >= 2");
    if (!(inner_radius > 0.0 && outer_radius > inner_radius))
        throw std::invalid_argument("gen_ring: need 0 < inner_radius < outer_radius");
    if (noise < 0.0)
        throw std::invalid_argument("gen_ring: noise must be >= 0");

    Rng rng(child_seed(seed, "ring", 0));
    std::vector<LabeledSample> samples;
    samples.reserve(static_cast<std::size_t>(n));
    const int n_pos = n / 2;
    const double in2 = inner_radius * inner_radius;
    const double out2 = outer_radius * outer_radius;
    for (int i = 0; i < n; ++i) {
        const bool positive = i < n_pos;
        // area-uniform radius on the disk or annulus
        double r = positive ? inner_radius * std::sqrt(rng.uniform())
                            : std::sqrt(in2 + rng.uniform() * (out2 - in2));
        r = std::max(r + noise * rng.normal(), 0.0);
        const double angle = rng.uniform(0.0, 2.0 * M_PI);
        LabeledSample s;
        s.label = positive ? +1 : -1;
        s.x.resize(2);
        s.x[0] = r * std::cos(angle);
        s.x[1] = r * std::sin(angle);
        samples.push_back(std::move(s));
    }
    std::ostringstream tag;
    tag << "ring(n=" << n << ",inner=" << inner_radius << ",outer=" << outer_radius
        << ",noise=" << noise << ")";
    return shuffled(make_dataset(std::move(samples), tag.str()),
                    child_seed(seed, "ring-order", 0));
}

} // namespace np

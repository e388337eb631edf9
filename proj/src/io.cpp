#include "np/io.hpp"

#include "np/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <unistd.h>

namespace np {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        throw std::logic_error("format_double failed");
    return std::string(buf, ptr);
}

std::string hex_double(double v) {
    if (!std::isfinite(v))
        throw std::logic_error("refusing to serialize a non-finite value");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
    if (ec != std::errc{})
        throw std::logic_error("hex_double failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& s, const std::string& what,
                    std::chars_format fmt = std::chars_format::general) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    if (begin != end && *begin == '+')
        ++begin;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v, fmt);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(what + ": not a number: '" + s + "'");
    return v;
}

long long parse_int(const std::string& s, const std::string& what) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    if (begin != end && *begin == '+')
        ++begin;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(what + ": not an integer: '" + s + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(what + ": not an unsigned integer: '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1")
        return true;
    if (s == "false" || s == "0")
        return false;
    throw ConfigError(what + ": expected true/false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!cur.empty())
                out.push_back(std::exchange(cur, {}));
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

ProtocolConfig RunConfig::protocol() const {
    ProtocolConfig pc;
    pc.kind = kind;
    pc.params = params;
    pc.tfpr_grid = tfpr_grid;
    pc.permutations = permutations;
    pc.split = split;
    pc.epochs = epochs;
    pc.normalization = normalization;
    pc.minority_positive = minority_positive;
    pc.seed = seed;
    pc.threads = threads;
    return pc;
}

Dataset RunConfig::load() const {
    switch (data.kind) {
    case DataSource::Kind::delimited:
        return load_delimited(data.path, data.label_column, data.delimiter, data.has_header);
    case DataSource::Kind::sparse:
        return load_sparse(data.path);
    case DataSource::Kind::two_gaussians:
        return gen_two_gaussians(data.n, data.dim, data.separation, seed).dataset;
    case DataSource::Kind::ring:
        return gen_ring(data.n, data.inner, data.outer, data.noise, seed);
    }
    throw std::logic_error("unreachable");
}

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    bool have_source = false;
    bool have_tau = false;
    std::string format = "delimited";
    std::string source;

    using Setter = std::function<void(const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"model", [&](const std::string& v) { config.kind = model_kind_from_string(v); }},
        {"target_fpr",
         [&](const std::string& v) {
             config.params.tau = parse_double(v, "target_fpr");
             have_tau = true;
         }},
        {"bandwidth",
         [&](const std::string& v) { config.params.bandwidth = parse_double(v, "bandwidth"); }},
        {"hidden_pairs",
         [&](const std::string& v) {
             config.params.num_pairs = static_cast<int>(parse_int(v, "hidden_pairs"));
         }},
        {"regularization",
         [&](const std::string& v) {
             config.params.regularization = parse_double(v, "regularization");
         }},
        {"learning_rate",
         [&](const std::string& v) {
             config.params.learning_rate = parse_double(v, "learning_rate");
         }},
        {"multiplier_gain",
         [&](const std::string& v) {
             config.params.multiplier_gain = parse_double(v, "multiplier_gain");
         }},
        {"multiplier_init",
         [&](const std::string& v) {
             config.params.multiplier_init = parse_double(v, "multiplier_init");
         }},
        {"window",
         [&](const std::string& v) { config.params.window = static_cast<int>(parse_int(v, "window")); }},
        {"warmup",
         [&](const std::string& v) { config.params.warmup = static_cast<int>(parse_int(v, "warmup")); }},
        {"train_hidden",
         [&](const std::string& v) { config.params.train_hidden = parse_bool(v, "train_hidden"); }},
        {"stochastic_multiplier",
         [&](const std::string& v) {
             config.params.stochastic_multiplier = parse_bool(v, "stochastic_multiplier");
         }},
        {"source",
         [&](const std::string& v) {
             source = v;
             have_source = true;
         }},
        {"format", [&](const std::string& v) { format = v; }},
        {"delimiter",
         [&](const std::string& v) {
             if (v == "tab")
                 config.data.delimiter = '\t';
             else if (v == "space")
                 config.data.delimiter = ' ';
             else if (v.size() == 1)
                 config.data.delimiter = v[0];
             else
                 throw ConfigError("delimiter: expected one character, 'tab' or 'space'");
         }},
        {"label_column",
         [&](const std::string& v) {
             config.data.label_column = static_cast<int>(parse_int(v, "label_column"));
         }},
        {"has_header",
         [&](const std::string& v) { config.data.has_header = parse_bool(v, "has_header"); }},
        {"n", [&](const std::string& v) { config.data.n = static_cast<int>(parse_int(v, "n")); }},
        {"dim",
         [&](const std::string& v) { config.data.dim = static_cast<int>(parse_int(v, "dim")); }},
        {"separation",
         [&](const std::string& v) { config.data.separation = parse_double(v, "separation"); }},
        {"inner", [&](const std::string& v) { config.data.inner = parse_double(v, "inner"); }},
        {"outer", [&](const std::string& v) { config.data.outer = parse_double(v, "outer"); }},
        {"noise", [&](const std::string& v) { config.data.noise = parse_double(v, "noise"); }},
        {"normalization",
         [&](const std::string& v) {
             if (v == "none")
                 config.normalization = NormKind::none;
             else if (v == "zscore")
                 config.normalization = NormKind::zscore;
             else if (v == "unitnorm")
                 config.normalization = NormKind::unitnorm;
             else
                 throw ConfigError("normalization: expected none|zscore|unitnorm, got '" + v + "'");
         }},
        {"minority_positive",
         [&](const std::string& v) { config.minority_positive = parse_bool(v, "minority_positive"); }},
        {"shuffle", [&](const std::string& v) { config.shuffle = parse_bool(v, "shuffle"); }},
        {"permutations",
         [&](const std::string& v) {
             config.permutations = static_cast<int>(parse_int(v, "permutations"));
         }},
        {"split", [&](const std::string& v) { config.split = parse_double(v, "split"); }},
        {"epochs",
         [&](const std::string& v) { config.epochs = static_cast<int>(parse_int(v, "epochs")); }},
        {"tfpr_grid",
         [&](const std::string& v) {
             config.tfpr_grid.clear();
             for (const auto& item : split_list(v))
                 config.tfpr_grid.push_back(parse_double(item, "tfpr_grid"));
         }},
        {"cv_bandwidth_grid",
         [&](const std::string& v) {
             config.cv.bandwidth_grid.clear();
             for (const auto& item : split_list(v))
                 config.cv.bandwidth_grid.push_back(parse_double(item, "cv_bandwidth_grid"));
         }},
        {"cv_pairs_grid",
         [&](const std::string& v) {
             config.cv.pairs_per_dim_grid.clear();
             for (const auto& item : split_list(v))
                 config.cv.pairs_per_dim_grid.push_back(
                     static_cast<int>(parse_int(item, "cv_pairs_grid")));
         }},
        {"cv_folds",
         [&](const std::string& v) { config.cv.folds = static_cast<int>(parse_int(v, "cv_folds")); }},
        {"threads",
         [&](const std::string& v) { config.threads = static_cast<int>(parse_int(v, "threads")); }},
        {"seed",
         [&](const std::string& v) {
             config.seed = parse_uint(v, "seed");
             config.seed_given = true;
         }},
        {"out_dir", [&](const std::string& v) { config.out_dir = v; }},
        {"prefix", [&](const std::string& v) { config.prefix = v; }},
    };

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trimmed(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            continue; // sections are organizational only
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        it->second(value);
    }

    if (!have_source)
        throw ConfigError("missing required key 'source'");
    if (!have_tau)
        throw ConfigError("missing required key 'target_fpr'");

    if (source == "two-gaussians") {
        config.data.kind = DataSource::Kind::two_gaussians;
    } else if (source == "ring") {
        config.data.kind = DataSource::Kind::ring;
    } else {
        config.data.path = source;
        if (format == "delimited")
            config.data.kind = DataSource::Kind::delimited;
        else if (format == "sparse")
            config.data.kind = DataSource::Kind::sparse;
        else
            throw ConfigError("format: expected delimited|sparse, got '" + format + "'");
    }

    // range checks before any compute
    try {
        config.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (config.permutations < 1)
        throw ConfigError("permutations must be >= 1");
    if (!(config.split > 0.0 && config.split < 1.0))
        throw ConfigError("split must be in (0,1)");
    if (config.epochs < 1)
        throw ConfigError("epochs must be >= 1");
    if (config.threads < 1)
        throw ConfigError("threads must be >= 1");
    if (config.cv.folds < 2)
        throw ConfigError("cv_folds must be >= 2");
    if (config.tfpr_grid.empty())
        throw ConfigError("tfpr_grid must be nonempty");
    double prev = 0.0;
    for (double tau : config.tfpr_grid) {
        if (!(tau > 0.0 && tau < 1.0))
            throw ConfigError("tfpr_grid values must be in (0,1)");
        if (tau <= prev)
            throw ConfigError("tfpr_grid must be strictly increasing");
        prev = tau;
    }
    if (config.data.kind == DataSource::Kind::two_gaussians ||
        config.data.kind == DataSource::Kind::ring) {
        if (config.data.n < 2)
            throw ConfigError("n must be >= 2");
        if (config.data.dim < 1)
            throw ConfigError("dim must be >= 1");
        if (config.data.kind == DataSource::Kind::ring &&
            !(config.data.inner > 0.0 && config.data.outer > config.data.inner))
            throw ConfigError("ring needs 0 < inner < outer");
        if (config.data.noise < 0.0)
            throw ConfigError("noise must be >= 0");
    }
    return config;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& config) {
    std::ostringstream out;
    out << "model = " << to_string(config.kind) << '\n';
    out << "target_fpr = " << format_double(config.params.tau) << '\n';
    out << "bandwidth = " << format_double(config.params.bandwidth) << '\n';
    out << "hidden_pairs = " << config.params.num_pairs << '\n';
    out << "regularization = " << format_double(config.params.regularization) << '\n';
    out << "learning_rate = " << format_double(config.params.learning_rate) << '\n';
    out << "multiplier_gain = " << format_double(config.params.multiplier_gain) << '\n';
    out << "multiplier_init = " << format_double(config.params.multiplier_init) << '\n';
    out << "window = " << config.params.window << '\n';
    out << "warmup = " << config.params.warmup << '\n';
    out << "train_hidden = " << (config.params.train_hidden ? "true" : "false") << '\n';
    out << "stochastic_multiplier = " << (config.params.stochastic_multiplier ? "true" : "false")
        << '\n';
    switch (config.data.kind) {
    case DataSource::Kind::delimited:
        out << "source = " << config.data.path << '\n' << "format = delimited\n";
        break;
    case DataSource::Kind::sparse:
        out << "source = " << config.data.path << '\n' << "format = sparse\n";
        break;
    case DataSource::Kind::two_gaussians:
        out << "source = two-gaussians\n";
        break;
    case DataSource::Kind::ring:
        out << "source = ring\n";
        break;
    }
    if (config.data.delimiter == '\t')
        out << "delimiter = tab\n";
    else if (config.data.delimiter == ' ')
        out << "delimiter = space\n";
    else
        out << "delimiter = " << config.data.delimiter << '\n';
    out << "label_column = " << config.data.label_column << '\n';
    out << "has_header = " << (config.data.has_header ? "true" : "false") << '\n';
    out << "n = " << config.data.n << '\n';
    out << "dim = " << config.data.dim << '\n';
    out << "separation = " << format_double(config.data.separation) << '\n';
    out << "inner = " << format_double(config.data.inner) << '\n';
    out << "outer = " << format_double(config.data.outer) << '\n';
    out << "noise = " << format_double(config.data.noise) << '\n';
    out << "normalization = "
        << (config.normalization == NormKind::none
                ? "none"
                : config.normalization == NormKind::zscore ? "zscore" : "unitnorm")
        << '\n';
    out << "minority_positive = " << (config.minority_positive ? "true" : "false") << '\n';
    out << "shuffle = " << (config.shuffle ? "true" : "false") << '\n';
    out << "permutations = " << config.permutations << '\n';
    out << "split = " << format_double(config.split) << '\n';
    out << "epochs = " << config.epochs << '\n';
    out << "tfpr_grid =";
    for (double tau : config.tfpr_grid)
        out << ' ' << format_double(tau);
    out << '\n';
    out << "cv_bandwidth_grid =";
    for (double g : config.cv.bandwidth_grid)
        out << ' ' << format_double(g);
    out << '\n';
    out << "cv_pairs_grid =";
    for (int m : config.cv.pairs_per_dim_grid)
        out << ' ' << m;
    out << '\n';
    out << "cv_folds = " << config.cv.folds << '\n';
    out << "threads = " << config.threads << '\n';
    out << "seed = " << config.seed << '\n';
    out << "out_dir = " << config.out_dir << '\n';
    out << "prefix = " << config.prefix << '\n';
    return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp =
        path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out)
            throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// --- snapshots ---------------------------------------------------------------

namespace {

constexpr const char* kSnapshotMagic = "np-snapshot";
constexpr int kSnapshotVersion = 1;

void write_common(std::ostringstream& out, const Hyperparams& hp, const NpCore& core,
                  std::uint64_t seed, const Vec& weights, double bias) {
    out << "tau " << hex_double(hp.tau) << '\n';
    out << "bandwidth " << hex_double(hp.bandwidth) << '\n';
    out << "pairs " << hp.num_pairs << '\n';
    out << "regularization " << hex_double(hp.regularization) << '\n';
    out << "learning_rate " << hex_double(hp.learning_rate) << '\n';
    out << "multiplier_gain " << hex_double(hp.multiplier_gain) << '\n';
    out << "multiplier_init " << hex_double(hp.multiplier_init) << '\n';
    out << "window " << hp.window << '\n';
    out << "warmup " << hp.warmup << '\n';
    out << "train_hidden " << (hp.train_hidden ? 1 : 0) << '\n';
    out << "stochastic_multiplier " << (hp.stochastic_multiplier ? 1 : 0) << '\n';
    out << "seed " << seed << '\n';
    out << "step " << core.step << '\n';
    out << "num_pos " << core.num_pos << '\n';
    out << "num_neg " << core.num_neg << '\n';
    out << "multiplier " << hex_double(core.multiplier) << '\n';
    out << "bias " << hex_double(bias) << '\n';
    out << "weights";
    for (int i = 0; i < weights.size(); ++i)
        out << ' ' << hex_double(weights[i]);
    out << '\n';
    const auto bits = core.window.contents();
    out << "window_bits ";
    if (bits.empty())
        out << '-';
    else
        for (auto b : bits)
            out << (b ? '1' : '0');
    out << '\n';
}

class SnapshotReader {
public:
    explicit SnapshotReader(const std::filesystem::path& path) : in_(path) {
        if (!in_)
            throw SnapshotError("cannot open snapshot " + path.string());
    }

    /// Next non-empty line; throws on EOF (truncated snapshot).
    std::string line() {
        std::string l;
        while (std::getline(in_, l)) {
            l = trimmed(l);
            if (!l.empty())
                return l;
        }
        throw SnapshotError("truncated snapshot");
    }

    /// "key value..." line; verifies the key and returns the remainder.
    std::string field(const std::string& key) {
        const std::string l = line();
        if (l.size() < key.size() || l.compare(0, key.size(), key) != 0 ||
            (l.size() > key.size() && l[key.size()] != ' '))
            throw SnapshotError("expected field '" + key + "', got '" + l + "'");
        return l.size() > key.size() ? trimmed(l.substr(key.size() + 1)) : std::string{};
    }

    double hex_field(const std::string& key) {
        const std::string v = field(key);
        double out = 0.0;
        const char* begin = v.data();
        const char* end = begin + v.size();
        if (begin != end && *begin == '+')
            ++begin;
        auto [ptr, ec] = std::from_chars(begin, end, out, std::chars_format::hex);
        if (ec != std::errc{} || ptr != end)
            throw SnapshotError("field '" + key + "': bad hex float '" + v + "'");
        return out;
    }

    std::uint64_t uint_field(const std::string& key) {
        const std::string v = field(key);
        std::uint64_t out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw SnapshotError("field '" + key + "': bad integer '" + v + "'");
        return out;
    }

    long long int_field(const std::string& key) {
        const std::string v = field(key);
        long long out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw SnapshotError("field '" + key + "': bad integer '" + v + "'");
        return out;
    }

private:
    std::ifstream in_;
};

double parse_hex_token(const std::string& token, const char* what) {
    double out = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (begin != end && *begin == '+')
        ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out, std::chars_format::hex);
    if (ec != std::errc{} || ptr != end)
        throw SnapshotError(std::string(what) + ": bad hex float '" + token + "'");
    return out;
}

struct CommonFields {
    Hyperparams hp;
    std::uint64_t seed = 0;
    std::uint64_t step = 0, num_pos = 0, num_neg = 0;
    double multiplier = 0.0;
    double bias = 0.0;
    Vec weights;
    std::vector<std::uint8_t> window_bits;
};

CommonFields read_common(SnapshotReader& reader) {
    CommonFields c;
    c.hp.tau = reader.hex_field("tau");
    c.hp.bandwidth = reader.hex_field("bandwidth");
    c.hp.num_pairs = static_cast<int>(reader.int_field("pairs"));
    c.hp.regularization = reader.hex_field("regularization");
    c.hp.learning_rate = reader.hex_field("learning_rate");
    c.hp.multiplier_gain = reader.hex_field("multiplier_gain");
    c.hp.multiplier_init = reader.hex_field("multiplier_init");
    c.hp.window = static_cast<int>(reader.int_field("window"));
    c.hp.warmup = static_cast<int>(reader.int_field("warmup"));
    c.hp.train_hidden = reader.int_field("train_hidden") != 0;
    c.hp.stochastic_multiplier = reader.int_field("stochastic_multiplier") != 0;
    c.seed = reader.uint_field("seed");
    c.step = reader.uint_field("step");
    c.num_pos = reader.uint_field("num_pos");
    c.num_neg = reader.uint_field("num_neg");
    c.multiplier = reader.hex_field("multiplier");
    c.bias = reader.hex_field("bias");

    std::istringstream ws(reader.field("weights"));
    std::vector<double> values;
    std::string token;
    while (ws >> token)
        values.push_back(parse_hex_token(token, "weights"));
    c.weights.resize(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        c.weights[static_cast<Eigen::Index>(i)] = values[i];

    const std::string bits = reader.field("window_bits");
    if (bits != "-")
        for (char ch : bits) {
            if (ch != '0' && ch != '1')
                throw SnapshotError("window_bits: bad bit '" + std::string(1, ch) + "'");
            c.window_bits.push_back(ch == '1' ? 1 : 0);
        }
    return c;
}

void restore_core(NpCore& core, const CommonFields& c) {
    core.step = c.step;
    core.num_pos = c.num_pos;
    core.num_neg = c.num_neg;
    core.multiplier = c.multiplier;
    core.window.restore(c.window_bits);
    // rates are a pure function of t, recomputed exactly as in training
    const double denom = 1.0 + core.params.regularization * static_cast<double>(core.step);
    core.learning_rate = core.params.learning_rate / denom;
    core.multiplier_gain = core.params.multiplier_gain / denom;
}

std::string header_line(const std::string& kind) {
    std::ostringstream out;
    out << kSnapshotMagic << " v" << kSnapshotVersion << '\n' << "kind " << kind << '\n';
    return out.str();
}

std::string check_header(SnapshotReader& reader) {
    const std::string magic = reader.line();
    if (magic != std::string(kSnapshotMagic) + " v" + std::to_string(kSnapshotVersion))
        throw SnapshotError("unsupported snapshot header '" + magic + "'");
    return reader.field("kind");
}

} // namespace

void save_snapshot(const ModelState& state, const std::filesystem::path& path) {
    std::ostringstream out;
    out << header_line("npnn");
    out << "dim " << state.bank.dim_in() << '\n';
    write_common(out, state.core.params, state.core, state.seed, state.weights, state.bias);
    for (int i = 0; i < state.bank.num_pairs(); ++i) {
        out << "freq";
        for (int j = 0; j < state.bank.dim_in(); ++j)
            out << ' ' << hex_double(state.bank.freqs(i, j));
        out << '\n';
    }
    out << "end\n";
    atomic_write(path, out.str());
}

void save_snapshot(const LinearState& state, const std::filesystem::path& path) {
    std::ostringstream out;
    out << header_line("olnp");
    out << "dim " << state.weights.size() << '\n';
    write_common(out, state.core.params, state.core, state.seed, state.weights, state.bias);
    out << "end\n";
    atomic_write(path, out.str());
}

std::variant<ModelState, LinearState> load_snapshot(const std::filesystem::path& path) {
    SnapshotReader reader(path);
    const std::string kind = check_header(reader);
    if (kind != "npnn" && kind != "olnp")
        throw SnapshotError("unknown model kind '" + kind + "'");
    const int dim = static_cast<int>(reader.int_field("dim"));
    const CommonFields c = read_common(reader);

    if (kind == "npnn") {
        ModelState state(c.hp);
        state.seed = c.seed;
        state.bias = c.bias;
        state.weights = c.weights;
        if (state.weights.size() != 2 * c.hp.num_pairs)
            throw SnapshotError("weights length does not match pairs");
        state.bank.bandwidth = c.hp.bandwidth;
        state.bank.freqs.resize(c.hp.num_pairs, dim);
        for (int i = 0; i < c.hp.num_pairs; ++i) {
            std::istringstream row(reader.field("freq"));
            std::string token;
            for (int j = 0; j < dim; ++j) {
                if (!(row >> token))
                    throw SnapshotError("freq row " + std::to_string(i) + " is short");
                state.bank.freqs(i, j) = parse_hex_token(token, "freq");
            }
            if (row >> token)
                throw SnapshotError("freq row " + std::to_string(i) + " has extra values");
        }
        if (reader.line() != "end")
            throw SnapshotError("missing end marker");
        restore_core(state.core, c);
        return state;
    }

    LinearState state(c.hp);
    state.seed = c.seed;
    state.bias = c.bias;
    state.weights = c.weights;
    if (state.weights.size() != dim)
        throw SnapshotError("weights length does not match dim");
    if (reader.line() != "end")
        throw SnapshotError("missing end marker");
    restore_core(state.core, c);
    return state;
}

ModelState load_npnn_snapshot(const std::filesystem::path& path) {
    auto loaded = load_snapshot(path);
    if (!std::holds_alternative<ModelState>(loaded))
        throw SnapshotError(path.string() + " holds an olnp model, expected npnn");
    return std::get<ModelState>(std::move(loaded));
}

LinearState load_olnp_snapshot(const std::filesystem::path& path) {
    auto loaded = load_snapshot(path);
    if (!std::holds_alternative<LinearState>(loaded))
        throw SnapshotError(path.string() + " holds an npnn model, expected olnp");
    return std::get<LinearState>(std::move(loaded));
}

} // namespace np

#include "exband/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "exband/errors.hpp"

namespace exband::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Parser {
public:
    explicit Parser(std::string where) : where_(std::move(where)) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(where_ + ": " + msg); }

    double real(const std::string& v) const {
        double out = 0.0;
        const auto* end = v.data() + v.size();
        const auto [ptr, ec] = std::from_chars(v.data(), end, out);
        if (ec != std::errc() || ptr != end || !std::isfinite(out)) fail("not a number: '" + v + "'");
        return out;
    }

    long long integer(const std::string& v) const {
        long long out = 0;
        const auto* end = v.data() + v.size();
        const auto [ptr, ec] = std::from_chars(v.data(), end, out);
        if (ec != std::errc() || ptr != end) fail("not an integer: '" + v + "'");
        return out;
    }

    std::uint64_t unsigned_integer(const std::string& v) const {
        std::uint64_t out = 0;
        const auto* end = v.data() + v.size();
        const auto [ptr, ec] = std::from_chars(v.data(), end, out);
        if (ec != std::errc() || ptr != end) fail("not a nonnegative integer: '" + v + "'");
        return out;
    }

    bool boolean(const std::string& v) const {
        if (v == "true") return true;
        if (v == "false") return false;
        fail("expected true or false, got '" + v + "'");
    }

    template <class T>
    T choice(const std::string& v, std::initializer_list<std::pair<const char*, T>> options) const {
        for (const auto& [name, value] : options) {
            if (v == name) return value;
        }
        std::string names;
        for (const auto& o : options) names += (names.empty() ? "" : ", ") + std::string(o.first);
        fail("unknown value '" + v + "' (expected one of " + names + ")");
    }

private:
    std::string where_;
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "detectors",    "n_samples",      "snr_db",         "channel",     "nakagami_m",  "prior_k",
        "prior_theta",  "rolloff",        "bandwidth_hz",   "sample_rate_hz", "trials",  "seed",
        "pfa_grid",     "glr_mode",       "observation_path", "bin_scale", "threshold_mode", "fixed_noise_power",
        "threads",      "cdf_points",     "curve_points",   "prior_draws", "svg"};
    return keys;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string channel_label(const ChannelSpec& channel) {
    switch (channel.kind) {
        case ChannelKind::Awgn:
            return "awgn";
        case ChannelKind::Rayleigh:
            return "rayleigh";
        case ChannelKind::Nakagami: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "nakagami_m%g", channel.nakagami_m);
            return buf;
        }
    }
    return "unknown";
}

ScenarioConfig ExperimentConfig::scenario(int n, double snr_db_value, const ChannelSpec& channel) const {
    ScenarioConfig cfg;
    cfg.n_samples = n;
    cfg.prior = prior;
    cfg.signal = sample_rate_hz ? SignalSpec{bandwidth_hz, rolloff, *sample_rate_hz, db_to_linear(snr_db_value)}
                                : SignalSpec::critically_sampled(bandwidth_hz, rolloff, db_to_linear(snr_db_value));
    cfg.channel = channel;
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.glr_mode = glr_mode;
    cfg.path = path;
    cfg.bin_scale = bin_scale;
    cfg.fixed_noise_power = fixed_noise_power;
    cfg.threads = threads;
    return cfg;
}

std::string ExperimentConfig::echo() const {
    auto join = [](const auto& items, auto&& fmt) {
        std::string s;
        for (const auto& i : items) s += (s.empty() ? "" : ", ") + fmt(i);
        return s;
    };
    std::ostringstream os;
    os << "detectors = " << join(detectors, [](DetectorKind d) { return std::string(detector_name(d)); }) << '\n';
    os << "n_samples = " << join(n_samples, [](int n) { return std::to_string(n); }) << '\n';
    os << "snr_db = " << join(snr_db, num) << '\n';
    os << "channel = " << join(channels, channel_label) << '\n';
    os << "prior_k = " << prior.k << '\n';
    os << "prior_theta = " << num(prior.theta) << '\n';
    os << "rolloff = " << num(rolloff) << '\n';
    os << "bandwidth_hz = " << num(bandwidth_hz) << '\n';
    os << "sample_rate_hz = " << (sample_rate_hz ? num(*sample_rate_hz) : "critical") << '\n';
    os << "trials = " << trials << '\n';
    os << "seed = " << seed << '\n';
    os << "pfa_grid = " << join(pfa_grid, num) << '\n';
    os << "glr_mode = " << (glr_mode == GlrMode::OneSided ? "one_sided" : "two_sided") << '\n';
    os << "observation_path = " << (path == ObservationPath::Model ? "model" : "waveform") << '\n';
    os << "bin_scale = " << (bin_scale == BinScale::PerSample ? "per_sample" : "unnormalized") << '\n';
    os << "threshold_mode = " << (threshold_mode == ThresholdMode::Empirical ? "empirical" : "closed_form") << '\n';
    os << "fixed_noise_power = " << (fixed_noise_power ? num(*fixed_noise_power) : "none") << '\n';
    os << "cdf_points = " << cdf_points << '\n';
    os << "curve_points = " << curve_points << '\n';
    os << "prior_draws = " << prior_draws << '\n';
    return os.str();
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    std::map<std::string, std::pair<std::string, int>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const Parser p(source + ":" + std::to_string(lineno));
        const auto eq = body.find('=');
        if (eq == std::string::npos) p.fail("expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!known_keys().count(key)) p.fail("unknown key '" + key + "'");
        if (entries.count(key)) p.fail("duplicate key '" + key + "'");
        entries[key] = {value, lineno};
    }

    ExperimentConfig cfg;
    auto get = [&](const std::string& key) -> std::optional<std::pair<std::string, Parser>> {
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return std::make_pair(it->second.first, Parser(source + ":" + std::to_string(it->second.second) + ": " + key));
    };
    const Parser top(source);

    if (auto e = get("detectors")) {
        const auto& [v, p] = *e;
        for (const auto& name : split_list(v)) {
            const auto d = parse_detector(name);
            if (!d) p.fail("unknown detector '" + name + "'");
            cfg.detectors.push_back(*d);
        }
    }
    if (cfg.detectors.empty()) top.fail("detectors: at least one detector is required");

    if (auto e = get("n_samples")) {
        const auto& [v, p] = *e;
        cfg.n_samples.clear();
        for (const auto& item : split_list(v)) {
            const long long n = p.integer(item);
            if (n < 2 || n > 1 << 20) p.fail("n_samples must lie in [2, 2^20]");
            cfg.n_samples.push_back(static_cast<int>(n));
        }
        if (cfg.n_samples.empty()) p.fail("empty list");
    }
    if (auto e = get("snr_db")) {
        const auto& [v, p] = *e;
        cfg.snr_db.clear();
        for (const auto& item : split_list(v)) cfg.snr_db.push_back(p.real(item));
        if (cfg.snr_db.empty()) p.fail("empty list");
    }

    std::vector<double> nakagami_m;
    if (auto e = get("nakagami_m")) {
        const auto& [v, p] = *e;
        for (const auto& item : split_list(v)) {
            const double m = p.real(item);
            if (!(m >= 0.5)) p.fail("nakagami_m must be >= 0.5");
            nakagami_m.push_back(m);
        }
    }
    if (auto e = get("channel")) {
        const auto& [v, p] = *e;
        cfg.channels.clear();
        for (const auto& item : split_list(v)) {
            // the echoed form names the shape inline, e.g. nakagami_m2
            if (item.rfind("nakagami_m", 0) == 0) {
                const double m = p.real(item.substr(10));
                if (!(m >= 0.5)) p.fail("nakagami_m must be >= 0.5");
                cfg.channels.push_back(ChannelSpec::nakagami(m));
                continue;
            }
            const auto kind = p.choice<ChannelKind>(
                item, {{"awgn", ChannelKind::Awgn}, {"rayleigh", ChannelKind::Rayleigh}, {"nakagami", ChannelKind::Nakagami}});
            if (kind == ChannelKind::Nakagami) {
                if (nakagami_m.empty()) p.fail("nakagami channel needs the nakagami_m key");
                for (double m : nakagami_m) cfg.channels.push_back(ChannelSpec::nakagami(m));
            } else {
                cfg.channels.push_back({kind, 1.0});
            }
        }
        if (cfg.channels.empty()) p.fail("empty list");
    }

    auto k = get("prior_k");
    auto theta = get("prior_theta");
    if (!k || !theta) top.fail("prior_k and prior_theta are required");
    {
        const long long kv = k->second.integer(k->first);
        if (kv < 1) k->second.fail("must be >= 1");
        cfg.prior.k = static_cast<int>(kv);
        cfg.prior.theta = theta->second.real(theta->first);
        if (!(cfg.prior.theta > 0.0)) theta->second.fail("must be positive");
    }

    if (auto e = get("rolloff")) cfg.rolloff = e->second.real(e->first);
    if (auto e = get("bandwidth_hz")) cfg.bandwidth_hz = e->second.real(e->first);
    if (auto e = get("sample_rate_hz"); e && e->first != "critical") cfg.sample_rate_hz = e->second.real(e->first);
    if (auto e = get("trials")) {
        cfg.trials = e->second.unsigned_integer(e->first);
        if (cfg.trials < 1) e->second.fail("must be >= 1");
    }
    if (auto e = get("seed")) cfg.seed = e->second.unsigned_integer(e->first);
    if (auto e = get("pfa_grid")) {
        const auto& [v, p] = *e;
        cfg.pfa_grid.clear();
        for (const auto& item : split_list(v)) {
            const double q = p.real(item);
            if (!(q > 0.0 && q < 1.0)) p.fail("values must lie in (0, 1)");
            if (!cfg.pfa_grid.empty() && !(q > cfg.pfa_grid.back())) p.fail("values must be strictly ascending");
            cfg.pfa_grid.push_back(q);
        }
        if (cfg.pfa_grid.empty()) p.fail("empty list");
    }
    if (auto e = get("glr_mode")) {
        cfg.glr_mode = e->second.choice<GlrMode>(e->first, {{"one_sided", GlrMode::OneSided}, {"two_sided", GlrMode::TwoSided}});
    }
    if (auto e = get("observation_path")) {
        cfg.path = e->second.choice<ObservationPath>(
            e->first, {{"model", ObservationPath::Model}, {"waveform", ObservationPath::Waveform}});
    }
    if (auto e = get("bin_scale")) {
        cfg.bin_scale = e->second.choice<BinScale>(
            e->first, {{"per_sample", BinScale::PerSample}, {"unnormalized", BinScale::Unnormalized}});
    }
    if (auto e = get("threshold_mode")) {
        cfg.threshold_mode = e->second.choice<ThresholdMode>(
            e->first, {{"empirical", ThresholdMode::Empirical}, {"closed_form", ThresholdMode::ClosedForm}});
    }
    if (auto e = get("fixed_noise_power")) {
        if (e->first != "none") {
            cfg.fixed_noise_power = e->second.real(e->first);
            if (!(*cfg.fixed_noise_power > 0.0)) e->second.fail("must be positive");
        }
    }
    if (auto e = get("threads")) cfg.threads = static_cast<unsigned>(e->second.unsigned_integer(e->first));
    if (auto e = get("cdf_points")) {
        const long long v = e->second.integer(e->first);
        if (v < 2) e->second.fail("must be >= 2");
        cfg.cdf_points = static_cast<int>(v);
    }
    if (auto e = get("curve_points")) {
        const long long v = e->second.integer(e->first);
        if (v < 2) e->second.fail("must be >= 2");
        cfg.curve_points = static_cast<int>(v);
    }
    if (auto e = get("prior_draws")) {
        cfg.prior_draws = e->second.unsigned_integer(e->first);
        if (cfg.prior_draws < 1) e->second.fail("must be >= 1");
    }
    if (auto e = get("svg")) cfg.svg = e->second.boolean(e->first);

    // Catch inconsistent signal or band settings before any work starts.
    for (int n : cfg.n_samples) {
        for (double snr : cfg.snr_db) {
            for (const auto& ch : cfg.channels) {
                try {
                    cfg.scenario(n, snr, ch).validate();
                } catch (const ConfigError& err) {
                    top.fail(err.what());
                }
            }
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

}  // namespace exband::cli

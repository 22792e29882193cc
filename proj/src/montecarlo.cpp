#include "exband/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "exband/analysis.hpp"
#include "exband/errors.hpp"
#include "exband/numerics.hpp"
#include "exband/observation.hpp"
#include "exband/signal_model.hpp"

namespace exband {

namespace {

constexpr std::uint64_t kTrialBits = 40;

unsigned worker_count(const ScenarioConfig& cfg) {
    unsigned t = cfg.threads;
    if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(1, cfg.trials / 256)));
}

// Runs body(i) for i in [0, n) over contiguous chunks; each index is written
// by exactly one worker, so the result does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double reference_noise_power(const ScenarioConfig& cfg) {
    return cfg.fixed_noise_power ? *cfg.fixed_noise_power : cfg.prior.mean_noise_power();
}

bool two_sided(DetectorKind kind, const ScenarioConfig& cfg) {
    return is_glr(kind) && cfg.glr_mode == GlrMode::TwoSided && cfg.signal.snr_linear > 0.0;
}

double glr_value_for(DetectorKind kind, const ScenarioConfig& cfg, const BandGeometry& g, double t) {
    const double snr = cfg.signal.snr_linear;
    if (kind == DetectorKind::Glrd1) return lr_glrd1_value(t, cfg.n_samples, cfg.prior.k, snr);
    return lr_glrd2_value(t, g.l_inband, g.p_excess, cfg.prior.k, snr);
}

std::pair<double, double> glr_interval_for(DetectorKind kind, const ScenarioConfig& cfg, const BandGeometry& g,
                                           double tau) {
    const double snr = cfg.signal.snr_linear;
    if (kind == DetectorKind::Glrd1) return glrd1_interval(tau, cfg.n_samples, cfg.prior.k, snr);
    return glrd2_interval(tau, g.l_inband, g.p_excess, cfg.prior.k, snr);
}

void check_grid(std::span<const double> grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw ConfigError("pfa grid values must lie in (0, 1)");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("pfa grid must be strictly ascending");
    }
}

}  // namespace

std::uint64_t trial_stream_index(StreamPhase phase, std::uint64_t trial) {
    return (static_cast<std::uint64_t>(phase) << kTrialBits) | trial;
}

TrialData generate_trial(const ScenarioConfig& cfg, std::uint64_t stream_index, bool need_time, bool need_bins) {
    TrialData t;
    RngStream noise_rng(cfg.master_seed, stream_index, 0);
    t.alpha = cfg.fixed_noise_power ? *cfg.fixed_noise_power : draw_noise_power(cfg.prior, noise_rng);
    RngStream channel_rng(cfg.master_seed, stream_index, 1);
    t.gain = cfg.pinned_gain ? *cfg.pinned_gain : channel_gain(cfg.channel, channel_rng);

    if (cfg.path == ObservationPath::Waveform) {
        if (!need_time && !need_bins) return t;
        RngStream data_rng(cfg.master_seed, stream_index, 2);
        const auto z = generate_time_block(cfg, t.alpha, t.gain, data_rng);
        if (need_time) t.r = squared_envelope(z);
        if (need_bins) {
            auto w = spectrum_bins(z);
            if (cfg.bin_scale == BinScale::PerSample) {
                for (auto& v : w) v /= static_cast<double>(cfg.n_samples);
            }
            auto split = split_bands(w, cfg.signal);
            t.x = std::move(split.x);
            t.y = std::move(split.y);
        }
        return t;
    }

    if (need_time) {
        RngStream data_rng(cfg.master_seed, stream_index, 2);
        t.r = generate_envelopes(cfg, t.alpha, t.gain, data_rng);
    }
    if (need_bins) {
        RngStream bin_rng(cfg.master_seed, stream_index, 3);
        auto bins = generate_bins(cfg, t.alpha, t.gain, cfg.pinned_signal, bin_rng);
        t.x = std::move(bins.x);
        t.y = std::move(bins.y);
    }
    return t;
}

double detector_statistic(DetectorKind kind, const ScenarioConfig& cfg, const TrialData& trial) {
    switch (kind) {
        case DetectorKind::Optimal:
            return t_opt(trial.r) * reference_noise_power(cfg) / trial.alpha;
        case DetectorKind::Alrd1:
        case DetectorKind::Glrd1:
            return t_alrd1(trial.r, cfg.prior);
        case DetectorKind::Alrd2:
        case DetectorKind::Glrd2:
            return t_alrd2(trial.x, trial.y, cfg.prior);
    }
    throw ConfigError("unknown detector");
}

std::vector<std::vector<double>> collect_statistics(const ScenarioConfig& cfg,
                                                    std::span<const DetectorKind> detectors, StreamPhase phase) {
    cfg.validate();
    bool need_time = false;
    bool need_bins = false;
    for (auto d : detectors) (uses_bins(d) ? need_bins : need_time) = true;

    std::vector<std::vector<double>> out(detectors.size(), std::vector<double>(cfg.trials));
    parallel_for(cfg.trials, worker_count(cfg), [&](std::size_t i) {
        const TrialData trial = generate_trial(cfg, trial_stream_index(phase, i), need_time, need_bins);
        for (std::size_t d = 0; d < detectors.size(); ++d) {
            const double s = detector_statistic(detectors[d], cfg, trial);
            if (!std::isfinite(s)) {
                throw NumericError("non-finite " + std::string(detector_name(detectors[d])) + " statistic in trial " +
                                   std::to_string(i));
            }
            out[d][i] = s;
        }
    });
    return out;
}

std::vector<double> collect_statistics(const ScenarioConfig& cfg, DetectorKind detector, StreamPhase phase) {
    const DetectorKind one[] = {detector};
    return std::move(collect_statistics(cfg, one, phase).front());
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double t) const {
    if (sorted_.empty()) return 0.0;
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double q) const {
    if (sorted_.empty()) throw std::domain_error("quantile of an empty sample");
    if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("quantile level must lie in (0, 1]");
    const double n = static_cast<double>(sorted_.size());
    auto idx = static_cast<std::size_t>(std::ceil(q * n - 1e-9 * n));
    idx = std::clamp<std::size_t>(idx, 1, sorted_.size());
    return sorted_[idx - 1];
}

EmpiricalCdf empirical_cdf(const ScenarioConfig& cfg, DetectorKind detector) {
    ScenarioConfig h0 = cfg;
    h0.hypothesis = Hypothesis::H0;
    return EmpiricalCdf(collect_statistics(h0, detector, StreamPhase::Calibrate));
}

RateEstimate wilson_interval(std::size_t hits, std::size_t n, double z) {
    RateEstimate e;
    e.hits = hits;
    e.trials = n;
    if (n == 0) return e;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
    e.rate = p;
    e.ci_low = std::clamp(centre - half, 0.0, p);
    e.ci_high = std::clamp(centre + half, p, 1.0);
    return e;
}

RateEstimate decision_rate(DetectorKind detector, std::span<const double> statistics, const ThresholdSpec& thresholds) {
    std::size_t hits = 0;
    for (double s : statistics) hits += rule_decides_h1(detector, s, thresholds) ? 1 : 0;
    return wilson_interval(hits, statistics.size());
}

RateEstimate run_trials(const ScenarioConfig& cfg, DetectorKind detector, const ThresholdSpec& thresholds,
                        StreamPhase phase) {
    return decision_rate(detector, collect_statistics(cfg, detector, phase), thresholds);
}

ThresholdSpec thresholds_for_pfa(DetectorKind detector, const ScenarioConfig& cfg, const EmpiricalCdf& h0,
                                 double target_pfa) {
    if (!(target_pfa > 0.0 && target_pfa < 1.0)) throw ConfigError("target pfa must lie in (0, 1)");
    if (target_pfa * static_cast<double>(h0.size()) < 100.0 - 1e-9) {
        throw ConfigError("too few trials to calibrate pfa " + std::to_string(target_pfa) + ": need at least " +
                          std::to_string(static_cast<long long>(std::ceil(100.0 / target_pfa))));
    }
    if (!two_sided(detector, cfg)) return ThresholdSpec::one_sided(h0.quantile(1.0 - target_pfa));

    const BandGeometry g = band_geometry(cfg.n_samples, cfg.signal);
    std::vector<double> lr;
    lr.reserve(h0.size());
    for (double t : h0.sorted()) lr.push_back(glr_value_for(detector, cfg, g, t));
    const double tau = EmpiricalCdf(std::move(lr)).quantile(1.0 - target_pfa);
    const auto [eta1, eta2] = glr_interval_for(detector, cfg, g, tau);
    return ThresholdSpec::interval(eta1, eta2);
}

ThresholdSpec calibrate_threshold(const ScenarioConfig& cfg, DetectorKind detector, double target_pfa) {
    return thresholds_for_pfa(detector, cfg, empirical_cdf(cfg, detector), target_pfa);
}

ThresholdSpec closed_form_threshold(const ScenarioConfig& cfg, DetectorKind detector, double target_pfa,
                                    std::size_t draws) {
    if (!(target_pfa > 0.0 && target_pfa < 1.0)) throw ConfigError("target pfa must lie in (0, 1)");
    cfg.validate();
    const int n = cfg.n_samples;
    if (detector == DetectorKind::Optimal) {
        // Exact: the statistic is Gamma(N, alpha_ref) under H0 on every trial.
        const double ref = reference_noise_power(cfg);
        double lo = 0.0;
        double hi = ref * n;
        while (pfa_opt(n, ref, hi) > target_pfa) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (pfa_opt(n, ref, mid) > target_pfa ? lo : hi) = mid;
        }
        return ThresholdSpec::one_sided(0.5 * (lo + hi));
    }

    std::vector<double> alphas(cfg.fixed_noise_power ? 1 : draws);
    RngStream rng(cfg.master_seed, trial_stream_index(StreamPhase::ClosedForm, 0), 0);
    for (auto& a : alphas) a = cfg.fixed_noise_power ? *cfg.fixed_noise_power : draw_noise_power(cfg.prior, rng);

    const BandGeometry g = band_geometry(n, cfg.signal);
    const double c = cfg.bin_scale_factor();
    auto averaged = [&](double eta) {
        double s = 0.0;
        for (double a : alphas) {
            s += uses_bins(detector) ? pfa_alrd2_clt(g.l_inband, g.p_excess, c, a, cfg.prior.theta, eta)
                                     : pfa_alrd1(n, a, cfg.prior, eta);
        }
        return s / static_cast<double>(alphas.size());
    };
    double lo = 0.0;
    double hi = 1.0;
    while (averaged(hi) > target_pfa && hi < 1e12) hi *= 2.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (averaged(mid) > target_pfa ? lo : hi) = mid;
    }
    return ThresholdSpec::one_sided(0.5 * (lo + hi));
}

std::vector<std::vector<RocPoint>> roc_sweep(const ScenarioConfig& cfg, std::span<const DetectorKind> detectors,
                                             std::span<const double> pfa_grid, ThresholdMode mode) {
    check_grid(pfa_grid);
    ScenarioConfig h0 = cfg;
    h0.hypothesis = Hypothesis::H0;
    ScenarioConfig h1 = cfg;
    h1.hypothesis = Hypothesis::H1;

    std::vector<std::vector<double>> calib;
    if (mode == ThresholdMode::Empirical) calib = collect_statistics(h0, detectors, StreamPhase::Calibrate);
    const auto holdout = collect_statistics(h0, detectors, StreamPhase::Holdout);
    const auto eval = collect_statistics(h1, detectors, StreamPhase::Evaluate);

    std::vector<std::vector<RocPoint>> out(detectors.size());
    for (std::size_t d = 0; d < detectors.size(); ++d) {
        std::optional<EmpiricalCdf> cdf;
        if (mode == ThresholdMode::Empirical) cdf.emplace(std::move(calib[d]));
        for (double target : pfa_grid) {
            const ThresholdSpec thr = mode == ThresholdMode::Empirical
                                          ? thresholds_for_pfa(detectors[d], cfg, *cdf, target)
                                          : closed_form_threshold(cfg, detectors[d], target);
            const RateEstimate pfa = decision_rate(detectors[d], holdout[d], thr);
            const RateEstimate pd = decision_rate(detectors[d], eval[d], thr);
            RocPoint p;
            p.pfa_target = target;
            p.pfa_empirical = pfa.rate;
            p.pd_empirical = pd.rate;
            p.pd_ci_low = pd.ci_low;
            p.pd_ci_high = pd.ci_high;
            p.threshold = is_glr(detectors[d]) ? thr.eta1 : thr.eta;
            p.threshold_upper = thr.eta2;
            out[d].push_back(p);
        }
    }
    return out;
}

std::vector<RocPoint> roc_sweep(const ScenarioConfig& cfg, DetectorKind detector, std::span<const double> pfa_grid,
                                ThresholdMode mode) {
    const DetectorKind one[] = {detector};
    return std::move(roc_sweep(cfg, one, pfa_grid, mode).front());
}

}  // namespace exband

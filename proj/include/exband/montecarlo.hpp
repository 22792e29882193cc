#ifndef EXBAND_MONTECARLO_HPP
#define EXBAND_MONTECARLO_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "exband/detectors.hpp"
#include "exband/scenario.hpp"

namespace exband {

/// Stream families. Calibration, holdout and evaluation trials never share
/// a stream index, whatever the trial counts.
enum class StreamPhase : std::uint64_t { Evaluate = 0, Calibrate = 1, Holdout = 2, ClosedForm = 3 };

std::uint64_t trial_stream_index(StreamPhase phase, std::uint64_t trial);

/// Everything one trial produces. Only the parts requested are filled.
struct TrialData {
    double alpha = 1.0;
    std::complex<double> gain{1.0, 0.0};
    std::vector<double> r;
    std::vector<double> x;
    std::vector<double> y;
};

/// Draws one trial from stream `stream_index`. Lanes: 0 noise power,
/// 1 channel, 2 envelopes or waveform, 3 model-path bins.
TrialData generate_trial(const ScenarioConfig& cfg, std::uint64_t stream_index, bool need_time, bool need_bins);

/// Decision statistic of `kind` for one trial, on the scale its thresholds use.
/// The known-noise detector reports sum(r) * alpha_ref / alpha, with alpha_ref the
/// fixed noise power when set and the prior mean otherwise, so its H0 law is
/// Gamma(N, alpha_ref) on every trial.
double detector_statistic(DetectorKind kind, const ScenarioConfig& cfg, const TrialData& trial);

/// Statistics for several detectors over cfg.trials trials of one phase,
/// computed from the same trial draws. Result [d][i] is detector d, trial i.
/// Throws NumericError on a non-finite statistic.
std::vector<std::vector<double>> collect_statistics(const ScenarioConfig& cfg,
                                                    std::span<const DetectorKind> detectors, StreamPhase phase);

std::vector<double> collect_statistics(const ScenarioConfig& cfg, DetectorKind detector, StreamPhase phase);

class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    /// Fraction of samples <= t.
    double operator()(double t) const;
    /// Smallest sample s with cdf(s) >= q, for q in (0, 1].
    double quantile(double q) const;
    std::span<const double> sorted() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

/// H0 statistics of `detector` from the calibration streams.
EmpiricalCdf empirical_cdf(const ScenarioConfig& cfg, DetectorKind detector);

struct RateEstimate {
    double rate = 0.0;
    std::size_t hits = 0;
    std::size_t trials = 0;
    double ci_low = 0.0;
    double ci_high = 1.0;
};

/// Wilson score interval for hits out of n at normal quantile z.
RateEstimate wilson_interval(std::size_t hits, std::size_t n, double z = 1.959963984540054);

/// Decision rate of `detector` over cfg.trials trials of cfg.hypothesis.
RateEstimate run_trials(const ScenarioConfig& cfg, DetectorKind detector, const ThresholdSpec& thresholds,
                        StreamPhase phase = StreamPhase::Evaluate);

/// Rate of H1 decisions among precomputed statistics.
RateEstimate decision_rate(DetectorKind detector, std::span<const double> statistics, const ThresholdSpec& thresholds);

/// Thresholds reaching target_pfa on a set of H0 statistics: the empirical
/// 1 - target_pfa quantile. Two-sided GLR rules take the quantile of the GLR
/// value and convert it to (eta1, eta2).
/// Throws ConfigError unless 0 < target_pfa < 1 and target_pfa * n >= 100.
ThresholdSpec thresholds_for_pfa(DetectorKind detector, const ScenarioConfig& cfg, const EmpiricalCdf& h0,
                                 double target_pfa);

/// Calibrates on cfg.trials H0 trials from the calibration streams.
ThresholdSpec calibrate_threshold(const ScenarioConfig& cfg, DetectorKind detector, double target_pfa);

/// Threshold from the closed-form false-alarm curve, averaged over `draws` noise
/// powers from the prior (exact for the known-noise detector).
ThresholdSpec closed_form_threshold(const ScenarioConfig& cfg, DetectorKind detector, double target_pfa,
                                    std::size_t draws = 4000);

enum class ThresholdMode { Empirical, ClosedForm };

struct RocPoint {
    double pfa_target = 0.0;
    double pfa_empirical = 0.0;  ///< on holdout H0 trials
    double pd_empirical = 0.0;
    double pd_ci_low = 0.0;
    double pd_ci_high = 1.0;
    double threshold = 0.0;  ///< eta, or eta1 for interval rules
    double threshold_upper = 0.0;
};

/// For each target: calibrate on H0, measure Pfa on independent H0 holdout
/// trials and Pd on H1 trials. The grid must be ascending in (0, 1).
std::vector<RocPoint> roc_sweep(const ScenarioConfig& cfg, DetectorKind detector, std::span<const double> pfa_grid,
                                ThresholdMode mode = ThresholdMode::Empirical);

/// Same for several detectors sharing the trial draws. Result [d][g].
std::vector<std::vector<RocPoint>> roc_sweep(const ScenarioConfig& cfg, std::span<const DetectorKind> detectors,
                                             std::span<const double> pfa_grid,
                                             ThresholdMode mode = ThresholdMode::Empirical);

}  // namespace exband

#endif  // EXBAND_MONTECARLO_HPP

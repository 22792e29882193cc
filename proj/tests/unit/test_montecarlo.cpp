#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "exband/analysis.hpp"
#include "exband/errors.hpp"
#include "exband/montecarlo.hpp"
#include "exband/numerics.hpp"

using namespace exband;

namespace {

ScenarioConfig base(Hypothesis h = Hypothesis::H0, std::size_t trials = 20000) {
    ScenarioConfig cfg;
    cfg.hypothesis = h;
    cfg.trials = trials;
    cfg.master_seed = 123;
    return cfg;
}

constexpr std::array<DetectorKind, 3> kDetectors{DetectorKind::Optimal, DetectorKind::Alrd1, DetectorKind::Alrd2};

}  // namespace

TEST(StreamIndex, PhasesAreDisjoint) {
    EXPECT_NE(trial_stream_index(StreamPhase::Calibrate, 0), trial_stream_index(StreamPhase::Evaluate, 0));
    EXPECT_NE(trial_stream_index(StreamPhase::Holdout, 5), trial_stream_index(StreamPhase::Calibrate, 5));
    EXPECT_EQ(trial_stream_index(StreamPhase::Evaluate, 17), 17u);
}

TEST(Determinism, IndependentOfThreadCount) {
    ScenarioConfig cfg = base(Hypothesis::H1);
    cfg.channel = ChannelSpec::rayleigh();
    cfg.threads = 1;
    const auto one = collect_statistics(cfg, kDetectors, StreamPhase::Evaluate);
    cfg.threads = 4;
    const auto four = collect_statistics(cfg, kDetectors, StreamPhase::Evaluate);
    EXPECT_EQ(one, four);
}

TEST(Determinism, WaveformPathIsRepeatable) {
    ScenarioConfig cfg = base(Hypothesis::H1, 2000);
    cfg.path = ObservationPath::Waveform;
    EXPECT_EQ(collect_statistics(cfg, DetectorKind::Alrd2, StreamPhase::Evaluate),
              collect_statistics(cfg, DetectorKind::Alrd2, StreamPhase::Evaluate));
}

TEST(RunTrials, ZeroSnrGivesEqualRates) {
    for (DetectorKind d : kDetectors) {
        ScenarioConfig h0 = base(Hypothesis::H0, 50000);
        ScenarioConfig h1 = base(Hypothesis::H1, 50000);
        h0.signal.snr_linear = h1.signal.snr_linear = 0.0;
        const auto thr = calibrate_threshold(h0, d, 0.2);
        const RateEstimate a = run_trials(h0, d, thr, StreamPhase::Holdout);
        const RateEstimate b = run_trials(h1, d, thr);
        const double se = std::sqrt(a.rate * (1 - a.rate) / a.trials + b.rate * (1 - b.rate) / b.trials);
        EXPECT_NEAR(a.rate, b.rate, 3.0 * se) << detector_name(d);
    }
}

TEST(RunTrials, ZeroThresholdAlwaysDecidesH1) {
    for (DetectorKind d : kDetectors) {
        EXPECT_EQ(run_trials(base(), d, ThresholdSpec::one_sided(0.0)).rate, 1.0);
    }
}

TEST(RunTrials, Alrd1FixedNoiseMatchesClosedForm) {
    ScenarioConfig cfg = base(Hypothesis::H0, 100000);
    cfg.fixed_noise_power = 1.0;
    for (double eta : {4.0, 5.0, 6.0}) {
        const RateEstimate r = run_trials(cfg, DetectorKind::Alrd1, ThresholdSpec::one_sided(eta));
        EXPECT_NEAR(r.rate, pfa_alrd1(20, 1.0, cfg.prior, eta), 0.01);
    }
}

TEST(RunTrials, BadTrialCount) {
    ScenarioConfig cfg = base();
    cfg.trials = 0;
    EXPECT_THROW(run_trials(cfg, DetectorKind::Optimal, ThresholdSpec::one_sided(1.0)), ConfigError);
}

TEST(EmpiricalCdf, Endpoints) {
    const EmpiricalCdf cdf = empirical_cdf(base(), DetectorKind::Alrd2);
    const auto s = cdf.sorted();
    EXPECT_EQ(cdf(s.front() - 1e-9), 0.0);
    EXPECT_EQ(cdf(s.back()), 1.0);
    EXPECT_DOUBLE_EQ(cdf(s.front()), 1.0 / s.size());
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
}

TEST(EmpiricalCdf, QuantileMatchesCalibration) {
    const ScenarioConfig cfg = base();
    for (DetectorKind d : kDetectors) {
        const EmpiricalCdf cdf = empirical_cdf(cfg, d);
        for (double p : {0.01, 0.05, 0.1, 0.5}) {
            EXPECT_EQ(calibrate_threshold(cfg, d, p).eta1, cdf.quantile(1.0 - p)) << detector_name(d) << " " << p;
        }
    }
}

TEST(EmpiricalCdf, QuantileDefinition) {
    const EmpiricalCdf cdf({4.0, 1.0, 3.0, 2.0});
    EXPECT_EQ(cdf.quantile(0.25), 1.0);
    EXPECT_EQ(cdf.quantile(0.5), 2.0);
    EXPECT_EQ(cdf.quantile(0.51), 3.0);
    EXPECT_EQ(cdf.quantile(1.0), 4.0);
}

TEST(Calibrate, HalfIsMedian) {
    const ScenarioConfig cfg = base(Hypothesis::H0, 10001);
    auto t = collect_statistics(cfg, DetectorKind::Alrd1, StreamPhase::Calibrate);
    std::nth_element(t.begin(), t.begin() + 5000, t.end());
    EXPECT_EQ(calibrate_threshold(cfg, DetectorKind::Alrd1, 0.5).eta1, t[5000]);
}

TEST(Calibrate, OptimalMatchesAnalyticInversion) {
    ScenarioConfig cfg = base(Hypothesis::H0, 100000);
    cfg.fixed_noise_power = 1.0;
    for (double p : {0.05, 0.1, 0.5}) {
        const double eta = calibrate_threshold(cfg, DetectorKind::Optimal, p).eta1;
        const double exact = closed_form_threshold(cfg, DetectorKind::Optimal, p).eta1;
        EXPECT_NEAR(pfa_opt(20, 1.0, exact), p, 1e-9);
        // Quantile standard error: sqrt(p(1-p)/n) / density.
        const double density = std::exp(19 * std::log(exact) - exact - std::lgamma(20.0));
        const double se = std::sqrt(p * (1 - p) / cfg.trials) / density;
        EXPECT_NEAR(eta, exact, 2.0 * se) << p;
    }
}

TEST(Calibrate, HoldoutPfaNearTarget) {
    const ScenarioConfig cfg = base(Hypothesis::H0, 100000);
    for (DetectorKind d : kDetectors) {
        for (double p : {0.05, 0.1, 0.3}) {
            const RateEstimate r = run_trials(cfg, d, calibrate_threshold(cfg, d, p), StreamPhase::Holdout);
            EXPECT_GE(r.rate, 0.9 * p) << detector_name(d);
            EXPECT_LE(r.rate, 1.1 * p) << detector_name(d);
        }
    }
    const RateEstimate a2 =
        run_trials(cfg, DetectorKind::Alrd2, calibrate_threshold(cfg, DetectorKind::Alrd2, 0.1), StreamPhase::Holdout);
    EXPECT_NEAR(a2.rate, 0.1, 0.01);
}

TEST(Calibrate, TooFewTrialsIsConfigError) {
    const ScenarioConfig cfg = base(Hypothesis::H0, 999);
    EXPECT_THROW(calibrate_threshold(cfg, DetectorKind::Optimal, 0.1), ConfigError);
    EXPECT_THROW(calibrate_threshold(base(), DetectorKind::Optimal, 0.0), ConfigError);
    EXPECT_THROW(calibrate_threshold(base(), DetectorKind::Optimal, 1.0), ConfigError);
}

TEST(Calibrate, TwoSidedGlrReachesTarget) {
    ScenarioConfig cfg = base(Hypothesis::H0, 50000);
    cfg.glr_mode = GlrMode::TwoSided;
    for (DetectorKind d : {DetectorKind::Glrd1, DetectorKind::Glrd2}) {
        const ThresholdSpec thr = calibrate_threshold(cfg, d, 0.1);
        EXPECT_LT(thr.eta1, thr.eta2);
        const RateEstimate r = run_trials(cfg, d, thr, StreamPhase::Holdout);
        EXPECT_NEAR(r.rate, 0.1, 0.01) << detector_name(d);
    }
}

TEST(ClosedFormThreshold, TracksEmpiricalCalibration) {
    const ScenarioConfig cfg = base(Hypothesis::H0, 100000);
    for (DetectorKind d : {DetectorKind::Alrd1, DetectorKind::Alrd2}) {
        const RateEstimate r = run_trials(cfg, d, closed_form_threshold(cfg, d, 0.1), StreamPhase::Holdout);
        EXPECT_NEAR(r.rate, 0.1, 0.02) << detector_name(d);
    }
}

TEST(Wilson, CoverageOnSyntheticBernoulli) {
    RngStream rng(99, 0);
    for (double p : {0.05, 0.3, 0.8}) {
        int covered = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            std::size_t hits = 0;
            for (int i = 0; i < 400; ++i) hits += rng.uniform() < p;
            const RateEstimate r = wilson_interval(hits, 400);
            EXPECT_LE(r.ci_low, r.rate);
            EXPECT_GE(r.ci_high, r.rate);
            covered += r.ci_low <= p && p <= r.ci_high;
        }
        EXPECT_GE(covered, 930) << p;
    }
}

TEST(Wilson, Extremes) {
    const RateEstimate zero = wilson_interval(0, 100);
    EXPECT_EQ(zero.ci_low, 0.0);
    EXPECT_GT(zero.ci_high, 0.0);
    const RateEstimate all = wilson_interval(100, 100);
    EXPECT_EQ(all.ci_high, 1.0);
    EXPECT_LT(all.ci_low, 1.0);
}

TEST(Roc, MonotoneAndCiConsistent) {
    ScenarioConfig cfg = base(Hypothesis::H1, 20000);
    const std::vector<double> grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 0.9, 0.99};
    const auto curves = roc_sweep(cfg, kDetectors, grid);
    for (const auto& curve : curves) {
        ASSERT_EQ(curve.size(), grid.size());
        for (std::size_t g = 0; g < curve.size(); ++g) {
            EXPECT_LE(curve[g].pd_ci_low, curve[g].pd_empirical);
            EXPECT_GE(curve[g].pd_ci_high, curve[g].pd_empirical);
            if (g > 0) EXPECT_GE(curve[g].pd_empirical, curve[g - 1].pd_empirical);
        }
        EXPECT_GT(curve.back().pd_empirical, 0.995);
    }
}

TEST(Roc, SingleMatchesMulti) {
    const ScenarioConfig cfg = base(Hypothesis::H1, 5000);
    const std::vector<double> grid{0.05, 0.1};
    const auto multi = roc_sweep(cfg, kDetectors, grid);
    const auto single = roc_sweep(cfg, DetectorKind::Alrd1, grid);
    for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_EQ(single[g].pd_empirical, multi[1][g].pd_empirical);
}

TEST(Roc, RejectsBadGrid) {
    const ScenarioConfig cfg = base(Hypothesis::H1, 5000);
    EXPECT_THROW(roc_sweep(cfg, DetectorKind::Optimal, std::vector<double>{0.2, 0.1}), ConfigError);
    EXPECT_THROW(roc_sweep(cfg, DetectorKind::Optimal, std::vector<double>{0.1, 1.0}), ConfigError);
}

TEST(Roc, LongerBlocksImprove) {
    ScenarioConfig cfg20 = base(Hypothesis::H1, 20000);
    ScenarioConfig cfg40 = cfg20;
    cfg40.n_samples = 40;
    const std::vector<double> grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.3};
    const auto a = roc_sweep(cfg20, kDetectors, grid);
    const auto b = roc_sweep(cfg40, kDetectors, grid);
    for (std::size_t d = 0; d < kDetectors.size(); ++d) {
        int separated = 0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            EXPECT_GT(b[d][g].pd_empirical, a[d][g].pd_empirical) << detector_name(kDetectors[d]);
            separated += b[d][g].pd_ci_low > a[d][g].pd_ci_high;
        }
        EXPECT_GE(separated, 3) << detector_name(kDetectors[d]);
    }
}

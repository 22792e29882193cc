#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "exband/errors.hpp"
#include "exband/montecarlo.hpp"
#include "exband/numerics.hpp"
#include "exband/observation.hpp"
#include "exband/signal_model.hpp"

using namespace exband;

namespace {

struct Stats {
    double mean = 0.0;
    double se = 0.0;
};

Stats stats_of(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return {m, std::sqrt(s / (n - 1) / n)};
}

ScenarioConfig base(Hypothesis h, double snr = 1.0) {
    ScenarioConfig cfg;
    cfg.n_samples = 20;
    cfg.hypothesis = h;
    cfg.signal.snr_linear = snr;
    return cfg;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST(NoisePower, MeanMatchesPriorMean) {
    const NoisePrior prior{4, 4.0};
    RngStream rng(21, 0);
    std::vector<double> a(1000000);
    for (auto& v : a) {
        v = draw_noise_power(prior, rng);
        ASSERT_GT(v, 0.0);
    }
    const Stats s = stats_of(a);
    EXPECT_NEAR(s.mean, prior.mean_noise_power(), 3.0 * s.se);
}

TEST(NoisePower, PrecisionMedianMatchesGammaTwoOne) {
    // The median of Gamma(2, 1), from root-finding on the regularized upper gamma.
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (reg_upper_gamma(2.0, mid) > 0.5 ? lo : hi) = mid;
    }
    EXPECT_NEAR(lo, 1.6783469900166607, 1e-12);

    RngStream rng(22, 0);
    std::vector<double> lam(100000);
    for (auto& v : lam) v = 1.0 / draw_noise_power({1, 1.0}, rng);
    std::nth_element(lam.begin(), lam.begin() + lam.size() / 2, lam.end());
    EXPECT_NEAR(lam[lam.size() / 2], 1.6783469900166607, 0.02);
}

TEST(NoisePower, PriorValidation) {
    EXPECT_THROW((NoisePrior{0, 1.0}.validate()), std::domain_error);
    EXPECT_THROW((NoisePrior{2, 0.0}.validate()), std::domain_error);
    EXPECT_NO_THROW((NoisePrior{1, 0.1}.validate()));
}

TEST(RaisedCosine, ProfileShape) {
    const SignalSpec s = SignalSpec::critically_sampled(54e3, 0.25, 1.0);
    EXPECT_EQ(raised_cosine_psd(0.0, s), 1.0);
    EXPECT_EQ(raised_cosine_psd(20250.0, s), 1.0);
    EXPECT_NEAR(raised_cosine_psd(27000.0, s), 0.5, 1e-12);
    EXPECT_NEAR(raised_cosine_psd(-27000.0, s), 0.5, 1e-12);
    EXPECT_EQ(raised_cosine_psd(33750.0, s), 0.0);
    double prev = 1.0;
    for (double f = 0.0; f < 40e3; f += 100.0) {
        const double p = raised_cosine_psd(f, s);
        EXPECT_LE(p, prev + 1e-15);
        prev = p;
    }
}

TEST(TimeBlock, NoisePowerUnderH0) {
    const ScenarioConfig cfg = base(Hypothesis::H0);
    RngStream rng(23, 0);
    std::vector<double> r;
    r.reserve(1000000);
    for (int b = 0; b < 50000; ++b) {
        for (const auto& z : generate_time_block(cfg, 1.0, 1.0, rng)) r.push_back(std::norm(z));
    }
    const Stats s = stats_of(r);
    EXPECT_NEAR(s.mean, 1.0, 3.0 * s.se);
}

TEST(TimeBlock, PowerAdditivityUnderH1) {
    const ScenarioConfig cfg = base(Hypothesis::H1, 1.0);
    RngStream rng(24, 0);
    std::vector<double> block_power;
    for (int b = 0; b < 50000; ++b) {
        const auto z = generate_time_block(cfg, 1.0, 1.0, rng);
        double p = 0.0;
        for (const auto& v : z) p += std::norm(v);
        block_power.push_back(p / 20.0);
    }
    const Stats s = stats_of(block_power);
    EXPECT_NEAR(s.mean, 2.0, 3.0 * s.se);
}

TEST(TimeBlock, AveragedPeriodogramFollowsRaisedCosine) {
    const double snr = 4.0;
    ScenarioConfig cfg = base(Hypothesis::H1, snr);
    const int n = cfg.n_samples;
    RngStream rng(25, 0);
    std::vector<double> avg(n, 0.0);
    const int blocks = 100000;
    for (int b = 0; b < blocks; ++b) {
        const auto w = spectrum_bins(generate_time_block(cfg, 1.0, 1.0, rng));
        for (int k = 0; k < n; ++k) avg[k] += w[k] / n / blocks;
    }
    std::vector<double> psd(n);
    double psd_total = 0.0;
    for (int k = 0; k < n; ++k) {
        psd[k] = raised_cosine_psd(bin_frequency(k, n, cfg.signal.sample_rate_hz), cfg.signal);
        psd_total += psd[k];
    }
    // Signal power per bin: snr * N * psd / sum(psd) on top of unit noise.
    double emp_in = 0.0, emp_ex = 0.0, ref_in = 0.0, ref_ex = 0.0;
    for (int k = 0; k < n; ++k) {
        const double sig = avg[k] - 1.0;
        const double ref = snr * n * psd[k] / psd_total;
        const bool inband =
            classify_frequency(bin_frequency(k, n, cfg.signal.sample_rate_hz), cfg.signal) == BandRegion::InBand;
        (inband ? emp_in : emp_ex) += sig;
        (inband ? ref_in : ref_ex) += ref;
    }
    EXPECT_NEAR((emp_ex / emp_in) / (ref_ex / ref_in), 1.0, 0.05);
}

TEST(Envelopes, MeansUnderBothHypotheses) {
    for (auto [h, expected] : {std::pair{Hypothesis::H0, 1.0}, std::pair{Hypothesis::H1, 2.0}}) {
        const ScenarioConfig cfg = base(h, 1.0);
        RngStream rng(26, 0);
        std::vector<double> r;
        for (int t = 0; t < 50000; ++t) {
            const auto v = generate_envelopes(cfg, 1.0, 1.0, rng);
            r.insert(r.end(), v.begin(), v.end());
        }
        const Stats s = stats_of(r);
        EXPECT_NEAR(s.mean, expected, 3.0 * s.se);
    }
}

TEST(Bins, MeansOnBothScales) {
    for (BinScale scale : {BinScale::PerSample, BinScale::Unnormalized}) {
        for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
            ScenarioConfig cfg = base(h, 1.0);
            cfg.bin_scale = scale;
            const double c = cfg.bin_scale_factor();
            RngStream rng(27, 0);
            std::vector<double> xs, ys;
            for (int t = 0; t < 62500; ++t) {  // 10^6 in-band bins
                const BinDraw d = generate_bins(cfg, 1.0, 1.0, std::nullopt, rng);
                ASSERT_EQ(d.x.size(), 16u);
                ASSERT_EQ(d.y.size(), 4u);
                xs.insert(xs.end(), d.x.begin(), d.x.end());
                ys.insert(ys.end(), d.y.begin(), d.y.end());
            }
            const Stats sx = stats_of(xs);
            const Stats sy = stats_of(ys);
            EXPECT_NEAR(sx.mean, c * (h == Hypothesis::H1 ? 2.0 : 1.0), 3.0 * sx.se);
            EXPECT_NEAR(sy.mean, c, 3.0 * sy.se);
        }
    }
}

TEST(Bins, NoisePowerScalesEveryBinMean) {
    const ScenarioConfig cfg = base(Hypothesis::H1, 1.0);
    for (double alpha : {0.5, 3.0}) {
        RngStream rng(28, 0);
        std::vector<double> xs, ys;
        for (int t = 0; t < 20000; ++t) {
            const BinDraw d = generate_bins(cfg, alpha, 1.0, std::nullopt, rng);
            xs.insert(xs.end(), d.x.begin(), d.x.end());
            ys.insert(ys.end(), d.y.begin(), d.y.end());
        }
        const Stats sx = stats_of(xs), sy = stats_of(ys);
        EXPECT_NEAR(sx.mean, 2.0 * alpha, 3.0 * sx.se);
        EXPECT_NEAR(sy.mean, alpha, 3.0 * sy.se);
    }
}

TEST(Bins, ExcessBinsUncorrelatedWithInbandSignal) {
    const ScenarioConfig cfg = base(Hypothesis::H1, 1.0);
    RngStream rng(29, 0);
    const int n = 1000000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int t = 0; t < n; ++t) {
        const BinDraw d = generate_bins(cfg, 1.0, 1.0, std::nullopt, rng);
        const double x = mean_of(d.x), y = mean_of(d.y);
        sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
    EXPECT_LT(std::abs(corr), 0.01);
}

TEST(Bins, H0OutputIgnoresChannel) {
    ScenarioConfig a = base(Hypothesis::H0);
    ScenarioConfig b = a;
    b.channel = ChannelSpec::rayleigh();
    ScenarioConfig c = a;
    c.channel = ChannelSpec::nakagami(3.0);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto ta = generate_trial(a, i, true, true);
        const auto tb = generate_trial(b, i, true, true);
        const auto tc = generate_trial(c, i, true, true);
        EXPECT_EQ(ta.x, tb.x);
        EXPECT_EQ(ta.y, tc.y);
        EXPECT_EQ(ta.r, tb.r);
    }
}

TEST(Bins, PinnedAmplitudeGivesNoncentralMean) {
    ScenarioConfig cfg = base(Hypothesis::H1, 1.0);
    RngStream rng(30, 0);
    const std::complex<double> h{0.6, -0.8}, s{1.5, 0.5};
    std::vector<double> xs;
    for (int t = 0; t < 50000; ++t) {
        const BinDraw d = generate_bins(cfg, 1.0, h, s, rng);
        xs.insert(xs.end(), d.x.begin(), d.x.end());
    }
    const Stats sx = stats_of(xs);
    EXPECT_NEAR(sx.mean, 1.0 + std::norm(h * s), 3.0 * sx.se);
}

TEST(CrossPath, WaveformAndModelBinsAgreeUnderH0) {
    ScenarioConfig model = base(Hypothesis::H0);
    model.trials = 10000;
    ScenarioConfig wave = model;
    wave.path = ObservationPath::Waveform;
    double mx = 0, my = 0, wx = 0, wy = 0;
    for (std::uint64_t i = 0; i < model.trials; ++i) {
        const auto tm = generate_trial(model, i, false, true);
        const auto tw = generate_trial(wave, i, false, true);
        mx += mean_of(tm.x), my += mean_of(tm.y), wx += mean_of(tw.x), wy += mean_of(tw.y);
    }
    EXPECT_NEAR(wx / mx, 1.0, 0.02);
    EXPECT_NEAR(wy / my, 1.0, 0.02);
}

TEST(CrossPath, WaveformExcessBinsFollowProfileUnderH1) {
    // The waveform concentrates signal power by the raised-cosine profile, so
    // under H1 the excess bins carry far less signal than the in-band bins.
    ScenarioConfig wave = base(Hypothesis::H1, 1.0);
    wave.path = ObservationPath::Waveform;
    wave.fixed_noise_power = 1.0;
    double wx = 0, wy = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        const auto t = generate_trial(wave, static_cast<std::uint64_t>(i), false, true);
        wx += mean_of(t.x) / trials;
        wy += mean_of(t.y) / trials;
    }
    // Profile over N = 20 bins: in-band psd sum 15.21 of 16, excess 0.79 of 16.
    EXPECT_NEAR(wx, 1.0 + 20.0 * (15.2071 / 16.0) / 16.0, 0.03);
    EXPECT_NEAR(wy, 1.0 + 20.0 * (0.7929 / 16.0) / 4.0, 0.03);
}

TEST(Scenario, ValidationErrors) {
    ScenarioConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.n_samples = 1;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.signal.sample_rate_hz = 50e3;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.signal.rolloff = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.channel = ChannelSpec::nakagami(0.2);
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.fixed_noise_power = -1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

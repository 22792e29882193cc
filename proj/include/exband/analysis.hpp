#ifndef EXBAND_ANALYSIS_HPP
#define EXBAND_ANALYSIS_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "exband/numerics.hpp"
#include "exband/scenario.hpp"

namespace exband {

// ---------------------------------------------------------------------------
// Conjugate update of the noise precision
// ---------------------------------------------------------------------------

/// Gamma law (shape, rate) on the noise precision 1/alpha.
struct PosteriorPrecision {
    double shape = 1.0;
    double rate = 1.0;

    /// Fold in P more noise-only bins with mean power y_mean.
    PosteriorPrecision updated(double y_mean, int p) const { return {shape + p, rate + p * y_mean}; }

    double density(double precision) const;
    double cdf(double precision) const;
    double mean_precision() const { return shape / rate; }
};

PosteriorPrecision prior_precision(const NoisePrior& prior);

/// Posterior of the precision after P excess-band bins with mean y_mean:
/// Gamma(P + k + 1, theta + P * y_mean). Throws std::domain_error on P < 1 or y_mean < 0.
PosteriorPrecision posterior_update(const NoisePrior& prior, double y_mean, int p);

// ---------------------------------------------------------------------------
// MAP estimates of the noise power
// ---------------------------------------------------------------------------

/// (theta + N r_mean / g) / (N + k), g = 1 under H0 and 1 + snr under H1.
double map_noise_power_time(double r_mean, int n, const NoisePrior& prior, double snr, Hypothesis h);

/// (theta + P y_mean + L x_mean / g) / (L + k + P), g as above.
double map_noise_power_bins(double x_mean, int l, double y_mean, int p, const NoisePrior& prior, double snr,
                            Hypothesis h);

// ---------------------------------------------------------------------------
// Conditional detection performance
// ---------------------------------------------------------------------------

/// Known-noise energy detector, eta on the sum scale.
double pfa_opt(int n, double alpha, double eta);
double pd_opt(int n, double alpha, double snr, double eta);

/// Prior-averaged rule on its own scale t = N mean(r) / theta:
/// Q(N, eta theta / alpha) and Q(N, eta theta / (alpha (1 + snr))).
double pfa_alrd1(int n, double alpha, const NoisePrior& prior, double eta);
double pd_alrd1(int n, double alpha, const NoisePrior& prior, double snr, double eta);

/// One-sided generalized rule (upper threshold dropped); same form at eta1.
double pfa_glrd1(int n, double alpha, const NoisePrior& prior, double eta1);
double pd_glrd1(int n, double alpha, const NoisePrior& prior, double snr, double eta1);

/// Gaussian approximation of P(Phi > eta theta) under H0 for Phi = sum(x) - eta sum(y),
/// where each bin is exponential with mean bin_scale * alpha.
/// bin_scale = N reproduces the unnormalized-transform form.
double pfa_alrd2_clt(int l, int p, double bin_scale, double alpha, double theta, double eta);

/// Same under H1 with every in-band bin carrying the fixed signal term h*s:
/// x is noncentral, mean |hs|^2 + c alpha and variance c^2 alpha^2 + 2 c alpha |hs|^2.
/// Reduces exactly to pfa_alrd2_clt when h s = 0.
double pd_alrd2_clt(int l, int p, double bin_scale, double alpha, double theta, double eta,
                    std::complex<double> gain, std::complex<double> signal);

/// Literal transcription of the published pinned-amplitude expression, kept for
/// side-by-side reporting. It does not reduce to pfa_alrd2_clt at zero signal.
double pd_alrd2_clt_printed(int l, int p, double bin_scale, double alpha, double theta, double eta,
                            std::complex<double> gain, std::complex<double> signal);

/// H1 with an independent Gaussian signal term per in-band bin of power
/// c alpha snr_eff (snr_eff = |h|^2 snr): x exponential with mean c alpha (1 + snr_eff).
double pd_alrd2_clt_random_signal(int l, int p, double bin_scale, double alpha, double theta, double eta,
                                  double snr_eff);

// ---------------------------------------------------------------------------
// Averaging over the noise prior and channel
// ---------------------------------------------------------------------------

/// One joint draw for prior averaging. signal ~ CN(0, alpha * snr) on the
/// per-sample scale; scale by sqrt(c) for bin amplitudes.
struct ConditionDraw {
    double alpha = 1.0;
    std::complex<double> gain{1.0, 0.0};
    std::complex<double> signal{0.0, 0.0};
};

/// One operating point of a closed-form curve. `conditioning` is empty for
/// prior-averaged points.
struct PerfPoint {
    double pfa = 0.0;
    double pd = 0.0;
    double threshold = 0.0;
    std::optional<ConditionDraw> conditioning;
};

struct AveragedProbability {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t draws = 0;
};

using ConditionalProbability = std::function<double(const ConditionDraw&)>;

/// Monte Carlo expectation of point_fn over alpha ~ prior (or the fixed alpha),
/// h ~ channel and the signal amplitude. Throws std::domain_error on zero draws.
AveragedProbability average_over_prior(const ConditionalProbability& point_fn, const NoisePrior& prior,
                                       const ChannelSpec& channel, double snr, std::size_t mc_draws,
                                       RngStream& rng, std::optional<double> fixed_alpha = std::nullopt);

/// Averages several conditional functions over one shared set of draws, so
/// curves built from them keep the ordering of their conditional values.
std::vector<AveragedProbability> average_over_prior(std::span<const ConditionalProbability> point_fns,
                                                    const NoisePrior& prior, const ChannelSpec& channel,
                                                    double snr, std::size_t mc_draws, RngStream& rng,
                                                    std::optional<double> fixed_alpha = std::nullopt);

// ---------------------------------------------------------------------------
// Moments of the decision statistics under H1
// ---------------------------------------------------------------------------

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Sum of N envelopes under H1 at known alpha: mean N alpha (1+snr),
/// variance N alpha^2 (1+snr)^2.
Moments traditional_moments(int n, double alpha, double snr);

struct ProposedMoments {
    Moments printed;  ///< published closed form, reported only
    Moments derived;  ///< exact for exponential bins of mean c alpha (1+snr) and c alpha
};

/// Moments of Phi = sum(x) - eta sum(y) under H1 with Gaussian signal bins.
/// derived: mean c alpha (L (1+snr) - P eta), variance c^2 alpha^2 (L (1+snr)^2 + P eta^2).
ProposedMoments proposed_moments(int n, int l, int p, double bin_scale, double alpha, double snr, double eta);

}  // namespace exband

#endif  // EXBAND_ANALYSIS_HPP

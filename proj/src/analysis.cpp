#include "exband/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "exband/signal_model.hpp"

namespace exband {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error(std::string(what) + " must be positive and finite");
}

void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0)) throw std::domain_error(std::string(what) + " must be nonnegative");
}

void require_counts(int l, int p) {
    if (l < 1 || p < 1) throw std::domain_error("L and P must both be at least 1");
}

double hypothesis_gain(double snr, Hypothesis h) { return h == Hypothesis::H1 ? 1.0 + snr : 1.0; }

// Q(z) for a threshold `level` on a Gaussian with the given mean and variance.
double gaussian_tail(double level, double mean, double variance) {
    return q_function((level - mean) / std::sqrt(variance));
}

}  // namespace

double PosteriorPrecision::density(double precision) const {
    if (precision <= 0.0) return 0.0;
    const double log_pdf =
        shape * std::log(rate) + (shape - 1.0) * std::log(precision) - rate * precision - std::lgamma(shape);
    return std::exp(log_pdf);
}

double PosteriorPrecision::cdf(double precision) const {
    if (precision <= 0.0) return 0.0;
    return reg_lower_gamma(shape, rate * precision);
}

PosteriorPrecision prior_precision(const NoisePrior& prior) { return {prior.precision_shape(), prior.theta}; }

PosteriorPrecision posterior_update(const NoisePrior& prior, double y_mean, int p) {
    if (p < 1) throw std::domain_error("posterior_update: P must be >= 1");
    require_nonnegative(y_mean, "posterior_update: mean excess power");
    return prior_precision(prior).updated(y_mean, p);
}

double map_noise_power_time(double r_mean, int n, const NoisePrior& prior, double snr, Hypothesis h) {
    const double g = hypothesis_gain(snr, h);
    return (prior.theta + n * r_mean / g) / (n + prior.k);
}

double map_noise_power_bins(double x_mean, int l, double y_mean, int p, const NoisePrior& prior, double snr,
                            Hypothesis h) {
    const double g = hypothesis_gain(snr, h);
    return (prior.theta + p * y_mean + l * x_mean / g) / (l + prior.k + p);
}

double pfa_opt(int n, double alpha, double eta) {
    require_positive(alpha, "alpha");
    require_nonnegative(eta, "eta");
    return reg_upper_gamma(n, eta / alpha);
}

double pd_opt(int n, double alpha, double snr, double eta) {
    require_nonnegative(snr, "snr");
    return pfa_opt(n, alpha * (1.0 + snr), eta);
}

double pfa_alrd1(int n, double alpha, const NoisePrior& prior, double eta) {
    require_nonnegative(eta, "eta");
    return pfa_opt(n, alpha, eta * prior.theta);
}

double pd_alrd1(int n, double alpha, const NoisePrior& prior, double snr, double eta) {
    require_nonnegative(eta, "eta");
    return pd_opt(n, alpha, snr, eta * prior.theta);
}

double pfa_glrd1(int n, double alpha, const NoisePrior& prior, double eta1) { return pfa_alrd1(n, alpha, prior, eta1); }

double pd_glrd1(int n, double alpha, const NoisePrior& prior, double snr, double eta1) {
    return pd_alrd1(n, alpha, prior, snr, eta1);
}

double pfa_alrd2_clt(int l, int p, double bin_scale, double alpha, double theta, double eta) {
    require_counts(l, p);
    require_positive(alpha, "alpha");
    const double ca = bin_scale * alpha;
    return q_function((theta * eta - ca * (l - p * eta)) / (ca * std::sqrt(l + p * eta * eta)));
}

double pd_alrd2_clt(int l, int p, double bin_scale, double alpha, double theta, double eta,
                    std::complex<double> gain, std::complex<double> signal) {
    require_counts(l, p);
    require_positive(alpha, "alpha");
    const double e = std::norm(gain * signal);
    const double ca = bin_scale * alpha;
    if (e == 0.0) return pfa_alrd2_clt(l, p, bin_scale, alpha, theta, eta);
    const double mean = l * (e + ca) - p * eta * ca;
    const double variance = l * (ca * ca + 2.0 * ca * e) + p * eta * eta * ca * ca;
    return gaussian_tail(theta * eta, mean, variance);
}

double pd_alrd2_clt_printed(int l, int p, double bin_scale, double alpha, double theta, double eta,
                            std::complex<double> gain, std::complex<double> signal) {
    require_counts(l, p);
    require_positive(alpha, "alpha");
    const double e = std::norm(gain * signal);
    const double c = bin_scale;
    const double num = theta * eta - (l * (e + c * alpha) + c * p * eta * alpha);
    const double den = std::sqrt(2.0 * c * l * alpha * (e + c * alpha) + c * c * p * eta * eta * alpha * alpha);
    return q_function(num / den);
}

double pd_alrd2_clt_random_signal(int l, int p, double bin_scale, double alpha, double theta, double eta,
                                  double snr_eff) {
    require_counts(l, p);
    require_positive(alpha, "alpha");
    require_nonnegative(snr_eff, "snr");
    const double ca = bin_scale * alpha;
    const double mx = ca * (1.0 + snr_eff);
    const double mean = l * mx - p * eta * ca;
    const double variance = l * mx * mx + p * eta * eta * ca * ca;
    return gaussian_tail(theta * eta, mean, variance);
}

std::vector<AveragedProbability> average_over_prior(std::span<const ConditionalProbability> point_fns,
                                                    const NoisePrior& prior, const ChannelSpec& channel,
                                                    double snr, std::size_t mc_draws, RngStream& rng,
                                                    std::optional<double> fixed_alpha) {
    if (mc_draws == 0) throw std::domain_error("average_over_prior: mc_draws must be >= 1");
    const std::size_t m = point_fns.size();
    std::vector<double> mean(m, 0.0);
    std::vector<double> m2(m, 0.0);

    for (std::size_t i = 0; i < mc_draws; ++i) {
        ConditionDraw d;
        d.alpha = fixed_alpha ? *fixed_alpha : draw_noise_power(prior, rng);
        d.gain = channel_gain(channel, rng);
        d.signal = complex_gaussian(d.alpha * snr, rng);
        const double count = static_cast<double>(i + 1);
        for (std::size_t j = 0; j < m; ++j) {
            const double v = point_fns[j](d);
            const double delta = v - mean[j];
            mean[j] += delta / count;
            m2[j] += delta * (v - mean[j]);
        }
    }

    std::vector<AveragedProbability> out(m);
    const double n = static_cast<double>(mc_draws);
    for (std::size_t j = 0; j < m; ++j) {
        out[j].mean = mean[j];
        out[j].draws = mc_draws;
        out[j].standard_error = mc_draws > 1 ? std::sqrt(m2[j] / (n - 1.0) / n) : 0.0;
    }
    return out;
}

AveragedProbability average_over_prior(const ConditionalProbability& point_fn, const NoisePrior& prior,
                                       const ChannelSpec& channel, double snr, std::size_t mc_draws,
                                       RngStream& rng, std::optional<double> fixed_alpha) {
    return average_over_prior(std::span<const ConditionalProbability>(&point_fn, 1), prior, channel, snr, mc_draws,
                              rng, fixed_alpha)
        .front();
}

Moments traditional_moments(int n, double alpha, double snr) {
    const double m = alpha * (1.0 + snr);
    return {n * m, n * m * m};
}

ProposedMoments proposed_moments(int n, int l, int p, double bin_scale, double alpha, double snr, double eta) {
    ProposedMoments out;
    out.printed.mean = 2.0 * n * l * alpha * (2.0 * snr + 1.0 - p * eta);
    out.printed.variance = 8.0 * l * n * n * alpha * alpha * (2.0 * snr + 0.5 + p * eta * eta / 2.0);
    const double ca = bin_scale * alpha;
    const double g = 1.0 + snr;
    out.derived.mean = ca * (l * g - p * eta);
    out.derived.variance = ca * ca * (l * g * g + p * eta * eta);
    return out;
}

}  // namespace exband

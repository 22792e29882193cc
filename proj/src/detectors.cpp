#include "exband/detectors.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace exband {

namespace {

constexpr std::array<std::pair<DetectorKind, std::string_view>, 5> kNames{{
    {DetectorKind::Optimal, "optimal"},
    {DetectorKind::Alrd1, "alrd1"},
    {DetectorKind::Glrd1, "glrd1"},
    {DetectorKind::Alrd2, "alrd2"},
    {DetectorKind::Glrd2, "glrd2"},
}};

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

bool inside(double t, const ThresholdSpec& thr) { return thr.eta1 < t && t < thr.eta2; }

// Positive root of shape t^2 - linear t - constant = 0 with the GLR coefficients.
double glr_peak(double count, double shape, double snr) {
    const double a = (2.0 + snr) * count;
    return (a + std::sqrt(a * a + 4.0 * shape * (1.0 + snr) * (2.0 * count + shape))) / (2.0 * shape);
}

// ((1+t)/(1+snr+t))^count * exp(snr * weight * t / ((1+t)(1+snr+t)))
double glr_value(double t, double count, double weight, double snr) {
    const double d = (1.0 + t) * (1.0 + snr + t);
    const double log_value = count * (std::log1p(t) - std::log1p(snr + t)) + snr * weight * t / d;
    return std::exp(log_value);
}

}  // namespace

std::string_view detector_name(DetectorKind kind) {
    for (const auto& [k, name] : kNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<DetectorKind> parse_detector(std::string_view name) {
    for (const auto& [k, n] : kNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

bool uses_bins(DetectorKind kind) { return kind == DetectorKind::Alrd2 || kind == DetectorKind::Glrd2; }

bool is_glr(DetectorKind kind) { return kind == DetectorKind::Glrd1 || kind == DetectorKind::Glrd2; }

double t_opt(std::span<const double> r) { return sum(r); }

DetectorVerdict opt_decide(std::span<const double> r, const ThresholdSpec& thresholds) {
    const double t = t_opt(r);
    return {"optimal", t, t > thresholds.eta};
}

double t_alrd1(std::span<const double> r, const NoisePrior& prior) { return t_opt(r) / prior.theta; }

DetectorVerdict alrd1_decide(std::span<const double> r, const NoisePrior& prior, const ThresholdSpec& thresholds) {
    const double t = t_alrd1(r, prior);
    return {"alrd1", t, t > thresholds.eta};
}

double mu_glrd1(int n, int k, double snr) {
    if (k < 1) throw std::domain_error("mu_glrd1: k must be >= 1, got " + std::to_string(k));
    return glr_peak(n, k, snr);
}

double lr_glrd1_value(double t, int n, int k, double snr) { return glr_value(t, n, n + k, snr); }

DetectorVerdict glrd1_decide(std::span<const double> r, const NoisePrior& prior, const ThresholdSpec& thresholds) {
    const double t = t_alrd1(r, prior);
    return {"glrd1", t, inside(t, thresholds)};
}

double t_alrd2(std::span<const double> x, std::span<const double> y, const NoisePrior& prior) {
    return sum(x) / (prior.theta + sum(y));
}

DetectorVerdict alrd2_decide(std::span<const double> x, std::span<const double> y, const NoisePrior& prior,
                             const ThresholdSpec& thresholds) {
    const double t = t_alrd2(x, y, prior);
    return {"alrd2", t, t > thresholds.eta};
}

double phi_statistic(std::span<const double> x, std::span<const double> y, double eta) {
    return sum(x) - eta * sum(y);
}

bool phi_decides_h1(double phi, double eta, const NoisePrior& prior) { return phi > eta * prior.theta; }

double rho_glrd2(int l, int p, int k, double snr) {
    if (k + p < 1) throw std::domain_error("rho_glrd2: k + P must be >= 1");
    return glr_peak(l, k + p, snr);
}

double lr_glrd2_value(double t, int l, int p, int k, double snr) { return glr_value(t, l, l + k + p, snr); }

DetectorVerdict glrd2_decide(std::span<const double> x, std::span<const double> y, const NoisePrior& prior,
                             const ThresholdSpec& thresholds) {
    const double t = t_alrd2(x, y, prior);
    return {"glrd2", t, inside(t, thresholds)};
}

bool rule_decides_h1(DetectorKind kind, double statistic, const ThresholdSpec& thresholds) {
    return is_glr(kind) ? inside(statistic, thresholds) : statistic > thresholds.eta;
}

std::pair<double, double> glrd1_interval(double tau, int n, int k, double snr) {
    return glr_interval(tau, mu_glrd1(n, k, snr), 1.0, [&](double t) { return lr_glrd1_value(t, n, k, snr); });
}

std::pair<double, double> glrd2_interval(double tau, int l, int p, int k, double snr) {
    return glr_interval(tau, rho_glrd2(l, p, k, snr), 1.0, [&](double t) { return lr_glrd2_value(t, l, p, k, snr); });
}

}  // namespace exband

#ifndef EXBAND_DETECTORS_HPP
#define EXBAND_DETECTORS_HPP

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "exband/observation.hpp"
#include "exband/scenario.hpp"

namespace exband {

enum class DetectorKind { Optimal, Alrd1, Glrd1, Alrd2, Glrd2 };

std::string_view detector_name(DetectorKind kind);
std::optional<DetectorKind> parse_detector(std::string_view name);

/// True for detectors that work on frequency bins (x, y) rather than envelopes r.
bool uses_bins(DetectorKind kind);
bool is_glr(DetectorKind kind);

/// Thresholds for a decision rule. Single-threshold rules read eta;
/// generalized-likelihood rules read (eta1, eta2) and decide H1 strictly
/// inside the interval. eta2 = +inf is the one-sided form.
struct ThresholdSpec {
    double eta = 0.0;
    double eta1 = 0.0;
    double eta2 = std::numeric_limits<double>::infinity();

    static ThresholdSpec one_sided(double eta) { return {eta, eta, std::numeric_limits<double>::infinity()}; }
    static ThresholdSpec interval(double eta1, double eta2) { return {eta1, eta1, eta2}; }
};

struct DetectorVerdict {
    std::string detector_name;
    double statistic = 0.0;
    bool decided_h1 = false;
};

// -- energy detector with known noise power ---------------------------------

/// Sum of squared envelopes. H1 iff statistic > eta (sum scale).
double t_opt(std::span<const double> r);
DetectorVerdict opt_decide(std::span<const double> r, const ThresholdSpec& thresholds);

// -- prior-averaged and generalized rules on envelopes ----------------------

/// N * mean(r) / theta, computed as t_opt(r) / theta.
double t_alrd1(std::span<const double> r, const NoisePrior& prior);
DetectorVerdict alrd1_decide(std::span<const double> r, const NoisePrior& prior, const ThresholdSpec& thresholds);

/// Peak location of the envelope GLR as a function of t = N mean(r) / theta.
/// Throws std::domain_error when k < 1.
double mu_glrd1(int n, int k, double snr);

/// Envelope GLR evaluated at t = N mean(r) / theta.
double lr_glrd1_value(double t, int n, int k, double snr);

/// H1 iff eta1 < N mean(r) / theta < eta2.
DetectorVerdict glrd1_decide(std::span<const double> r, const NoisePrior& prior, const ThresholdSpec& thresholds);

// -- rules using the excess-band bins ---------------------------------------

/// L mean(x) / (theta + P mean(y)).
double t_alrd2(std::span<const double> x, std::span<const double> y, const NoisePrior& prior);
DetectorVerdict alrd2_decide(std::span<const double> x, std::span<const double> y, const NoisePrior& prior,
                             const ThresholdSpec& thresholds);

/// Phi = L mean(x) - eta P mean(y). Compared against eta * theta, it gives the
/// same decisions as t_alrd2 against eta.
double phi_statistic(std::span<const double> x, std::span<const double> y, double eta);
bool phi_decides_h1(double phi, double eta, const NoisePrior& prior);

/// Peak location of the excess-band GLR as a function of L mean(x) / (theta + P mean(y)).
/// Throws std::domain_error when k + P < 1.
double rho_glrd2(int l, int p, int k, double snr);

/// Excess-band GLR evaluated at t = L mean(x) / (theta + P mean(y)).
double lr_glrd2_value(double t, int l, int p, int k, double snr);

/// H1 iff eta1 < L mean(x) / (theta + P mean(y)) < eta2.
DetectorVerdict glrd2_decide(std::span<const double> x, std::span<const double> y, const NoisePrior& prior,
                             const ThresholdSpec& thresholds);

// -- shared -----------------------------------------------------------------

/// Apply the rule of `kind` to an already computed statistic.
bool rule_decides_h1(DetectorKind kind, double statistic, const ThresholdSpec& thresholds);

/// Interval (eta1, eta2) on which a unimodal GLR with peak `peak` exceeds tau.
/// `lr` maps statistic values to GLR values and tends to `limit` as t grows.
/// Returns an empty interval at the peak when tau is not below the maximum;
/// eta1 = 0 when tau < lr(0) and eta2 = +inf when tau < limit.
template <class Lr>
std::pair<double, double> glr_interval(double tau, double peak, double limit, Lr&& lr);

/// Convenience wrappers of glr_interval for the two GLR families.
std::pair<double, double> glrd1_interval(double tau, int n, int k, double snr);
std::pair<double, double> glrd2_interval(double tau, int l, int p, int k, double snr);

template <class Lr>
std::pair<double, double> glr_interval(double tau, double peak, double limit, Lr&& lr) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!(lr(peak) > tau)) return {peak, peak};

    double lower = 0.0;
    if (!(lr(0.0) > tau)) {
        double a = 0.0;
        double b = peak;
        for (int i = 0; i < 200 && b - a > 1e-14 * peak; ++i) {
            const double m = 0.5 * (a + b);
            (lr(m) > tau ? b : a) = m;
        }
        lower = b;
    }

    if (tau < limit) return {lower, inf};
    double a = peak;
    double b = 2.0 * peak + 1.0;
    for (int i = 0; i < 200 && lr(b) > tau; ++i) {
        a = b;
        b *= 2.0;
    }
    if (lr(b) > tau) return {lower, inf};
    for (int i = 0; i < 200 && b - a > 1e-14 * b; ++i) {
        const double m = 0.5 * (a + b);
        (lr(m) > tau ? a : b) = m;
    }
    return {lower, a};
}

}  // namespace exband

#endif  // EXBAND_DETECTORS_HPP

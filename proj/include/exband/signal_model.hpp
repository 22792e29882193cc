#ifndef EXBAND_SIGNAL_MODEL_HPP
#define EXBAND_SIGNAL_MODEL_HPP

#include <complex>
#include <optional>
#include <vector>

#include "exband/numerics.hpp"
#include "exband/observation.hpp"
#include "exband/scenario.hpp"

namespace exband {

/// Noise power for one trial: alpha = 1/lambda with lambda ~ Gamma(k+1, rate theta).
double draw_noise_power(const NoisePrior& prior, RngStream& rng);

/// Normalized raised-cosine power profile in [0, 1]: flat up to (1-beta)B/2,
/// half power at B/2, zero from (1+beta)B/2 on.
double raised_cosine_psd(double f_hz, const SignalSpec& spec);

/// One block of N complex baseband samples.
/// H0: circular noise of variance alpha. H1 adds h * s(n), where s is a
/// circular Gaussian sequence with per-sample power alpha * snr whose
/// spectrum follows raised_cosine_psd (frequency-domain mask on white
/// symbols).
std::vector<std::complex<double>> generate_time_block(const ScenarioConfig& cfg, double alpha,
                                                      std::complex<double> gain, RngStream& rng);

/// i.i.d. squared envelopes: r(n) = |h s(n) + noise(n)|^2 with white s of
/// per-sample power alpha * snr under H1. Each r(n) is exponential with mean
/// alpha (H0) or alpha (1 + |h|^2 snr) (H1).
std::vector<double> generate_envelopes(const ScenarioConfig& cfg, double alpha,
                                       std::complex<double> gain, RngStream& rng);

struct BinDraw {
    std::vector<double> x;
    std::vector<double> y;
};

/// Frequency-bin observation drawn directly from the bin model.
///
/// With c = cfg.bin_scale_factor(), noise bins are |v|^2 with v ~ CN(0, c alpha).
/// Under H1 each in-band bin is |e + v|^2 where e = h * S. S is the pinned
/// amplitude when signal_amp is set, otherwise an independent CN(0, c alpha snr)
/// draw per bin. Excess bins carry noise only.
BinDraw generate_bins(const ScenarioConfig& cfg, double alpha, std::complex<double> gain,
                      std::optional<std::complex<double>> signal_amp, RngStream& rng);

}  // namespace exband

#endif  // EXBAND_SIGNAL_MODEL_HPP

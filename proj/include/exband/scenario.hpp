#ifndef EXBAND_SCENARIO_HPP
#define EXBAND_SCENARIO_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace exband {

/// Gamma prior on the noise precision 1/alpha: shape k+1, rate theta.
/// The implied mean noise power is theta/k, so k must be at least 1.
struct NoisePrior {
    int k = 4;
    double theta = 4.0;

    double precision_shape() const { return static_cast<double>(k) + 1.0; }
    double mean_noise_power() const { return theta / static_cast<double>(k); }

    /// Throws std::domain_error when k < 1 or theta is not a positive finite number.
    void validate() const;
};

enum class ChannelKind { Awgn, Rayleigh, Nakagami };

/// Flat channel law. Fading kinds are normalized to E|h|^2 = 1.
struct ChannelSpec {
    ChannelKind kind = ChannelKind::Awgn;
    double nakagami_m = 1.0;  ///< only read for Nakagami

    static ChannelSpec awgn() { return {ChannelKind::Awgn, 1.0}; }
    static ChannelSpec rayleigh() { return {ChannelKind::Rayleigh, 1.0}; }
    static ChannelSpec nakagami(double m) { return {ChannelKind::Nakagami, m}; }
};

/// Raised-cosine primary-user signal as seen by the sensing receiver.
struct SignalSpec {
    double bandwidth_hz = 54e3;
    double rolloff = 0.25;
    double sample_rate_hz = 67.5e3;
    double snr_linear = 1.0;

    /// Sample rate exactly (1 + rolloff) * bandwidth, so every DFT bin is in-band or excess.
    static SignalSpec critically_sampled(double bandwidth_hz, double rolloff, double snr_linear);

    double excess_edge_hz() const { return 0.5 * (1.0 + rolloff) * bandwidth_hz; }
    double inband_edge_hz() const { return 0.5 * bandwidth_hz; }

    /// Throws std::domain_error on a rolloff outside (0, 1], a negative SNR,
    /// or a sample rate below (1 + rolloff) * bandwidth.
    void validate() const;
};

enum class Hypothesis { H0, H1 };

/// How frequency bins are scaled relative to the per-sample noise power.
/// PerSample divides |DFT|^2 by N (bin noise mean alpha); Unnormalized keeps
/// the raw transform (bin noise mean N * alpha).
enum class BinScale { PerSample, Unnormalized };

/// Where trial observations come from.
/// Model draws i.i.d. envelopes and independent frequency bins directly;
/// Waveform synthesizes one shaped block and derives both forms from it.
enum class ObservationPath { Model, Waveform };

/// Generalized-likelihood rules: OneSided keeps only the lower threshold,
/// TwoSided accepts H1 only inside (eta1, eta2).
enum class GlrMode { OneSided, TwoSided };

struct ScenarioConfig {
    int n_samples = 20;
    NoisePrior prior{};
    SignalSpec signal{};
    ChannelSpec channel{};
    Hypothesis hypothesis = Hypothesis::H0;
    std::size_t trials = 10000;
    std::uint64_t master_seed = 1;

    GlrMode glr_mode = GlrMode::OneSided;
    ObservationPath path = ObservationPath::Model;
    BinScale bin_scale = BinScale::PerSample;
    /// Degenerate prior: every trial uses this noise power instead of a prior draw.
    std::optional<double> fixed_noise_power;
    /// Pin the channel gain instead of drawing it from the channel law.
    std::optional<std::complex<double>> pinned_gain;
    /// Pin the per-bin signal amplitude (same for every in-band bin).
    std::optional<std::complex<double>> pinned_signal;
    /// Worker threads for trial execution; 0 picks the hardware concurrency.
    unsigned threads = 0;

    /// Per-bin noise-mean multiplier: 1 or n_samples depending on bin_scale.
    double bin_scale_factor() const;

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
};

}  // namespace exband

#endif  // EXBAND_SCENARIO_HPP

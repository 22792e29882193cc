#include "exband/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "exband/errors.hpp"

namespace exband {

void NoisePrior::validate() const {
    if (k < 1) throw std::domain_error("noise prior: k must be >= 1, got " + std::to_string(k));
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw std::domain_error("noise prior: theta must be positive and finite");
    }
}

SignalSpec SignalSpec::critically_sampled(double bandwidth_hz, double rolloff, double snr_linear) {
    return {bandwidth_hz, rolloff, (1.0 + rolloff) * bandwidth_hz, snr_linear};
}

void SignalSpec::validate() const {
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
        throw std::domain_error("signal: bandwidth must be positive");
    }
    if (!(rolloff > 0.0 && rolloff <= 1.0)) throw std::domain_error("signal: rolloff must lie in (0, 1]");
    if (!(snr_linear >= 0.0) || !std::isfinite(snr_linear)) {
        throw std::domain_error("signal: snr must be a nonnegative number");
    }
    if (!(sample_rate_hz >= (1.0 + rolloff) * bandwidth_hz * (1.0 - 1e-12))) {
        throw std::domain_error("signal: sample rate below (1 + rolloff) * bandwidth");
    }
}

double ScenarioConfig::bin_scale_factor() const {
    return bin_scale == BinScale::PerSample ? 1.0 : static_cast<double>(n_samples);
}

void ScenarioConfig::validate() const {
    if (n_samples < 2) throw ConfigError("n_samples must be at least 2");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    try {
        prior.validate();
        signal.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    if (channel.kind == ChannelKind::Nakagami && !(channel.nakagami_m >= 0.5)) {
        throw ConfigError("nakagami_m must be >= 0.5");
    }
    if (fixed_noise_power && !(*fixed_noise_power > 0.0 && std::isfinite(*fixed_noise_power))) {
        throw ConfigError("fixed_noise_power must be positive");
    }
    band_geometry(n_samples, signal);
}

double draw_noise_power(const NoisePrior& prior, RngStream& rng) {
    double precision = 0.0;
    // A zero draw is possible only through underflow; redraw rather than return infinity.
    do {
        precision = gamma_sample(prior.precision_shape(), prior.theta, rng);
    } while (!(precision > 0.0));
    return 1.0 / precision;
}

double raised_cosine_psd(double f_hz, const SignalSpec& spec) {
    const double f = std::abs(f_hz);
    const double flat_edge = 0.5 * (1.0 - spec.rolloff) * spec.bandwidth_hz;
    const double stop_edge = spec.excess_edge_hz();
    if (f <= flat_edge) return 1.0;
    if (f >= stop_edge) return 0.0;
    const double phase = std::numbers::pi * (f - flat_edge) / (spec.rolloff * spec.bandwidth_hz);
    return 0.5 * (1.0 + std::cos(phase));
}

std::vector<std::complex<double>> generate_time_block(const ScenarioConfig& cfg, double alpha,
                                                      std::complex<double> gain, RngStream& rng) {
    const int n = cfg.n_samples;
    std::vector<std::complex<double>> z(static_cast<std::size_t>(n));

    if (cfg.hypothesis == Hypothesis::H1) {
        std::vector<double> mask(static_cast<std::size_t>(n));
        double mask_power = 0.0;
        for (int k = 0; k < n; ++k) {
            const double p = raised_cosine_psd(bin_frequency(k, n, cfg.signal.sample_rate_hz), cfg.signal);
            mask[static_cast<std::size_t>(k)] = std::sqrt(p);
            mask_power += p;
        }
        std::vector<std::complex<double>> symbols(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            symbols[static_cast<std::size_t>(k)] = mask[static_cast<std::size_t>(k)] * complex_gaussian(1.0, rng);
        }
        // Inverse transform without 1/N; scaled so that E|s(n)|^2 = alpha * snr.
        const double scale = std::sqrt(alpha * cfg.signal.snr_linear / mask_power);
        for (int m = 0; m < n; ++m) {
            std::complex<double> acc{0.0, 0.0};
            for (int k = 0; k < n; ++k) {
                const double arg = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(k) * m) % n) /
                                   static_cast<double>(n);
                acc += symbols[static_cast<std::size_t>(k)] * std::polar(1.0, arg);
            }
            z[static_cast<std::size_t>(m)] = gain * scale * acc;
        }
    }
    for (auto& sample : z) sample += complex_gaussian(alpha, rng);
    return z;
}

std::vector<double> generate_envelopes(const ScenarioConfig& cfg, double alpha,
                                       std::complex<double> gain, RngStream& rng) {
    const auto n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> r(n);
    const bool signal = cfg.hypothesis == Hypothesis::H1;
    const double signal_power = alpha * cfg.signal.snr_linear;
    for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> z = complex_gaussian(alpha, rng);
        if (signal) z += gain * complex_gaussian(signal_power, rng);
        r[i] = std::norm(z);
    }
    return r;
}

BinDraw generate_bins(const ScenarioConfig& cfg, double alpha, std::complex<double> gain,
                      std::optional<std::complex<double>> signal_amp, RngStream& rng) {
    const BandGeometry g = band_geometry(cfg.n_samples, cfg.signal);
    const double c = cfg.bin_scale_factor();
    const double noise_var = c * alpha;
    const double signal_var = c * alpha * cfg.signal.snr_linear;
    const bool signal = cfg.hypothesis == Hypothesis::H1;

    BinDraw out;
    out.x.resize(static_cast<std::size_t>(g.l_inband));
    out.y.resize(static_cast<std::size_t>(g.p_excess));
    for (auto& xm : out.x) {
        std::complex<double> v = complex_gaussian(noise_var, rng);
        if (signal) v += gain * (signal_amp ? *signal_amp : complex_gaussian(signal_var, rng));
        xm = std::norm(v);
    }
    for (auto& ym : out.y) ym = std::norm(complex_gaussian(noise_var, rng));
    return out;
}

}  // namespace exband

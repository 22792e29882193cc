#include "exband/observation.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "exband/errors.hpp"

namespace exband {

namespace {

// Snap a frequency onto a band edge when they differ only by rounding.
bool at_edge(double f, double edge, double sample_rate_hz) {
    return std::abs(f - edge) <= 1e-9 * sample_rate_hz;
}

}  // namespace

double bin_frequency(int k, int n, double sample_rate_hz) {
    const int signed_k = (2 * k < n) ? k : k - n;
    return static_cast<double>(signed_k) * sample_rate_hz / static_cast<double>(n);
}

BandRegion classify_frequency(double f_hz, const SignalSpec& spec) {
    const double inner = spec.inband_edge_hz();
    const double outer = spec.excess_edge_hz();
    const double fs = spec.sample_rate_hz;

    const bool lower_inner = f_hz > -inner || at_edge(f_hz, -inner, fs);
    const bool below_upper_inner = f_hz < inner && !at_edge(f_hz, inner, fs);
    if (lower_inner && below_upper_inner) return BandRegion::InBand;

    const bool lower_outer = f_hz > -outer || at_edge(f_hz, -outer, fs);
    const bool below_upper_outer = f_hz < outer && !at_edge(f_hz, outer, fs);
    if (lower_outer && below_upper_outer) return BandRegion::Excess;
    return BandRegion::Outside;
}

BandGeometry band_geometry(int n, const SignalSpec& spec) {
    BandGeometry g;
    for (int k = 0; k < n; ++k) {
        switch (classify_frequency(bin_frequency(k, n, spec.sample_rate_hz), spec)) {
            case BandRegion::InBand: ++g.l_inband; break;
            case BandRegion::Excess: ++g.p_excess; break;
            case BandRegion::Outside: break;
        }
    }
    g.n_total = g.l_inband + g.p_excess;
    if (g.p_excess == 0) {
        throw ConfigError("band split of " + std::to_string(n) +
                          " bins leaves no excess-band bins; increase n_samples or rolloff");
    }
    if (g.l_inband == 0) {
        throw ConfigError("band split of " + std::to_string(n) + " bins leaves no in-band bins");
    }
    return g;
}

std::vector<double> squared_envelope(std::span<const std::complex<double>> z) {
    std::vector<double> r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) r[i] = std::norm(z[i]);
    return r;
}

std::vector<double> spectrum_bins(std::span<const std::complex<double>> z) {
    const std::size_t n = z.size();
    std::vector<double> w(n, 0.0);
    if (n == 0) return w;

    std::vector<std::complex<double>> twiddle(n);
    for (std::size_t j = 0; j < n; ++j) {
        twiddle[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        std::size_t idx = 0;
        for (std::size_t m = 0; m < n; ++m) {
            acc += z[m] * twiddle[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        w[k] = std::norm(acc);
    }
    return w;
}

BandSplit split_bands(std::span<const double> w, const SignalSpec& spec) {
    const int n = static_cast<int>(w.size());
    BandSplit out;
    out.geometry = band_geometry(n, spec);
    out.x.reserve(static_cast<std::size_t>(out.geometry.l_inband));
    out.y.reserve(static_cast<std::size_t>(out.geometry.p_excess));
    for (int k = 0; k < n; ++k) {
        switch (classify_frequency(bin_frequency(k, n, spec.sample_rate_hz), spec)) {
            case BandRegion::InBand: out.x.push_back(w[static_cast<std::size_t>(k)]); break;
            case BandRegion::Excess: out.y.push_back(w[static_cast<std::size_t>(k)]); break;
            case BandRegion::Outside: break;
        }
    }
    return out;
}

TimeObservation::TimeObservation(std::vector<double> r) : r_(std::move(r)) {
    r_sum_ = std::accumulate(r_.begin(), r_.end(), 0.0);
    r_mean_ = r_.empty() ? 0.0 : r_sum_ / static_cast<double>(r_.size());
}

BinObservation::BinObservation(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    x_sum_ = std::accumulate(x_.begin(), x_.end(), 0.0);
    y_sum_ = std::accumulate(y_.begin(), y_.end(), 0.0);
    x_mean_ = x_.empty() ? 0.0 : x_sum_ / static_cast<double>(x_.size());
    y_mean_ = y_.empty() ? 0.0 : y_sum_ / static_cast<double>(y_.size());
}

}  // namespace exband

#ifndef EXBAND_OBSERVATION_HPP
#define EXBAND_OBSERVATION_HPP

#include <complex>
#include <span>
#include <vector>

#include "exband/scenario.hpp"

namespace exband {

/// Bin counts of one sensing block after band splitting.
/// n_total counts retained bins only (bins past the excess edge are dropped).
struct BandGeometry {
    int n_total = 0;
    int l_inband = 0;
    int p_excess = 0;

    bool operator==(const BandGeometry&) const = default;
};

enum class BandRegion { InBand, Excess, Outside };

/// Signed frequency of DFT bin k for a block of n samples at sample_rate_hz,
/// mapped to [-fs/2, fs/2).
double bin_frequency(int k, int n, double sample_rate_hz);

/// In-band is [-B/2, B/2); excess is [B/2, (1+beta)B/2) and its mirror
/// [-(1+beta)B/2, -B/2). With critical sampling this gives L = N/(1+beta)
/// whenever that ratio is an integer.
BandRegion classify_frequency(double f_hz, const SignalSpec& spec);

/// Geometry of an n-sample block. Throws ConfigError when no excess bins
/// survive, since the excess-band detectors are undefined then.
BandGeometry band_geometry(int n, const SignalSpec& spec);

/// r(n) = |z(n)|^2.
std::vector<double> squared_envelope(std::span<const std::complex<double>> z);

/// w(k) = |DFT(z)(k)|^2 with the unnormalized forward transform,
/// so sum(w) = N * sum(|z|^2).
std::vector<double> spectrum_bins(std::span<const std::complex<double>> z);

struct BandSplit {
    std::vector<double> x;  ///< in-band bins, ascending bin index
    std::vector<double> y;  ///< excess-band bins, ascending bin index
    BandGeometry geometry;
};

/// Partition spectrum bins into in-band x and excess y.
/// Throws ConfigError if the excess band is empty.
BandSplit split_bands(std::span<const double> w, const SignalSpec& spec);

/// Time-domain observation: squared envelopes with their cached mean.
class TimeObservation {
public:
    explicit TimeObservation(std::vector<double> r);

    std::span<const double> r() const { return r_; }
    int size() const { return static_cast<int>(r_.size()); }
    double r_mean() const { return r_mean_; }
    double r_sum() const { return r_sum_; }

private:
    std::vector<double> r_;
    double r_sum_ = 0.0;
    double r_mean_ = 0.0;
};

/// Frequency-domain observation: in-band bins x and excess-band bins y.
class BinObservation {
public:
    BinObservation(std::vector<double> x, std::vector<double> y);

    std::span<const double> x() const { return x_; }
    std::span<const double> y() const { return y_; }
    int l_inband() const { return static_cast<int>(x_.size()); }
    int p_excess() const { return static_cast<int>(y_.size()); }
    double x_mean() const { return x_mean_; }
    double y_mean() const { return y_mean_; }
    double x_sum() const { return x_sum_; }
    double y_sum() const { return y_sum_; }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    double x_sum_ = 0.0;
    double y_sum_ = 0.0;
    double x_mean_ = 0.0;
    double y_mean_ = 0.0;
};

}  // namespace exband

#endif  // EXBAND_OBSERVATION_HPP

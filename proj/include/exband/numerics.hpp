#ifndef EXBAND_NUMERICS_HPP
#define EXBAND_NUMERICS_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <random>

#include "exband/scenario.hpp"

namespace exband {

/// Reproducible random stream keyed by (master_seed, stream_index, lane).
///
/// The generator is SplitMix64 run from a key derived by hashing the three
/// identifiers, so constructing a stream is O(1) and the sequence depends
/// only on its identifiers, never on construction order. Lanes split one
/// trial's randomness into independent sub-streams (noise power, channel,
/// observation data) so changing one law leaves the other draws untouched.
///
/// Satisfies UniformRandomBitGenerator and can feed <random> distributions.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index, std::uint64_t lane = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal.
    double normal();

    /// Sibling stream with the same (master_seed, stream_index) and another lane.
    RngStream lane(std::uint64_t lane) const { return RngStream(master_, index_, lane); }

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_index() const { return index_; }
    std::uint64_t lane_index() const { return lane_; }

private:
    std::uint64_t master_;
    std::uint64_t index_;
    std::uint64_t lane_;
    std::uint64_t state_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).
/// Series for x < s + 1, Lentz continued fraction otherwise.
/// Throws std::domain_error unless s > 0 and x >= 0 are finite.
double reg_upper_gamma(double s, double x);

/// Regularized lower incomplete gamma P(s, x) = 1 - Q(s, x).
double reg_lower_gamma(double s, double x);

/// Standard Gaussian tail probability P(Z > z).
/// Infinite arguments map to 0 or 1; NaN throws std::domain_error.
double q_function(double z);

/// Inverse of q_function on (0, 1). Throws std::domain_error outside it.
double q_inverse(double p);

/// Gamma draw with density rate^shape t^(shape-1) e^(-rate t) / Gamma(shape).
double gamma_sample(double shape, double rate, RngStream& rng);

/// Circular complex Gaussian with E|z|^2 = variance (each part variance/2).
std::complex<double> complex_gaussian(double variance, RngStream& rng);

/// Channel gain for one sensing interval.
/// AWGN gives exactly 1; Rayleigh a unit-power circular Gaussian; Nakagami-m
/// an amplitude sqrt(Gamma(m, m)) with uniform phase.
/// Throws std::domain_error for Nakagami with m < 0.5.
std::complex<double> channel_gain(const ChannelSpec& channel, RngStream& rng);

}  // namespace exband

#endif  // EXBAND_NUMERICS_HPP

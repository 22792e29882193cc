#include "exband/numerics.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace exband {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr double kEpsilon = 1e-15;
constexpr int kMaxIterations = 100000;

// P(s, x) by its power series; valid and fast for x < s + 1.
double lower_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    double denom = s;
    for (int n = 0; n < kMaxIterations; ++n) {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEpsilon) {
            return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
        }
    }
    throw std::domain_error("reg_upper_gamma: series did not converge");
}

// Q(s, x) by the modified Lentz continued fraction; valid for x >= s + 1.
double upper_fraction(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon) {
            return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
        }
    }
    throw std::domain_error("reg_upper_gamma: continued fraction did not converge");
}

void check_gamma_args(double s, double x) {
    if (!std::isfinite(s) || !std::isfinite(x) || s <= 0.0 || x < 0.0) {
        throw std::domain_error("incomplete gamma: need finite s > 0 and x >= 0, got s=" +
                                std::to_string(s) + " x=" + std::to_string(x));
    }
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index, std::uint64_t lane)
    : master_(master_seed), index_(stream_index), lane_(lane) {
    std::uint64_t key = mix64(master_seed + kGolden);
    key = mix64(key ^ mix64(stream_index + 0x632BE59BD9B4E019ULL));
    key = mix64(key ^ mix64(lane + 0x8CB92BA72F3D8DD7ULL));
    state_ = key;
}

RngStream::result_type RngStream::operator()() {
    state_ += kGolden;
    return mix64(state_);
}

double RngStream::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    return normal_(*this);
}

double reg_upper_gamma(double s, double x) {
    check_gamma_args(s, x);
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - lower_series(s, x);
    return upper_fraction(s, x);
}

double reg_lower_gamma(double s, double x) {
    check_gamma_args(s, x);
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return lower_series(s, x);
    return 1.0 - upper_fraction(s, x);
}

double q_function(double z) {
    if (std::isnan(z)) throw std::domain_error("q_function: NaN argument");
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("q_inverse: probability must lie in (0, 1), got " + std::to_string(p));
    }
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double gamma_sample(double shape, double rate, RngStream& rng) {
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    return dist(rng);
}

std::complex<double> complex_gaussian(double variance, RngStream& rng) {
    const double sd = std::sqrt(0.5 * variance);
    const double re = rng.normal();
    const double im = rng.normal();
    return {sd * re, sd * im};
}

std::complex<double> channel_gain(const ChannelSpec& channel, RngStream& rng) {
    switch (channel.kind) {
        case ChannelKind::Awgn:
            return {1.0, 0.0};
        case ChannelKind::Rayleigh:
            return complex_gaussian(1.0, rng);
        case ChannelKind::Nakagami: {
            if (!(channel.nakagami_m >= 0.5) || !std::isfinite(channel.nakagami_m)) {
                throw std::domain_error("channel_gain: Nakagami m must be >= 0.5");
            }
            const double amplitude = std::sqrt(gamma_sample(channel.nakagami_m, channel.nakagami_m, rng));
            const double phase = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
            return std::polar(amplitude, phase);
        }
    }
    throw std::domain_error("channel_gain: unknown channel kind");
}

}  // namespace exband

#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "exband/numerics.hpp"

using namespace exband;

namespace {

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double var_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

}  // namespace

// Reference values computed with mpmath at 50 digits.
TEST(RegUpperGamma, FrozenHighPrecisionValues) {
    EXPECT_NEAR(reg_upper_gamma(20, 20), 0.47025726683923999, 1e-13);
    EXPECT_NEAR(reg_upper_gamma(0.5, 0.3), 0.43857802608099986, 1e-13);
    EXPECT_NEAR(reg_upper_gamma(3.7, 12), 0.0015204466191189933, 1e-15);
    EXPECT_NEAR(reg_upper_gamma(100, 90), 0.84177901081356983, 1e-12);
    EXPECT_NEAR(reg_upper_gamma(1e-3, 1e-4), 0.0085968803325566431, 1e-13);
    EXPECT_NEAR(reg_upper_gamma(5, 0.01), 0.99999999999917358, 1e-15);
}

TEST(RegUpperGamma, AgreesWithBoostAcrossRegimes) {
    for (double s : {0.3, 1.0, 2.5, 7.0, 20.0, 40.0, 150.0}) {
        for (double x : {0.0, 0.01, 0.5, 1.0, 3.0, 10.0, 25.0, 60.0, 200.0}) {
            const double ref = boost::math::gamma_q(s, x);
            EXPECT_NEAR(reg_upper_gamma(s, x), ref, 1e-12 * std::max(1.0, ref)) << "s=" << s << " x=" << x;
            EXPECT_NEAR(reg_lower_gamma(s, x), 1.0 - ref, 1e-12) << "s=" << s << " x=" << x;
        }
    }
}

TEST(RegUpperGamma, ZeroArgumentIsOne) {
    EXPECT_EQ(reg_upper_gamma(1.0, 0.0), 1.0);
    EXPECT_EQ(reg_upper_gamma(20.0, 0.0), 1.0);
}

TEST(RegUpperGamma, ExponentialCase) {
    for (double x : {0.1, 1.0, 5.0, 30.0}) EXPECT_NEAR(reg_upper_gamma(1.0, x), std::exp(-x), 1e-15);
}

TEST(RegUpperGamma, MonotoneAndBounded) {
    for (double s : {0.5, 4.0, 20.0}) {
        double prev = 1.0;
        for (double x = 0.0; x < 80.0; x += 0.05) {
            const double q = reg_upper_gamma(s, x);
            EXPECT_GE(q, 0.0);
            EXPECT_LE(q, 1.0);
            EXPECT_LE(q, prev + 1e-15);
            prev = q;
        }
    }
}

TEST(RegUpperGamma, RejectsBadArguments) {
    EXPECT_THROW(reg_upper_gamma(0.0, 1.0), std::domain_error);
    EXPECT_THROW(reg_upper_gamma(-1.0, 1.0), std::domain_error);
    EXPECT_THROW(reg_upper_gamma(1.0, -0.5), std::domain_error);
    EXPECT_THROW(reg_upper_gamma(NAN, 1.0), std::domain_error);
}

TEST(QFunction, KnownValues) {
    EXPECT_EQ(q_function(0.0), 0.5);
    EXPECT_NEAR(q_function(1.6449), 0.049995217468346303, 1e-15);
    EXPECT_EQ(q_function(INFINITY), 0.0);
    EXPECT_EQ(q_function(-INFINITY), 1.0);
    EXPECT_THROW(q_function(NAN), std::domain_error);
}

TEST(QFunction, Symmetry) {
    for (double z = -6.0; z <= 6.0; z += 0.25) EXPECT_NEAR(q_function(z) + q_function(-z), 1.0, 1e-15);
}

TEST(QInverse, KnownValueAndRoundTrip) {
    EXPECT_NEAR(q_inverse(0.05), 1.6448536269514727, 1e-12);
    EXPECT_NEAR(q_inverse(0.5), 0.0, 1e-15);
    for (double p : {1e-10, 1e-4, 0.01, 0.3, 0.7, 0.99, 1 - 1e-6}) EXPECT_NEAR(q_function(q_inverse(p)), p, 1e-12 * std::max(p, 1e-3));
    EXPECT_THROW(q_inverse(0.0), std::domain_error);
    EXPECT_THROW(q_inverse(1.0), std::domain_error);
    EXPECT_THROW(q_inverse(-0.1), std::domain_error);
}

TEST(RngStream, SameKeysGiveSameSequence) {
    RngStream a(42, 7, 1);
    RngStream b(42, 7, 1);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(RngStream, DifferentKeysDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t seed : {1u, 2u}) {
        for (std::uint64_t idx : {0u, 1u, 1u << 20}) {
            for (std::uint64_t lane : {0u, 1u, 2u}) firsts.insert(RngStream(seed, idx, lane)());
        }
    }
    EXPECT_EQ(firsts.size(), 18u);
}

TEST(RngStream, LaneSibling) {
    RngStream s(9, 3, 0);
    RngStream l = s.lane(2);
    RngStream direct(9, 3, 2);
    EXPECT_EQ(l.lane_index(), 2u);
    EXPECT_EQ(l(), direct());
}

TEST(RngStream, UniformRangeAndMoments) {
    RngStream rng(5, 0);
    std::vector<double> v(200000);
    for (auto& x : v) {
        x = rng.uniform();
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
    EXPECT_NEAR(mean_of(v), 0.5, 4.0 * std::sqrt(1.0 / 12 / v.size()));
}

TEST(GammaSample, MomentsMatchShapeRate) {
    RngStream rng(11, 0);
    for (auto [shape, rate] : {std::pair{5.0, 4.0}, std::pair{0.7, 2.0}, std::pair{30.0, 0.5}}) {
        std::vector<double> v(200000);
        for (auto& x : v) x = gamma_sample(shape, rate, rng);
        const double m = shape / rate;
        const double var = shape / (rate * rate);
        EXPECT_NEAR(mean_of(v), m, 4.0 * std::sqrt(var / v.size()));
        EXPECT_NEAR(var_of(v), var, 0.03 * var);
    }
}

TEST(ComplexGaussian, CircularWithRequestedPower) {
    RngStream rng(12, 0);
    const int n = 200000;
    double power = 0.0, re2 = 0.0, im2 = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto z = complex_gaussian(2.5, rng);
        power += std::norm(z);
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
        cross += z.real() * z.imag();
    }
    EXPECT_NEAR(power / n, 2.5, 0.03);
    EXPECT_NEAR(re2 / n, 1.25, 0.02);
    EXPECT_NEAR(im2 / n, 1.25, 0.02);
    EXPECT_NEAR(cross / n, 0.0, 0.02);
}

TEST(ChannelGain, AwgnIsUnity) {
    RngStream rng(1, 0);
    EXPECT_EQ(channel_gain(ChannelSpec::awgn(), rng), std::complex<double>(1.0, 0.0));
}

TEST(ChannelGain, FadingHasUnitPower) {
    for (const auto& ch : {ChannelSpec::rayleigh(), ChannelSpec::nakagami(2.0), ChannelSpec::nakagami(0.5)}) {
        RngStream rng(13, 0);
        double p = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) p += std::norm(channel_gain(ch, rng));
        EXPECT_NEAR(p / n, 1.0, 0.02);
    }
}

TEST(ChannelGain, NakagamiPowerVarianceIsOneOverM) {
    RngStream rng(14, 0);
    std::vector<double> v(200000);
    for (auto& x : v) x = std::norm(channel_gain(ChannelSpec::nakagami(2.0), rng));
    EXPECT_NEAR(var_of(v), 0.5, 0.02);
}

TEST(ChannelGain, NakagamiOneMatchesRayleighPowerLaw) {
    // Both give |h|^2 ~ Exp(1); compare tail fractions.
    RngStream a(15, 0), b(16, 0);
    const int n = 200000;
    int ta = 0, tb = 0;
    for (int i = 0; i < n; ++i) {
        ta += std::norm(channel_gain(ChannelSpec::nakagami(1.0), a)) > 2.0;
        tb += std::norm(channel_gain(ChannelSpec::rayleigh(), b)) > 2.0;
    }
    EXPECT_NEAR(static_cast<double>(ta) / n, std::exp(-2.0), 0.003);
    EXPECT_NEAR(static_cast<double>(tb) / n, std::exp(-2.0), 0.003);
}

TEST(ChannelGain, NakagamiRejectsSmallM) {
    RngStream rng(1, 0);
    EXPECT_THROW(channel_gain(ChannelSpec::nakagami(0.3), rng), std::domain_error);
}

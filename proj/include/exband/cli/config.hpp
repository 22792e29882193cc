#ifndef EXBAND_CLI_CONFIG_HPP
#define EXBAND_CLI_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exband/detectors.hpp"
#include "exband/montecarlo.hpp"
#include "exband/scenario.hpp"

namespace exband::cli {

/// One experiment file: flat `key = value` lines, `#` starts a comment,
/// lists are comma separated. prior_k and prior_theta have no default.
struct ExperimentConfig {
    std::vector<DetectorKind> detectors;
    std::vector<int> n_samples{20};
    std::vector<double> snr_db{0.0};
    std::vector<ChannelSpec> channels{ChannelSpec::awgn()};
    NoisePrior prior;
    double rolloff = 0.25;
    double bandwidth_hz = 54e3;
    std::optional<double> sample_rate_hz;  ///< critical sampling when unset
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    std::vector<double> pfa_grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
    GlrMode glr_mode = GlrMode::OneSided;
    ObservationPath path = ObservationPath::Model;
    BinScale bin_scale = BinScale::PerSample;
    ThresholdMode threshold_mode = ThresholdMode::Empirical;
    std::optional<double> fixed_noise_power;
    unsigned threads = 0;
    int cdf_points = 200;
    int curve_points = 101;
    std::size_t prior_draws = 10000;
    bool svg = false;

    /// Scenario for one (N, SNR, channel) combination under H0.
    ScenarioConfig scenario(int n, double snr_db, const ChannelSpec& channel) const;

    /// Canonical `key = value` listing of every setting, defaults included.
    /// Equal configurations give equal echoes.
    std::string echo() const;
};

/// Parses a configuration. Throws ConfigError naming `source` and the line.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

std::string channel_label(const ChannelSpec& channel);
double db_to_linear(double db);

}  // namespace exband::cli

#endif  // EXBAND_CLI_CONFIG_HPP

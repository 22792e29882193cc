#ifndef EXBAND_CLI_REPORT_HPP
#define EXBAND_CLI_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace exband::cli {

/// Six significant digits, the only decimal format used in output files.
std::string format_number(double v);

/// Provenance of one command invocation.
struct RunManifest {
    std::string command;
    std::string config_echo;
    std::string version;
    std::uint64_t master_seed = 0;
    double wall_seconds = 0.0;  ///< not part of the hash
    std::vector<std::string> notes;

    /// 16 hex digits of FNV-1a over command, config echo, version and seed.
    std::string hash() const;
};

/// CSV file whose first line is `# manifest <hash> exband <version>`.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const RunManifest& manifest, const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
};

void write_manifest_json(const std::filesystem::path& path, const RunManifest& manifest,
                         const std::vector<std::string>& outputs);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static line chart on [x_min, x_max] x [y_min, y_max].
void write_svg_chart(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<SvgSeries>& series, const RunManifest& manifest);

}  // namespace exband::cli

#endif  // EXBAND_CLI_REPORT_HPP

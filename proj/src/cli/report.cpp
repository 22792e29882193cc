#include "exband/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace exband::cli {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view data) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string RunManifest::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, command);
    h = fnv1a(h, "\n");
    h = fnv1a(h, config_echo);
    h = fnv1a(h, version);
    h = fnv1a(h, "\n" + std::to_string(master_seed));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const RunManifest& manifest,
                     const std::vector<std::string>& columns)
    : out_(open_out(path)), columns_(columns.size()) {
    out_ << "# manifest " << manifest.hash() << " exband " << manifest.version << '\n';
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

void write_manifest_json(const std::filesystem::path& path, const RunManifest& manifest,
                         const std::vector<std::string>& outputs) {
    nlohmann::ordered_json j;
    j["manifest_hash"] = manifest.hash();
    j["command"] = manifest.command;
    j["tool_version"] = manifest.version;
    j["master_seed"] = manifest.master_seed;
    j["wall_clock_seconds"] = manifest.wall_seconds;
    j["config_echo"] = manifest.config_echo;
    j["notes"] = manifest.notes;
    j["outputs"] = outputs;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_svg_chart(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<SvgSeries>& series, const RunManifest& manifest) {
    constexpr double width = 640, height = 480, left = 70, right = 180, top = 40, bottom = 60;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
        for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
    if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + (1.0 - (v - y0) / (y1 - y0)) * ph; };
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<!-- manifest " << manifest.hash() << " -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = y0 + (y1 - y0) * i / 4.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 16 << "\" font-size=\"10\" text-anchor=\"middle\">"
            << format_number(xv) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 3 << "\" font-size=\"10\" text-anchor=\"end\">"
            << format_number(yv) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 20 << "\" font-size=\"12\" text-anchor=\"middle\">"
        << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << top + ph / 2
        << ")\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = colours[k % (sizeof colours / sizeof *colours)];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            out << format_number(px(s.x[i])) << ',' << format_number(py(s.y[i])) << ' ';
        }
        out << "\"/>\n";
        const double ly = top + 14.0 * static_cast<double>(k) + 8;
        out << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\"" << ly
            << "\" stroke=\"" << colour << "\"/>\n";
        out << "<text x=\"" << left + pw + 34 << "\" y=\"" << ly + 3 << "\" font-size=\"10\">" << xml_escape(s.label)
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace exband::cli

#include "tomo/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tomo/version.hpp"

namespace tomo {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fnv1a_file_hex(const std::string& path) { return fnv1a_hex(read_text_file(path)); }

std::string complex_matrix_to_csv(const CMat& m) {
  std::ostringstream os;
  for (int j = 0; j < m.cols(); ++j) os << (j ? "," : "") << "re_" << j + 1 << ",im_" << j + 1;
  os << "\n";
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%s%.17g,%.17g", j ? "," : "", m(i, j).real(),
                    m(i, j).imag());
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

CMat complex_matrix_from_csv_string(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  std::vector<std::vector<double>> rows;
  int cols = -1;
  while (std::getline(ss, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("re_", 0) == 0) continue;  // header
    std::vector<double> vals;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t pos = 0;
        vals.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw DataError("csv line " + std::to_string(lineno) + ": malformed value '" + cell + "'");
      }
    }
    if (vals.empty() || vals.size() % 2 != 0)
      throw DataError("csv line " + std::to_string(lineno) +
                      ": expected an even number of re/im columns");
    if (cols < 0) cols = static_cast<int>(vals.size());
    if (static_cast<int>(vals.size()) != cols)
      throw DataError("csv line " + std::to_string(lineno) + ": inconsistent column count");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw DataError("csv: no data rows");
  CMat m(static_cast<int>(rows.size()), cols / 2);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols / 2; ++j)
      m(static_cast<int>(i), j) = cxd(rows[i][2 * j], rows[i][2 * j + 1]);
  return m;
}

CMat complex_matrix_from_csv_file(const std::string& path) {
  return complex_matrix_from_csv_string(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file '" + path + "'");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string cloud_to_xyz(const PointCloud& cloud) {
  std::ostringstream os;
  char buf[160];
  const bool with_power = cloud.powers.size() == cloud.points.size();
  for (int i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    if (with_power)
      std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f %.6g\n", p.x(), p.y(), p.z(),
                    cloud.powers[i]);
    else
      std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", p.x(), p.y(), p.z());
    os << buf;
  }
  return os.str();
}

std::string cloud_to_ply(const PointCloud& cloud) {
  const bool with_power = cloud.powers.size() == cloud.points.size();
  std::ostringstream os;
  os << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
     << "\nproperty float x\nproperty float y\nproperty float z\n";
  if (with_power) os << "property float power\n";
  os << "end_header\n";
  char buf[160];
  for (int i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    if (with_power)
      std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f %.6g\n", p.x(), p.y(), p.z(),
                    cloud.powers[i]);
    else
      std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", p.x(), p.y(), p.z());
    os << buf;
  }
  return os.str();
}

namespace {

constexpr double kW = 640.0, kH = 420.0;
constexpr double kMarginL = 70.0, kMarginR = 140.0, kMarginT = 40.0, kMarginB = 50.0;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<SvgSeries>& series) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmin > xmax) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const double plot_w = kW - kMarginL - kMarginR;
  const double plot_h = kH - kMarginT - kMarginB;
  const auto px = [&](double x) { return kMarginL + (x - xmin) / (xmax - xmin) * plot_w; };
  const auto py = [&](double y) { return kH - kMarginB - (y - ymin) / (ymax - ymin) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
     << "</text>\n";

  // axes and ticks
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << kH - kMarginB << "\" x2=\"" << kW - kMarginR
     << "\" y2=\"" << kH - kMarginB << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL << "\" y2=\""
     << kH - kMarginB << "\" stroke=\"black\"/>\n";
  char buf[256];
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"11\">%.3g"
                  "</text>\n",
                  px(xv), kH - kMarginB + 16.0, xv);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"11\">%.3g"
                  "</text>\n",
                  kMarginL - 6.0, py(yv) + 4.0, yv);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n",
                  kMarginL, py(yv), kW - kMarginR, py(yv));
    os << buf;
  }
  os << "<text x=\"" << (kMarginL + kW - kMarginR) / 2 << "\" y=\"" << kH - 12.0
     << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
     << "<text x=\"18\" y=\"" << (kMarginT + kH - kMarginB) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
     << (kMarginT + kH - kMarginB) / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(series[s].x[i]), py(series[s].y[i]));
      os << buf;
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n",
                    px(series[s].x[i]), py(series[s].y[i]), color);
      os << buf;
    }
    const double ly = kMarginT + 16.0 * s;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                  "stroke-width=\"2\"/><text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">%s</text>\n",
                  kW - kMarginR + 8.0, ly, kW - kMarginR + 28.0, ly, color, kW - kMarginR + 33.0,
                  ly + 4.0, series[s].label.c_str());
    os << buf;
  }
  os << "</svg>\n";
  return os.str();
}

RunManifest::RunManifest(std::string command, std::string config_digest, std::uint64_t seed)
    : command_(std::move(command)), config_digest_(std::move(config_digest)), seed_(seed) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  started_utc_ = buf;
}

void RunManifest::add_output(const std::string& path) {
  outputs_.emplace_back(path, fnv1a_file_hex(path));
}

void RunManifest::write(const std::string& out_dir) const {
  nlohmann::json j;
  j["tool"] = "gridless_tomo";
  j["version"] = kVersion;
  j["command"] = command_;
  j["config_digest"] = config_digest_;
  j["seed"] = seed_;
  j["started_utc"] = started_utc_;
  j["outputs"] = nlohmann::json::array();
  for (const auto& [path, digest] : outputs_) {
    j["outputs"].push_back({{"path", path}, {"fnv1a64", digest}});
  }
  write_text_file((std::filesystem::path(out_dir) / "manifest.json").string(), j.dump(2) + "\n");
}

}  // namespace tomo

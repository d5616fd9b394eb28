#pragma once

#include <string>
#include <vector>

#include "tomo/scene3d.hpp"
#include "tomo/types.hpp"

namespace tomo {

/// FNV-1a 64-bit digest, hex encoded.
std::string fnv1a_hex(const std::string& bytes);
std::string fnv1a_file_hex(const std::string& path);  // throws DataError

/// Complex matrices travel as CSV with interleaved re/im columns and a
/// header row "re_1,im_1,...,re_L,im_L"; one array element per row.
std::string complex_matrix_to_csv(const CMat& m);
/// Throws DataError naming the offending line on malformed input.
CMat complex_matrix_from_csv_string(const std::string& text);
CMat complex_matrix_from_csv_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// ASCII "x y z [power]" lines.
std::string cloud_to_xyz(const PointCloud& cloud);
/// ASCII PLY with a vertex element (and power as a float property when
/// present).
std::string cloud_to_ply(const PointCloud& cloud);

/// Minimal polyline chart; one series per (label, x, y) triple.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<SvgSeries>& series);

/// Per-command reproducibility record: configuration digest, seed and the
/// digests of every file the command wrote.
class RunManifest {
 public:
  RunManifest(std::string command, std::string config_digest, std::uint64_t seed);

  /// Registers an output file that already exists on disk.
  void add_output(const std::string& path);
  /// Serializes to JSON and writes <out_dir>/manifest.json.
  void write(const std::string& out_dir) const;

 private:
  std::string command_;
  std::string config_digest_;
  std::uint64_t seed_;
  std::string started_utc_;
  std::vector<std::pair<std::string, std::string>> outputs_;  // path, digest
};

}  // namespace tomo

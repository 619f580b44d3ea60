#pragma once

// CSV records and PPM heatmaps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "divsim/sweep.hpp"

namespace divsim::io {

inline constexpr const char* kCsvHeader =
    "target_ifd,target_dfd,replicate,seed,achieved_ifd,achieved_dfd,achieved_sdi,steps,passes,"
    "completed_components,total_components,performance,comm_density,collab_ratio,failed";

/// Nine significant digits, locale independent.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string csv_row(const SweepRecord& r) {
  std::string s;
  s += format_real(r.target_ifd) + ',' + format_real(r.target_dfd) + ',';
  s += std::to_string(r.replicate) + ',' + std::to_string(r.seed) + ',';
  s += format_real(r.achieved_ifd) + ',' + format_real(r.achieved_dfd) + ',' + format_real(r.achieved_sdi) + ',';
  s += std::to_string(r.steps) + ',' + std::to_string(r.passes) + ',';
  s += std::to_string(r.completed_components) + ',' + std::to_string(r.total_components) + ',';
  s += format_real(r.performance) + ',' + format_real(r.comm_density) + ',' + format_real(r.collab_ratio) + ',';
  s += r.failed ? '1' : '0';
  return s;
}

inline void write_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

struct Rgb {
  unsigned char r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major, top row first

  Rgb at(int x, int y) const { return pixels.at(static_cast<std::size_t>(y) * width + x); }
};

struct Heatmap {
  Image image;
  double min = 0.0;
  double max = 0.0;
};

inline constexpr int kCellPixels = 20;

/// Linear blue (low) to red (high) ramp.
inline Rgb ramp(double v, double lo, double hi) {
  const double t = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.0;
  const auto red = static_cast<unsigned char>(std::lround(255.0 * t));
  return Rgb{red, 0, static_cast<unsigned char>(255 - red)};
}

/// IFD runs left to right, DFD bottom to top; cells absent from the
/// aggregation are black.
inline Heatmap render_heatmap(const std::vector<CellAggregate>& cells, const std::string& measure) {
  if (cells.empty()) throw std::invalid_argument("heatmap: no cells to render");
  std::set<double> xs, ys;
  std::map<std::pair<double, double>, double> values;
  for (const auto& c : cells) {
    xs.insert(c.target_ifd);
    ys.insert(c.target_dfd);
    if (!values.emplace(std::make_pair(c.target_ifd, c.target_dfd), c.mean_of(measure)).second)
      throw std::invalid_argument("heatmap: cell set is not rectangular (duplicate cell)");
  }
  Heatmap hm;
  hm.min = std::min_element(values.begin(), values.end(), [](auto& a, auto& b) { return a.second < b.second; })->second;
  hm.max = std::max_element(values.begin(), values.end(), [](auto& a, auto& b) { return a.second < b.second; })->second;

  const std::vector<double> xv(xs.begin(), xs.end()), yv(ys.begin(), ys.end());
  Image& img = hm.image;
  img.width = static_cast<int>(xv.size()) * kCellPixels;
  img.height = static_cast<int>(yv.size()) * kCellPixels;
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height, Rgb{});
  for (std::size_t ix = 0; ix < xv.size(); ++ix)
    for (std::size_t iy = 0; iy < yv.size(); ++iy) {
      auto it = values.find({xv[ix], yv[iy]});
      if (it == values.end()) continue;
      const Rgb c = ramp(it->second, hm.min, hm.max);
      const int row0 = static_cast<int>(yv.size() - 1 - iy) * kCellPixels;
      const int col0 = static_cast<int>(ix) * kCellPixels;
      for (int y = row0; y < row0 + kCellPixels; ++y)
        std::fill_n(img.pixels.begin() + static_cast<std::ptrdiff_t>(y) * img.width + col0, kCellPixels, c);
    }
  return hm;
}

/// Binary P6 pixmap.
inline void write_ppm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  for (const Rgb& p : img.pixels) {
    const char px[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
    out.write(px, 3);
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

/// Writes `<stem>.ppm` and the `<stem>.range.txt` sidecar holding min/max.
inline Heatmap emit_heatmap(const std::vector<CellAggregate>& cells, const std::string& measure,
                            const std::filesystem::path& ppm_path) {
  Heatmap hm = render_heatmap(cells, measure);
  write_ppm(hm.image, ppm_path);
  auto range_path = ppm_path;
  range_path.replace_extension(".range.txt");
  std::ofstream out(range_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + range_path.string() + "' for writing");
  out << "measure " << measure << "\nmin " << format_real(hm.min) << "\nmax " << format_real(hm.max) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + range_path.string() + "'");
  return hm;
}

}  // namespace divsim::io

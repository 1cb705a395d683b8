#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rpyskit/multi_rpys.hpp"
#include "rpyskit/spectrum.hpp"

namespace rpys {

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rgb {
  int r = 0, g = 0, b = 0;
  std::string hex() const;
  bool operator==(const Rgb &) const = default;
};

/// Sequential palette whose lightness rises monotonically from 0 to 1.
class Palette {
 public:
  /// "viridis" (default) or "greys".
  static Palette named(std::string_view name);
  static std::vector<std::string> names();

  Rgb at(double position) const;
  const std::string &name() const { return name_; }

 private:
  Palette(std::string name, std::vector<Rgb> stops) : name_(std::move(name)), stops_(std::move(stops)) {}
  std::string name_;
  std::vector<Rgb> stops_;
};

/// Relative luminance (WCAG) in [0, 1].
double relative_luminance(const Rgb &c);

struct PlotStyle {
  int width = 960;
  int height = 480;
  std::string color_map = "viridis";
  int axis_label_step = 10;
  std::string missing_cell_color = "#d9d9d9";
  std::string title;

  void validate() const;
};

/// Deviation-by-year line plot with peak markers. Byte-identical output for
/// identical input.
std::string render_spectrogram(const Spectrum &s, const std::vector<int> &peaks, const PlotStyle &style = {});

/// One cell per (citing year, cited year). Ranks are rescaled per row so the
/// row minimum maps to palette position 0 and the row maximum to 1.
std::string render_heatmap(const MultiRpysMatrix &m, const PlotStyle &style = {});

/// Per-row palette positions used by render_heatmap; empty for missing cells.
std::vector<std::vector<std::optional<double>>> heatmap_positions(const MultiRpysMatrix &m);

}  // namespace rpys

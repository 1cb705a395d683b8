#include "rpyskit/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rpys {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

Rgb parse_hex(std::string_view h) {
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  if (h.size() != 7 || h[0] != '#') throw std::invalid_argument("expected #rrggbb colour");
  return {nib(h[1]) * 16 + nib(h[2]), nib(h[3]) * 16 + nib(h[4]), nib(h[5]) * 16 + nib(h[6])};
}

// Round tick spacing (1, 2 or 5 times a power of ten) for about `target` ticks.
double nice_step(double range, int target) {
  if (range <= 0) return 1.0;
  double raw = range / target;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double norm = raw / mag;
  double step = norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10;
  return step * mag;
}

struct Frame {
  double left = 70, right = 20, top = 40, bottom = 50;
};

void open_svg(std::ostringstream &os, const PlotStyle &style, std::string_view kind) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width << "\" height=\""
     << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\" class=\"" << kind
     << "\">\n"
     << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
     << "\" fill=\"#ffffff\"/>\n";
  if (!style.title.empty())
    os << "<text class=\"title\" x=\"" << fmt(style.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(style.title) << "</text>\n";
}

}  // namespace

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

Palette Palette::named(std::string_view name) {
  if (name == "viridis") {
    std::vector<Rgb> stops;
    for (auto h : {"#440154", "#472d7b", "#3b528b", "#2c728e", "#21918c", "#28ae80", "#5ec962", "#addc30", "#fde725"})
      stops.push_back(parse_hex(h));
    return Palette("viridis", std::move(stops));
  }
  if (name == "greys") return Palette("greys", {parse_hex("#000000"), parse_hex("#ffffff")});
  throw RenderError("unknown colour map '" + std::string(name) + "' (available: viridis, greys)");
}

std::vector<std::string> Palette::names() { return {"viridis", "greys"}; }

Rgb Palette::at(double position) const {
  double p = std::clamp(std::isfinite(position) ? position : 0.0, 0.0, 1.0);
  double scaled = p * static_cast<double>(stops_.size() - 1);
  auto i = static_cast<std::size_t>(std::floor(scaled));
  if (i >= stops_.size() - 1) return stops_.back();
  double t = scaled - static_cast<double>(i);
  const auto &a = stops_[i];
  const auto &b = stops_[i + 1];
  auto mix = [t](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * t)); };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

double relative_luminance(const Rgb &c) {
  auto lin = [](int v) {
    double s = v / 255.0;
    return s <= 0.04045 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
  };
  return 0.2126 * lin(c.r) + 0.7152 * lin(c.g) + 0.0722 * lin(c.b);
}

void PlotStyle::validate() const {
  if (width <= 0 || height <= 0) throw RenderError("plot dimensions must be positive");
  if (axis_label_step <= 0) throw RenderError("axis_label_step must be positive");
  Palette::named(color_map);
  try {
    parse_hex(missing_cell_color);
  } catch (const std::invalid_argument &) {
    throw RenderError("missing_cell_color must be #rrggbb");
  }
}

std::string render_spectrogram(const Spectrum &s, const std::vector<int> &peaks, const PlotStyle &style) {
  if (s.empty()) throw RenderError("spectrum is empty; build a spectrum from cited references first");
  style.validate();
  Frame f;
  double pw = style.width - f.left - f.right;
  double ph = style.height - f.top - f.bottom;
  double ymin = std::min(0.0, *std::min_element(s.deviation.begin(), s.deviation.end()));
  double ymax = std::max(0.0, *std::max_element(s.deviation.begin(), s.deviation.end()));
  if (ymax == ymin) ymax = ymin + 1.0;
  double step = nice_step(ymax - ymin, 5);
  ymin = std::floor(ymin / step) * step;
  ymax = std::ceil(ymax / step) * step;

  std::size_t n = s.size();
  auto x_of = [&](std::size_t i) { return f.left + (n == 1 ? pw / 2 : pw * static_cast<double>(i) / (n - 1)); };
  auto y_of = [&](double v) { return f.top + ph * (ymax - v) / (ymax - ymin); };

  std::ostringstream os;
  open_svg(os, style, "spectrogram");
  os << "<g class=\"axes\" stroke=\"#333333\" stroke-width=\"1\">\n"
     << "<line x1=\"" << fmt(f.left) << "\" y1=\"" << fmt(f.top + ph) << "\" x2=\"" << fmt(f.left + pw)
     << "\" y2=\"" << fmt(f.top + ph) << "\"/>\n"
     << "<line x1=\"" << fmt(f.left) << "\" y1=\"" << fmt(f.top) << "\" x2=\"" << fmt(f.left) << "\" y2=\""
     << fmt(f.top + ph) << "\"/>\n"
     << "<line class=\"zero\" x1=\"" << fmt(f.left) << "\" y1=\"" << fmt(y_of(0)) << "\" x2=\"" << fmt(f.left + pw)
     << "\" y2=\"" << fmt(y_of(0)) << "\" stroke-dasharray=\"4 3\"/>\n"
     << "</g>\n";

  os << "<g class=\"xticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    int y = s.year_at(i);
    if (y % style.axis_label_step != 0) continue;
    double x = x_of(i);
    os << "<g class=\"xtick\" data-year=\"" << y << "\"><line x1=\"" << fmt(x) << "\" y1=\"" << fmt(f.top + ph)
       << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(f.top + ph + 5) << "\" stroke=\"#333333\"/><text x=\"" << fmt(x)
       << "\" y=\"" << fmt(f.top + ph + 18) << "\" text-anchor=\"middle\">" << y << "</text></g>\n";
  }
  os << "</g>\n<g class=\"yticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (double v = ymin; v <= ymax + step / 2; v += step) {
    double y = y_of(v);
    os << "<g class=\"ytick\"><line x1=\"" << fmt(f.left - 5) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(f.left)
       << "\" y2=\"" << fmt(y) << "\" stroke=\"#333333\"/><text x=\"" << fmt(f.left - 8) << "\" y=\"" << fmt(y + 3)
       << "\" text-anchor=\"end\">" << fmt(v) << "</text></g>\n";
  }
  os << "</g>\n";
  os << "<text class=\"xlabel\" x=\"" << fmt(f.left + pw / 2) << "\" y=\"" << fmt(style.height - 10.0)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Reference publication year</text>\n"
     << "<text class=\"ylabel\" x=\"16\" y=\"" << fmt(f.top + ph / 2) << "\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " << fmt(f.top + ph / 2)
     << ")\">Deviation from 5-year median</text>\n";

  os << "<polyline class=\"deviation\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < n; ++i) os << (i ? " " : "") << fmt(x_of(i)) << ',' << fmt(y_of(s.deviation[i]));
  os << "\"/>\n";

  std::vector<int> marked(peaks);
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  os << "<g class=\"peaks\" fill=\"#c0392b\">\n";
  for (int y : marked) {
    if (!s.contains(y)) continue;
    std::size_t i = s.index_of(y);
    os << "<circle class=\"peak\" data-year=\"" << y << "\" cx=\"" << fmt(x_of(i)) << "\" cy=\""
       << fmt(y_of(s.deviation[i])) << "\" r=\"3\"><title>" << y << "</title></circle>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::vector<std::vector<std::optional<double>>> heatmap_positions(const MultiRpysMatrix &m) {
  std::vector<std::vector<std::optional<double>>> out;
  for (const auto &row : m.rank) {
    std::optional<double> lo, hi;
    for (const auto &r : row) {
      if (!r) continue;
      lo = lo ? std::min(*lo, *r) : *r;
      hi = hi ? std::max(*hi, *r) : *r;
    }
    std::vector<std::optional<double>> pos(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j]) continue;
      pos[j] = *hi == *lo ? 1.0 : (*row[j] - *lo) / (*hi - *lo);
    }
    out.push_back(std::move(pos));
  }
  return out;
}

std::string render_heatmap(const MultiRpysMatrix &m, const PlotStyle &style) {
  if (m.empty()) throw RenderError("multi-RPYS matrix is empty; build the matrix from a corpus first");
  style.validate();
  auto palette = Palette::named(style.color_map);
  Frame f;
  f.right = 70;  // legend
  double pw = style.width - f.left - f.right;
  double ph = style.height - f.top - f.bottom;
  double cw = pw / static_cast<double>(m.cols());
  double ch = ph / static_cast<double>(m.rows());
  auto positions = heatmap_positions(m);

  std::ostringstream os;
  open_svg(os, style, "heatmap");
  os << "<g class=\"cells\" shape-rendering=\"crispEdges\">\n";
  // Rows are drawn in citing-year order whatever the input order; latest on top.
  std::vector<std::size_t> order(m.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return m.citing_years[a] < m.citing_years[b]; });
  for (std::size_t slot = 0; slot < m.rows(); ++slot) {
    std::size_t i = order[slot];
    double y = f.top + ch * static_cast<double>(m.rows() - 1 - slot);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double x = f.left + cw * static_cast<double>(j);
      os << "<rect class=\"cell";
      if (!positions[i][j]) {
        os << " missing\" fill=\"" << style.missing_cell_color << '"';
      } else {
        os << "\" fill=\"" << palette.at(*positions[i][j]).hex() << "\" data-pos=\"" << fmt3(*positions[i][j])
           << "\" data-rank=\"" << fmt(*m.rank[i][j]) << '"';
      }
      os << " data-citing=\"" << m.citing_years[i] << "\" data-cited=\"" << m.cited_years[j] << "\" x=\"" << fmt(x)
         << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(cw) << "\" height=\"" << fmt(ch) << "\"/>\n";
    }
  }
  os << "</g>\n<g class=\"xticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (std::size_t j = 0; j < m.cols(); ++j) {
    int y = m.cited_years[j];
    if (y % style.axis_label_step != 0) continue;
    double x = f.left + cw * (static_cast<double>(j) + 0.5);
    os << "<g class=\"xtick\" data-year=\"" << y << "\"><line x1=\"" << fmt(x) << "\" y1=\"" << fmt(f.top + ph)
       << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(f.top + ph + 5) << "\" stroke=\"#333333\"/><text x=\"" << fmt(x)
       << "\" y=\"" << fmt(f.top + ph + 18) << "\" text-anchor=\"middle\">" << y << "</text></g>\n";
  }
  os << "</g>\n<g class=\"yticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  int ystep = std::max(1, style.axis_label_step / 2);
  for (std::size_t slot = 0; slot < m.rows(); ++slot) {
    int year = m.citing_years[order[slot]];
    if (year % ystep != 0 && m.rows() > 12) continue;
    double y = f.top + ch * (static_cast<double>(m.rows() - 1 - slot) + 0.5);
    os << "<g class=\"ytick\" data-year=\"" << year << "\"><text x=\"" << fmt(f.left - 6) << "\" y=\"" << fmt(y + 3)
       << "\" text-anchor=\"end\">" << year << "</text></g>\n";
  }
  os << "</g>\n";
  os << "<text class=\"xlabel\" x=\"" << fmt(f.left + pw / 2) << "\" y=\"" << fmt(style.height - 10.0)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Cited reference year</text>\n"
     << "<text class=\"ylabel\" x=\"16\" y=\"" << fmt(f.top + ph / 2) << "\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " << fmt(f.top + ph / 2)
     << ")\">Citing publication year</text>\n";

  double lx = f.left + pw + 20;
  constexpr int kLegendSteps = 20;
  double lh = ph / kLegendSteps;
  os << "<g class=\"legend\">\n";
  for (int k = 0; k < kLegendSteps; ++k) {
    double p = 1.0 - (k + 0.5) / kLegendSteps;
    os << "<rect class=\"legend-step\" x=\"" << fmt(lx) << "\" y=\"" << fmt(f.top + lh * k) << "\" width=\"14\" height=\""
       << fmt(lh) << "\" fill=\"" << palette.at(p).hex() << "\"/>\n";
  }
  os << "<text x=\"" << fmt(lx + 18) << "\" y=\"" << fmt(f.top + 8) << "\" font-family=\"sans-serif\" "
     << "font-size=\"10\">high</text>\n<text x=\"" << fmt(lx + 18) << "\" y=\"" << fmt(f.top + ph)
     << "\" font-family=\"sans-serif\" font-size=\"10\">low</text>\n</g>\n</svg>\n";
  return os.str();
}

}  // namespace rpys

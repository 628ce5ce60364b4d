#include "deeptraj/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "deeptraj/error.hpp"
#include "deeptraj/io.hpp"

namespace deeptraj {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<std::string_view, 10> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  if (std::abs(v) < 0.005) v = 0.0;  // avoid "-0.00"
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

class Canvas {
 public:
  Canvas(Range x, Range y, const std::string& title, bool x_ticks = true) : x_(x), y_(y) {
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
             num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + ' ' + num(kHeight) + "\">\n";
    body_ += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
             "\" fill=\"white\"/>\n";
    body_ += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"15\">" + escape(title) + "</text>\n";
    body_ += "<rect class=\"frame\" x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
             num(kWidth - kLeft - kRight) + "\" height=\"" + num(kHeight - kTop - kBottom) +
             "\" fill=\"none\" stroke=\"#444\"/>\n";
    axis_labels(x_ticks);
  }

  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

  void add(const std::string& element) { body_ += element + '\n'; }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  void axis_labels(bool x_ticks) {
    for (int i = 0; i <= 4; ++i) {
      const double fx = x_.lo + (x_.hi - x_.lo) * i / 4.0;
      const double fy = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      if (x_ticks)
        body_ += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(kHeight - kBottom + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + num(fx) + "</text>\n";
      body_ += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(fy) + "</text>\n";
    }
  }

  Range x_, y_;
  std::string body_;
};

std::size_t group_of(const std::vector<std::size_t>& groups, std::size_t i) {
  return groups.empty() ? 0 : groups[i];
}

void check_groups(const std::vector<std::size_t>& groups, std::size_t n) {
  require(groups.empty() || groups.size() == n, ErrorKind::SizeMismatch, "one group per plotted item is required");
}

std::string polyline(const Canvas& canvas, std::span<const double> ys, std::string_view color, const char* cls,
                     double width) {
  std::string pts;
  for (std::size_t t = 0; t < ys.size(); ++t) {
    if (t) pts += ' ';
    pts += num(canvas.px(static_cast<double>(t))) + ',' + num(canvas.py(ys[t]));
  }
  return std::string("<polyline class=\"") + cls + "\" fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"" + num(width) + "\" points=\"" + pts + "\"/>";
}

}  // namespace

std::string_view to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::Trajectories: return "trajectories";
    case PlotKind::EmbeddingScatter: return "embedding_scatter";
    case PlotKind::ChBars: return "ch_bars";
    case PlotKind::MeanCurves: return "mean_curves";
  }
  return "?";
}

PlotKind parse_plot_kind(std::string_view name) {
  for (PlotKind k : {PlotKind::Trajectories, PlotKind::EmbeddingScatter, PlotKind::ChBars, PlotKind::MeanCurves})
    if (name == to_string(k)) return k;
  throw Error(ErrorKind::InvalidArgument, "unknown plot kind '" + std::string(name) + "'");
}

std::string_view group_color(std::size_t index) { return kPalette[index % kPalette.size()]; }

std::string render_trajectories(const Matrix& values, const std::vector<std::size_t>& groups,
                                const std::string& title) {
  require(values.rows() > 0 && values.cols() > 0, ErrorKind::EmptyData, "no trajectories to plot");
  check_groups(groups, values.rows());
  Range x, y;
  x.add(0.0);
  x.add(static_cast<double>(values.cols() - 1));
  for (double v : values.values()) y.add(v);
  y.pad();
  Canvas canvas(x, y, title);
  for (std::size_t i = 0; i < values.rows(); ++i)
    canvas.add(polyline(canvas, values.row(i), group_color(group_of(groups, i)), "trajectory", 1.0));
  return canvas.finish();
}

std::string render_embedding_scatter(const Matrix& points, const std::vector<std::size_t>& groups,
                                     const std::string& title) {
  require(points.rows() > 0, ErrorKind::EmptyData, "no points to plot");
  require(points.cols() >= 2, ErrorKind::ShapeMismatch, "scatter needs two coordinates per point");
  check_groups(groups, points.rows());
  Range x, y;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    x.add(points(i, 0));
    y.add(points(i, 1));
  }
  x.pad();
  y.pad();
  Canvas canvas(x, y, title);
  for (std::size_t i = 0; i < points.rows(); ++i)
    canvas.add("<circle class=\"point\" cx=\"" + num(canvas.px(points(i, 0))) + "\" cy=\"" +
               num(canvas.py(points(i, 1))) + "\" r=\"3.00\" fill=\"" +
               std::string(group_color(group_of(groups, i))) + "\" fill-opacity=\"0.8\"/>");
  return canvas.finish();
}

std::string render_ch_bars(const std::vector<std::size_t>& ks, const std::vector<double>& values,
                           std::size_t highlight, const std::string& title) {
  require(!ks.empty(), ErrorKind::EmptyData, "no criterion values to plot");
  require(ks.size() == values.size(), ErrorKind::SizeMismatch, "one value per k is required");
  Range x, y;
  x.add(-0.5);
  x.add(static_cast<double>(ks.size()) - 0.5);
  y.add(0.0);
  for (double v : values)
    if (std::isfinite(v)) y.add(v);
  y.pad();
  y.lo = 0.0;
  Canvas canvas(x, y, title, false);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double v = std::isfinite(values[i]) ? values[i] : y.hi;
    const double left = canvas.px(static_cast<double>(i) - 0.35);
    const double right = canvas.px(static_cast<double>(i) + 0.35);
    const double top = canvas.py(v);
    const double base = canvas.py(0.0);
    canvas.add("<rect class=\"bar\" x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) +
               "\" height=\"" + num(base - top) + "\" fill=\"" +
               std::string(group_color(i == highlight ? 1 : 0)) + "\"/>");
    canvas.add("<text x=\"" + num(0.5 * (left + right)) + "\" y=\"" + num(base + 32) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">k=" +
               std::to_string(ks[i]) + "</text>");
  }
  return canvas.finish();
}

std::string render_mean_curves(const Matrix& means, const std::string& title) {
  require(means.rows() > 0 && means.cols() > 0, ErrorKind::EmptyData, "no cluster means to plot");
  Range x, y;
  x.add(0.0);
  x.add(static_cast<double>(means.cols() - 1));
  for (double v : means.values()) y.add(v);
  y.pad();
  Canvas canvas(x, y, title);
  for (std::size_t j = 0; j < means.rows(); ++j)
    canvas.add(polyline(canvas, means.row(j), group_color(j), "mean", 2.5));
  return canvas.finish();
}

void write_svg(const std::filesystem::path& path, const std::string& svg) { write_text(path, svg); }

}  // namespace deeptraj

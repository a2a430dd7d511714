#include "semisup/svg_plot.hpp"

#include "semisup/error.hpp"
#include "semisup/number_format.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <tuple>

namespace semisup {

namespace {

constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 60.0;

constexpr std::array<Method, 4> kSeriesOrder = {Method::Supervised, Method::SelfLearned, Method::EmSoft,
                                                Method::Constrained};

std::string fixed(double v, int digits = 2) {
  if (std::abs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;  // no "-0.00"
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
  return std::string(buf.data(), res.ptr);
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
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

std::string series_label(Method method) {
  switch (method) {
    case Method::Supervised: return "supervised";
    case Method::SelfLearned: return "self-learned";
    case Method::EmSoft: return "soft EM";
    case Method::Constrained: return "constrained";
  }
  return "";
}

double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

int tick_decimals(double step) { return std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9))); }

}  // namespace

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Error: return "error";
    case Metric::JointLl: return "joint_ll";
    case Metric::MarginalLl: return "marginal_ll";
  }
  return "unknown";
}

Metric parse_metric(std::string_view text) {
  for (Metric m : {Metric::Error, Metric::JointLl, Metric::MarginalLl}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorCode::UnknownMetric,
              "unknown metric '" + std::string(text) + "' (expected error, joint_ll or marginal_ll)");
}

std::string_view metric_axis_label(Metric metric) {
  switch (metric) {
    case Metric::Error: return "mean error rate";
    case Metric::JointLl: return "mean log-likelihood per object (nats)";
    case Metric::MarginalLl: return "mean marginal log-likelihood per object (nats)";
  }
  return "";
}

double cell_mean(const CurveCell& c, Metric m) {
  return m == Metric::Error ? c.mean_error : m == Metric::JointLl ? c.mean_joint_ll : c.mean_marginal_ll;
}
double cell_se(const CurveCell& c, Metric m) {
  return m == Metric::Error ? c.se_error : m == Metric::JointLl ? c.se_joint_ll : c.se_marginal_ll;
}
double cell_sd(const CurveCell& c, Metric m) {
  return m == Metric::Error ? c.sd_error : m == Metric::JointLl ? c.sd_joint_ll : c.sd_marginal_ll;
}

const std::string& PlotStyle::color(Method method) const {
  switch (method) {
    case Method::Supervised: return supervised_color;
    case Method::SelfLearned: return self_learned_color;
    case Method::EmSoft: return em_soft_color;
    case Method::Constrained: return constrained_color;
  }
  return supervised_color;
}

std::vector<PlotGroup> group_cells(const std::vector<CurveCell>& cells) {
  std::map<std::tuple<std::string, int, Index>, PlotGroup> groups;
  for (const auto& c : cells) {
    auto& g = groups[{c.dataset, static_cast<int>(c.method.kind), c.n_labeled}];
    g.dataset = c.dataset;
    g.kind = c.method.kind;
    g.n_labeled = c.n_labeled;
    g.cells.push_back(c);
  }
  std::vector<PlotGroup> out;
  out.reserve(groups.size());
  for (auto& [key, g] : groups) out.push_back(std::move(g));
  return out;
}

std::string render_svg(const PlotGroup& group, Metric metric, const PlotStyle& style) {
  std::vector<Index> sizes;
  for (const auto& c : group.cells) {
    if (c.n_unlabeled <= 0) {
      throw Error(ErrorCode::InvalidSpec, "unlabeled size " + std::to_string(c.n_unlabeled) +
                                              " cannot be placed on a log2 axis");
    }
    sizes.push_back(c.n_unlabeled);
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  // Per method, cells ordered by unlabeled size.
  std::map<Method, std::vector<const CurveCell*>> series;
  for (const auto& c : group.cells) series[c.method.method].push_back(&c);
  for (auto& [m, pts] : series) {
    std::stable_sort(pts.begin(), pts.end(),
                     [](const CurveCell* a, const CurveCell* b) { return a->n_unlabeled < b->n_unlabeled; });
  }

  auto half_band = [&](const CurveCell& c) {
    return style.band == BandKind::StandardError ? cell_se(c, metric) : cell_sd(c, metric);
  };
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (const auto& c : group.cells) {
    const double m = cell_mean(c, metric), b = half_band(c);
    if (!std::isfinite(m) || !std::isfinite(b)) continue;
    lo = std::min(lo, m - b);
    hi = std::max(hi, m + b);
  }
  if (!(lo <= hi)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12 * (1.0 + std::abs(hi))) {
    const double pad = std::max(0.5 * std::abs(hi), 0.5);
    lo -= pad, hi += pad;
  }
  const double step = nice_step(hi - lo, 5);
  lo = std::floor(lo / step) * step;
  hi = std::ceil(hi / step) * step;

  const double w = style.width, h = style.height;
  const double plot_w = w - kMarginLeft - kMarginRight;
  const double plot_h = h - kMarginTop - kMarginBottom;
  const double lx0 = std::log2(static_cast<double>(sizes.front()));
  const double lx1 = std::log2(static_cast<double>(sizes.back()));
  auto px = [&](Index n) {
    if (lx1 == lx0) return kMarginLeft + 0.5 * plot_w;
    return kMarginLeft + (std::log2(static_cast<double>(n)) - lx0) / (lx1 - lx0) * plot_w;
  };
  auto py = [&](double v) { return kMarginTop + (hi - v) / (hi - lo) * plot_h; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
    << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height << "\" fill=\"#FFFFFF\"/>\n"
    << "<text x=\"" << fixed(kMarginLeft + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape_xml(group.dataset) << ", " << to_string(group.kind) << ", " << group.n_labeled << " labeled</text>\n";

  // Axes, grid and ticks.
  s << "<g class=\"axes\" stroke=\"#444444\" stroke-width=\"1\">\n"
    << "<line x1=\"" << fixed(kMarginLeft) << "\" y1=\"" << fixed(kMarginTop + plot_h) << "\" x2=\""
    << fixed(kMarginLeft + plot_w) << "\" y2=\"" << fixed(kMarginTop + plot_h) << "\"/>\n"
    << "<line x1=\"" << fixed(kMarginLeft) << "\" y1=\"" << fixed(kMarginTop) << "\" x2=\"" << fixed(kMarginLeft)
    << "\" y2=\"" << fixed(kMarginTop + plot_h) << "\"/>\n";
  for (Index n : sizes) {
    const double x = px(n);
    s << "<line class=\"xtick\" x1=\"" << fixed(x) << "\" y1=\"" << fixed(kMarginTop + plot_h) << "\" x2=\""
      << fixed(x) << "\" y2=\"" << fixed(kMarginTop + plot_h + 5) << "\"/>\n";
  }
  const int decimals = tick_decimals(step);
  const int n_yticks = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= n_yticks; ++i) {
    const double y = py(lo + i * step);
    s << "<line class=\"ytick\" x1=\"" << fixed(kMarginLeft - 5) << "\" y1=\"" << fixed(y) << "\" x2=\""
      << fixed(kMarginLeft) << "\" y2=\"" << fixed(y) << "\"/>\n";
  }
  s << "</g>\n<g class=\"tick-labels\" fill=\"#000000\">\n";
  for (Index n : sizes) {
    s << "<text x=\"" << fixed(px(n)) << "\" y=\"" << fixed(kMarginTop + plot_h + 18)
      << "\" text-anchor=\"middle\">" << n << "</text>\n";
  }
  for (int i = 0; i <= n_yticks; ++i) {
    s << "<text x=\"" << fixed(kMarginLeft - 8) << "\" y=\"" << fixed(py(lo + i * step) + 4)
      << "\" text-anchor=\"end\">" << fixed(lo + i * step, decimals) << "</text>\n";
  }
  s << "</g>\n"
    << "<text x=\"" << fixed(kMarginLeft + plot_w / 2) << "\" y=\"" << fixed(h - 15)
    << "\" text-anchor=\"middle\">number of unlabeled objects</text>\n"
    << "<text x=\"18\" y=\"" << fixed(kMarginTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << fixed(kMarginTop + plot_h / 2) << ")\">" << metric_axis_label(metric) << "</text>\n";

  // Bands first so every mean curve is drawn on top.
  for (Method m : kSeriesOrder) {
    const auto it = series.find(m);
    if (it == series.end()) continue;
    s << "<polygon class=\"band\" fill=\"" << style.color(m) << "\" fill-opacity=\"" << fixed(style.band_opacity)
      << "\" stroke=\"none\" points=\"";
    const auto& pts = it->second;
    for (const auto* c : pts) s << fixed(px(c->n_unlabeled)) << ',' << fixed(py(cell_mean(*c, metric) + half_band(*c))) << ' ';
    for (auto r = pts.rbegin(); r != pts.rend(); ++r) {
      s << fixed(px((*r)->n_unlabeled)) << ',' << fixed(py(cell_mean(**r, metric) - half_band(**r)));
      if (std::next(r) != pts.rend()) s << ' ';
    }
    s << "\"/>\n";
  }
  for (Method m : kSeriesOrder) {
    const auto it = series.find(m);
    if (it == series.end()) continue;
    s << "<polyline class=\"mean\" fill=\"none\" stroke=\"" << style.color(m) << "\" stroke-width=\""
      << fixed(style.line_width) << "\" points=\"";
    const auto& pts = it->second;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s << ' ';
      s << fixed(px(pts[i]->n_unlabeled)) << ',' << fixed(py(cell_mean(*pts[i], metric)));
    }
    s << "\"/>\n";
  }

  // Legend.
  double ly = kMarginTop + 10;
  const double lx = kMarginLeft + plot_w + 15;
  for (Method m : kSeriesOrder) {
    if (!series.count(m)) continue;
    s << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 24) << "\" y2=\""
      << fixed(ly) << "\" stroke=\"" << style.color(m) << "\" stroke-width=\"" << fixed(style.line_width) << "\"/>\n"
      << "<text x=\"" << fixed(lx + 30) << "\" y=\"" << fixed(ly + 4) << "\">" << series_label(m) << "</text>\n";
    ly += 20;
  }
  s << "</svg>\n";
  return s.str();
}

std::string plot_file_name(const PlotGroup& group, Metric metric) {
  return group.dataset + "_" + std::string(to_string(group.kind)) + "_nl" + std::to_string(group.n_labeled) + "_" +
         std::string(to_string(metric)) + ".svg";
}

std::vector<std::filesystem::path> write_plots(const std::vector<CurveCell>& cells, Metric metric,
                                               const std::filesystem::path& out_dir, const PlotStyle& style) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + out_dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& group : group_cells(cells)) {
    const auto path = out_dir / plot_file_name(group, metric);
    std::ofstream out(path, std::ios::binary);
    out << render_svg(group, metric, style);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace semisup

#include "doctest.h"
#include "temp_dir.hpp"

#include "semisup/error.hpp"
#include "semisup/svg_plot.hpp"

#include <regex>

using namespace semisup;

namespace {

std::vector<CurveCell> curve_cells(const std::string& dataset, ClassifierKind kind, Index n_l) {
  std::vector<CurveCell> cells;
  double offset = 0.0;
  for (Method m : {Method::Supervised, Method::SelfLearned, Method::Constrained}) {
    for (Index n_u : {2, 8, 32, 128, 512, 2048}) {
      CurveCell c;
      c.dataset = dataset;
      c.method = {m, kind};
      c.n_labeled = n_l;
      c.n_unlabeled = n_u;
      c.mean_error = 0.3 - offset - 0.01 * std::log2(static_cast<double>(n_u));
      c.se_error = 0.01;
      c.sd_error = 0.1;
      c.mean_joint_ll = -2.0 + offset + 0.02 * std::log2(static_cast<double>(n_u));
      c.se_joint_ll = 0.02;
      c.sd_joint_ll = 0.3;
      c.mean_marginal_ll = -1.5;
      c.n_reps = 100;
      cells.push_back(c);
    }
    offset += 0.05;
  }
  return cells;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("metric names") {
  CHECK(parse_metric("error") == Metric::Error);
  CHECK(parse_metric("joint_ll") == Metric::JointLl);
  CHECK(parse_metric("marginal_ll") == Metric::MarginalLl);
  try {
    parse_metric("auc");
    FAIL("expected UnknownMetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownMetric);
  }
  CHECK(metric_axis_label(Metric::JointLl) == "mean log-likelihood per object (nats)");
}

TEST_CASE("plot style constants") {
  const PlotStyle s;
  CHECK(s.color(Method::Supervised) == "#000000");
  CHECK(s.color(Method::SelfLearned) == "#E8A13A");
  CHECK(s.color(Method::Constrained) == "#3A5FA8");
  CHECK(s.band_opacity == 0.25);
}

TEST_CASE("one figure has three curves of six vertices") {
  const auto groups = group_cells(curve_cells("haberman", ClassifierKind::Nmc, 4));
  REQUIRE(groups.size() == 1);
  const std::string svg = render_svg(groups[0], Metric::JointLl);
  CHECK(count(svg, "<polyline") == 3);
  const std::regex poly("<polyline[^>]*points=\"([^\"]*)\"");
  int curves = 0;
  for (std::sregex_iterator it(svg.begin(), svg.end(), poly), end; it != end; ++it) {
    const std::string pts = (*it)[1];
    CHECK(count(pts, ",") == 6);
    ++curves;
  }
  CHECK(curves == 3);
  CHECK(count(svg, "<polygon class=\"band\"") == 3);
  CHECK(count(svg, "fill-opacity=\"0.25\"") == 3);
  for (const char* color : {"#000000", "#E8A13A", "#3A5FA8"}) CHECK(svg.find(color) != std::string::npos);
  CHECK(svg.find("mean log-likelihood per object (nats)") != std::string::npos);
  CHECK(count(svg, "class=\"xtick\"") == 6);
  for (const char* tick : {">2<", ">8<", ">32<", ">128<", ">512<", ">2048<"}) CHECK(svg.find(tick) != std::string::npos);
}

TEST_CASE("x positions follow a log2 scale") {
  const auto groups = group_cells(curve_cells("pima", ClassifierKind::Nmc, 4));
  const std::string svg = render_svg(groups[0], Metric::Error);
  const std::regex tick("<line class=\"xtick\" x1=\"([0-9.]+)\"");
  std::vector<double> xs;
  for (std::sregex_iterator it(svg.begin(), svg.end(), tick), end; it != end; ++it) xs.push_back(std::stod((*it)[1]));
  REQUIRE(xs.size() == 6);
  for (std::size_t i = 2; i < xs.size(); ++i) CHECK(xs[i] - xs[i - 1] == doctest::Approx(xs[1] - xs[0]).epsilon(1e-3));
}

TEST_CASE("rendering is deterministic and grouped per figure") {
  auto cells = curve_cells("wdbc", ClassifierKind::Nmc, 4);
  const auto more = curve_cells("wdbc", ClassifierKind::Nmc, 10);
  cells.insert(cells.end(), more.begin(), more.end());
  const auto lda = curve_cells("haberman", ClassifierKind::Lda, 100);
  cells.insert(cells.end(), lda.begin(), lda.end());
  const auto groups = group_cells(cells);
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].dataset == "haberman");
  CHECK(groups[1].n_labeled == 4);
  CHECK(render_svg(groups[1], Metric::Error) == render_svg(group_cells(cells)[1], Metric::Error));
  CHECK(plot_file_name(groups[2], Metric::JointLl) == "wdbc_nmc_nl10_joint_ll.svg");

  testing_support::TempDir dir("plots");
  const auto paths = write_plots(cells, Metric::JointLl, dir.path());
  CHECK(paths.size() == 3);
  const std::string first = testing_support::read_file(paths[0]);
  write_plots(cells, Metric::JointLl, dir.path());
  CHECK(testing_support::read_file(paths[0]) == first);
}

TEST_CASE("soft EM curves get their own color") {
  auto cells = curve_cells("sonar", ClassifierKind::Lda, 100);
  auto em = cells.front();
  em.method.method = Method::EmSoft;
  cells.push_back(em);
  const std::string svg = render_svg(group_cells(cells)[0], Metric::MarginalLl);
  CHECK(count(svg, "<polyline") == 4);
  CHECK(svg.find(PlotStyle{}.em_soft_color) != std::string::npos);
}

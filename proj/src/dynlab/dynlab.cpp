#include "geoflow/dynlab/dynlab.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "geoflow/error.hpp"
#include "geoflow/io.hpp"
#include "geoflow/random.hpp"

namespace geoflow {

namespace {

constexpr double kFlowPiece = 8.0;

bool in_window(const PhaseBox& box, const PhasePoint& w) {
  return std::abs(angle_difference(w.dir, box.center().dir)) < box.angle_halfwidth();
}

}  // namespace

std::pair<PhasePoint, Isometry> reduce_to_F(const FundamentalDomain& domain, const PhasePoint& v) {
  const auto r = domain.reduce(v);
  return {r.phase, r.to_domain};
}

PhasePoint flow_in_quotient(const FundamentalDomain& domain, const PhasePoint& v, double t) {
  PhasePoint cur = domain.reduce(v).phase;
  double left = t;
  while (std::abs(left) > 0.0) {
    const double piece = std::clamp(left, -kFlowPiece, kFlowPiece);
    cur = domain.reduce(flow(cur, piece)).phase;
    left -= piece;
  }
  return cur;
}

PhasePoint RealizedGeodesic::at(double s) const {
  if (segments.empty()) throw Error(ErrorKind::invalid_argument, "empty geodesic realization");
  auto it = std::upper_bound(segments.begin(), segments.end(), s,
                             [](double x, const FundamentalDomain::TraceSegment& seg) { return x < seg.t_begin; });
  if (it != segments.begin()) --it;
  return flow(it->start, s - it->t_begin);
}

RealizedGeodesic realize_geodesic(const FundamentalDomain& domain, const GeodesicClass& c, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_argument, "sampling step must be positive");
  const TraceClass tc = class_axis(domain.surface(), c);
  if (tc.type != IsometryType::hyperbolic) throw Error(ErrorKind::invalid_argument, "class is not hyperbolic");
  RealizedGeodesic g;
  g.word = c.canonical_word;
  g.length = c.length;
  g.segments = domain.trace(line_foot(tc.attracting, tc.repelling), 0.0, c.length);
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(c.length / step)));
  g.step = c.length / static_cast<double>(n);
  g.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) g.samples.push_back(domain.reduce(g.at(static_cast<double>(k) * g.step)).phase);
  return g;
}

double arclength_in_box(const RealizedGeodesic& g, const PhaseBox& box, double step) {
  const HyperboloidPoint c = HyperboloidPoint::from_disk(box.center().base);
  double total = 0.0;
  for (const auto& seg : g.segments) {
    const LineInterval r = LineInterval{0.0, seg.length}.intersect(GeodesicFrame(seg.start).ball(c, box.position_radius()));
    if (r.empty()) continue;
    if (box.angle_halfwidth() >= std::numbers::pi) {
      total += r.length();
      continue;
    }
    const auto cells = static_cast<std::size_t>(std::ceil(r.length() / step));
    const double w = r.length() / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      if (in_window(box, flow(seg.start, r.lo + (static_cast<double>(i) + 0.5) * w))) total += w;
    }
  }
  return total;
}

CrossingRecord crossing_record(const RealizedGeodesic& g, const std::vector<PhaseBox>& boxes, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_argument, "segment length must be positive");
  CrossingRecord rec;
  rec.word = g.word;
  rec.t = g.length;
  rec.cells = static_cast<std::size_t>(std::max(1.0, std::ceil(g.length / eps)));
  rec.counts.assign(boxes.size(), 0);
  const double w = g.length / static_cast<double>(rec.cells);
  for (std::size_t k = 0; k < rec.cells; ++k) {
    const PhasePoint p = g.at((static_cast<double>(k) + 0.5) * w);
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      if (boxes[b].contains_reduced(p)) ++rec.counts[b];
    }
  }
  return rec;
}

OrbitCatalog::OrbitCatalog(const FundamentalDomain& domain, const SpectrumTable& table, double t_max, double step)
    : step_(step) {
  if (t_max > table.cutoff() + 1e-12) throw Error(ErrorKind::out_of_range, "catalog length beyond the table cutoff");
  for (const auto& row : table.rows()) {
    if (row.length > t_max) break;
    if (row.primitive) orbits_.push_back(realize_geodesic(domain, row, step));
  }
}

double OrbitCatalog::equidistribution(const PhaseBox& box, double t) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& g : orbits_) {
    if (g.length > t) break;
    sum += arclength_in_box(g, box, step_) / g.length;
    ++n;
  }
  if (n == 0) throw Error(ErrorKind::out_of_range, "no periodic orbit of length <= t");
  return sum / static_cast<double>(n);
}

MeasureEstimate OrbitCatalog::mean_crossings(const PhaseBox& box, double t, double eps) const {
  MeanAccumulator acc;
  for (const auto& g : orbits_) {
    if (g.length <= t - eps) continue;
    if (g.length > t + eps) break;
    acc.add(static_cast<double>(crossing_record(g, {box}, eps).counts[0]));
  }
  if (acc.count == 0) throw Error(ErrorKind::out_of_range, "no periodic orbit in the length window");
  return {acc.mean(), acc.std_error(), acc.count, 0};
}

double equidistribution_stat(const FundamentalDomain& domain, const SpectrumTable& table, const PhaseBox& box,
                             double t, double step) {
  return OrbitCatalog(domain, table, t, step).equidistribution(box, t);
}

MeasureEstimate mixing_correlation(const FundamentalDomain& domain, const PhaseBox& b1, const PhaseBox& b2, double t,
                                   std::size_t n_samples, std::uint64_t seed) {
  constexpr std::size_t kChunk = 1 << 16;
  const double r = b1.position_radius();
  const double alpha = b1.angle_halfwidth();
  const Isometry to_center = Isometry::translation_to(b1.center().base);
  MeanAccumulator acc;
  for (std::size_t chunk = 0; chunk * kChunk < n_samples; ++chunk) {
    std::mt19937_64 rng = chunk_rng(seed, chunk);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t end = std::min(n_samples, (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const double rho = std::acosh(1.0 + u(rng) * (std::cosh(r) - 1.0));
      const double theta = kTwoPi * u(rng);
      const double dir = alpha * (2.0 * u(rng) - 1.0);
      // Direction is drawn at the origin and carried along by the translation.
      const PhasePoint v = apply_phase(
          to_center, PhasePoint(DiskPoint(std::polar(std::tanh(rho / 2.0), theta)), 0.0));
      const PhasePoint sample(v.base, b1.center().dir + dir);
      if (!domain.contains(sample.base)) {
        acc.add(0.0);
        continue;
      }
      acc.add(b2.contains_reduced(flow_in_quotient(domain, sample, t)) ? 1.0 : 0.0);
    }
  }
  const double scale = 2.0 * std::numbers::pi * (std::cosh(r) - 1.0) * (alpha / std::numbers::pi) /
                       domain.surface().area();
  return {acc.mean() * scale, acc.std_error() * scale, acc.count, 0};
}

AsymptoticReport asym_compare(const GridSamples& f, const GridSamples& g, double alpha, AsymptoticRelation relation) {
  if (f.t_grid != g.t_grid || f.eps_grid != g.eps_grid || f.t_grid.empty() || f.eps_grid.empty())
    throw Error(ErrorKind::invalid_argument, "samples must share a nonempty (t, eps) grid");
  const std::size_t nt = f.t_grid.size(), ne = f.eps_grid.size();
  if (f.values.size() != nt || g.values.size() != nt)
    throw Error(ErrorKind::invalid_argument, "sample rows do not match the t grid");
  std::vector<std::vector<double>> d(nt, std::vector<double>(ne));
  for (std::size_t i = 0; i < nt; ++i) {
    if (f.values[i].size() != ne || g.values[i].size() != ne)
      throw Error(ErrorKind::invalid_argument, "sample columns do not match the eps grid");
    for (std::size_t j = 0; j < ne; ++j) {
      if (!(f.values[i][j] > 0.0) || !(g.values[i][j] > 0.0))
        throw Error(ErrorKind::invalid_argument, "asymptotic comparison needs positive samples");
      d[i][j] = std::abs(std::log(f.values[i][j] / g.values[i][j]));
    }
  }
  for (double e : f.eps_grid) {
    if (!(e > 0.0)) throw Error(ErrorKind::invalid_argument, "eps grid must be positive");
  }

  AsymptoticReport r;
  r.relation = relation;
  r.t_grid = f.t_grid;
  r.eps_grid = f.eps_grid;
  r.f = f.values;
  r.g = g.values;
  r.alpha = relation == AsymptoticRelation::bowtie ? 0.0 : alpha;
  const std::size_t last = static_cast<std::size_t>(std::max_element(f.t_grid.begin(), f.t_grid.end()) - f.t_grid.begin());
  if (relation != AsymptoticRelation::sim) {
    for (std::size_t i = 0; i < nt; ++i) {
      if (i == last && nt > 1) continue;
      for (std::size_t j = 0; j < ne; ++j) r.K = std::max(r.K, (d[i][j] - r.alpha) / f.eps_grid[j]);
    }
  }
  r.passed = true;
  for (std::size_t j = 0; j < ne; ++j) {
    const double margin = r.K * f.eps_grid[j] + r.alpha - d[last][j];
    r.margins.push_back(margin);
    if (margin < -1e-12) r.passed = false;
  }
  const char* bound = relation == AsymptoticRelation::sim      ? "alpha"
                      : relation == AsymptoticRelation::bowtie ? "K eps"
                                                               : "K eps + alpha";
  r.quantifier_template = std::string("finite-grid surrogate: for each eps in the grid, |ln f(t*, eps) / g(t*, eps)| <= ") +
                          bound + " at the largest sampled t*, with K >= 0 the least slope satisfying the bound at "
                                  "every smaller sampled t; stands in for: exists K, for all alpha > 0, exists eps0, "
                                  "for all eps < eps0, exists t0, for all t > t0";
  return r;
}

CountingSuiteReport counting_suite(const SpectrumTable& table, const std::vector<double>& t_grid, double eps,
                                   double h, const CountingBox* box, const OrbitCatalog* catalog, double alpha) {
  if (t_grid.empty()) throw Error(ErrorKind::invalid_argument, "empty t grid");
  CountingSuiteReport rep;
  GridSamples f{{}, {eps}, {}}, g{{}, {eps}, {}};
  std::vector<double> window_err, cumulative_err;
  for (double t : t_grid) {
    if (t + eps > table.cutoff() + 1e-12) throw Error(ErrorKind::out_of_range, "t + eps beyond the table cutoff");
    const double window = static_cast<double>(table.count_window(t, eps, true));
    const double window_pred = 2.0 * eps * std::exp(h * t) / t;
    rep.rows.push_back({"window", t, window, window_pred, window / window_pred, std::sqrt(window)});
    window_err.push_back(std::abs(window / window_pred - 1.0));
    if (window > 0.0) {
      // Empty windows below the systole are reported but left out of the comparison.
      f.t_grid.push_back(t);
      f.values.push_back({window});
      g.values.push_back({window_pred});
    }

    const double cumulative = static_cast<double>(table.count_P(t, true));
    const double cumulative_pred = std::exp(h * t) / (h * t);
    rep.rows.push_back({"cumulative", t, cumulative, cumulative_pred, cumulative / cumulative_pred, std::sqrt(cumulative)});
    cumulative_err.push_back(std::abs(cumulative / cumulative_pred - 1.0));

    if (box != nullptr) {
      const double m = box->measure.value;
      const double n_implied = window * t * m / eps;
      const double n_pred = 2.0 * std::exp(h * t) * m;
      rep.rows.push_back({"implied_N", t, n_implied, n_pred, n_implied / n_pred,
                          n_implied * std::hypot(1.0 / std::sqrt(std::max(window, 1.0)), box->measure.std_error / m)});
      if (catalog != nullptr && window > 0.0) {
        const MeasureEstimate c = catalog->mean_crossings(box->box, t, eps);
        const double pred = m * t / eps;
        rep.rows.push_back({"crossings", t, c.value, pred, c.value / pred, c.std_error});
      }
    }
  }
  const auto decreasing = [](const std::vector<double>& e) {
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (!(e[i] < e[i - 1])) return false;
    }
    return true;
  };
  rep.window_approach = decreasing(window_err);
  rep.cumulative_approach = decreasing(cumulative_err);
  g.t_grid = f.t_grid;
  if (!f.t_grid.empty()) rep.window_relation = asym_compare(f, g, alpha, AsymptoticRelation::cong);
  return rep;
}

std::string counting_csv(const CountingSuiteReport& report) {
  std::ostringstream out;
  out << "law,t,observed,predicted,ratio,std_error\n";
  for (const auto& r : report.rows) {
    out << r.law << ',' << format_double(r.t) << ',' << format_double(r.observed) << ',' << format_double(r.predicted)
        << ',' << format_double(r.ratio) << ',' << format_double(r.std_error) << '\n';
  }
  return out.str();
}

std::string asymptotic_report_json(const AsymptoticReport& report) {
  nlohmann::ordered_json j;
  j["relation"] = report.relation == AsymptoticRelation::sim      ? "sim"
                  : report.relation == AsymptoticRelation::bowtie ? "bowtie"
                                                                  : "cong";
  j["quantifier_template"] = report.quantifier_template;
  j["t_grid"] = report.t_grid;
  j["eps_grid"] = report.eps_grid;
  j["f"] = report.f;
  j["g"] = report.g;
  j["alpha"] = report.alpha;
  j["K"] = report.K;
  j["margins"] = report.margins;
  j["passed"] = report.passed;
  return j.dump(2) + "\n";
}

}  // namespace geoflow

#include "geoflow/mme/mme.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>

#include "geoflow/error.hpp"
#include "geoflow/random.hpp"

namespace geoflow {

namespace {

std::size_t draw_atom(const BoundaryMeasure& mu, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, mu.total_mass());
  const auto& cum = mu.cumulative();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u(rng));
  return std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
}

// Uniform point of ball(c, r) for the hyperbolic area element.
DiskPoint uniform_in_ball(const Isometry& to_center, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = std::acosh(1.0 + u(rng) * (std::cosh(r) - 1.0));
  const double theta = kTwoPi * u(rng);
  return apply(to_center, DiskPoint(std::polar(std::tanh(rho / 2.0), theta)));
}

// Fraction of uniform samples of ball(c, r) that fall in F.
MeanAccumulator ball_fraction_in_domain(const FundamentalDomain& domain, DiskPoint c, double r, std::size_t n,
                                        std::uint64_t seed) {
  constexpr std::size_t kChunk = 1 << 16;
  const Isometry to_center = Isometry::translation_to(c);
  MeanAccumulator acc;
  for (std::size_t chunk = 0; chunk * kChunk < n; ++chunk) {
    std::mt19937_64 rng = chunk_rng(seed, chunk);
    const std::size_t end = std::min(n, (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i)
      acc.add(domain.contains(uniform_in_ball(to_center, r, rng)) ? 1.0 : 0.0);
  }
  return acc;
}

}  // namespace

PhaseBox::PhaseBox(PhasePoint center, double position_radius, double angle_halfwidth)
    : center_(center), position_radius_(position_radius), angle_halfwidth_(angle_halfwidth) {
  if (!(position_radius > 0.0)) throw Error(ErrorKind::invalid_argument, "box position radius must be positive");
  if (!(angle_halfwidth > 0.0) || angle_halfwidth > std::numbers::pi)
    throw Error(ErrorKind::invalid_argument, "box angle halfwidth must lie in (0, pi]");
}

bool PhaseBox::contains_reduced(const PhasePoint& w) const {
  return dist(w.base, center_.base) < position_radius_ &&
         std::abs(angle_difference(w.dir, center_.dir)) < angle_halfwidth_;
}

bool PhaseBox::contains(const FundamentalDomain& domain, const PhasePoint& v) const {
  return contains_reduced(domain.reduce(v).phase);
}

void MeanAccumulator::add(double x) {
  sum += x;
  sum_sq += x * x;
  ++count;
}

double MeanAccumulator::mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }

double MeanAccumulator::std_error() const {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  return std::sqrt(var / n);
}

KnieperMeasure::KnieperMeasure(const FundamentalDomain& domain, const BoundaryMeasure& density,
                               KnieperOptions options)
    : domain_(&domain), density_(&density), options_(options) {
  if (!(options_.step > 0.0)) throw Error(ErrorKind::invalid_argument, "geodesic step must be positive");
  if (options_.chunk == 0) throw Error(ErrorKind::invalid_argument, "chunk size must be positive");
  reach_ = domain.surface().domain_diameter() + 1e-9;
  const LengthFunctional whole = [](const LineSample& s) { return s.in_domain.length(); };
  std::vector<std::size_t> discarded;
  const auto z = accumulate({whole}, options_.normalization_samples, options_.normalization_seed, discarded);
  if (!(z[0].mean() > 0.0)) throw Error(ErrorKind::degenerate_measure, "no sampled geodesic meets the domain");
  normalization_ = z[0].mean();
  normalization_error_ = z[0].std_error();
  normalization_discarded_ = discarded[0];
}

bool KnieperMeasure::sample(std::mt19937_64& rng, LineSample& out) const {
  const auto& atoms = density_->atoms();
  out.backward = atoms[draw_atom(*density_, rng)].point;
  out.forward = atoms[draw_atom(*density_, rng)].point;
  out.in_domain = {0.0, 0.0};
  out.weight = 0.0;
  if (std::abs(angle_difference(out.forward.angle(), out.backward.angle())) < options_.exclusion) return false;
  if (line_distance_from_origin(out.forward, out.backward) > reach_) return true;
  const DiskPoint p = density_->basepoint();
  if (p.norm() == 0.0) {
    out.foot = line_foot(out.forward, out.backward);
  } else {
    const Isometry to_p = Isometry::translation_to(p);
    const Isometry from_p = to_p.inverse();
    out.foot = apply_phase(to_p, line_foot(apply(from_p, out.forward), apply(from_p, out.backward)));
  }
  const DiskPoint q = out.foot.base;
  out.weight = std::exp(-options_.h * (busemann(p, q, out.backward) + busemann(p, q, out.forward)));
  out.in_domain = domain_->line_interval(out.foot);
  return true;
}

std::vector<MeanAccumulator> KnieperMeasure::accumulate(const std::vector<LengthFunctional>& lengths,
                                                        std::size_t n_samples, std::uint64_t seed,
                                                        std::vector<std::size_t>& discarded) const {
  std::vector<MeanAccumulator> acc(lengths.size());
  discarded.assign(lengths.size(), 0);
  LineSample s;
  for (std::size_t chunk = 0; chunk * options_.chunk < n_samples; ++chunk) {
    std::mt19937_64 rng = chunk_rng(seed, chunk);
    const std::size_t end = std::min(n_samples, (chunk + 1) * options_.chunk);
    for (std::size_t i = chunk * options_.chunk; i < end; ++i) {
      const bool ok = sample(rng, s);
      const bool hits = ok && !s.in_domain.empty();
      for (std::size_t k = 0; k < lengths.size(); ++k) {
        if (!hits) {
          acc[k].add(0.0);
          continue;
        }
        try {
          acc[k].add(s.weight * lengths[k](s));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::reduction_failure) throw;
          ++discarded[k];
        }
      }
    }
  }
  return acc;
}

std::vector<MeasureEstimate> KnieperMeasure::estimate(const std::vector<LengthFunctional>& lengths,
                                                      std::size_t n_samples, std::uint64_t seed) const {
  std::vector<std::size_t> discarded;
  const std::vector<MeanAccumulator> acc = accumulate(lengths, n_samples, seed, discarded);
  std::vector<MeasureEstimate> out;
  const double z = normalization_;
  const double rz = normalization_error_ / z;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    MeasureEstimate e;
    e.value = acc[k].mean() / z;
    const double rel = acc[k].mean() > 0.0 ? acc[k].std_error() / acc[k].mean() : 0.0;
    e.std_error = acc[k].mean() > 0.0 ? e.value * std::hypot(rel, rz) : acc[k].std_error() / z;
    e.samples = acc[k].count;
    e.discarded = discarded[k];
    out.push_back(e);
  }
  return out;
}

MeasureEstimate KnieperMeasure::estimate(const LengthFunctional& length, std::size_t n_samples,
                                         std::uint64_t seed) const {
  return estimate(std::vector<LengthFunctional>{length}, n_samples, seed).front();
}

double KnieperMeasure::stepped_length(const PhasePoint& foot, LineInterval range,
                                      const std::function<bool(const PhasePoint&)>& pred) const {
  if (range.empty()) return 0.0;
  const double len = range.length();
  const auto cells = static_cast<std::size_t>(std::ceil(len / options_.step));
  const double w = len / static_cast<double>(cells);
  double total = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    if (pred(flow(foot, range.lo + (static_cast<double>(i) + 0.5) * w))) total += w;
  }
  return total;
}

LengthFunctional KnieperMeasure::box_length(const PhaseBox& b) const {
  return [this, b](const LineSample& s) {
    const LineInterval r = s.in_domain.intersect(ball_interval(s.foot, b.center().base, b.position_radius()));
    if (r.empty()) return 0.0;
    if (b.angle_halfwidth() >= std::numbers::pi) return r.length();
    return stepped_length(s.foot, r, [&b](const PhasePoint& w) {
      return std::abs(angle_difference(w.dir, b.center().dir)) < b.angle_halfwidth();
    });
  };
}

LengthFunctional KnieperMeasure::flowed_box_length(const PhaseBox& b, double t) const {
  return [this, b, t](const LineSample& s) {
    double total = 0.0;
    for (const auto& seg : domain_->trace(s.foot, s.in_domain.lo - t, s.in_domain.hi - t)) {
      const LineInterval r =
          LineInterval{0.0, seg.length}.intersect(ball_interval(seg.start, b.center().base, b.position_radius()));
      if (r.empty()) continue;
      if (b.angle_halfwidth() >= std::numbers::pi) {
        total += r.length();
        continue;
      }
      total += stepped_length(seg.start, r, [&b](const PhasePoint& w) {
        return std::abs(angle_difference(w.dir, b.center().dir)) < b.angle_halfwidth();
      });
    }
    return total;
  };
}

MeasureEstimate KnieperMeasure::box(const PhaseBox& b, std::size_t n_samples, std::uint64_t seed) const {
  return estimate(box_length(b), n_samples, seed);
}

MeasureEstimate KnieperMeasure::flowed_box(const PhaseBox& b, double t, std::size_t n_samples,
                                           std::uint64_t seed) const {
  return estimate(flowed_box_length(b, t), n_samples, seed);
}

MeasureEstimate knieper_measure(const KnieperMeasure& m, const PhaseBox& b, std::size_t n_samples,
                                std::uint64_t seed) {
  return m.box(b, n_samples, seed);
}

MeasureEstimate liouville_measure(const FundamentalDomain& domain, const PhaseBox& b, std::size_t n_samples,
                                  std::uint64_t seed) {
  const double r = b.position_radius();
  const MeanAccumulator acc = ball_fraction_in_domain(domain, b.center().base, r, n_samples, seed);
  const double scale = 2.0 * std::numbers::pi * (std::cosh(r) - 1.0) * (b.angle_halfwidth() / std::numbers::pi) /
                       domain.surface().area();
  MeasureEstimate e;
  e.value = acc.mean() * scale;
  e.std_error = acc.std_error() * scale;
  e.samples = acc.count;
  return e;
}

MeasureEstimate domain_area(const FundamentalDomain& domain, std::size_t n_samples, std::uint64_t seed) {
  const double r = domain.surface().domain_diameter() + 1e-9;
  const MeanAccumulator acc = ball_fraction_in_domain(domain, DiskPoint::origin(), r, n_samples, seed);
  const double ball_area = 2.0 * std::numbers::pi * (std::cosh(r) - 1.0);
  MeasureEstimate e;
  e.value = acc.mean() * ball_area;
  e.std_error = acc.std_error() * ball_area;
  e.samples = acc.count;
  return e;
}

BoundaryPoint conditional_endpoint(const ConditionalDensityQuery& q) {
  const Endpoints ends = endpoints(q.w);
  return q.kind == LeafKind::unstable ? ends.forward : ends.backward;
}

double conditional_density(const ConditionalDensityQuery& q, double h) {
  return std::exp(-h * busemann(q.v.base, q.w.base, conditional_endpoint(q)));
}

double mu_factor(const BoundaryMeasure& density, DiskPoint x, BoundaryPoint xi, const AngularBins& bins, double h) {
  double mass = 0.0;
  for (const Atom& a : density.atoms()) {
    if (std::abs(angle_difference(a.point.angle(), xi.angle())) < 0.5 * bins.width())
      mass += a.weight * std::exp(-h * busemann(density.basepoint(), x, a.point));
  }
  return mass;
}

ExpansionReport verify_expansion(const PhasePoint& v, const PhasePoint& w, const std::vector<double>& t_grid,
                                 double h, double tolerance) {
  ExpansionReport r;
  const double u0 = conditional_density({v, w, LeafKind::unstable}, h);
  const double s0 = conditional_density({v, w, LeafKind::stable}, h);
  for (double t : t_grid) {
    const PhasePoint wt = flow(w, t);
    const double u = conditional_density({v, wt, LeafKind::unstable}, h);
    const double s = conditional_density({v, wt, LeafKind::stable}, h);
    r.max_unstable_error = std::max(r.max_unstable_error, std::abs(std::log(u / u0) - h * t));
    r.max_stable_error = std::max(r.max_stable_error, std::abs(std::log(s / s0) + h * t));
  }
  r.passed = r.max_unstable_error < tolerance && r.max_stable_error < tolerance;
  return r;
}

HolonomyReport verify_holonomy(const PhasePoint& v, const PhasePoint& v2, const PhasePoint& w, const PhasePoint& w2,
                               const BoundaryMeasure& density, const AngularBins& bins, double h,
                               double tolerance) {
  const Endpoints ev = endpoints(v), ev2 = endpoints(v2), ew = endpoints(w), ew2 = endpoints(w2);
  const auto apart = [tolerance](BoundaryPoint a, BoundaryPoint b) {
    return std::abs(angle_difference(a.angle(), b.angle())) > tolerance;
  };
  if (apart(ew.forward, ew2.forward) || std::abs(busemann(w.base, w2.base, ew.forward)) > tolerance)
    throw Error(ErrorKind::invalid_configuration, "w' is not on the strong stable leaf of w");
  if (apart(ev.forward, ev2.forward) || std::abs(busemann(v.base, v2.base, ev.forward)) > tolerance)
    throw Error(ErrorKind::invalid_configuration, "v' is not on the strong stable leaf of v");
  if (apart(ew.backward, ev.backward))
    throw Error(ErrorKind::invalid_configuration, "w is not on the weak unstable leaf of v");

  const BoundaryPoint xi = ew.forward;
  const double b_left = std::exp(-h * busemann(v.base, w.base, xi));
  const double b_right = std::exp(-h * busemann(v2.base, w2.base, xi));
  HolonomyReport r;
  r.busemann_residual = std::abs(b_left / b_right * std::exp(h * busemann(v.base, v2.base, xi)) - 1.0);
  r.lhs = b_left * mu_factor(density, v.base, xi, bins, h);
  r.rhs = b_right * mu_factor(density, v2.base, xi, bins, h);
  if (!(r.rhs > 0.0)) throw Error(ErrorKind::degenerate_measure, "empty density bin at the forward endpoint");
  r.deviation = std::abs(r.lhs / r.rhs - 1.0);
  return r;
}

std::string measure_report_json(const PhaseBox& b, const MeasureEstimate& e, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["box"] = {{"center", {b.center().base.z().real(), b.center().base.z().imag(), b.center().dir}},
              {"position_radius", b.position_radius()},
              {"angle_halfwidth", b.angle_halfwidth()}};
  j["estimate"] = e.value;
  j["std_error"] = e.std_error;
  j["samples"] = e.samples;
  j["discarded"] = e.discarded;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

}  // namespace geoflow

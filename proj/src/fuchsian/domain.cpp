#include "geoflow/fuchsian/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geoflow/error.hpp"
#include "geoflow/fuchsian/ball.hpp"

namespace geoflow {

namespace {

// Strict-improvement margin on |z|; points on a side stay where they are, which
// keeps reduction idempotent.
constexpr double kTieMargin = 1e-13;

}  // namespace

FundamentalDomain::FundamentalDomain(const SurfaceModel& surface) : surface_(&surface) {
  // Tiles meeting F only at a vertex sit at exactly twice the circumradius;
  // the slack keeps them despite rounding.
  const Ball ball = enumerate_ball(surface, 2.0 * surface.domain_diameter() + 0.1);
  for (const auto& e : ball.elements()) {
    if (!e.word.empty()) test_set_.push_back(e.matrix.renormalized());
  }
  for (const auto& g : test_set_) test_orbit_.push_back(HyperboloidPoint::from_disk(apply(g, DiskPoint::origin())));
}

const Isometry* FundamentalDomain::improving(Complex z, const std::vector<Isometry>& candidates) const {
  const double r = std::abs(z);
  const Isometry* best = nullptr;
  double best_r = r - kTieMargin;
  for (const auto& g : candidates) {
    const double rr = std::abs(mobius(g, z));
    if (rr < best_r) {
      best_r = rr;
      best = &g;
    }
  }
  return best;
}

FundamentalDomain::ReducedPoint FundamentalDomain::reduce(DiskPoint p) const {
  Complex z = p.z();
  Isometry g;
  const double inner = std::tanh(surface_->inradius() / 2.0);
  for (int it = 0; it < kIterationBudget; ++it) {
    if (std::abs(z) < inner) return {DiskPoint(z), g};
    const Isometry* s = improving(z, surface_->letters());
    if (s == nullptr) s = improving(z, test_set_);
    if (s == nullptr) return {DiskPoint(z), g};
    z = mobius(*s, z);
    g = *s * g;
  }
  throw Error(ErrorKind::reduction_failure, "fundamental domain reduction exceeded its iteration budget");
}

FundamentalDomain::ReducedPhase FundamentalDomain::reduce(const PhasePoint& v) const {
  const ReducedPoint r = reduce(v.base);
  return {apply_phase(r.to_domain, v), r.to_domain};
}

bool FundamentalDomain::contains(DiskPoint p) const {
  if (p.norm() < std::tanh(surface_->inradius() / 2.0)) return true;
  // cosh d(p, o) <= cosh d(p, t o) for every t, with a relative tie margin.
  const HyperboloidPoint h = HyperboloidPoint::from_disk(p);
  const double limit = h.x0 * (1.0 - 1e-12);
  for (const auto& x : test_orbit_) {
    if (h.x0 * x.x0 - h.x1 * x.x1 - h.x2 * x.x2 < limit) return false;
  }
  return true;
}

LineInterval FundamentalDomain::line_interval(const PhasePoint& v) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  LineInterval out{-inf, inf};
  const GeodesicFrame frame(v);
  const HyperboloidPoint o;
  for (const auto& x : test_orbit_) {
    out = out.intersect(frame.bisector(o, x, 1e-10));
    if (out.empty()) break;
  }
  return out;
}

std::vector<FundamentalDomain::TraceSegment> FundamentalDomain::trace(const PhasePoint& v, double t0,
                                                                      double t1) const {
  // Each step crosses into the next tile by kNudge and flows back, so the
  // segment start sits on the side of F it entered through.
  constexpr double kNudge = 1e-9;
  std::vector<TraceSegment> out;
  if (!(t1 > t0)) return out;
  PhasePoint cur = reduce(flow(v, t0)).phase;
  double t = t0;
  const long budget = 1000 + static_cast<long>(100.0 * (t1 - t0));
  for (long it = 0; it < budget; ++it) {
    const LineInterval in = line_interval(cur);
    const double hi = std::min(std::max(in.hi, 0.0), t1 - t);
    if (hi > 0.0) out.push_back({t, hi, cur});
    t += hi;
    if (t >= t1) return out;
    const double step = std::max(hi, 0.0) + kNudge;
    cur = flow(reduce(flow(cur, step)).phase, -kNudge);
    t += kNudge;
    if (t >= t1) return out;
  }
  throw Error(ErrorKind::reduction_failure, "geodesic trace exceeded its iteration budget");
}

}  // namespace geoflow

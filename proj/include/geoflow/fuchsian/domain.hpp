#pragma once

#include <vector>

#include "geoflow/fuchsian/surface.hpp"

namespace geoflow {

/// Dirichlet domain F of the surface group centred at the origin.
class FundamentalDomain {
 public:
  static constexpr int kIterationBudget = 10'000;

  explicit FundamentalDomain(const SurfaceModel& surface);

  struct ReducedPoint {
    DiskPoint point;
    Isometry to_domain;  // to_domain . input = point
  };
  struct ReducedPhase {
    PhasePoint phase;
    Isometry to_domain;
  };

  /// Greedy descent through the side pairings, then a check against the test
  /// set; throws reduction-failure past the iteration budget.
  ReducedPoint reduce(DiskPoint p) const;
  ReducedPhase reduce(const PhasePoint& v) const;
  bool contains(DiskPoint p) const;

  /// {t : flow_base(v, t) in F}, exact from the bisectors of the test set
  /// (F is convex, so this is one interval).
  LineInterval line_interval(const PhasePoint& v) const;

  /// Piece of a traced geodesic lying in one translate of F, carried back into F.
  struct TraceSegment {
    double t_begin = 0.0;  // parameter along the traced geodesic
    double length = 0.0;
    PhasePoint start;      // in F; flow(start, s) for 0 <= s <= length stays in F
  };
  /// The geodesic t -> flow(v, t) for t in [t0, t1], cut into segments at the
  /// sides of F. Segments are re-based in F, so arbitrarily long traces stay
  /// well inside the interior margin.
  std::vector<TraceSegment> trace(const PhasePoint& v, double t0, double t1) const;

  /// Non-identity group elements with displacement <= 2 domain_diameter + 0.1. The
  /// translates t F for t in this set include every tile meeting F.
  const std::vector<Isometry>& test_set() const { return test_set_; }
  const SurfaceModel& surface() const { return *surface_; }

 private:
  // Returns an element lowering dist(., o) of p by more than the tie margin, if any.
  const Isometry* improving(Complex z, const std::vector<Isometry>& candidates) const;

  const SurfaceModel* surface_;
  std::vector<Isometry> test_set_;
  std::vector<HyperboloidPoint> test_orbit_;  // t o for t in the test set
};

}  // namespace geoflow

#pragma once

// Knieper's measure of maximal entropy on phase boxes, the Liouville oracle,
// and the stable/unstable conditional densities.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geoflow/density/density.hpp"
#include "geoflow/fuchsian/domain.hpp"

namespace geoflow {

/// Position ball times direction arc, for vectors based in F.
class PhaseBox {
 public:
  PhaseBox(PhasePoint center, double position_radius, double angle_halfwidth);

  const PhasePoint& center() const { return center_; }
  double position_radius() const { return position_radius_; }
  double angle_halfwidth() const { return angle_halfwidth_; }

  /// Membership of a vector already reduced to F.
  bool contains_reduced(const PhasePoint& w) const;
  /// Membership after reduction to F.
  bool contains(const FundamentalDomain& domain, const PhasePoint& v) const;

 private:
  PhasePoint center_;
  double position_radius_;
  double angle_halfwidth_;
};

struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::size_t discarded = 0;
};

/// Mean and standard error accumulated in a fixed order.
struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  void add(double x);
  double mean() const;
  double std_error() const;
};

/// One boundary pair drawn from density x density, as the oriented geodesic
/// from `backward` to `forward`.
struct LineSample {
  BoundaryPoint backward;
  BoundaryPoint forward;
  PhasePoint foot;       // point of the line nearest the density basepoint, pointing forward
  LineInterval in_domain;  // parameters (from foot) where the line lies in F
  double weight = 0.0;   // exp(-h (b(p, q, xi) + b(p, q, eta)))
};

/// Length of the part of a sampled line (restricted to F) inside some set.
using LengthFunctional = std::function<double(const LineSample&)>;

struct KnieperOptions {
  double h = 1.0;
  double step = 0.01;
  /// Pairs closer than this angle count as xi = eta and contribute nothing.
  double exclusion = 1e-4;
  std::size_t normalization_samples = 1'000'000;
  std::uint64_t normalization_seed = 0x6b6e69657065ULL;
  std::size_t chunk = 1 << 16;
};

class KnieperMeasure {
 public:
  /// Computes the normalization m(SF) once.
  KnieperMeasure(const FundamentalDomain& domain, const BoundaryMeasure& density, KnieperOptions options = {});

  const FundamentalDomain& domain() const { return *domain_; }
  const KnieperOptions& options() const { return options_; }
  double normalization() const { return normalization_; }
  double normalization_error() const { return normalization_error_; }
  std::size_t normalization_discarded() const { return normalization_discarded_; }

  /// Normalized Monte Carlo estimate of the integral of `length` over pairs.
  /// Chunk k of the sample stream is seeded by (seed, k). A functional that
  /// throws reduction-failure discards its sample.
  MeasureEstimate estimate(const LengthFunctional& length, std::size_t n_samples, std::uint64_t seed) const;
  /// Several functionals on one sample stream.
  std::vector<MeasureEstimate> estimate(const std::vector<LengthFunctional>& lengths, std::size_t n_samples,
                                        std::uint64_t seed) const;

  MeasureEstimate box(const PhaseBox& b, std::size_t n_samples, std::uint64_t seed) const;
  /// m(g^t B): vectors v in F with the reduction of g^-t v in B.
  MeasureEstimate flowed_box(const PhaseBox& b, double t, std::size_t n_samples, std::uint64_t seed) const;

  LengthFunctional box_length(const PhaseBox& b) const;
  LengthFunctional flowed_box_length(const PhaseBox& b, double t) const;
  /// Length of {v in F on the line : pred(v)}, midpoints of cells of width <= step.
  double stepped_length(const PhasePoint& foot, LineInterval range,
                        const std::function<bool(const PhasePoint&)>& pred) const;

  /// Draws one pair; returns false for excluded (near-diagonal) pairs.
  bool sample(std::mt19937_64& rng, LineSample& out) const;

 private:
  std::vector<MeanAccumulator> accumulate(const std::vector<LengthFunctional>& lengths, std::size_t n_samples,
                                          std::uint64_t seed, std::vector<std::size_t>& discarded) const;

  const FundamentalDomain* domain_;
  const BoundaryMeasure* density_;
  KnieperOptions options_;
  double reach_ = 0.0;  // F lies in the closed ball of this radius about o
  double normalization_ = 0.0;
  double normalization_error_ = 0.0;
  std::size_t normalization_discarded_ = 0;
};

MeasureEstimate knieper_measure(const KnieperMeasure& m, const PhaseBox& b, std::size_t n_samples,
                                std::uint64_t seed);

/// area(ball(c, r) meet F) * (2 alpha) / (2 pi area(F)), area by sampling the
/// ball uniformly in hyperbolic area and testing F.
MeasureEstimate liouville_measure(const FundamentalDomain& domain, const PhaseBox& b, std::size_t n_samples,
                                  std::uint64_t seed);
/// Area of F from uniform samples of the ball of radius domain_diameter.
MeasureEstimate domain_area(const FundamentalDomain& domain, std::size_t n_samples, std::uint64_t seed);

enum class LeafKind { stable, unstable };

struct ConditionalDensityQuery {
  PhasePoint v;  // reference
  PhasePoint w;  // evaluation point
  LeafKind kind = LeafKind::unstable;
};

/// exp(-h b(pi v, pi w, w_inf)) for unstable, with w_-inf for stable. The
/// boundary-measure factor is separate (mu_factor).
double conditional_density(const ConditionalDensityQuery& q, double h);
BoundaryPoint conditional_endpoint(const ConditionalDensityQuery& q);

/// Mass of mu_x on the arc of one bin width centred at xi, from mu_p
/// (p = density basepoint) through d mu_x / d mu_p = exp(-h b(p, x, .)) applied
/// atom by atom.
double mu_factor(const BoundaryMeasure& density, DiskPoint x, BoundaryPoint xi, const AngularBins& bins, double h);

struct ExpansionReport {
  double max_unstable_error = 0.0;  // max |ln ratio - h t|
  double max_stable_error = 0.0;    // max |ln ratio + h t|
  bool passed = false;
};
ExpansionReport verify_expansion(const PhasePoint& v, const PhasePoint& w, const std::vector<double>& t_grid,
                                 double h, double tolerance = 1e-9);

struct HolonomyReport {
  double lhs = 0.0;  // exp(-h b(pi v, pi w, xi)) mu_{pi v}(bin of xi)
  double rhs = 0.0;  // same with v', w'
  double deviation = 0.0;
  /// |exp(-h b(pi v, pi w, xi)) / exp(-h b(pi v', pi w', xi)) * exp(h b(pi v, pi v', xi)) - 1|,
  /// zero in exact arithmetic.
  double busemann_residual = 0.0;
};
/// Requires w' asymptotic to w (same forward endpoint, b(pi w, pi w', w_inf) = 0),
/// v' asymptotic to v likewise, and w_-inf = v_-inf, all within `tolerance`;
/// otherwise throws invalid-configuration.
HolonomyReport verify_holonomy(const PhasePoint& v, const PhasePoint& v2, const PhasePoint& w, const PhasePoint& w2,
                               const BoundaryMeasure& density, const AngularBins& bins, double h,
                               double tolerance = 1e-6);

std::string measure_report_json(const PhaseBox& b, const MeasureEstimate& e, std::uint64_t seed);

}  // namespace geoflow

#pragma once

// Atomic Patterson-Sullivan (Busemann) densities built from orbit data.

#include <cstddef>
#include <string>
#include <vector>

#include "geoflow/fuchsian/ball.hpp"

namespace geoflow {

struct Atom {
  BoundaryPoint point;
  double weight = 0.0;
};

/// Uniform angular bins; bin k covers [offset + k w, offset + (k + 1) w).
class AngularBins {
 public:
  explicit AngularBins(int count, double offset = 0.0);
  /// Bin k centred on angle k w. For the configured octagon generators the
  /// orbit directions along the symmetry axes then sit at bin centres rather
  /// than on bin edges, where rounding would split them arbitrarily.
  static AngularBins centered(int count);
  int count() const { return count_; }
  double width() const { return width_; }
  double offset() const { return offset_; }
  double center(int k) const;
  int index(double angle) const;

 private:
  int count_;
  double width_;
  double offset_;
};

class BoundaryMeasure {
 public:
  BoundaryMeasure(DiskPoint basepoint, double exponent_s, double truncation_r, std::vector<Atom> atoms);

  DiskPoint basepoint() const { return basepoint_; }
  double exponent_s() const { return exponent_s_; }
  double truncation_r() const { return truncation_r_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const;
  std::vector<double> binned(const AngularBins& bins) const;
  /// Atoms drawn with probability proportional to weight: cumulative weights.
  const std::vector<double>& cumulative() const { return cumulative_; }

 private:
  DiskPoint basepoint_;
  double exponent_s_;
  double truncation_r_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

/// Sum over the ball of exp(-s dist(p, gamma o)), identity included.
double poincare_series(const Ball& ball, double s, DiskPoint p);
/// Same, restricted to elements of displacement <= r.
double poincare_series(const Ball& ball, double s, DiskPoint p, double r);

/// One atom per non-identity element at the endpoint of the ray from p through
/// gamma o, weight exp(-s dist(p, gamma o)). An orbit point equal to p has no
/// direction and is skipped. Elements of displacement below `inner_cutoff` are
/// left out (0 keeps the plain construction). Throws degenerate-measure if no
/// atom remains.
BoundaryMeasure ps_density(const Ball& ball, DiskPoint p, double s, double inner_cutoff = 0.0);

/// Least-squares slope of ln N(R) at R = r_lo, r_lo + step, ..., r_hi.
double growth_exponent(const Ball& ball, double r_lo, double r_hi, double step = 1.0);

struct BinComparison {
  double center = 0.0;
  double mass_p = 0.0;
  double mass_q = 0.0;
  double ratio = 0.0;     // mass_p / mass_q
  double expected = 0.0;  // exp(-h b(q, p, center))
  double deviation = 0.0; // |ratio / expected - 1|
  bool included = false;
};

struct TransformationReport {
  double max_relative_deviation = 0.0;
  double noise_floor = 0.0;
  std::size_t bins_used = 0;
  std::vector<int> excluded_bins;
  std::vector<BinComparison> bins;
};

/// Per-bin mass ratio of two densities built from the same ball against the
/// Radon-Nikodym law exp(-h b(q, p, xi)) at bin centres. Bins where either
/// measure carries less than `floor` of its total mass are excluded.
TransformationReport check_transformation(const BoundaryMeasure& mu_p, const BoundaryMeasure& mu_q, double h,
                                          const AngularBins& bins, double floor = 0.01);

struct EquivarianceReport {
  /// Max over bins above the floor of |mu_{gamma p}(gamma bin) / mu_p(bin) - 1|,
  /// with both measures truncated at distance r from their basepoints.
  double max_relative_deviation = 0.0;
  std::size_t bins_used = 0;
  /// Full-mass comparison of the plain constructions (truncated by
  /// displacement from o) against the truncation bound.
  double mass_p = 0.0;
  double mass_gamma_p = 0.0;
  double mass_difference = 0.0;
  double truncation_bound = 0.0;
};

/// `big` must reach r + dist(o, gamma p) so every atom of the shifted measure
/// is present; throws invalid-argument otherwise.
EquivarianceReport check_equivariance(const Ball& big, const Isometry& gamma, DiskPoint p, double s, double r,
                                      const AngularBins& bins, double floor = 0.01);

/// CSV "bin_center_angle,mass" and the JSON metadata sidecar.
std::string density_csv(const BoundaryMeasure& mu, const AngularBins& bins);
std::string density_metadata_json(const BoundaryMeasure& mu, const AngularBins& bins);

}  // namespace geoflow

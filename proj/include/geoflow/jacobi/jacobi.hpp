#pragma once

// Geodesics and scalar Riccati solutions on conformal metrics
// e^{2 phi} (dx^2 + dy^2) of nonpositive curvature.

#include <functional>
#include <string>
#include <vector>

namespace geoflow {

enum class MetricPreset { flat, strictly_negative, flat_strip, constant_m1 };

const char* to_string(MetricPreset p);
MetricPreset parse_metric_preset(const std::string& name);

/// phi and its derivatives at a point.
struct ConformalJet {
  double phi = 0.0;
  double phi_x = 0.0, phi_y = 0.0;
  double phi_xx = 0.0, phi_yy = 0.0;
};

class ConformalMetric {
 public:
  using JetFn = std::function<ConformalJet(double x, double y)>;

  /// `valid` rejects points outside the chart (y > 0 for the half plane).
  ConformalMetric(std::string name, JetFn jet, std::function<bool(double, double)> valid = nullptr);
  static ConformalMetric preset(MetricPreset p);

  const std::string& name() const { return name_; }
  ConformalJet jet(double x, double y) const { return jet_(x, y); }
  bool valid(double x, double y) const { return !valid_ || valid_(x, y); }
  /// K = -e^{-2 phi} (phi_xx + phi_yy)
  double curvature(double x, double y) const;

  /// Largest K on an n x n grid over [x0, x1] x [y0, y1].
  double max_curvature_on_grid(double x0, double x1, double y0, double y1, int n) const;

 private:
  std::string name_;
  JetFn jet_;
  std::function<bool(double, double)> valid_;
};

struct GeodesicState {
  double x = 0.0, y = 0.0;
  double theta = 0.0;  // direction of the velocity in the chart
  double s = 0.0;      // arclength parameter
};

struct Trajectory {
  std::vector<GeodesicState> states;  // spaced |dt| in s, from s0 toward s0 + T
  double max_speed_drift = 0.0;       // max | |v|_g - 1 |
};

/// RK4 on the second-order geodesic equations with chart velocity
/// e^{-phi} (cos theta, sin theta). T may be negative. Throws step-size if
/// |dt| > 1e-2 or the speed drifts by more than 1e-4, integration-error if
/// the path leaves the chart.
Trajectory integrate_geodesic(const ConformalMetric& m, const GeodesicState& s0, double T, double dt = 1e-2);

enum class Rank { rank_one, rank_ge_2 };
const char* to_string(Rank r);

struct RankReport {
  Rank rank = Rank::rank_one;
  double sup_abs_curvature = 0.0;
  double horizon = 0.0;  // classification holds for the orbit over [-T, T] only
};
RankReport rank_classify(const ConformalMetric& m, const GeodesicState& s0, double T = 30.0, double tol = 1e-8,
                         double dt = 1e-2);

struct RiccatiReport {
  double u_stable = 0.0;
  double u_unstable = 0.0;
  double gap = 0.0;  // u_unstable - u_stable
};
/// u' = -K - u^2 forward from u(-T) = 0 gives u_unstable at s0, backward from
/// u(T) = 0 gives u_stable. |u| > 1e6 throws integration-error.
RiccatiReport riccati_subspaces(const ConformalMetric& m, const GeodesicState& s0, double T = 30.0, double dt = 1e-2);

/// Orbit over [-T, T] with curvature and both Riccati solutions at every
/// point. Near s = -T the unstable solution (near +T the stable one) has not
/// yet forgotten its zero start.
struct RiccatiSample {
  double s, x, y, theta, K, u_stable, u_unstable;
};
std::vector<RiccatiSample> riccati_trajectory(const ConformalMetric& m, const GeodesicState& s0, double T = 30.0,
                                              double dt = 1e-2);
std::string trajectory_csv(const std::vector<RiccatiSample>& samples);

/// J(s) = exp(int_0^s u_unstable) on [0, length] (trapezoid rule), with the
/// unstable solution started at s0 - T.
std::vector<double> unstable_jacobi(const ConformalMetric& m, const GeodesicState& s0, double length,
                                    double T = 30.0, double dt = 1e-2);

}  // namespace geoflow

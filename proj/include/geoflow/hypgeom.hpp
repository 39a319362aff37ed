#pragma once

// Hyperbolic plane geometry in the Poincare disk.
//
// Isometries are SU(1,1) matrices [[a, b], [conj(b), conj(a)]] acting by
// z -> (a z + b) / (conj(b) z + conj(a)). The Busemann function follows the
// convention b(p, q, xi) < 0 whenever p, q, xi lie on a geodesic in that order,
// i.e. b(p, q, xi) = lim d(q, x_n) - d(p, x_n) for x_n -> xi.

#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>

namespace geoflow {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2pi).
double reduce_angle(double angle);

/// Signed difference a - b reduced to (-pi, pi].
double angle_difference(double a, double b);

class DiskPoint {
 public:
  static constexpr double kInteriorMargin = 1e-12;

  DiskPoint() = default;
  /// Throws numeric-degeneracy if |z| >= 1 - kInteriorMargin.
  explicit DiskPoint(Complex z);

  static DiskPoint origin() { return DiskPoint(); }

  Complex z() const { return z_; }
  double norm() const { return std::abs(z_); }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  Complex z_{0.0, 0.0};
};

class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  static BoundaryPoint from_angle(double angle);
  /// Accepts any nonzero complex number and projects it radially.
  static BoundaryPoint from_complex(Complex u);

  double angle() const { return angle_; }
  Complex u() const { return u_; }

 private:
  double angle_ = 0.0;
  Complex u_{1.0, 0.0};
};

class Isometry {
 public:
  /// Number of compositions after which the product is rescaled to |a|^2 - |b|^2 = 1.
  static constexpr int kRenormalizeEvery = 32;

  Isometry() = default;
  Isometry(Complex a, Complex b) : a_(a), b_(b) {}

  static Isometry identity() { return {}; }
  /// The isometry fixing 0 and rotating by `angle`.
  static Isometry rotation(double angle);
  /// The isometry sending 0 to p and preserving directions at 0.
  static Isometry translation_to(DiskPoint p);

  Complex a() const { return a_; }
  Complex b() const { return b_; }

  double determinant() const { return std::norm(a_) - std::norm(b_); }
  double trace() const { return 2.0 * a_.real(); }

  Isometry inverse() const;
  Isometry renormalized() const;

  friend Isometry operator*(const Isometry& lhs, const Isometry& rhs);

 private:
  Complex a_{1.0, 0.0};
  Complex b_{0.0, 0.0};
  int depth_ = 0;
};

/// Unit tangent vector: base point and direction angle in [0, 2pi).
struct PhasePoint {
  PhasePoint() = default;
  PhasePoint(DiskPoint base_point, double direction)
      : base(base_point), dir(reduce_angle(direction)) {}

  DiskPoint base;
  double dir = 0.0;
};

/// Mobius image of z; throws numeric-degeneracy on a vanishing denominator.
Complex mobius(const Isometry& g, Complex z);
DiskPoint apply(const Isometry& g, DiskPoint p);
BoundaryPoint apply(const Isometry& g, BoundaryPoint xi);
PhasePoint apply_phase(const Isometry& g, const PhasePoint& v);

double dist(DiskPoint p, DiskPoint q);
/// Distance from the origin, 2 artanh |z|.
double dist_from_origin(DiskPoint p);

/// Poisson kernel (1 - |z|^2) / |z - xi|^2.
double poisson_kernel(DiskPoint z, BoundaryPoint xi);
double busemann(DiskPoint p, DiskPoint q, BoundaryPoint xi);

PhasePoint flow(const PhasePoint& v, double t);
/// Point at arclength t along the geodesic through v (base of flow(v, t)).
DiskPoint flow_base(const PhasePoint& v, double t);

struct Endpoints {
  BoundaryPoint forward;   // v_infinity
  BoundaryPoint backward;  // v_-infinity
};
Endpoints endpoints(const PhasePoint& v);

/// Unit vector at p pointing toward xi.
PhasePoint phase_toward(DiskPoint p, BoundaryPoint xi);
/// Boundary point hit by the geodesic ray from p through q (q != p).
BoundaryPoint ray_endpoint(DiskPoint p, DiskPoint q);

/// Distance from the origin to the geodesic with endpoints xi, eta.
double line_distance_from_origin(BoundaryPoint xi, BoundaryPoint eta);
/// Point of the geodesic (backward eta, forward xi) nearest the origin, as a
/// phase point pointing toward xi.
PhasePoint line_foot(BoundaryPoint forward, BoundaryPoint backward);

/// Parameter range [lo, hi] along t -> flow_base(v, t); bounds may be infinite.
struct LineInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(hi > lo); }
  double length() const { return empty() ? 0.0 : hi - lo; }
  LineInterval intersect(const LineInterval& other) const;
};

/// Hyperboloid model point; cosh dist(a, b) = -<a, b> in signature (-, +, +).
struct HyperboloidPoint {
  double x0 = 1.0, x1 = 0.0, x2 = 0.0;
  static HyperboloidPoint from_disk(DiskPoint p);
};

/// The geodesic t -> flow_base(v, t) in the hyperboloid model.
class GeodesicFrame {
 public:
  explicit GeodesicFrame(const PhasePoint& v);
  /// cosh dist(flow_base(v, t), x) = alpha e^t + beta e^-t.
  void coefficients(const HyperboloidPoint& x, double& alpha, double& beta) const;
  LineInterval ball(const HyperboloidPoint& c, double r) const;
  /// Coefficients within slack (relative) of zero count as zero, so a line
  /// lying on the bisector belongs to both sides.
  LineInterval bisector(const HyperboloidPoint& x, const HyperboloidPoint& y, double slack = 0.0) const;

 private:
  HyperboloidPoint p_;
  HyperboloidPoint u_;
};

/// {t : dist(flow_base(v, t), c) <= r}.
LineInterval ball_interval(const PhasePoint& v, DiskPoint c, double r);
/// {t : dist(flow_base(v, t), x) <= dist(flow_base(v, t), y)}.
LineInterval bisector_interval(const PhasePoint& v, DiskPoint x, DiskPoint y);

enum class IsometryType { identity, elliptic, parabolic, hyperbolic };

struct TraceClass {
  IsometryType type = IsometryType::identity;
  double trace_abs = 2.0;
  /// Only meaningful for hyperbolic elements.
  double translation_length = 0.0;
  BoundaryPoint attracting;
  BoundaryPoint repelling;
};

inline constexpr double kParabolicWindow = 1e-9;

/// Throws classification-ambiguous when ||tr| - 2| <= kParabolicWindow for a
/// non-identity element.
TraceClass trace_class(const Isometry& g);

}  // namespace geoflow

#include "geoflow/hypgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "geoflow/error.hpp"

namespace geoflow {

namespace {

constexpr double kDegenerateDenominator = 1e-15;

double one_minus_norm2(Complex z) {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

// (w + z) / (1 + conj(z) w): the translation taking 0 to z.
Complex translate_from_origin(Complex z, Complex w) {
  return (w + z) / (1.0 + std::conj(z) * w);
}

// Inverse of translate_from_origin.
Complex translate_to_origin(Complex z, Complex w) {
  return (w - z) / (1.0 - std::conj(z) * w);
}

}  // namespace

double reduce_angle(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_difference(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

DiskPoint::DiskPoint(Complex z) : z_(z) {
  if (!(std::abs(z) < 1.0 - kInteriorMargin)) {
    std::ostringstream msg;
    msg << "disk point outside the interior margin: |z| = " << std::abs(z);
    throw Error(ErrorKind::numeric_degeneracy, msg.str());
  }
}

BoundaryPoint BoundaryPoint::from_angle(double angle) {
  BoundaryPoint xi;
  xi.angle_ = reduce_angle(angle);
  xi.u_ = std::polar(1.0, xi.angle_);
  return xi;
}

BoundaryPoint BoundaryPoint::from_complex(Complex u) {
  if (std::abs(u) == 0.0) {
    throw Error(ErrorKind::numeric_degeneracy, "boundary point from zero vector");
  }
  BoundaryPoint xi;
  xi.angle_ = reduce_angle(std::arg(u));
  xi.u_ = u / std::abs(u);
  return xi;
}

Isometry Isometry::rotation(double angle) {
  return Isometry(std::polar(1.0, angle / 2.0), Complex(0.0, 0.0));
}

Isometry Isometry::translation_to(DiskPoint p) {
  const double s = std::sqrt(one_minus_norm2(p.z()));
  return Isometry(Complex(1.0 / s, 0.0), p.z() / s);
}

Isometry Isometry::inverse() const {
  Isometry inv(std::conj(a_), -b_);
  inv.depth_ = depth_;
  return inv;
}

Isometry Isometry::renormalized() const {
  const double det = determinant();
  if (!(det > 0.0)) {
    throw Error(ErrorKind::numeric_degeneracy, "isometry with nonpositive determinant");
  }
  const double s = 1.0 / std::sqrt(det);
  return Isometry(a_ * s, b_ * s);
}

Isometry operator*(const Isometry& lhs, const Isometry& rhs) {
  Isometry out(lhs.a_ * rhs.a_ + lhs.b_ * std::conj(rhs.b_),
               lhs.a_ * rhs.b_ + lhs.b_ * std::conj(rhs.a_));
  out.depth_ = std::max(lhs.depth_, rhs.depth_) + 1;
  if (out.depth_ >= Isometry::kRenormalizeEvery) out = out.renormalized();
  return out;
}

Complex mobius(const Isometry& g, Complex z) {
  const Complex den = std::conj(g.b()) * z + std::conj(g.a());
  if (std::abs(den) < kDegenerateDenominator) {
    throw Error(ErrorKind::numeric_degeneracy, "degenerate Mobius denominator");
  }
  return (g.a() * z + g.b()) / den;
}

DiskPoint apply(const Isometry& g, DiskPoint p) { return DiskPoint(mobius(g, p.z())); }

BoundaryPoint apply(const Isometry& g, BoundaryPoint xi) {
  return BoundaryPoint::from_complex(mobius(g, xi.u()));
}

PhasePoint apply_phase(const Isometry& g, const PhasePoint& v) {
  const Complex den = std::conj(g.b()) * v.base.z() + std::conj(g.a());
  if (std::abs(den) < kDegenerateDenominator) {
    throw Error(ErrorKind::numeric_degeneracy, "degenerate Mobius denominator");
  }
  const DiskPoint base((g.a() * v.base.z() + g.b()) / den);
  return PhasePoint(base, v.dir - 2.0 * std::arg(den));
}

double dist(DiskPoint p, DiskPoint q) {
  const double num = std::norm(p.z() - q.z());
  const double den = one_minus_norm2(p.z()) * one_minus_norm2(q.z());
  return 2.0 * std::asinh(std::sqrt(num / den));
}

double dist_from_origin(DiskPoint p) { return 2.0 * std::atanh(p.norm()); }

double poisson_kernel(DiskPoint z, BoundaryPoint xi) {
  return one_minus_norm2(z.z()) / std::norm(z.z() - xi.u());
}

double busemann(DiskPoint p, DiskPoint q, BoundaryPoint xi) {
  return std::log(poisson_kernel(p, xi)) - std::log(poisson_kernel(q, xi));
}

PhasePoint flow(const PhasePoint& v, double t) {
  const Complex z = v.base.z();
  const Complex w = std::polar(std::tanh(t / 2.0), v.dir);
  const DiskPoint base(translate_from_origin(z, w));
  return PhasePoint(base, v.dir - 2.0 * std::arg(1.0 + std::conj(z) * w));
}

DiskPoint flow_base(const PhasePoint& v, double t) {
  const Complex w = std::polar(std::tanh(t / 2.0), v.dir);
  return DiskPoint(translate_from_origin(v.base.z(), w));
}

LineInterval LineInterval::intersect(const LineInterval& other) const {
  return {std::max(lo, other.lo), std::min(hi, other.hi)};
}

HyperboloidPoint HyperboloidPoint::from_disk(DiskPoint p) {
  const Complex z = p.z();
  const double d = one_minus_norm2(z);
  return {(1.0 + std::norm(z)) / d, 2.0 * z.real() / d, 2.0 * z.imag() / d};
}

GeodesicFrame::GeodesicFrame(const PhasePoint& v) : p_(HyperboloidPoint::from_disk(v.base)) {
  // Image of the unit tangent vector (z, dir): derivative of the chart map
  // applied to dir (1 - |z|^2) / 2.
  const Complex z = v.base.z();
  const double d = one_minus_norm2(z);
  const double u1 = std::cos(v.dir), u2 = std::sin(v.dir);
  const double s = z.real() * u1 + z.imag() * u2;
  u_ = {2.0 * s / d, u1 + 2.0 * z.real() * s / d, u2 + 2.0 * z.imag() * s / d};
}

void GeodesicFrame::coefficients(const HyperboloidPoint& x, double& alpha, double& beta) const {
  const auto minkowski = [](const HyperboloidPoint& a, const HyperboloidPoint& b) {
    return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2;
  };
  const double a = -minkowski(p_, x);
  const double b = -minkowski(u_, x);
  alpha = 0.5 * (a + b);
  beta = 0.5 * (a - b);
}

LineInterval GeodesicFrame::ball(const HyperboloidPoint& c, double r) const {
  // alpha x^2 - cosh(r) x + beta <= 0 with x = e^t.
  double alpha = 0.0, beta = 0.0;
  coefficients(c, alpha, beta);
  const double k = std::cosh(r);
  const double disc = k * k - 4.0 * alpha * beta;
  if (!(disc > 0.0)) return {0.0, 0.0};
  // Product of the roots is beta / alpha; take the stable one first.
  const double x_hi = (k + std::sqrt(disc)) / (2.0 * alpha);
  const double x_lo = beta / (alpha * x_hi);
  return {std::log(x_lo), std::log(x_hi)};
}

LineInterval GeodesicFrame::bisector(const HyperboloidPoint& x, const HyperboloidPoint& y, double slack) const {
  // cosh d(., x) - cosh d(., y) = a e^t + b e^-t <= 0.
  double ax = 0.0, bx = 0.0, ay = 0.0, by = 0.0;
  coefficients(x, ax, bx);
  coefficients(y, ay, by);
  double a = ax - ay, b = bx - by;
  if (std::abs(a) <= slack * (std::abs(ax) + std::abs(ay))) a = 0.0;
  if (std::abs(b) <= slack * (std::abs(bx) + std::abs(by))) b = 0.0;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a <= 0.0 && b <= 0.0) return {-inf, inf};
  if (a >= 0.0 && b >= 0.0) return {0.0, 0.0};
  if (a > 0.0) return {-inf, 0.5 * std::log(-b / a)};
  return {0.5 * std::log(b / -a), inf};
}

LineInterval ball_interval(const PhasePoint& v, DiskPoint c, double r) {
  return GeodesicFrame(v).ball(HyperboloidPoint::from_disk(c), r);
}

LineInterval bisector_interval(const PhasePoint& v, DiskPoint x, DiskPoint y) {
  return GeodesicFrame(v).bisector(HyperboloidPoint::from_disk(x), HyperboloidPoint::from_disk(y));
}

Endpoints endpoints(const PhasePoint& v) {
  const Complex u = std::polar(1.0, v.dir);
  const Complex z = v.base.z();
  return {BoundaryPoint::from_complex(translate_from_origin(z, u)),
          BoundaryPoint::from_complex(translate_from_origin(z, -u))};
}

PhasePoint phase_toward(DiskPoint p, BoundaryPoint xi) {
  return PhasePoint(p, std::arg(translate_to_origin(p.z(), xi.u())));
}

BoundaryPoint ray_endpoint(DiskPoint p, DiskPoint q) {
  const Complex w = translate_to_origin(p.z(), q.z());
  if (std::abs(w) == 0.0) {
    throw Error(ErrorKind::numeric_degeneracy, "ray endpoint of coincident points");
  }
  return BoundaryPoint::from_complex(translate_from_origin(p.z(), w / std::abs(w)));
}

double line_distance_from_origin(BoundaryPoint xi, BoundaryPoint eta) {
  const double c = std::min(std::abs(xi.u() + eta.u()) / 2.0, 1.0 - 1e-16);
  return std::atanh(c);
}

PhasePoint line_foot(BoundaryPoint forward, BoundaryPoint backward) {
  const Complex sum = forward.u() + backward.u();
  const double m = std::abs(sum);
  if (m < 1e-300) return phase_toward(DiskPoint::origin(), forward);
  // Euclidean radius of the foot point is tanh(d / 2) with tanh(d) = m / 2.
  const double c = std::min(m / 2.0, 1.0 - 1e-16);
  const double r = c / (1.0 + std::sqrt((1.0 - c) * (1.0 + c)));
  return phase_toward(DiskPoint(sum / m * r), forward);
}

TraceClass trace_class(const Isometry& g) {
  TraceClass out;
  const Isometry n = g.renormalized();
  const Complex a = n.a();
  const Complex b = n.b();
  out.trace_abs = std::abs(2.0 * a.real());
  if (std::abs(b) <= kParabolicWindow && std::abs(a.imag()) <= kParabolicWindow) {
    out.type = IsometryType::identity;
    return out;
  }
  const double excess = out.trace_abs - 2.0;
  if (std::abs(excess) <= kParabolicWindow) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "trace within the parabolic window: |tr| = " << out.trace_abs;
    throw Error(ErrorKind::classification_ambiguous, msg.str());
  }
  if (excess < 0.0) {
    out.type = IsometryType::elliptic;
    return out;
  }
  out.type = IsometryType::hyperbolic;
  const double half = out.trace_abs / 2.0;
  out.translation_length = 2.0 * std::acosh(half);
  // Fixed points (i Im a +- sqrt(Re^2 a - 1)) / conj(b); the attracting one has
  // |conj(b) z + conj(a)| > 1.
  const double s = std::sqrt((half - 1.0) * (half + 1.0));
  const double sign = a.real() > 0.0 ? 1.0 : -1.0;
  const Complex ia(0.0, a.imag());
  out.attracting = BoundaryPoint::from_complex((ia + sign * s) / std::conj(b));
  out.repelling = BoundaryPoint::from_complex((ia - sign * s) / std::conj(b));
  return out;
}

}  // namespace geoflow

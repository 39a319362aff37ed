#include "geoflow/jacobi/jacobi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "geoflow/error.hpp"
#include "geoflow/io.hpp"

namespace geoflow {

namespace {

constexpr double kMaxStep = 1e-2;
constexpr double kDriftLimit = 1e-4;
constexpr double kBlowUp = 1e6;

// (x, y, vx, vy) in the chart.
using State = std::array<double, 4>;

State derivative(const ConformalMetric& m, const State& q) {
  if (!m.valid(q[0], q[1]) || !std::isfinite(q[0]) || !std::isfinite(q[1]))
    throw Error(ErrorKind::integration_error, "geodesic left the chart of " + m.name());
  const ConformalJet j = m.jet(q[0], q[1]);
  const double vx = q[2], vy = q[3];
  return {vx, vy, -(j.phi_x * (vx * vx - vy * vy) + 2.0 * j.phi_y * vx * vy),
          -(j.phi_y * (vy * vy - vx * vx) + 2.0 * j.phi_x * vx * vy)};
}

State axpy(const State& q, double h, const State& k) {
  return {q[0] + h * k[0], q[1] + h * k[1], q[2] + h * k[2], q[3] + h * k[3]};
}

State rk4(const ConformalMetric& m, const State& q, double h) {
  const State k1 = derivative(m, q);
  const State k2 = derivative(m, axpy(q, h / 2.0, k1));
  const State k3 = derivative(m, axpy(q, h / 2.0, k2));
  const State k4 = derivative(m, axpy(q, h, k3));
  State out;
  for (int i = 0; i < 4; ++i) out[i] = q[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

double speed(const ConformalMetric& m, const State& q) { return std::exp(m.jet(q[0], q[1]).phi) * std::hypot(q[2], q[3]); }

GeodesicState to_geodesic(const State& q, double s) { return {q[0], q[1], std::atan2(q[3], q[2]), s}; }

ConformalJet flat_jet(double, double) { return {}; }

ConformalJet radial_jet(double x, double y) { return {x * x + y * y, 2.0 * x, 2.0 * y, 2.0, 2.0}; }

// phi = (|x| - 1)^4 outside the strip |x| <= 1; C^3 across the edges.
ConformalJet strip_jet(double x, double) {
  const double a = std::abs(x) - 1.0;
  if (a <= 0.0) return {};
  const double sgn = x > 0.0 ? 1.0 : -1.0;
  return {a * a * a * a, sgn * 4.0 * a * a * a, 0.0, 12.0 * a * a, 0.0};
}

// Upper half plane, phi = -ln y.
ConformalJet half_plane_jet(double, double y) { return {-std::log(y), 0.0, -1.0 / y, 0.0, 1.0 / (y * y)}; }

// Grid at spacing |dt| / 2 over [-T, T] around s0, index 2n at s0.
std::vector<GeodesicState> two_sided(const ConformalMetric& m, const GeodesicState& s0, double T, double dt,
                                     std::size_t& center) {
  const Trajectory back = integrate_geodesic(m, s0, -T, dt / 2.0);
  const Trajectory fwd = integrate_geodesic(m, s0, T, dt / 2.0);
  std::vector<GeodesicState> out(back.states.rbegin(), back.states.rend());
  center = out.size() - 1;
  out.insert(out.end(), fwd.states.begin() + 1, fwd.states.end());
  return out;
}

// RK4 for u' = -K - u^2 with step 2 h over the half-step grid of curvatures.
std::vector<double> riccati_pass(const std::vector<double>& K, double h, bool forward) {
  const std::size_t n = K.size();
  std::vector<double> u(n, 0.0);
  const auto f = [](double k, double v) { return -k - v * v; };
  const auto step = [&](double v, double k0, double km, double k1, double H) {
    const double a = f(k0, v), b = f(km, v + H / 2.0 * a), c = f(km, v + H / 2.0 * b), d = f(k1, v + H * c);
    return v + H / 6.0 * (a + 2.0 * b + 2.0 * c + d);
  };
  const double H = 2.0 * h;
  if (forward) {
    for (std::size_t i = 0; i + 2 < n; i += 2) {
      const double v = step(u[i], K[i], K[i + 1], K[i + 2], H);
      if (!(std::abs(v) <= kBlowUp)) throw Error(ErrorKind::integration_error, "Riccati solution blew up");
      u[i + 2] = v;
      u[i + 1] = step(u[i], K[i], 0.5 * (K[i] + K[i + 1]), K[i + 1], h);
    }
  } else {
    for (std::size_t i = n - 1; i >= 2; i -= 2) {
      const double v = step(u[i], K[i], K[i - 1], K[i - 2], -H);
      if (!(std::abs(v) <= kBlowUp)) throw Error(ErrorKind::integration_error, "Riccati solution blew up");
      u[i - 2] = v;
      u[i - 1] = step(u[i], K[i], 0.5 * (K[i] + K[i - 1]), K[i - 1], -h);
    }
  }
  return u;
}

}  // namespace

const char* to_string(MetricPreset p) {
  switch (p) {
    case MetricPreset::flat: return "flat";
    case MetricPreset::strictly_negative: return "strictly_negative";
    case MetricPreset::flat_strip: return "flat_strip";
    case MetricPreset::constant_m1: return "constant_m1";
  }
  return "unknown";
}

MetricPreset parse_metric_preset(const std::string& name) {
  for (MetricPreset p : {MetricPreset::flat, MetricPreset::strictly_negative, MetricPreset::flat_strip,
                         MetricPreset::constant_m1}) {
    if (name == to_string(p)) return p;
  }
  throw Error(ErrorKind::invalid_argument, "unknown metric preset '" + name + "'");
}

const char* to_string(Rank r) { return r == Rank::rank_one ? "rank_one" : "rank_ge_2"; }

ConformalMetric::ConformalMetric(std::string name, JetFn jet, std::function<bool(double, double)> valid)
    : name_(std::move(name)), jet_(std::move(jet)), valid_(std::move(valid)) {}

ConformalMetric ConformalMetric::preset(MetricPreset p) {
  switch (p) {
    case MetricPreset::flat: return ConformalMetric("flat", flat_jet);
    case MetricPreset::strictly_negative: return ConformalMetric("strictly_negative", radial_jet);
    case MetricPreset::flat_strip: return ConformalMetric("flat_strip", strip_jet);
    case MetricPreset::constant_m1:
      return ConformalMetric("constant_m1", half_plane_jet, [](double, double y) { return y > 0.0; });
  }
  throw Error(ErrorKind::invalid_argument, "unknown metric preset");
}

double ConformalMetric::curvature(double x, double y) const {
  const ConformalJet j = jet(x, y);
  return -std::exp(-2.0 * j.phi) * (j.phi_xx + j.phi_yy);
}

double ConformalMetric::max_curvature_on_grid(double x0, double x1, double y0, double y1, int n) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double x = x0 + (x1 - x0) * i / (n - 1), y = y0 + (y1 - y0) * k / (n - 1);
      if (valid(x, y)) worst = std::max(worst, curvature(x, y));
    }
  }
  return worst;
}

Trajectory integrate_geodesic(const ConformalMetric& m, const GeodesicState& s0, double T, double dt) {
  dt = std::abs(dt);
  if (!(dt > 0.0) || dt > kMaxStep) throw Error(ErrorKind::step_size, "geodesic step must lie in (0, 1e-2]");
  if (!std::isfinite(T)) throw Error(ErrorKind::invalid_argument, "integration horizon must be finite");
  if (!m.valid(s0.x, s0.y)) throw Error(ErrorKind::invalid_argument, "start point outside the chart");
  const double scale = std::exp(-m.jet(s0.x, s0.y).phi);
  State q{s0.x, s0.y, scale * std::cos(s0.theta), scale * std::sin(s0.theta)};
  const auto n = static_cast<std::size_t>(std::llround(std::abs(T) / dt));
  const double h = n == 0 ? 0.0 : T / static_cast<double>(n);
  Trajectory out;
  out.states.reserve(n + 1);
  out.states.push_back(s0);
  for (std::size_t i = 1; i <= n; ++i) {
    q = rk4(m, q, h);
    const double drift = std::abs(speed(m, q) - 1.0);
    out.max_speed_drift = std::max(out.max_speed_drift, drift);
    if (!(drift <= kDriftLimit)) throw Error(ErrorKind::step_size, "geodesic speed drifted past 1e-4; reduce dt");
    out.states.push_back(to_geodesic(q, s0.s + h * static_cast<double>(i)));
  }
  return out;
}

RankReport rank_classify(const ConformalMetric& m, const GeodesicState& s0, double T, double tol, double dt) {
  RankReport r;
  r.horizon = T;
  for (double dir : {-1.0, 1.0}) {
    for (const auto& s : integrate_geodesic(m, s0, dir * T, dt).states)
      r.sup_abs_curvature = std::max(r.sup_abs_curvature, std::abs(m.curvature(s.x, s.y)));
  }
  r.rank = r.sup_abs_curvature <= tol ? Rank::rank_ge_2 : Rank::rank_one;
  return r;
}

std::vector<RiccatiSample> riccati_trajectory(const ConformalMetric& m, const GeodesicState& s0, double T, double dt) {
  std::size_t center = 0;
  const std::vector<GeodesicState> path = two_sided(m, s0, T, dt, center);
  std::vector<double> K;
  K.reserve(path.size());
  for (const auto& s : path) K.push_back(m.curvature(s.x, s.y));
  const double h = std::abs(dt) / 2.0;
  const std::vector<double> uu = riccati_pass(K, h, true);
  const std::vector<double> us = riccati_pass(K, h, false);
  std::vector<RiccatiSample> out;
  out.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i)
    out.push_back({path[i].s, path[i].x, path[i].y, path[i].theta, K[i], us[i], uu[i]});
  return out;
}

RiccatiReport riccati_subspaces(const ConformalMetric& m, const GeodesicState& s0, double T, double dt) {
  const std::vector<RiccatiSample> t = riccati_trajectory(m, s0, T, dt);
  const RiccatiSample& c = t[(t.size() - 1) / 2];
  return {c.u_stable, c.u_unstable, c.u_unstable - c.u_stable};
}

std::string trajectory_csv(const std::vector<RiccatiSample>& samples) {
  std::ostringstream out;
  out << "s,x,y,theta,K,u_stable,u_unstable\n";
  for (const auto& r : samples) {
    out << format_double(r.s) << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
        << format_double(r.theta) << ',' << format_double(r.K) << ',' << format_double(r.u_stable) << ','
        << format_double(r.u_unstable) << '\n';
  }
  return out.str();
}

std::vector<double> unstable_jacobi(const ConformalMetric& m, const GeodesicState& s0, double length, double T,
                                    double dt) {
  if (!(length >= 0.0)) throw Error(ErrorKind::invalid_argument, "length must be nonnegative");
  const Trajectory back = integrate_geodesic(m, s0, -T, dt / 2.0);
  const Trajectory fwd = integrate_geodesic(m, s0, length, dt / 2.0);
  std::vector<double> K;
  for (auto it = back.states.rbegin(); it != back.states.rend(); ++it) K.push_back(m.curvature(it->x, it->y));
  const std::size_t center = K.size() - 1;
  for (std::size_t i = 1; i < fwd.states.size(); ++i) K.push_back(m.curvature(fwd.states[i].x, fwd.states[i].y));
  const std::vector<double> u = riccati_pass(K, std::abs(dt) / 2.0, true);
  const double h = std::abs(dt) / 2.0;
  std::vector<double> J{1.0};
  double log_j = 0.0;
  for (std::size_t i = center + 1; i < u.size(); ++i) {
    log_j += 0.5 * h * (u[i - 1] + u[i]);
    J.push_back(std::exp(log_j));
  }
  return J;
}

}  // namespace geoflow

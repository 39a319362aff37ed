#include "geoflow/density/density.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "geoflow/error.hpp"
#include "geoflow/io.hpp"

namespace geoflow {

AngularBins::AngularBins(int count, double offset) : count_(count), width_(0.0), offset_(offset) {
  if (count <= 0) throw Error(ErrorKind::invalid_argument, "bin count must be positive");
  width_ = kTwoPi / count;
}

AngularBins AngularBins::centered(int count) {
  if (count <= 0) throw Error(ErrorKind::invalid_argument, "bin count must be positive");
  return AngularBins(count, -0.5 * kTwoPi / count);
}

double AngularBins::center(int k) const { return reduce_angle(offset_ + (k + 0.5) * width_); }

int AngularBins::index(double angle) const {
  const double u = reduce_angle(angle - offset_);
  int k = static_cast<int>(std::floor(u / width_));
  return std::clamp(k, 0, count_ - 1);
}

BoundaryMeasure::BoundaryMeasure(DiskPoint basepoint, double exponent_s, double truncation_r, std::vector<Atom> atoms)
    : basepoint_(basepoint), exponent_s_(exponent_s), truncation_r_(truncation_r), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorKind::degenerate_measure, "boundary measure has no atoms");
  cumulative_.reserve(atoms_.size());
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
      throw Error(ErrorKind::degenerate_measure, "atom weight must be finite and nonnegative");
    acc += a.weight;
    cumulative_.push_back(acc);
  }
  if (!(acc > 0.0)) throw Error(ErrorKind::degenerate_measure, "boundary measure has zero mass");
}

double BoundaryMeasure::total_mass() const { return cumulative_.back(); }

std::vector<double> BoundaryMeasure::binned(const AngularBins& bins) const {
  std::vector<double> mass(bins.count(), 0.0);
  for (const Atom& a : atoms_) mass[bins.index(a.point.angle())] += a.weight;
  return mass;
}

double poincare_series(const Ball& ball, double s, DiskPoint p) { return poincare_series(ball, s, p, ball.radius()); }

double poincare_series(const Ball& ball, double s, DiskPoint p, double r) {
  if (r > ball.radius() + 1e-12) throw Error(ErrorKind::invalid_argument, "series radius exceeds the ball");
  double sum = 0.0;
  for (const GroupElement& e : ball.elements()) {
    if (e.displacement > r) break;
    sum += std::exp(-s * dist(p, apply(e.matrix, DiskPoint::origin())));
  }
  return sum;
}

BoundaryMeasure ps_density(const Ball& ball, DiskPoint p, double s, double inner_cutoff) {
  std::vector<Atom> atoms;
  atoms.reserve(ball.size());
  for (std::size_t i = 1; i < ball.size(); ++i) {
    if (ball.elements()[i].displacement < inner_cutoff) continue;
    const DiskPoint x = apply(ball.elements()[i].matrix, DiskPoint::origin());
    const double d = dist(p, x);
    if (d < 1e-12) continue;
    atoms.push_back({ray_endpoint(p, x), std::exp(-s * d)});
  }
  return BoundaryMeasure(p, s, ball.radius(), std::move(atoms));
}

double growth_exponent(const Ball& ball, double r_lo, double r_hi, double step) {
  if (!(r_hi > r_lo) || !(step > 0.0) || r_hi > ball.radius() + 1e-12)
    throw Error(ErrorKind::invalid_argument, "bad radius range for growth fit");
  std::vector<double> xs, ys;
  for (double r = r_lo; r <= r_hi + 1e-9; r += step) {
    xs.push_back(r);
    ys.push_back(std::log(static_cast<double>(ball.count_within(r))));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

TransformationReport check_transformation(const BoundaryMeasure& mu_p, const BoundaryMeasure& mu_q, double h,
                                          const AngularBins& bins, double floor) {
  const std::vector<double> mp = mu_p.binned(bins);
  const std::vector<double> mq = mu_q.binned(bins);
  const double tp = mu_p.total_mass();
  const double tq = mu_q.total_mass();
  TransformationReport report;
  report.noise_floor = floor;
  for (int k = 0; k < bins.count(); ++k) {
    BinComparison c;
    c.center = bins.center(k);
    c.mass_p = mp[k];
    c.mass_q = mq[k];
    c.expected = std::exp(-h * busemann(mu_q.basepoint(), mu_p.basepoint(), BoundaryPoint::from_angle(c.center)));
    c.included = mp[k] >= floor * tp && mq[k] >= floor * tq && mq[k] > 0.0;
    if (c.included) {
      c.ratio = mp[k] / mq[k];
      c.deviation = std::abs(c.ratio / c.expected - 1.0);
      report.max_relative_deviation = std::max(report.max_relative_deviation, c.deviation);
      ++report.bins_used;
    } else {
      report.excluded_bins.push_back(k);
    }
    report.bins.push_back(c);
  }
  return report;
}

EquivarianceReport check_equivariance(const Ball& big, const Isometry& gamma, DiskPoint p, double s, double r,
                                      const AngularBins& bins, double floor) {
  const DiskPoint o = DiskPoint::origin();
  const DiskPoint gp = apply(gamma, p);
  const double shift = dist(o, apply(gamma, o));
  if (big.radius() + 1e-9 < r + shift + dist_from_origin(p))
    throw Error(ErrorKind::invalid_argument, "ball too small for the shifted measure");
  const Isometry gamma_inv = gamma.inverse();

  // Truncation by distance from the basepoint: the index sets of the two
  // measures correspond exactly under gamma''  = gamma^-1 gamma'.
  std::vector<double> mass_p(bins.count(), 0.0), mass_gp(bins.count(), 0.0);
  EquivarianceReport report;
  for (std::size_t i = 0; i < big.size(); ++i) {
    const GroupElement& e = big.elements()[i];
    const DiskPoint x = apply(e.matrix, o);
    if (i > 0) {
      const double d = dist(p, x);
      if (d <= r && d > 1e-12) mass_p[bins.index(ray_endpoint(p, x).angle())] += std::exp(-s * d);
    }
    if (displacement(gamma_inv * e.matrix) > 1e-9) {
      const double d = dist(gp, x);
      if (d <= r && d > 1e-12) {
        const BoundaryPoint back = apply(gamma_inv, ray_endpoint(gp, x));
        mass_gp[bins.index(back.angle())] += std::exp(-s * d);
      }
    }
  }
  const double total = std::accumulate(mass_p.begin(), mass_p.end(), 0.0);
  for (int k = 0; k < bins.count(); ++k) {
    if (mass_p[k] < floor * total || mass_p[k] <= 0.0) continue;
    report.max_relative_deviation = std::max(report.max_relative_deviation, std::abs(mass_gp[k] / mass_p[k] - 1.0));
    ++report.bins_used;
  }

  const Ball plain = big.restricted(r);
  report.mass_p = ps_density(plain, p, s).total_mass();
  report.mass_gamma_p = ps_density(plain, gp, s).total_mass();
  report.mass_difference = std::abs(report.mass_p - report.mass_gamma_p);
  report.truncation_bound =
      poincare_series(big, s, p, r) - poincare_series(big, s, p, std::max(0.0, r - shift));
  return report;
}

std::string density_csv(const BoundaryMeasure& mu, const AngularBins& bins) {
  std::ostringstream out;
  out << "bin_center_angle,mass\n";
  const std::vector<double> mass = mu.binned(bins);
  for (int k = 0; k < bins.count(); ++k) out << format_double(bins.center(k)) << ',' << format_double(mass[k]) << '\n';
  return out.str();
}

std::string density_metadata_json(const BoundaryMeasure& mu, const AngularBins& bins) {
  nlohmann::ordered_json j;
  j["p"] = {mu.basepoint().z().real(), mu.basepoint().z().imag()};
  j["s"] = mu.exponent_s();
  j["R"] = mu.truncation_r();
  j["bins"] = bins.count();
  j["bin_offset"] = bins.offset();
  j["atoms"] = mu.atoms().size();
  j["total_mass"] = mu.total_mass();
  return j.dump(2) + "\n";
}

}  // namespace geoflow

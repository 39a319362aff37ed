#pragma once

// Quotient dynamics and the counting experiments.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geoflow/fuchsian/spectrum.hpp"
#include "geoflow/mme/mme.hpp"

namespace geoflow {

/// (reduced vector, gamma) with apply_phase(gamma, v) = reduced vector.
std::pair<PhasePoint, Isometry> reduce_to_F(const FundamentalDomain& domain, const PhasePoint& v);

/// g^t v reduced to F; the flow is split into pieces of length <= 8 with a
/// reduction after each, so any t is safe.
PhasePoint flow_in_quotient(const FundamentalDomain& domain, const PhasePoint& v, double t);

/// One period of the closed geodesic of a class, in the quotient.
struct RealizedGeodesic {
  Word word;
  double length = 0.0;
  double step = 0.0;                 // length / samples.size() <= requested step
  std::vector<PhasePoint> samples;   // at parameters k step, reduced to F
  std::vector<FundamentalDomain::TraceSegment> segments;

  /// Reduced vector at parameter s in [0, length].
  PhasePoint at(double s) const;
};

/// Walks the axis of the class representative from its point nearest o.
RealizedGeodesic realize_geodesic(const FundamentalDomain& domain, const GeodesicClass& c, double step);

/// Arclength of the period spent in the box; the direction window is resolved
/// with midpoints of cells of width <= step.
double arclength_in_box(const RealizedGeodesic& g, const PhaseBox& box, double step);

/// Counts of the ceil(length / eps) equal cells of the period whose midpoints
/// lie in each box.
struct CrossingRecord {
  Word word;
  double t = 0.0;
  std::size_t cells = 0;
  std::vector<std::size_t> counts;
};
CrossingRecord crossing_record(const RealizedGeodesic& g, const std::vector<PhaseBox>& boxes, double eps);

/// Realized primitive classes of a table up to some length.
class OrbitCatalog {
 public:
  OrbitCatalog(const FundamentalDomain& domain, const SpectrumTable& table, double t_max, double step);

  const std::vector<RealizedGeodesic>& orbits() const { return orbits_; }
  double step() const { return step_; }

  /// mu_t(B): average over primitive classes of length <= t of the fraction
  /// of the period spent in B.
  double equidistribution(const PhaseBox& box, double t) const;
  /// Mean crossing count over primitive classes with length in (t - eps, t + eps].
  MeasureEstimate mean_crossings(const PhaseBox& box, double t, double eps) const;

 private:
  std::vector<RealizedGeodesic> orbits_;
  double step_;
};

double equidistribution_stat(const FundamentalDomain& domain, const SpectrumTable& table, const PhaseBox& box,
                             double t, double step);

/// m(B1 meet g^-t B2) with v drawn from normalized Liouville measure on B1
/// (the measure of maximal entropy in constant curvature).
MeasureEstimate mixing_correlation(const FundamentalDomain& domain, const PhaseBox& b1, const PhaseBox& b2, double t,
                                   std::size_t n_samples, std::uint64_t seed);

enum class AsymptoticRelation { sim, bowtie, cong };

/// Values on a (t, eps) grid: values[i][j] at t_grid[i], eps_grid[j].
struct GridSamples {
  std::vector<double> t_grid;
  std::vector<double> eps_grid;
  std::vector<std::vector<double>> values;
};

struct AsymptoticReport {
  AsymptoticRelation relation = AsymptoticRelation::cong;
  std::string quantifier_template;
  std::vector<double> t_grid;
  std::vector<double> eps_grid;
  std::vector<std::vector<double>> f;
  std::vector<std::vector<double>> g;
  double alpha = 0.0;
  double K = 0.0;
  /// K eps + alpha - |ln f/g| at the largest t, per eps.
  std::vector<double> margins;
  bool passed = false;
};

/// Finite-grid surrogate of the relations ~ (K = 0), bowtie (alpha = 0) and
/// cong: K is the least nonnegative slope with |ln f/g| <= K eps + alpha on
/// every t below the largest, and the test is applied at the largest t.
/// Throws invalid-argument on nonpositive samples or mismatched grids.
AsymptoticReport asym_compare(const GridSamples& f, const GridSamples& g, double alpha,
                              AsymptoticRelation relation = AsymptoticRelation::cong);

struct CountingRow {
  std::string law;
  double t = 0.0;
  double observed = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
  double std_error = 0.0;
};

struct CountingSuiteReport {
  std::vector<CountingRow> rows;
  /// |ratio - 1| strictly decreasing over the t grid.
  bool window_approach = false;
  bool cumulative_approach = false;
  /// The window law P_{t,eps} cong 2 eps e^{ht} / t on the t grid.
  AsymptoticReport window_relation;
};

struct CountingBox {
  PhaseBox box;
  MeasureEstimate measure;  // m(B)
};

/// Window, cumulative, implied N(B, t) and crossing rows for each t. The box
/// rows are emitted when `box` and `catalog` are given.
CountingSuiteReport counting_suite(const SpectrumTable& table, const std::vector<double>& t_grid, double eps,
                                   double h, const CountingBox* box = nullptr,
                                   const OrbitCatalog* catalog = nullptr, double alpha = 0.1);

std::string counting_csv(const CountingSuiteReport& report);
std::string asymptotic_report_json(const AsymptoticReport& report);

}  // namespace geoflow

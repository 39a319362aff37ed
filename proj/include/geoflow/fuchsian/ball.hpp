#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "geoflow/fuchsian/surface.hpp"

namespace geoflow {

struct GroupElement {
  Isometry matrix;
  /// Shortlex-first word among the paths the search explored.
  Word word;
  /// dist(o, matrix . o)
  double displacement = 0.0;
};

double displacement(const Isometry& g);

/// Set of isometries up to sign, keyed by entries quantised to a fixed grid.
/// Neighbouring cells are probed whenever an entry sits within the match
/// tolerance of a cell edge, so equal matrices are found despite rounding drift.
class IsometryIndex {
 public:
  static constexpr double kGrid = 1e-6;
  static constexpr double kMatchTolerance = 1e-7;

  /// Id of a stored isometry equal to +-g, or -1.
  std::int64_t find(const Isometry& g) const;
  /// Inserts and returns true, or returns false if +-g is already present.
  bool insert(const Isometry& g, std::int64_t id);
  std::size_t size() const { return stored_.size(); }
  void reserve(std::size_t n);

 private:
  struct Cell {
    std::int64_t k[4];
    friend bool operator==(const Cell&, const Cell&) = default;
  };
  struct CellHash {
    std::size_t operator()(const Cell& c) const noexcept;
  };

  std::int64_t find_signed(const Isometry& g) const;

  // Cell -> head of a chain through next_.
  std::unordered_map<Cell, std::int64_t, CellHash> heads_;
  std::vector<std::int64_t> next_;
  std::vector<Isometry> stored_;
  std::vector<std::int64_t> ids_;
};

struct BallOptions {
  /// Nodes are expanded while their displacement is at most R + c_prune. Zero
  /// is complete when the generators are the side pairings of the Dirichlet
  /// domain at o: every element has a neighbour of strictly smaller
  /// displacement.
  double c_prune = 0.0;
  double hard_cap = 16.0;
  std::size_t max_elements = 40'000'000;
};

class Ball {
 public:
  Ball() = default;
  Ball(double radius, std::vector<GroupElement> elements);

  double radius() const { return radius_; }
  /// Sorted by (displacement, word); the identity comes first.
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  /// Number of elements with displacement <= r (r <= radius()).
  std::size_t count_within(double r) const;
  Ball restricted(double r) const;

 private:
  double radius_ = 0.0;
  std::vector<GroupElement> elements_;
};

/// All group elements with displacement <= R, one per element (matrix dedup).
/// Throws out-of-range above the hard cap and PartialResultError when the
/// element budget is exhausted.
Ball enumerate_ball(const SurfaceModel& surface, double radius, const BallOptions& options = {});

/// Unpruned enumeration of every freely reduced word of length <= max_length,
/// deduplicated by matrix and restricted to displacement <= radius. Test oracle.
Ball brute_force_ball(const SurfaceModel& surface, double radius, int max_length);

}  // namespace geoflow

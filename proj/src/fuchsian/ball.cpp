#include "geoflow/fuchsian/ball.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "geoflow/error.hpp"

namespace geoflow {

double displacement(const Isometry& g) {
  return 2.0 * std::asinh(std::abs(g.b()) / std::sqrt(g.determinant()));
}

std::size_t IsometryIndex::CellHash::operator()(const Cell& c) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t k : c.k) {
    h ^= static_cast<std::uint64_t>(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

namespace {

void entries(const Isometry& g, double (&x)[4]) {
  x[0] = g.a().real();
  x[1] = g.a().imag();
  x[2] = g.b().real();
  x[3] = g.b().imag();
}

bool close(const Isometry& g, const Isometry& h, double tol) {
  return std::abs(g.a() - h.a()) <= tol && std::abs(g.b() - h.b()) <= tol;
}

}  // namespace

std::int64_t IsometryIndex::find_signed(const Isometry& g) const {
  double x[4];
  entries(g, x);
  std::int64_t base[4];
  int alt[4];  // neighbouring cell offset to probe, or 0
  for (int i = 0; i < 4; ++i) {
    const double q = x[i] / kGrid;
    base[i] = static_cast<std::int64_t>(std::floor(q));
    const double frac = q - std::floor(q);
    alt[i] = frac * kGrid < kMatchTolerance ? -1 : ((1.0 - frac) * kGrid < kMatchTolerance ? 1 : 0);
  }
  for (int mask = 0; mask < 16; ++mask) {
    bool valid = true;
    Cell c;
    for (int i = 0; i < 4; ++i) {
      const bool shifted = (mask >> i) & 1;
      if (shifted && alt[i] == 0) {
        valid = false;
        break;
      }
      c.k[i] = base[i] + (shifted ? alt[i] : 0);
    }
    if (!valid) continue;
    const auto it = heads_.find(c);
    if (it == heads_.end()) continue;
    for (std::int64_t j = it->second; j >= 0; j = next_[j]) {
      if (close(stored_[j], g, kMatchTolerance)) return ids_[j];
    }
  }
  return -1;
}

std::int64_t IsometryIndex::find(const Isometry& g) const {
  const std::int64_t id = find_signed(g);
  if (id >= 0) return id;
  return find_signed(Isometry(-g.a(), -g.b()));
}

bool IsometryIndex::insert(const Isometry& g, std::int64_t id) {
  if (find(g) >= 0) return false;
  double x[4];
  entries(g, x);
  Cell c;
  for (int i = 0; i < 4; ++i) c.k[i] = static_cast<std::int64_t>(std::floor(x[i] / kGrid));
  const auto slot = static_cast<std::int64_t>(stored_.size());
  stored_.push_back(g);
  ids_.push_back(id);
  auto [it, fresh] = heads_.try_emplace(c, slot);
  next_.push_back(fresh ? -1 : it->second);
  it->second = slot;
  return true;
}

void IsometryIndex::reserve(std::size_t n) {
  heads_.reserve(n);
  next_.reserve(n);
  stored_.reserve(n);
  ids_.reserve(n);
}

namespace {

bool element_less(const GroupElement& x, const GroupElement& y) {
  if (x.displacement != y.displacement) return x.displacement < y.displacement;
  if (x.word.size() != y.word.size()) return x.word.size() < y.word.size();
  return x.word < y.word;
}

}  // namespace

Ball::Ball(double radius, std::vector<GroupElement> elements)
    : radius_(radius), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end(), element_less);
}

std::size_t Ball::count_within(double r) const {
  const auto it = std::upper_bound(elements_.begin(), elements_.end(), r,
                                   [](double v, const GroupElement& e) { return v < e.displacement; });
  return static_cast<std::size_t>(it - elements_.begin());
}

Ball Ball::restricted(double r) const {
  if (r > radius_) throw Error(ErrorKind::out_of_range, "restriction beyond the enumerated radius");
  Ball out;
  out.radius_ = r;
  out.elements_.assign(elements_.begin(), elements_.begin() + static_cast<std::ptrdiff_t>(count_within(r)));
  return out;
}

Ball enumerate_ball(const SurfaceModel& surface, double radius, const BallOptions& options) {
  if (!(radius >= 0.0)) throw Error(ErrorKind::invalid_argument, "ball radius must be nonnegative");
  if (radius > options.hard_cap) {
    std::ostringstream msg;
    msg << "ball radius " << radius << " exceeds the hard cap " << options.hard_cap;
    throw Error(ErrorKind::out_of_range, msg.str());
  }
  const double expand_limit = radius + options.c_prune;

  std::vector<GroupElement> nodes;
  IsometryIndex index;
  nodes.push_back({Isometry::identity(), Word(), 0.0});
  index.insert(Isometry::identity(), 0);

  // Nodes are appended in shortlex order of their words, so a FIFO scan over
  // `nodes` is breadth first.
  std::size_t head = 0;
  const int n_letters = surface.letter_count();
  for (; head < nodes.size(); ++head) {
    if (nodes[head].displacement > expand_limit) continue;
    // Copies: pushing children may reallocate `nodes`.
    const Word w = nodes[head].word;
    const Isometry m = nodes[head].matrix;
    for (Letter x = 0; x < n_letters; ++x) {
      if (!w.empty() && static_cast<Letter>(w.back()) == inverse_letter(x)) continue;
      Isometry g = m * surface.letter(x);
      const double d = displacement(g);
      if (d > expand_limit) continue;
      if (index.find(g) >= 0) continue;
      if (nodes.size() >= options.max_elements) {
        double completed = d;
        for (std::size_t j = head; j < nodes.size(); ++j) completed = std::min(completed, nodes[j].displacement);
        std::ostringstream msg;
        msg << "ball enumeration budget of " << options.max_elements << " elements exhausted";
        throw PartialResultError(msg.str(), completed);
      }
      Word child = w;
      child.push_back(static_cast<char>(x));
      index.insert(g, static_cast<std::int64_t>(nodes.size()));
      nodes.push_back({g, std::move(child), d});
    }
  }

  std::vector<GroupElement> kept;
  for (auto& n : nodes) {
    if (n.displacement <= radius) kept.push_back(std::move(n));
  }
  return Ball(radius, std::move(kept));
}

Ball brute_force_ball(const SurfaceModel& surface, double radius, int max_length) {
  std::vector<GroupElement> found{{Isometry::identity(), Word(), 0.0}};
  IsometryIndex index;
  index.insert(Isometry::identity(), 0);
  const int n_letters = surface.letter_count();
  // Depth-first over every freely reduced word; only matches are stored.
  Word word;
  std::vector<Isometry> prefix{Isometry::identity()};
  auto visit = [&](auto&& self) -> void {
    if (static_cast<int>(word.size()) == max_length) return;
    for (Letter x = 0; x < n_letters; ++x) {
      if (!word.empty() && static_cast<Letter>(word.back()) == inverse_letter(x)) continue;
      const Isometry g = prefix.back() * surface.letter(x);
      word.push_back(static_cast<char>(x));
      const double d = displacement(g);
      if (d <= radius && index.insert(g, static_cast<std::int64_t>(found.size()))) found.push_back({g, word, d});
      prefix.push_back(g);
      self(self);
      prefix.pop_back();
      word.pop_back();
    }
  };
  visit(visit);
  return Ball(radius, std::move(found));
}

}  // namespace geoflow

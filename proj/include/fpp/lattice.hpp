#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fpp {

struct Vertex {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr bool operator==(Vertex, Vertex) = default;
  /// Lexicographic in (y, x); this is the tie-break order used by the search.
  friend constexpr std::strong_ordering operator<=>(Vertex a, Vertex b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
  friend constexpr Vertex operator+(Vertex a, Vertex b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vertex operator-(Vertex a, Vertex b) { return {a.x - b.x, a.y - b.y}; }
};

constexpr std::int64_t l1_distance(Vertex a, Vertex b) {
  const std::int64_t dx = std::int64_t{a.x} - b.x;
  const std::int64_t dy = std::int64_t{a.y} - b.y;
  return (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
}

enum class Orientation : std::uint8_t { horizontal = 0, vertical = 1 };

/// Canonical name of an undirected lattice edge: the edge from (x, y) to
/// (x + 1, y) when horizontal, to (x, y + 1) when vertical.
struct EdgeKey {
  std::int32_t x = 0;
  std::int32_t y = 0;
  Orientation orientation = Orientation::horizontal;

  /// Throws std::invalid_argument unless a and b are lattice neighbours.
  static EdgeKey between(Vertex a, Vertex b);

  Vertex first() const { return {x, y}; }
  Vertex second() const {
    return orientation == Orientation::horizontal ? Vertex{x + 1, y} : Vertex{x, y + 1};
  }

  friend constexpr auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct VertexHash {
  std::size_t operator()(Vertex v) const noexcept;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& e) const noexcept;
};

/// Simple nearest-neighbour path; never empty.
class LatticePath {
 public:
  /// Validates adjacency and simplicity; throws std::invalid_argument.
  explicit LatticePath(std::vector<Vertex> vertices);

  static LatticePath trivial(Vertex v) { return LatticePath(std::vector<Vertex>{v}); }

  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  /// Number of edges.
  std::size_t length() const noexcept { return vertices_.size() - 1; }
  Vertex front() const { return vertices_.front(); }
  Vertex back() const { return vertices_.back(); }
  Vertex operator[](std::size_t i) const { return vertices_[i]; }

  std::vector<EdgeKey> edges() const;
  LatticePath reversed() const;
  /// Index of v on the path, or -1.
  std::ptrdiff_t index_of(Vertex v) const;

  friend bool operator==(const LatticePath&, const LatticePath&) = default;

 private:
  std::vector<Vertex> vertices_;
};

/// Swaps x and y on every vertex.
LatticePath transpose(const LatticePath& p);

}  // namespace fpp

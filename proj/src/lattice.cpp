#include "fpp/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "fpp/rng.hpp"

namespace fpp {

EdgeKey EdgeKey::between(Vertex a, Vertex b) {
  if (l1_distance(a, b) != 1) throw std::invalid_argument("EdgeKey::between: vertices are not adjacent");
  const Vertex lo = (a.x < b.x || a.y < b.y) ? a : b;
  return {lo.x, lo.y, a.y == b.y ? Orientation::horizontal : Orientation::vertical};
}

std::size_t VertexHash::operator()(Vertex v) const noexcept {
  return rng::mix64((std::uint64_t{static_cast<std::uint32_t>(v.x)} << 32) | static_cast<std::uint32_t>(v.y));
}

std::size_t EdgeKeyHash::operator()(const EdgeKey& e) const noexcept {
  return rng::mix64(VertexHash{}({e.x, e.y}) ^ static_cast<std::uint64_t>(e.orientation));
}

LatticePath::LatticePath(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw std::invalid_argument("LatticePath: empty vertex list");
  for (std::size_t i = 1; i < vertices_.size(); ++i)
    if (l1_distance(vertices_[i - 1], vertices_[i]) != 1)
      throw std::invalid_argument("LatticePath: consecutive vertices are not adjacent");
  std::unordered_set<Vertex, VertexHash> seen;
  seen.reserve(vertices_.size());
  for (auto v : vertices_)
    if (!seen.insert(v).second) throw std::invalid_argument("LatticePath: path is not simple");
}

std::vector<EdgeKey> LatticePath::edges() const {
  std::vector<EdgeKey> out;
  out.reserve(length());
  for (std::size_t i = 1; i < vertices_.size(); ++i) out.push_back(EdgeKey::between(vertices_[i - 1], vertices_[i]));
  return out;
}

LatticePath LatticePath::reversed() const {
  return LatticePath(std::vector<Vertex>(vertices_.rbegin(), vertices_.rend()));
}

std::ptrdiff_t LatticePath::index_of(Vertex v) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), v);
  return it == vertices_.end() ? -1 : it - vertices_.begin();
}

LatticePath transpose(const LatticePath& p) {
  std::vector<Vertex> vs;
  vs.reserve(p.size());
  for (auto v : p.vertices()) vs.push_back({v.y, v.x});
  return LatticePath(std::move(vs));
}

}  // namespace fpp

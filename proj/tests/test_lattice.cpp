#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "fpp/lattice.hpp"

using namespace fpp;

TEST_CASE("vertex order is (y, x)") {
  CHECK(Vertex{5, 0} < Vertex{0, 1});
  CHECK(Vertex{0, 1} < Vertex{1, 1});
  CHECK(l1_distance({0, 0}, {-3, 4}) == 7);
}

TEST_CASE("edge keys are canonical") {
  const auto h = EdgeKey::between({1, 2}, {0, 2});
  CHECK(h == EdgeKey{0, 2, Orientation::horizontal});
  CHECK(h == EdgeKey::between({0, 2}, {1, 2}));
  const auto v = EdgeKey::between({1, 2}, {1, 3});
  CHECK(v == EdgeKey{1, 2, Orientation::vertical});
  CHECK(v.second() == Vertex{1, 3});
  CHECK_THROWS_AS(EdgeKey::between({0, 0}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(EdgeKey::between({0, 0}, {0, 0}), std::invalid_argument);

  std::unordered_set<EdgeKey, EdgeKeyHash> s;
  for (int x = -10; x < 10; ++x)
    for (int y = -10; y < 10; ++y) {
      s.insert({x, y, Orientation::horizontal});
      s.insert({x, y, Orientation::vertical});
    }
  CHECK(s.size() == 800);
}

TEST_CASE("path validation") {
  CHECK_THROWS_AS(LatticePath(std::vector<Vertex>{}), std::invalid_argument);
  CHECK_THROWS_AS(LatticePath({{0, 0}, {2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(LatticePath({{0, 0}, {1, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(LatticePath({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}), std::invalid_argument);

  const LatticePath p({{0, 0}, {1, 0}, {1, 1}, {2, 1}});
  CHECK(p.length() == 3);
  CHECK(p.size() == 4);
  CHECK(p.index_of({1, 1}) == 2);
  CHECK(p.index_of({5, 5}) == -1);
  CHECK(p.edges().size() == 3);
  CHECK(p.edges()[1] == EdgeKey{1, 0, Orientation::vertical});
  CHECK(p.reversed().front() == Vertex{2, 1});
  CHECK(p.reversed().reversed() == p);
  CHECK(transpose(p) == LatticePath({{0, 0}, {0, 1}, {1, 1}, {1, 2}}));
  CHECK(LatticePath::trivial({3, 3}).length() == 0);
}

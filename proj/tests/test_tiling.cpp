#include "doctest.h"
#include "qtile/gpp.hpp"
#include "qtile/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace qtile;

namespace {

// Vertices of a prototile walked from the origin along its canonical direction word.
std::vector<ModuleVector> walk(const std::vector<int>& word, const ModuleVector& start = ModuleVector::Zero()) {
  std::vector<ModuleVector> loop{start};
  for (int d : word) loop.push_back(loop.back() + unit(d));
  loop.pop_back();
  return loop;
}

std::vector<int> rotated(std::vector<int> word, int k) {
  for (int& d : word) d = ((d + k) % 10 + 10) % 10;
  return word;
}

long brute_unit_pairs(const std::vector<ModuleVector>& pts) {
  long n = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs((to_physical(pts[i]) - to_physical(pts[j])).norm() - 1.0) < 1e-9) ++n;
  return n;
}

GoldenInt loop_twice_area(const PointSet& pts, const Tile& t) {
  std::vector<ModuleVector> loop;
  for (int v : t.boundary) loop.push_back(pts[v]);
  return twice_area_over_sin36(loop);
}

}  // namespace

TEST_CASE("shape letters") {
  for (Shape s : {Shape::R, Shape::P, Shape::H, Shape::C, Shape::S}) CHECK(shape_from_letter(shape_letter(s)) == s);
  CHECK_FALSE(shape_from_letter('Q').has_value());
}

TEST_CASE("unit pairs and edges") {
  CHECK(build_edges(PointSet({mv(0, 0, 0, 0)})).edges.empty());
  CHECK(build_edges(PointSet({mv(0, 0, 0, 0), mv(1, 0, 0, 0)})).edges.size() == 1);

  const auto motif = decorate({ModuleVector::Zero()}, RuleCatalog::builtin().get("para-penrose"));
  REQUIRE(motif.size() == 11);
  const EdgeBuild eb = build_edges(PointSet(motif));
  CHECK(eb.edges.size() == 10);
  CHECK(eb.crossed.empty());
  CHECK(brute_unit_pairs(motif) == 10);

  // Brute-force comparison on a generated patch.
  const Tiling t = run_sequence({{"para-penrose"}, "P"});
  CHECK(long(unit_pairs(t.vertices()).size()) == brute_unit_pairs(t.vertices().points()));
  CHECK(t.edges().size() + t.crossed_pairs().size() == unit_pairs(t.vertices()).size());
}

TEST_CASE("unit connectivity") {
  {
    PointSet pts({mv(0, 0, 0, 0), mv(1, 0, 0, 0)});
    CHECK(check_unit_connectivity(pts, build_edges(pts).edges).ok);
  }
  {
    // 36 degree rhombus: the short diagonal has length 1/tau and squared norm 2 - tau.
    const auto loop = walk(prototile_word(Shape::R));
    REQUIRE(loop.size() == 4);
    CHECK(norm_squared(loop[3] - loop[1]) * GoldenNum(1) != GoldenNum(1));
    PointSet pts(loop);
    const EdgeBuild eb = build_edges(pts);
    CHECK(eb.edges.size() == 4);
    CHECK(check_unit_connectivity(pts, eb.edges).ok);
    const GoldenNum d0 = norm_squared(loop[2] - loop[0]), d1 = norm_squared(loop[3] - loop[1]);
    CHECK((d0 == GoldenNum(2) - GoldenNum::tau() || d1 == GoldenNum(2) - GoldenNum::tau()));
  }
  {
    // Find a unit segment that properly crosses 0 -> e0 and hand both to the checker.
    const Point2 a(0, 0), b(1, 0);
    auto crosses = [&](const Point2& c, const Point2& d) {
      auto side = [](const Point2& p, const Point2& q, const Point2& r) {
        return (q - p).x() * (r - p).y() - (q - p).y() * (r - p).x();
      };
      return side(a, b, c) * side(a, b, d) < -1e-9 && side(c, d, a) * side(c, d, b) < -1e-9;
    };
    ModuleVector p = ModuleVector::Zero();
    int dir = -1;
    for (int i = -1; i <= 1 && dir < 0; ++i)
      for (int j = -1; j <= 1 && dir < 0; ++j)
        for (int k = -1; k <= 1 && dir < 0; ++k)
          for (int d = 0; d < 10 && dir < 0; ++d) {
            const ModuleVector q = mv(i, j, k, 0);
            if (crosses(to_physical(q), to_physical(q + unit(d)))) p = q, dir = d;
          }
    REQUIRE(dir >= 0);
    PointSet pts({mv(0, 0, 0, 0), mv(1, 0, 0, 0), p, p + unit(dir)});
    std::vector<Edge> all = unit_pairs(pts);
    REQUIRE(all.size() == 2);
    CHECK(crossing_segments(pts, all).size() == 1);
    const UcReport rep = check_unit_connectivity(pts, all);
    CHECK_FALSE(rep.ok);
    CHECK(rep.crossings.size() == 1);
    CHECK(build_edges(pts).edges.empty());
  }
}

TEST_CASE("face extraction") {
  const auto pent = walk(prototile_word(Shape::P));
  {
    const Tiling t = Tiling::from_points(pent);
    REQUIRE(t.faces().size() == 1);
    CHECK(t.faces()[0].shape == Shape::P);
    CHECK(t.euler_characteristic() == 2);
  }
  {
    // Second pentagon: the first one reflected across its edge along e0.
    std::vector<ModuleVector> pts = pent;
    for (const auto& v : pent) pts.push_back(apply_symmetry(D10Element::reflection(), v));
    const Tiling t = Tiling::from_points(pts);
    REQUIRE(t.faces().size() == 2);
    CHECK(t.faces()[0].shape == Shape::P);
    CHECK(t.faces()[1].shape == Shape::P);
    CHECK(t.edges().size() == 9);
    const int o = t.vertices().find(mv(0, 0, 0, 0));
    const int f0 = t.face_left_of(o, 0);
    const int f1 = t.face_left_of(t.neighbor(o, 0), 5);
    CHECK(f0 >= 0);
    CHECK(f1 >= 0);
    CHECK(f0 != f1);
    CHECK(t.euler_characteristic() == 2);
  }
}

TEST_CASE("tile classification") {
  // Regular pentagon: every turn is +2.
  CHECK(classify_tile({0, 2, 4, 6, 8}) == Shape::P);
  CHECK(turn_word({0, 2, 4, 6, 8}) == std::vector<int>(5, 2));
  // Rhombus with turns (+4, +1, +4, +1).
  CHECK(classify_tile({0, 4, 5, 9}) == Shape::R);
  CHECK(classify_tile({0, 1, 2}) == Shape::Unknown);

  for (Shape s : {Shape::R, Shape::P, Shape::H, Shape::C, Shape::S}) {
    const auto w = prototile_word(s);
    CHECK(classify_tile(w) == s);
    for (int k = 0; k < 10; ++k) {
      auto r = rotated(w, k);
      CHECK(classify_tile(r) == s);
      std::rotate(r.begin(), r.begin() + 1, r.end());
      CHECK(canonical_word(r) == canonical_word(w));
      // Mirror image: reflect every direction and reverse the walk to keep it counter-clockwise.
      std::vector<int> m;
      for (auto it = r.rbegin(); it != r.rend(); ++it) m.push_back(((5 - *it) % 10 + 10) % 10);
      CHECK(classify_tile(m) == s);
    }
  }
}

TEST_CASE("prototile areas") {
  const double s36 = std::sin(std::acos(-1.0) / 5);
  CHECK(tile_area(Shape::R) == GoldenNum(1));
  CHECK(tile_area(Shape::R).to_double() * s36 == doctest::Approx(0.5878).epsilon(1e-4));
  const GoldenNum h = tile_area(Shape::H);
  CHECK(tile_area(Shape::R) / h == GoldenNum::tau_pow(3) - GoldenNum(4));
  CHECK(tile_area(Shape::P) / h == (GoldenNum(1) + GoldenNum::tau_pow(-2)) / GoldenNum(2));
  CHECK((tile_area(Shape::R) / h).to_double() == doctest::Approx(0.236).epsilon(1e-3));
  CHECK((tile_area(Shape::P) / h).to_double() == doctest::Approx(0.691).epsilon(1e-3));
  CHECK_THROWS(tile_area(Shape::Unknown));
}

TEST_CASE("generated patches are planar and exactly covered") {
  for (const std::string id : {"para-penrose", "rphc-3", "rph-l"}) {
    CAPTURE(id);
    run_sequence({std::vector<std::string>(4, id), "P"}, RuleCatalog::builtin(), [](const Tiling& t) {
      CHECK(t.euler_characteristic() == 2);
      CHECK(t.components() == 1);
      CHECK(t.uc().ok);
      GoldenInt inner, outer;
      for (const Tile& f : t.faces()) {
        CHECK(f.twice_area == loop_twice_area(t.vertices(), f));
        CHECK(f.twice_area.sign() > 0);
        inner += f.twice_area;
        if (!f.peripheral) CHECK(f.shape != Shape::Unknown);
        if (f.shape != Shape::Unknown) CHECK(to_field(f.twice_area) == tile_area(f.shape) * GoldenNum(2));
      }
      for (const Tile& o : t.outer_loops()) outer += loop_twice_area(t.vertices(), o);
      CHECK(inner == -outer);
    });
  }
}

TEST_CASE("area grows by tau^4 per step") {
  // Interior faces cover a region whose area ratio tends to tau^4 as the rim becomes negligible.
  std::vector<double> areas;
  run_sequence({std::vector<std::string>(5, "rph-l"), "P"}, RuleCatalog::builtin(), [&](const Tiling& t) {
    double a = 0;
    for (const Tile& f : t.faces()) a += f.area();
    areas.push_back(a);
  });
  REQUIRE(areas.size() == 6);
  CHECK(areas[5] / areas[4] == doctest::Approx(std::pow(kTau, 4)).epsilon(0.02));
}

TEST_CASE("peripheral marking") {
  const Tiling t = run_sequence({{"rph-l", "rph-l", "rph-l"}, "P"});
  const auto all = t.shape_counts(false), inner = t.shape_counts(true);
  for (int s = 0; s < 6; ++s) CHECK(inner[s] <= all[s]);
  CHECK(inner[static_cast<int>(Shape::Unknown)] == 0);
  // Every face touching an outer loop is peripheral.
  std::set<int> rim;
  for (const Tile& o : t.outer_loops())
    for (int v : o.boundary)
      for (int f : t.faces_at(v)) rim.insert(f);
  REQUIRE_FALSE(rim.empty());
  for (int f : rim) CHECK(t.faces()[f].peripheral);
}

#include "doctest.h"
#include "qtile/perpspace.hpp"

#include <cmath>

using namespace qtile;

namespace {

const double kPi = std::acos(-1.0);

// Largest signed distance beyond the ten edge lines of the decagon with vertices e_j.
double edge_line_excess(const Point2& p) {
  double d = -1e300;
  for (int j = 0; j < 10; ++j) {
    const Point2 a(std::cos(j * kPi / 5), std::sin(j * kPi / 5));
    const Point2 b(std::cos((j + 1) * kPi / 5), std::sin((j + 1) * kPi / 5));
    const Point2 e = (b - a).normalized(), q = p - a;
    d = std::max(d, -(e.x() * q.y() - e.y() * q.x()));
  }
  return d;
}

double sym_diff_area(const PerpRegion& a, const PerpRegion& b) { return area(difference(a, b)) + area(difference(b, a)); }

DualMapConfig cfg(const std::string& id) { return DualMapConfig::for_rule(RuleCatalog::builtin().get(id)); }

}  // namespace

TEST_CASE("projected clouds") {
  const PerpCloud seed = project_cloud(seed_tiling("P"));
  REQUIRE(seed.points.size() == 5);
  Point2 c = Point2::Zero();
  for (const auto& p : seed.points) c += p / 5.0;
  // Oracle: perpendicular images of the pentagon walked along e0, e2, e4, e6 (even e_j maps to e_{2j}).
  std::vector<Point2> oracle{Point2::Zero()};
  for (int d : {0, 2, 4, 6}) oracle.push_back(oracle.back() + Point2(std::cos(2 * d * kPi / 5), std::sin(2 * d * kPi / 5)));
  const double r = (oracle[0] - c).norm();
  for (const auto& p : seed.points) CHECK((p - c).norm() == doctest::Approx(r).epsilon(1e-12));
  for (const auto& o : oracle) {
    double best = 1e9;
    for (const auto& p : seed.points) best = std::min(best, (p - o).norm());
    CHECK(best < 1e-12);
  }
  CHECK(r == doctest::Approx(1 / (kTau * 2 * std::sin(kPi / 5))).epsilon(1e-12));

  const PerpCloud origin = project_cloud(seed_tiling("origin"));
  REQUIRE(origin.points.size() == 1);
  CHECK(origin.points[0].norm() == 0.0);

  const Tiling t = run_sequence({{"rph-l", "rph-l", "rph-l"}, "P"});
  const PerpCloud all = project_cloud(t), inner = project_cloud(t, true);
  CHECK(all.points.size() == std::size_t(t.vertices().size()));
  CHECK(inner.points.size() < all.points.size());
  CHECK(all.generation == 3);
}

TEST_CASE("hull containment") {
  std::vector<Point2> corners;
  for (int j = 0; j < 10; ++j) corners.emplace_back(std::cos(j * kPi / 5), std::sin(j * kPi / 5));
  CHECK(std::abs(hull_containment(corners)) < 1e-12);
  const Point2 out(1.1, 0);
  CHECK(hull_containment({out}) == doctest::Approx(edge_line_excess(out)).epsilon(1e-9));
  CHECK(hull_containment({out}) == doctest::Approx(0.1 * std::cos(kPi / 10)).epsilon(1e-9));
  const Point2 mid(0.3, -0.5);
  CHECK(hull_containment({mid}) < 0);
  CHECK(hull_containment({mid, out}) == doctest::Approx(edge_line_excess(out)).epsilon(1e-9));
  CHECK(hull_containment(project_cloud(run_sequence({std::vector<std::string>(4, "para-penrose"), "P"})).points) <= 1e-9);
}

TEST_CASE("perpendicular action") {
  for (const D10Element& g : D10Element::all()) {
    for (int j = 0; j < 10; ++j) {
      const Point2 want = to_perp(apply_symmetry(g, unit(j)));
      CHECK((perp_action(g) * to_perp(unit(j)) - want).norm() < 1e-12);
    }
  }
}

TEST_CASE("symmetry mismatch") {
  const PerpCloud l = project_cloud(run_sequence({std::vector<std::string>(4, "rph-l"), "P"}));
  CHECK(symmetry_mismatch(l, D10Element::identity(), 32) == 0.0);
  const double mir = symmetry_mismatch(l, D10Element::reflection(), 32);
  const double rot = symmetry_mismatch(l, D10Element::rotation_by(1), 32);
  CHECK(mir >= 0.0);
  CHECK(mir <= 1.0);
  CHECK(rot < mir);
  PerpCloud mirrored_cloud = l;
  for (auto& p : mirrored_cloud.points) p = perp_action(D10Element::reflection()) * p;
  CHECK(symmetry_mismatch(mirrored_cloud, D10Element::reflection(), 32) == doctest::Approx(mir).epsilon(1e-9));
}

TEST_CASE("region primitives") {
  const PerpRegion star = star_decagon(), hull = hull_decagon();
  const double c36 = std::cos(kPi / 5), c18 = std::cos(kPi / 10);
  CHECK(area(hull) == doctest::Approx(5 * std::sin(2 * kPi / 10)).epsilon(1e-9));
  // Ten kites: outer radius 1, inner radius cos36/cos18, half-angle 18 degrees.
  CHECK(area(star) == doctest::Approx(10 * (c36 / c18) * std::sin(kPi / 10)).epsilon(1e-9));
  CHECK(area(difference(star, hull)) < 1e-12);
  CHECK(area(scaled(hull, 0.5)) == doctest::Approx(area(hull) / 4).epsilon(1e-9));
  CHECK(sym_diff_area(mirrored(star), star) < 1e-12);
  CHECK(area(translated(hull, Point2(0.25, 0.1))) == doctest::Approx(area(hull)).epsilon(1e-12));
  CHECK(area(intersection(hull, translated(hull, Point2(5, 0)))) == 0.0);
  CHECK(hausdorff(hull, translated(hull, Point2(0.1, 0))) == doctest::Approx(0.1).epsilon(0.01));
  CHECK(hausdorff(hull, hull) < 1e-6);
}

TEST_CASE("dual map of a point is the perpendicular motif") {
  const auto c = cfg("para-penrose");
  CHECK(c.contraction == doctest::Approx(1 / (kTau * kTau)).epsilon(1e-14));
  CHECK(c.translates.size() == 11);
  const PerpRegion dot = region_from({{-1e-4, -1e-4}, {1e-4, -1e-4}, {1e-4, 1e-4}, {-1e-4, 1e-4}});
  const PerpRegion img = dual_map_step(dot, c);
  CHECK(rings_of(img).size() == 11);
}

TEST_CASE("carving") {
  const auto l = cfg("rph-l"), r = cfg("rph-r");
  CHECK(l.carve == CarveMode::Left);
  CHECK(r.carve == CarveMode::Right);
  const auto xs = surface_iterates(star_decagon(), l, 6);
  REQUIRE(xs.size() == 7);

  for (int i = 0; i < 6; ++i) {
    const PerpRegion mapped = dual_map_step(xs[i], l);
    CHECK(area(xs[i + 1]) <= area(mapped) + 1e-12);
    // Area is conserved along the iteration.
    CHECK(area(xs[i + 1]) == doctest::Approx(area(star_decagon())).epsilon(1e-9));
  }

  // Chirality symmetry on a chiral input: carve(mirror X, left) = mirror(carve(X, right)).
  const PerpRegion x = xs[2];
  const PerpRegion mx = mirrored(x);
  const PerpRegion a = carve_step(dual_map_step(mx, l), mx, l);
  const PerpRegion b = mirrored(carve_step(dual_map_step(x, r), x, r));
  CHECK(sym_diff_area(a, b) < 1e-12);
  CHECK(sym_diff_area(a, dual_map_step(mx, l)) > 1e-3);
}

TEST_CASE("iterates converge at rate 1/tau^2 after the transient") {
  const auto xs = surface_iterates(star_decagon(), cfg("rph-l"), 8);
  std::vector<double> d;
  for (int i = 0; i + 1 < int(xs.size()); ++i) d.push_back(hausdorff(xs[i + 1], xs[i]));
  for (int i = 5; i < int(d.size()); ++i) CHECK(d[i] / d[i - 1] == doctest::Approx(1 / (kTau * kTau)).epsilon(0.05));
  CHECK(d.back() < 1e-3);
}

TEST_CASE("surface validation") {
  const Tiling t = run_sequence({std::vector<std::string>(5, "rph-l"), "P"});
  const auto xs = surface_iterates(star_decagon(), cfg("rph-l"), 5);
  const SurfaceReport own = validate_surface(project_cloud(t, true), xs[5]);
  CHECK(own.outside_fraction < 0.005);
  CHECK(own.uncovered_fraction < 0.01);
  // Negative control: an unrelated para-Penrose cloud.
  const Tiling pp = run_sequence({std::vector<std::string>(5, "para-penrose"), "P"});
  const SurfaceReport other = validate_surface(project_cloud(pp, true), xs[5]);
  CHECK(other.outside_fraction > 0.05);
}

TEST_CASE("boundary triangle pieces") {
  for (int j = 0; j < 10; ++j) {
    const EdgeTriangle e = edge_triangle(j);
    const double whole = area(e.triangle);
    CHECK(area(e.pentagon) + area(e.left) + area(e.right) == doctest::Approx(whole).epsilon(1e-9));
    CHECK(area(intersection(e.pentagon, e.left)) < 1e-12);
    CHECK(area(difference(e.triangle, hull_decagon())) < 1e-12);
  }
  const Occupancy full = edge_triangle_occupancy(hull_decagon(), 3);
  CHECK(full.pentagon == doctest::Approx(1.0));
  CHECK(full.triangles == doctest::Approx(1.0));
}

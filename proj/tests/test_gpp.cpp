#include "doctest.h"
#include "qtile/gpp.hpp"

#include <cmath>
#include <map>
#include <set>

using namespace qtile;

namespace {

const RuleCatalog& cat() { return RuleCatalog::builtin(); }

Tiling single_tile(Shape s) {
  std::vector<ModuleVector> loop{ModuleVector::Zero()};
  for (int d : prototile_word(s)) loop.push_back(loop.back() + unit(d));
  loop.pop_back();
  return Tiling::from_points(loop);
}

std::set<char> shapes_present(const Tiling& t, bool interior) {
  std::set<char> s;
  const auto c = t.shape_counts(interior);
  for (int i = 0; i < 6; ++i)
    if (c[i]) s.insert(shape_letter(static_cast<Shape>(i)));
  return s;
}

}  // namespace

TEST_CASE("catalog contents") {
  CHECK(cat().rules().size() == 13);
  CHECK(cat().get("para-penrose").motif.shells.size() == 2);
  CHECK(cat().get("para-penrose").motif.points().size() == 11);
  int rphc = 0, rph = 0;
  for (const GppRule& r : cat().rules()) {
    CHECK(r.sigma_exponent == 2);
    rphc += r.family == "rphc";
    rph += r.family == "rph";
    if (!r.mirror.empty()) CHECK(cat().get(r.mirror).mirror == r.id);
  }
  CHECK(rphc == 10);
  CHECK(rph == 2);
  CHECK(cat().get("rph-l").chirality == Chirality::Left);
  CHECK(cat().get("rph-r").chirality == Chirality::Right);
  CHECK(cat().get("rph-l").mirror == "rph-r");
  CHECK_THROWS(cat().get("nope"));
  CHECK(RuleCatalog::from_json(builtin_catalog_json()).rules().size() == 13);
}

TEST_CASE("sequence parsing and validation") {
  CHECK(parse_sequence("rph-l*3,rph-r") == std::vector<std::string>{"rph-l", "rph-l", "rph-l", "rph-r"});
  CHECK(parse_sequence("para-penrose") == std::vector<std::string>{"para-penrose"});
  CHECK_NOTHROW(validate_sequence({{"rphc-1", "rph-l", "rph-r"}, "P"}, cat()));
  CHECK_THROWS_AS(validate_sequence({{"unknown-rule"}, "P"}, cat()), std::invalid_argument);
  // para-Penrose output contains S tiles, which RPH rules do not accept.
  CHECK_THROWS_AS(validate_sequence({{"para-penrose", "rph-l"}, "P"}, cat()), std::invalid_argument);
  CHECK_THROWS(seed_points("Z"));
}

TEST_CASE("decoration") {
  const GppRule& pp = cat().get("para-penrose");
  const auto one = decorate({ModuleVector::Zero()}, pp);
  REQUIRE(one.size() == 11);
  std::set<ModuleVector, ModuleVectorLess> expected{ModuleVector::Zero()};
  for (const auto& v : orbit(mv(1, 1, 0, 0))) expected.insert(v);
  CHECK(std::set<ModuleVector, ModuleVectorLess>(one.begin(), one.end()) == expected);

  CHECK(decorate({}, pp).empty());

  const auto two = decorate({mv(0, 0, 0, 0), mv(1, 0, 0, 0)}, pp);
  std::set<ModuleVector, ModuleVectorLess> brute;
  for (const ModuleVector& p : {mv(0, 0, 0, 0), mv(1, 0, 0, 0)})
    for (const auto& m : pp.motif.points()) brute.insert(tau_scale(p, 2) + m);
  CHECK(two.size() <= 22);
  CHECK(std::set<ModuleVector, ModuleVectorLess>(two.begin(), two.end()) == brute);
}

TEST_CASE("complex frames") {
  const Tiling seed = seed_tiling("P");
  CHECK(locate_complexes(seed, ComplexKind::G).empty());
  const Tiling crown = single_tile(Shape::C);
  CHECK(locate_complexes(crown, ComplexKind::G).size() == 1);
  CHECK(locate_complexes(crown, ComplexKind::T).size() == 3);
  CHECK(locate_complexes(single_tile(Shape::R), ComplexKind::T).size() == 2);
  CHECK(locate_complexes(single_tile(Shape::H), ComplexKind::T).empty());
}

TEST_CASE("elimination") {
  const Tiling t = run_sequence({{"para-penrose", "para-penrose"}, "P"});
  const long crowns = t.shape_counts()[static_cast<int>(Shape::C)];
  REQUIRE(crowns > 0);

  const GppRule& pp = cat().get("para-penrose");
  const auto cand = decorate(t.vertices().points(), pp);
  const Elimination none = eliminate(cand, {}, pp, t);
  CHECK(none.points == cand);
  CHECK(none.removed.empty());

  const GppRule& r1 = cat().get("rphc-1");
  const auto g = locate_complexes(t, ComplexKind::G);
  CHECK(long(g.size()) == crowns);
  const Elimination e1 = eliminate(decorate(t.vertices().points(), r1), g, r1, t);
  CHECK(long(e1.removed.size()) == crowns);
  CHECK(e1.points.size() + e1.removed.size() == cand.size());

  // RPH-left on a C-free tiling: one removal per T frame.
  const Tiling u = run_sequence({{"rph-l", "rph-l"}, "P"});
  CHECK(u.shape_counts()[static_cast<int>(Shape::C)] == 0);
  const GppRule& rl = cat().get("rph-l");
  const auto tf = locate_complexes(u, ComplexKind::T);
  const auto ucand = decorate(u.vertices().points(), rl);
  const Elimination el = eliminate(ucand, tf, rl, u);
  CHECK(el.removed.size() == tf.size());
  CHECK(el.frames == long(tf.size()));

  // A target missing from the candidates is an error, not a silent skip.
  CHECK_THROWS_AS(eliminate({}, g, r1, t), MissingRemoval);
}

TEST_CASE("iteration") {
  const Tiling p1 = iterate(seed_tiling("P"), cat().get("para-penrose"));
  CHECK(p1.generation == 1);
  CHECK(p1.rule_history == std::vector<std::string>{"para-penrose"});
  // The only unclassified faces are the rim notches that straddle the expanded seed edges.
  std::set<int> rim;
  for (const Tile& o : p1.outer_loops()) rim.insert(o.boundary.begin(), o.boundary.end());
  long known = 0;
  for (const Tile& f : p1.faces()) {
    if (f.shape != Shape::Unknown) {
      ++known;
      continue;
    }
    CHECK(f.peripheral);
    bool on_rim = false;
    for (int v : f.boundary) on_rim = on_rim || rim.count(v);
    CHECK(on_rim);
  }
  CHECK(known >= 10);

  for (int v = 1; v <= 10; ++v) {
    const std::string id = "rphc-" + std::to_string(v);
    CAPTURE(id);
    const Tiling t = run_sequence({{id, id}, "P"});
    CHECK(t.shape_counts()[static_cast<int>(Shape::S)] == 0);
  }

  const Tiling l3 = run_sequence({{"rph-l", "rph-l", "rph-l"}, "P"});
  CHECK(shapes_present(l3, true) == std::set<char>{'R', 'P', 'H'});
  CHECK(l3.generation == 3);

  const Tiling same = run_sequence({{}, "P"});
  CHECK(same.generation == 0);
  CHECK(same.vertices().points() == seed_tiling("P").vertices().points());
}

TEST_CASE("vertex growth tends to tau^4") {
  std::vector<double> v;
  run_sequence({std::vector<std::string>(5, "rph-l"), "P"}, cat(), [&](const Tiling& t) {
    v.push_back(t.vertices().size());
  });
  CHECK(v[5] / v[4] == doctest::Approx(std::pow(kTau, 4)).epsilon(0.05));
}

TEST_CASE("mirror rules give mirror tilings") {
  const Tiling l = run_sequence({{"rph-l", "rph-l", "rph-r"}, "P"});
  const Tiling r = run_sequence({{"rph-r", "rph-r", "rph-l"}, "P-mirror"});
  std::set<ModuleVector, ModuleVectorLess> a, b;
  for (const auto& v : l.vertices().points()) a.insert(apply_symmetry(D10Element::reflection(), v));
  for (const auto& v : r.vertices().points()) b.insert(v);
  CHECK(a == b);
}

TEST_CASE("templates regenerate from a reference patch") {
  const DerivedTemplates d = derive_templates();
  CHECK(d.g_internal == cat().g_internal_vertices());
  CHECK(d.t_left == cat().t_inner_vertex(Chirality::Left));
  CHECK(d.t_right == cat().t_inner_vertex(Chirality::Right));
  CHECK(d.g_one_vertex_division == "C1 H1 P4");
  CHECK(d.g_two_vertex_division == "H2 P3 R1");
  CHECK(d.t_division == "H1 P1 R1");
  CHECK(d.g_complexes_checked > 0);
  CHECK(d.t_complexes_checked > 0);
  REQUIRE(d.rphc_removals.size() == 10);
  for (const auto& [id, offs] : d.rphc_removals) {
    CAPTURE(id);
    const GppRule& r = cat().get(id);
    REQUIRE(r.templates.size() == 1);
    CHECK(r.templates[0].kind == ComplexKind::G);
    CHECK(r.templates[0].removals == offs);
  }
}

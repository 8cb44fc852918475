#include "doctest.h"
#include "qtile/gpp.hpp"
#include "qtile/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace qtile;

namespace {

GoldenNum g(int p, int q) { return GoldenNum(Rational(p), Rational(q)); }
GoldenNum half(int p, int q) { return GoldenNum(Rational(p, 2), Rational(q, 2)); }

std::vector<Tiling> generations(const std::vector<std::string>& ids) {
  std::vector<Tiling> out;
  run_sequence({ids, "P"}, RuleCatalog::builtin(), [&](const Tiling& t) { out.push_back(t); });
  return out;
}

Vector6 vec(std::initializer_list<double> v) {
  Vector6 r;
  int i = 0;
  for (double x : v) r[i++] = x;
  return r;
}

}  // namespace

TEST_CASE("inflation matrices") {
  const auto [m1, m2] = build_matrices();
  CHECK(m1.label == PairCase::Same);
  CHECK(m2.label == PairCase::Opposite);
  // Row A, column d of M1: 1/tau^2 = 2 - tau.
  CHECK(m1.m(0, 3) == g(2, -1));
  CHECK(m1.m(0, 3) == GoldenNum::tau_pow(-2));
  CHECK(m1.m(1, 0) == half(5, 0));
  CHECK(m1.m(1, 2) == g(5, 0));
  CHECK(m1.m(0, 4) == g(1, 0));
  CHECK(m2.m(4, 1) == g(2, 0));
  CHECK(m2.m(4, 0) == g(2, 0));
  CHECK(m2.m(4, 2) == g(2, 0));
  // Column sums weighted by the right vector reproduce the expanded areas.
  const Matrix6 d1 = m1.to_double();
  CHECK(d1(0, 3) == doctest::Approx(2 - kTau));
}

TEST_CASE("Perron eigen-analysis") {
  const auto [m1, m2] = build_matrices();
  const double t4 = std::pow(kTau, 4);
  const Vector6 right = vec({0.236, 0.691, 0.691, 1, 1, 1});
  const Vector6 u1 = vec({6.854, 5.236, 8.472, 3.236, 1, 0});
  const Vector6 u2 = vec({6.854, 3.236, 10.472, 3.236, 0, 1});
  for (const auto& [m, u] : {std::pair{m1, u1}, std::pair{m2, u2}}) {
    const PerronResult p = perron(m.to_double());
    CHECK(std::abs(p.eigenvalue - t4) < 1e-9);
    CHECK(std::abs(p.eigenvalue - 6.85410196) < 1e-8);
    CHECK(p.right_residual < 1e-10);
    CHECK(p.left_residual < 1e-10);
    CHECK((p.right - right).cwiseAbs().maxCoeff() < 5e-4);
    CHECK((p.left - u).cwiseAbs().maxCoeff() < 5e-4);
  }
}

TEST_CASE("closed-form eigenvectors are exact") {
  const auto [m1, m2] = build_matrices();
  const GoldenNum t3 = GoldenNum::tau_pow(3), t4 = GoldenNum::tau_pow(4);
  GoldenRow6 u1, u2;
  u1 << t4, t3 + g(1, 0), t3 * g(2, 0), t3 - g(1, 0), g(1, 0), g(0, 0);
  u2 << t4, t3 - g(1, 0), t3 * g(2, 0) + g(2, 0), t3 - g(1, 0), g(0, 0), g(1, 0);
  CHECK(left_vector(PairCase::Same) == u1);
  CHECK(left_vector(PairCase::Opposite) == u2);

  GoldenCol6 v;
  const GoldenNum p = (g(1, 0) + GoldenNum::tau_pow(-2)) / g(2, 0);
  v << t3 - g(4, 0), p, p, g(1, 0), g(1, 0), g(1, 0);
  CHECK(right_vector() == v);
  CHECK(GoldenCol6(m1.m * v) == GoldenCol6(v * t4));
  CHECK(GoldenCol6(m2.m * v) == GoldenCol6(v * t4));
  CHECK(GoldenRow6(u1 * m1.m) == GoldenRow6(u1 * t4));
  CHECK(GoldenRow6(u1 * m2.m) == GoldenRow6(u2 * t4));
  CHECK(GoldenRow6(u2 * m1.m) == GoldenRow6(u1 * t4));

  const CrossRelations cr = verify_cross_relations();
  CHECK(cr.u1_m1);
  CHECK(cr.u2_m2);
  CHECK(cr.u1_m2);
  CHECK(cr.u2_m1);
  CHECK(cr.right_m1);
  CHECK(cr.right_m2);
  CHECK(cr.two_step);
  CHECK(cr.all());
}

TEST_CASE("class fingerprints are distinct") {
  const auto& f = class_fingerprints();
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      const double d = std::abs(f[i].r - f[j].r) + std::abs(f[i].p - f[j].p) + std::abs(f[i].h - f[j].h);
      CHECK((f[i].shape != f[j].shape || d > 0.1));
    }
  CHECK(f[0].shape == Shape::R);
  CHECK(f[1].shape == Shape::P);
  CHECK(f[2].shape == Shape::P);
  CHECK(f[3].shape == Shape::H);
  CHECK(predicted_b_fraction_of_p(PairCase::Same) == doctest::Approx(5.236 / (5.236 + 8.472)).epsilon(1e-3));
  CHECK(predicted_b_fraction_of_p(PairCase::Opposite) == doctest::Approx(3.236 / (3.236 + 10.472)).epsilon(1e-3));
}

TEST_CASE("census invariants") {
  const auto gens = generations({"rph-l", "rph-l", "rph-l", "rph-l"});
  const Census c = census(gens[3], gens[4]);
  CHECK(c.generation == 3);
  CHECK(c.classified > 0);
  CHECK(c.unmatched == 0);
  CHECK(c.attribution_defect < 1e-9);
  long sum = 0;
  double small = 0;
  for (int i = 0; i < 6; ++i) {
    sum += c.class_counts[i];
    small += c.class_counts[i] * (c.composition[i][0] + c.composition[i][1] + c.composition[i][2]);
  }
  CHECK(sum == c.classified);
  CHECK(small == doctest::Approx(c.attributed_small_tiles).epsilon(1e-9));
  // Compositions are the class fingerprints.
  for (int i = 0; i < 6; ++i) {
    if (!c.class_counts[i]) continue;
    CHECK(c.composition[i][0] == doctest::Approx(class_fingerprints()[i].r).epsilon(1e-6));
    CHECK(c.composition[i][1] == doctest::Approx(class_fingerprints()[i].p).epsilon(1e-6));
    CHECK(c.composition[i][2] == doctest::Approx(class_fingerprints()[i].h).epsilon(1e-6));
  }
  long interior = 0;
  for (int s = 0; s < 6; ++s) interior += c.shape_counts[s];
  CHECK(c.classified <= interior);
  CHECK(c.mean_area > 0);
}

TEST_CASE("empirical matrices are exact") {
  const auto [m1, m2] = build_matrices();
  const Matrix6 d1 = m1.to_double(), d2 = m2.to_double();
  auto rows_match = [](const EmpiricalMatrix& e, const Matrix6& ref) {
    int rows = 0;
    for (int i = 0; i < 6; ++i) {
      if (!e.samples[i]) continue;
      ++rows;
      CHECK((e.m.row(i) - ref.row(i)).cwiseAbs().maxCoeff() < 1e-6);
    }
    return rows;
  };
  // Row E needs equal chiralities in the two steps before, row F opposite ones.
  const auto ll = generations({"rph-l", "rph-l", "rph-l", "rph-l", "rph-l"});
  const auto rll = generations({"rph-l", "rph-l", "rph-r", "rph-l", "rph-l"});
  const EmpiricalMatrix a = empirical_matrix(ll[3], ll[4], ll[5]);
  const EmpiricalMatrix b = empirical_matrix(rll[3], rll[4], rll[5]);
  CHECK(a.samples[5] == 0);
  CHECK(b.samples[4] == 0);
  CHECK(a.samples[1] > 0);
  CHECK(a.m(1, 2) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(a.m(0, 4) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rows_match(pooled(a, b), d1) == 6);

  const auto lr = generations({"rph-l", "rph-l", "rph-l", "rph-l", "rph-r"});
  const auto rlr = generations({"rph-l", "rph-l", "rph-r", "rph-l", "rph-r"});
  const EmpiricalMatrix c = empirical_matrix(lr[3], lr[4], lr[5]);
  const EmpiricalMatrix d = empirical_matrix(rlr[3], rlr[4], rlr[5]);
  CHECK(rows_match(pooled(c, d), d2) == 6);
}

TEST_CASE("prototile ratios on a large patch") {
  const Tiling t = run_sequence({std::vector<std::string>(5, "rph-l"), "P"});
  const PrototileRatios r = prototile_ratios(census(t));
  CHECK(r.r_over_h == doctest::Approx(kTau).epsilon(0.03));
  CHECK(r.p_over_h == doctest::Approx(2 * kTau).epsilon(0.03));
  CHECK(r.mean_area_over_h == doctest::Approx(1 / kTau).epsilon(0.02));
  CHECK(r.r_over_h_error > 0);
}

TEST_CASE("symmetry centres") {
  const auto gens = generations({"rph-l", "rph-l", "rph-l", "rph-l"});
  const Tiling mirror_next = iterate(gens[3], RuleCatalog::builtin().get("rph-r"));
  const SymmetryCenters s = symmetry_center_census(gens[3], gens[4], mirror_next);
  const Census c = census(gens[3], gens[4]);
  // Type (i): every classified R tile is an A tile and carries one centre.
  CHECK(s.twofold_r == c.class_counts[0]);
  CHECK(s.fivefold == c.class_counts[1]);
  CHECK(s.twofold_h == c.class_counts[4] + c.class_counts[5]);
  CHECK(s.classified_tiles == c.classified);
  CHECK(s.fivefold >= 0);
  CHECK(s.fivefold <= s.classified_p);
  CHECK(s.twofold_pp >= 0);
  CHECK(s.twofold_pp <= 5 * s.classified_p);
}

TEST_CASE("division is fixed by the tile and its neighbours") {
  for (const std::string id : {"rph-l", "rph-r"}) {
    CAPTURE(id);
    const auto gens = generations(std::vector<std::string>(4, id));
    const Tiling& parent = gens[3];
    const Tiling& child = gens[4];
    const Division div = divide(parent, child);
    std::map<std::string, std::string> seen;
    long checked = 0;
    for (int f = 0; f < int(parent.faces().size()); ++f) {
      if (!div.complete[f]) continue;
      const Tile& t = parent.faces()[f];
      // Faces sharing a vertex with t, as (vertex-sum offset, size, shape), in every rotated frame anchored at a corner.
      std::vector<std::pair<ModuleVector, int>> nbrs;
      std::set<int> around;
      for (int v : t.boundary)
        for (int nf : parent.faces_at(v)) around.insert(nf);
      for (int nf : around) {
        ModuleVector sum = ModuleVector::Zero();
        for (int v : parent.faces()[nf].boundary) sum += parent.vertices()[v];
        nbrs.emplace_back(sum, nf);
      }
      std::string key;
      for (int r = 0; r < 10; ++r)
        for (int s = 0; s < t.size(); ++s) {
          const ModuleVector anchor = parent.vertices()[t.boundary[s]];
          std::vector<std::string> items;
          for (const auto& [sum, nf] : nbrs) {
            const Tile& n = parent.faces()[nf];
            const ModuleVector rel = apply_symmetry(D10Element::rotation_by(r), sum - anchor * n.size());
            items.push_back(to_string(rel) + shape_letter(n.shape) + char('0' + n.size()));
          }
          std::sort(items.begin(), items.end());
          std::string c;
          for (const auto& it : items) c += it + ';';
          if (key.empty() || c < key) key = c;
        }
      std::vector<std::string> parts;
      for (const auto& [cf, frac] : div.parts[f]) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%c%.6f", shape_letter(child.faces()[cf].shape), frac);
        parts.push_back(buf);
      }
      std::sort(parts.begin(), parts.end());
      std::string value;
      for (const auto& p : parts) value += p + ' ';
      auto [it, inserted] = seen.emplace(key, value);
      if (!inserted) CHECK(it->second == value);
      ++checked;
    }
    CHECK(checked > 500);
    CHECK(seen.size() < 200);
  }
}

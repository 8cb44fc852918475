#include "doctest.h"
#include "qtile/zmodule.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace qtile;

namespace {

const double kPi = std::acos(-1.0);

// Independent float oracle: e~_j = e_{2j} physically, e_{4j} in perpendicular space.
Point2 phys_oracle(const ModuleVector& v) {
  Point2 p = Point2::Zero();
  for (int j = 0; j < 4; ++j) p += double(v[j]) * Point2(std::cos(2 * j * kPi / 5), std::sin(2 * j * kPi / 5));
  return p;
}
Point2 perp_oracle(const ModuleVector& v) {
  Point2 p = Point2::Zero();
  for (int j = 0; j < 4; ++j) p += double(v[j]) * Point2(std::cos(4 * j * kPi / 5), std::sin(4 * j * kPi / 5));
  return p;
}

ModuleVector random_vector(std::mt19937_64& rng, int range) {
  std::uniform_int_distribution<int> d(-range, range);
  return mv(d(rng), d(rng), d(rng), d(rng));
}

}  // namespace

TEST_CASE("physical projection") {
  CHECK(to_physical(mv(0, 0, 0, 0)).norm() == 0.0);
  CHECK(to_physical(mv(1, 0, 0, 0)).isApprox(Point2(1, 0), 1e-15));
  const Point2 p = to_physical(mv(1, 1, 0, 0));
  CHECK(p.x() == doctest::Approx(kTau * std::cos(kPi / 5)).epsilon(1e-14));
  CHECK(p.y() == doctest::Approx(kTau * std::sin(kPi / 5)).epsilon(1e-14));
  CHECK(p.x() == doctest::Approx(1.30902).epsilon(1e-5));
  CHECK(p.y() == doctest::Approx(0.95106).epsilon(1e-5));
}

TEST_CASE("perpendicular projection") {
  CHECK(to_perp(mv(1, 0, 0, 0)).isApprox(Point2(1, 0), 1e-15));
  CHECK(to_perp(mv(0, 1, 0, 0)).isApprox(Point2(std::cos(0.8 * kPi), std::sin(0.8 * kPi)), 1e-15));
  CHECK(to_perp(mv(1, 1, 0, 0)).norm() == doctest::Approx(1 / kTau).epsilon(1e-14));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const ModuleVector v = random_vector(rng, 20);
    CHECK((to_physical(v) - phys_oracle(v)).norm() < 1e-12);
    CHECK((to_perp(v) - perp_oracle(v)).norm() < 1e-12);
  }
}

TEST_CASE("exact coordinates agree with the float projections") {
  std::mt19937_64 rng(11);
  const double s36 = std::sin(kPi / 5);
  for (int i = 0; i < 100; ++i) {
    const ModuleVector v = random_vector(rng, 9);
    const ExactPoint a = to_physical_exact(v), b = to_perp_exact(v);
    CHECK(a.x.to_double() == doctest::Approx(to_physical(v).x()).epsilon(1e-12));
    CHECK(a.y_over_sin36.to_double() * s36 == doctest::Approx(to_physical(v).y()).epsilon(1e-12));
    CHECK(b.x.to_double() == doctest::Approx(to_perp(v).x()).epsilon(1e-12));
    CHECK(b.y_over_sin36.to_double() * s36 == doctest::Approx(to_perp(v).y()).epsilon(1e-12));
  }
}

TEST_CASE("tau scaling") {
  CHECK(tau_scale(mv(0, 0, 0, 0), 3) == mv(0, 0, 0, 0));
  CHECK(tau_scale(mv(1, 0, 0, 0), 1) == mv(0, 0, -1, -1));
  CHECK(tau_scale(tau_scale(mv(1, 0, 0, 0), 1), -1) == mv(1, 0, 0, 0));

  // Exhaustive search for the small-index vector whose image is tau * (1, 0).
  std::vector<ModuleVector> hits;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d)
          if ((phys_oracle(mv(a, b, c, d)) - Point2(kTau, 0)).norm() < 1e-12) hits.push_back(mv(a, b, c, d));
  REQUIRE(hits.size() == 1);
  CHECK(hits[0] == tau_scale(mv(1, 0, 0, 0), 1));

  CHECK(tau_matrix(1) * tau_matrix(-1) == ModuleMatrix::Identity());
  CHECK(tau_matrix(2) == tau_matrix(1) * tau_matrix(1));
  CHECK(tau_matrix(1) * tau_matrix(1) == tau_matrix(1) + ModuleMatrix::Identity());
}

TEST_CASE("the module is invariant under multiplication by tau") {
  std::mt19937_64 rng(20240611);
  std::set<ModuleVector, ModuleVectorLess> inputs, images;
  for (int i = 0; i < 10000; ++i) {
    const ModuleVector v = random_vector(rng, 1000);
    const ModuleVector up = tau_scale(v, 1);
    REQUIRE(tau_scale(up, -1) == v);
    REQUIRE(tau_scale(tau_scale(v, -1), 1) == v);
    REQUIRE(norm_squared(up) == norm_squared(v) * GoldenNum::tau_pow(2));
    inputs.insert(v);
    images.insert(up);
  }
  CHECK(images.size() == inputs.size());
}

TEST_CASE("golden field") {
  const GoldenNum t2 = GoldenNum::tau_pow(2);
  CHECK(t2.conj() == GoldenNum(1) / t2);
  CHECK(t2.conj() == GoldenNum::tau_pow(-2));
  CHECK(GoldenNum::tau() * GoldenNum::tau() == GoldenNum::tau() + GoldenNum(1));
  CHECK(GoldenNum::tau_pow(4).str() == "2+3*tau");

  // Consecutive Fibonacci ratios straddle tau ever more tightly; the sign test must stay exact.
  std::int64_t f0 = 1, f1 = 1;
  for (int n = 0; n < 40; ++n) {
    const GoldenInt d(f1, -f0);  // F(n+1) - F(n) * tau
    CHECK(d.sign() == (n % 2 == 0 ? -1 : 1));
    const std::int64_t f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
  CHECK(GoldenInt(0, 0).sign() == 0);
  CHECK(GoldenNum(Rational(1, 2), Rational(0)) < GoldenNum::tau());
}

TEST_CASE("symmetry action") {
  CHECK(apply_symmetry(D10Element::identity(), mv(2, -1, 0, 3)) == mv(2, -1, 0, 3));
  CHECK(apply_symmetry(D10Element::rotation_by(2), mv(1, 0, 0, 0)) == mv(0, 1, 0, 0));
  CHECK(apply_symmetry(D10Element::rotation_by(1), mv(1, 0, 0, 0)) == tau_scale(mv(1, 1, 0, 0), -1));
  for (int j = 0; j < 10; ++j) {
    CHECK(apply_symmetry(D10Element::rotation_by(1), unit(j)) == unit(j + 1));
    CHECK(apply_symmetry(D10Element::reflection(), unit(j)) == unit(-j));
    CHECK(direction_of(unit(j)) == j);
  }

  const auto group = D10Element::all();
  REQUIRE(group.size() == 20);
  std::mt19937_64 rng(3);
  for (const D10Element& g : group) {
    const double ang = 2 * kPi / 10 * g.rotation;
    Eigen::Matrix2d rot;
    rot << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    const Eigen::Matrix2d q = g.reflected ? Eigen::Matrix2d(rot * Eigen::Vector2d(1, -1).asDiagonal()) : rot;
    for (int i = 0; i < 20; ++i) {
      const ModuleVector v = random_vector(rng, 30);
      CHECK((to_physical(apply_symmetry(g, v)) - q * to_physical(v)).norm() < 1e-10);
    }
    CHECK(symmetry_matrix(g.inverse()) * symmetry_matrix(g) == ModuleMatrix::Identity());
    for (const D10Element& h : group) CHECK(symmetry_matrix(g * h) == symmetry_matrix(g) * symmetry_matrix(h));
  }
}

TEST_CASE("orbits") {
  auto oracle = [](const ModuleVector& v) {
    std::set<ModuleVector, ModuleVectorLess> s;
    for (const D10Element& g : D10Element::all()) s.insert(apply_symmetry(g, v));
    return s.size();
  };
  CHECK(orbit(mv(0, 0, 0, 0)).size() == 1);
  CHECK(orbit(mv(1, 1, 0, 0)).size() == 10);
  CHECK(orbit(mv(1, 0, 0, 0)).size() == 10);
  CHECK(oracle(mv(1, 1, 0, 0)) == 10);
  CHECK(oracle(mv(1, 0, 0, 0)) == 10);
  CHECK(orbit(mv(2, 1, 0, 0)).size() == oracle(mv(2, 1, 0, 0)));
  CHECK(oracle(mv(2, 1, 0, 0)) == 20);
}

TEST_CASE("exact norms and predicates") {
  CHECK(norm_squared(mv(1, 0, 0, 0)) == GoldenNum(1));
  CHECK(norm_squared(mv(1, 1, 0, 0)) == GoldenNum(1) + GoldenNum::tau());
  CHECK(norm_squared(mv(1, 1, 0, 0)) == GoldenNum::tau_pow(2));
  CHECK(norm_squared(mv(0, 0, 0, 0)) == GoldenNum(0));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const ModuleVector u = random_vector(rng, 50), v = random_vector(rng, 50);
    const GoldenNum n = norm_squared(u);
    CHECK((n.sign() > 0) == (u != ModuleVector::Zero()));
    CHECK(n.to_double() == doctest::Approx(to_physical(u).squaredNorm()).epsilon(1e-9));
    CHECK(to_field(twice_norm_squared(u)) == n * GoldenNum(2));
    CHECK(twice_dot(u, v).to_double() == doctest::Approx(2 * to_physical(u).dot(to_physical(v))).epsilon(1e-9));
    const Point2 a = to_physical(u), b = to_physical(v);
    CHECK(cross_over_sin36(u, v).to_double() * std::sin(kPi / 5) ==
          doctest::Approx(a.x() * b.y() - a.y() * b.x()).epsilon(1e-9));
  }
  CHECK(orientation(mv(0, 0, 0, 0), mv(1, 0, 0, 0), mv(0, 1, 0, 0)) == 1);
  CHECK(orientation(mv(0, 0, 0, 0), mv(0, 1, 0, 0), mv(1, 0, 0, 0)) == -1);
  CHECK(orientation(mv(0, 0, 0, 0), mv(1, 0, 0, 0), mv(2, 0, 0, 0)) == 0);
  // tau * e0 lies on the line through 0 and e0 exactly.
  CHECK(orientation(mv(0, 0, 0, 0), mv(1, 0, 0, 0), tau_scale(mv(1, 0, 0, 0), 3)) == 0);
}

TEST_CASE("perpendicular images contract under expansion") {
  std::mt19937_64 rng(13);
  const GoldenNum inv2 = GoldenNum::tau_pow(-2);
  for (int i = 0; i < 200; ++i) {
    const ModuleVector v = random_vector(rng, 40);
    const ExactPoint a = to_perp_exact(tau_scale(v, 2)), b = to_perp_exact(v);
    CHECK(a.x == b.x * inv2);
    CHECK(a.y_over_sin36 == b.y_over_sin36 * inv2);
  }
}

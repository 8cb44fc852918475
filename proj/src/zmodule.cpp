#include "qtile/zmodule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qtile {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<ModuleVector, 10> make_units() {
  std::array<ModuleVector, 10> e;
  e[0] = mv(1, 0, 0, 0);
  e[1] = mv(0, 0, 0, -1);
  e[2] = mv(0, 1, 0, 0);
  e[3] = mv(1, 1, 1, 1);
  e[4] = mv(0, 0, 1, 0);
  for (int j = 0; j < 5; ++j) e[j + 5] = -e[j];
  return e;
}

// Matrix whose column j is the image of e~_j = e_{2j} under e_{2j} -> e_{step(j)}.
template <typename F>
ModuleMatrix columns_from(F&& image) {
  ModuleMatrix m;
  for (int j = 0; j < 4; ++j) m.col(j) = image(j);
  return m;
}

Eigen::Matrix<double, 2, 4> projection(int mult) {
  Eigen::Matrix<double, 2, 4> m;
  for (int j = 0; j < 4; ++j) {
    const double a = kPi / 5.0 * ((mult * j) % 10);
    m(0, j) = std::cos(a);
    m(1, j) = std::sin(a);
  }
  return m;
}

// Gram entry e_{2i} . e_{2j}, doubled so it lies in Z[tau].
GoldenInt twice_gram(int i, int j) {
  switch (((j - i) % 5 + 5) % 5) {
    case 0: return GoldenInt(2, 0);
    case 1:
    case 4: return GoldenInt(-1, 1);  // 2 cos 72 = tau - 1
    default: return GoldenInt(0, -1);  // 2 cos 144 = -tau
  }
}

// sin(72 (j - i)) / sin 36.
GoldenInt sine_ratio(int i, int j) {
  switch (((j - i) % 5 + 5) % 5) {
    case 0: return GoldenInt(0, 0);
    case 1: return GoldenInt(0, 1);
    case 2: return GoldenInt(1, 0);
    case 3: return GoldenInt(-1, 0);
    default: return GoldenInt(0, -1);
  }
}

ExactPoint exact_projection(const ModuleVector& v, int mult) {
  // cos and sin / sin36 of the angle 36 * k degrees, exact.
  auto cos_k = [](int k) -> GoldenNum {
    switch (((k % 10) + 10) % 10) {
      case 0: return GoldenNum(1);
      case 1: case 9: return GoldenNum(Rational(0), Rational(1, 2));
      case 2: case 8: return GoldenNum(Rational(-1, 2), Rational(1, 2));
      case 3: case 7: return GoldenNum(Rational(1, 2), Rational(-1, 2));
      case 4: case 6: return GoldenNum(Rational(0), Rational(-1, 2));
      default: return GoldenNum(-1);
    }
  };
  auto sin_k = [](int k) -> GoldenNum {
    switch (((k % 10) + 10) % 10) {
      case 1: case 4: return GoldenNum(1);
      case 2: case 3: return GoldenNum::tau();
      case 6: case 9: return GoldenNum(-1);
      case 7: case 8: return -GoldenNum::tau();
      default: return GoldenNum(0);
    }
  };
  ExactPoint p;
  for (int j = 0; j < 4; ++j) {
    const GoldenNum n(Rational(v[j]), Rational(0));
    p.x += n * cos_k(mult * j);
    p.y_over_sin36 += n * sin_k(mult * j);
  }
  p.approx = (mult == 2 ? physical_projection() : perp_projection()) * v.cast<double>();
  return p;
}

}  // namespace

const std::array<ModuleVector, 10>& unit_vectors() {
  static const std::array<ModuleVector, 10> e = make_units();
  return e;
}

int direction_of(const ModuleVector& v) {
  const auto& e = unit_vectors();
  for (int j = 0; j < 10; ++j) {
    if (e[j] == v) return j;
  }
  return -1;
}

std::vector<D10Element> D10Element::all() {
  std::vector<D10Element> out;
  for (int f = 0; f < 2; ++f) {
    for (int r = 0; r < 10; ++r) out.push_back({r, f == 1});
  }
  return out;
}

ModuleMatrix symmetry_matrix(const D10Element& g) {
  const int s = g.reflected ? -1 : 1;
  return columns_from([&](int j) { return unit(s * 2 * j + g.rotation); });
}

ModuleMatrix tau_matrix(int k) {
  static const ModuleMatrix up = columns_from([](int j) -> ModuleVector { return unit(2 * j + 1) + unit(2 * j - 1); });
  // tau^-1 = tau - 1
  static const ModuleMatrix down = up - ModuleMatrix::Identity();
  ModuleMatrix m = ModuleMatrix::Identity();
  for (int i = 0; i < std::abs(k); ++i) m = (k > 0 ? up : down) * m;
  return m;
}

ModuleVector apply_symmetry(const D10Element& g, const ModuleVector& v) { return symmetry_matrix(g) * v; }

ModuleVector tau_scale(const ModuleVector& v, int k) {
  if (k == 2) {
    static const ModuleMatrix t2 = tau_matrix(2);
    return t2 * v;
  }
  return tau_matrix(k) * v;
}

std::vector<ModuleVector> orbit(const ModuleVector& v) {
  std::vector<ModuleVector> out;
  for (const auto& g : D10Element::all()) out.push_back(apply_symmetry(g, v));
  std::sort(out.begin(), out.end(), ModuleVectorLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const Eigen::Matrix<double, 2, 4>& physical_projection() {
  static const Eigen::Matrix<double, 2, 4> m = projection(2);
  return m;
}

const Eigen::Matrix<double, 2, 4>& perp_projection() {
  static const Eigen::Matrix<double, 2, 4> m = projection(4);
  return m;
}

ExactPoint to_physical_exact(const ModuleVector& v) { return exact_projection(v, 2); }
ExactPoint to_perp_exact(const ModuleVector& v) { return exact_projection(v, 4); }

GoldenInt twice_norm_squared(const ModuleVector& v) { return twice_dot(v, v); }

GoldenInt twice_dot(const ModuleVector& u, const ModuleVector& v) {
  GoldenInt s;
  for (int i = 0; i < 4; ++i) {
    if (u[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (v[j] != 0) s += GoldenInt(u[i] * v[j], 0) * twice_gram(i, j);
    }
  }
  return s;
}

GoldenNum norm_squared(const ModuleVector& v) {
  const GoldenInt t = twice_norm_squared(v);
  return GoldenNum(Rational(t.p(), 2), Rational(t.q(), 2));
}

GoldenInt cross_over_sin36(const ModuleVector& u, const ModuleVector& v) {
  GoldenInt s;
  for (int i = 0; i < 4; ++i) {
    if (u[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (v[j] != 0 && i != j) s += GoldenInt(u[i] * v[j], 0) * sine_ratio(i, j);
    }
  }
  return s;
}

int orientation(const ModuleVector& a, const ModuleVector& b, const ModuleVector& c) {
  return cross_over_sin36(b - a, c - a).sign();
}

std::string to_string(const ModuleVector& v) {
  std::ostringstream os;
  os << '[' << v[0] << ' ' << v[1] << ' ' << v[2] << ' ' << v[3] << ']';
  return os.str();
}

}  // namespace qtile

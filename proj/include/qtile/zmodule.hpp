#pragma once

#include "qtile/golden.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qtile {

/// Integer coordinates [n0 n1 n2 n3] on the basis e~_j = e_{2j} of the decagonal module.
using ModuleVector = Eigen::Matrix<std::int64_t, 4, 1>;
using ModuleMatrix = Eigen::Matrix<std::int64_t, 4, 4>;
using Point2 = Eigen::Vector2d;

inline ModuleVector mv(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  ModuleVector v;
  v << a, b, c, d;
  return v;
}

/// The ten unit vectors e_j (j = 0..9) in module coordinates.
const std::array<ModuleVector, 10>& unit_vectors();
inline const ModuleVector& unit(int j) { return unit_vectors()[((j % 10) + 10) % 10]; }

/// Index j with v == e_j, or -1.
int direction_of(const ModuleVector& v);

/// Element of the dihedral group of order 20: first reflect (if set), then rotate by rotation * 36 degrees.
struct D10Element {
  int rotation = 0;
  bool reflected = false;

  static D10Element identity() { return {}; }
  static D10Element rotation_by(int k) { return {((k % 10) + 10) % 10, false}; }
  static D10Element reflection() { return {0, true}; }

  /// Composition: (a * b)(v) = a(b(v)).
  friend D10Element operator*(const D10Element& a, const D10Element& b) {
    int r = a.reflected ? a.rotation - b.rotation : a.rotation + b.rotation;
    return {((r % 10) + 10) % 10, a.reflected != b.reflected};
  }
  D10Element inverse() const {
    if (reflected) return *this;
    return rotation_by(-rotation);
  }
  friend bool operator==(const D10Element& a, const D10Element& b) {
    return a.rotation == b.rotation && a.reflected == b.reflected;
  }

  /// All 20 group elements.
  static std::vector<D10Element> all();
};

/// Integer matrix of the group action on module coordinates.
ModuleMatrix symmetry_matrix(const D10Element& g);
/// Integer matrix of multiplication by tau^k.
ModuleMatrix tau_matrix(int k);

ModuleVector apply_symmetry(const D10Element& g, const ModuleVector& v);
ModuleVector tau_scale(const ModuleVector& v, int k);
std::vector<ModuleVector> orbit(const ModuleVector& v);

/// Physical and perpendicular projections as 2x4 real matrices.
const Eigen::Matrix<double, 2, 4>& physical_projection();
const Eigen::Matrix<double, 2, 4>& perp_projection();

inline Point2 to_physical(const ModuleVector& v) { return physical_projection() * v.cast<double>(); }
inline Point2 to_perp(const ModuleVector& v) { return perp_projection() * v.cast<double>(); }

/// Exact coordinates: x is a field element, y = y_over_sin36 * sin(36 deg).
struct ExactPoint {
  GoldenNum x;
  GoldenNum y_over_sin36;
  Point2 approx;
};
ExactPoint to_physical_exact(const ModuleVector& v);
ExactPoint to_perp_exact(const ModuleVector& v);

/// Exact squared length of the physical image.
GoldenNum norm_squared(const ModuleVector& v);
/// 2 |v|^2 as an element of Z[tau]; the fast path used by predicates.
GoldenInt twice_norm_squared(const ModuleVector& v);
/// 2 * dot(phys(u), phys(v)), exact in Z[tau].
GoldenInt twice_dot(const ModuleVector& u, const ModuleVector& v);
/// cross(phys(u), phys(v)) / sin(36 deg), exact in Z[tau].
GoldenInt cross_over_sin36(const ModuleVector& u, const ModuleVector& v);
/// Orientation of the triangle (a, b, c) in physical space: +1 ccw, -1 cw, 0 collinear.
int orientation(const ModuleVector& a, const ModuleVector& b, const ModuleVector& c);

std::string to_string(const ModuleVector& v);

struct ModuleVectorHash {
  std::size_t operator()(const ModuleVector& v) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (int i = 0; i < 4; ++i) {
      h ^= static_cast<std::uint64_t>(v[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

struct ModuleVectorLess {
  bool operator()(const ModuleVector& a, const ModuleVector& b) const noexcept {
    for (int i = 0; i < 4; ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }
};

}  // namespace qtile

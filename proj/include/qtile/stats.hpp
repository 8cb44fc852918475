#pragma once

#include "qtile/golden.hpp"
#include "qtile/tiling.hpp"

#include <Eigen/Core>

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace qtile {

using GoldenMatrix6 = Eigen::Matrix<GoldenNum, 6, 6>;
using GoldenRow6 = Eigen::Matrix<GoldenNum, 1, 6>;
using GoldenCol6 = Eigen::Matrix<GoldenNum, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Which pair of successive chiralities a matrix describes: equal (ll, rr) or opposite (lr, rl).
enum class PairCase { Same, Opposite };

std::string to_string(PairCase c);

/// Rows are expanded-tile classes A..F, columns small-tile classes a..f.
struct InflationMatrix {
  GoldenMatrix6 m;
  PairCase label = PairCase::Same;

  Matrix6 to_double() const;
};

/// (M1, M2): the equal-chirality and the opposite-chirality matrices.
std::pair<InflationMatrix, InflationMatrix> build_matrices();

struct PerronResult {
  double eigenvalue = 0.0;
  Vector6 right;  // last component 1
  Vector6 left;   // first component tau^4
  int iterations = 0;
  double right_residual = 0.0;  // |M v - lambda v|_inf
  double left_residual = 0.0;   // |u M - lambda u|_inf
};

/// Power iteration on M and on its transpose. Throws std::runtime_error without convergence.
PerronResult perron(const Matrix6& m, double tolerance = 1e-13, int max_iterations = 100000);

/// Closed-form left eigenvectors: u1 for equal chiralities, u2 for opposite ones.
GoldenRow6 left_vector(PairCase c);
/// The right eigenvector common to both matrices.
GoldenCol6 right_vector();

struct CrossRelations {
  bool u1_m1 = false;  // u1 M1 = tau^4 u1
  bool u2_m2 = false;
  bool u1_m2 = false;  // u1 M2 = tau^4 u2
  bool u2_m1 = false;  // u2 M1 = tau^4 u1
  bool right_m1 = false;  // M1 v = tau^4 v
  bool right_m2 = false;
  bool two_step = false;  // u1 M2 M1 = tau^8 u1 and (u1 - u2) M2 M1 = 0
  bool all() const { return u1_m1 && u2_m2 && u1_m2 && u2_m1 && right_m1 && right_m2 && two_step; }
};

/// Exact checks in the golden field.
CrossRelations verify_cross_relations();

/// Division class of an expanded tile, fixed by how the next iteration divides it.
enum class TileClass : std::uint8_t { A, B, C, D, E, F, Unclassified };

char class_letter(TileClass c);

/// Number of small R, P and H tiles, counted fractionally by area, inside one expanded tile of a class.
struct Fingerprint {
  Shape shape;
  double r, p, h;
};
const std::array<Fingerprint, 6>& class_fingerprints();

/// How each face of parent, expanded by tau^sigma, is covered by the faces of child.
struct Division {
  /// Per parent face: (child face, fraction of that child's area inside the expanded parent).
  std::vector<std::vector<std::pair<int, double>>> parts;
  /// Parent face is interior, convex, exactly covered, and every child touching it is interior.
  std::vector<char> complete;
  /// Largest |sum over parents of fractions - 1| among child faces inside complete parents.
  double attribution_defect = 0.0;
};

Division divide(const Tiling& parent, const Tiling& child, int sigma_exponent = 2);

struct Labels {
  std::vector<TileClass> classes;  // per face of the parent
  long classified = 0;
  long unmatched = 0;  // complete faces whose composition fits no fingerprint
};

/// Class of every parent face from its division into child.
Labels classify(const Tiling& parent, const Tiling& child, const Division& division);

struct Census {
  int generation = 0;
  std::array<long, 6> shape_counts{};  // interior faces by Shape
  std::array<long, 6> class_counts{};  // A..F
  long classified = 0;
  long unmatched = 0;
  /// Mean fractional (R, P, H) attribution per expanded tile of each class.
  std::array<std::array<double, 3>, 6> composition{};
  /// Small tiles inside classified expanded tiles, counted fractionally.
  double attributed_small_tiles = 0.0;
  /// Largest deviation from 1 of the fractions of one small tile summed over all expanded tiles.
  double attribution_defect = 0.0;
  double mean_area = 0.0;  // interior faces, edge length 1
  double interior_area = 0.0;
};

/// Census of tiling, labelled by its division into next.
Census census(const Tiling& tiling, const Tiling& next);
/// Shape counts and areas only.
Census census(const Tiling& tiling);

struct EmpiricalMatrix {
  Matrix6 m = Matrix6::Zero();
  std::array<long, 6> samples{};  // expanded tiles averaged into each row
};

/// Row I averages, over class-I tiles of t0, the area-weighted count of class-j tiles of t1 inside
/// them; classes of t0 come from the division into t1, those of t1 from the division into t2.
EmpiricalMatrix empirical_matrix(const Tiling& t0, const Tiling& t1, const Tiling& t2);
/// Row-wise average of two estimates weighted by their samples.
EmpiricalMatrix pooled(const EmpiricalMatrix& a, const EmpiricalMatrix& b);

struct PrototileRatios {
  double r_over_h = 0.0, p_over_h = 0.0;
  double r_over_h_error = 0.0, p_over_h_error = 0.0;  // one standard error from counting statistics
  double mean_area = 0.0;
  double mean_area_over_h = 0.0;  // mean tile area in units of the H area
};

PrototileRatios prototile_ratios(const Census& c);

struct SymmetryCenters {
  long fivefold = 0;    // class-B P tiles under next
  long twofold_r = 0;   // class-A R tiles
  long twofold_h = 0;   // class-E or class-F H tiles
  long twofold_pp = 0;  // edges between two P tiles that are class B under both next chiralities
  long classified_tiles = 0;
  long classified_p = 0;
  double fivefold_per_tile() const { return classified_tiles ? double(fivefold) / classified_tiles : 0.0; }
  double twofold_per_tile() const {
    return classified_tiles ? double(twofold_r + twofold_h + twofold_pp) / classified_tiles : 0.0;
  }
};

/// next and mirror_next are the tiling iterated with a rule and with its mirror rule.
SymmetryCenters symmetry_center_census(const Tiling& tiling, const Tiling& next, const Tiling& mirror_next);

/// Fraction of P tiles in class B predicted by the left eigenvector (0.382 equal, 0.236 opposite).
double predicted_b_fraction_of_p(PairCase c);

}  // namespace qtile

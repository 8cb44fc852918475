#include "qtile/stats.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace qtile {

namespace {

GoldenNum g(long p, long q = 0, long den = 1) { return GoldenNum(Rational(p, den), Rational(q, den)); }

const GoldenNum& tau4() {
  static const GoldenNum t = GoldenNum::tau_pow(4);
  return t;
}

using Polygon = std::vector<Point2>;

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % n];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * a;
}

// Sutherland-Hodgman: subject clipped by a convex counter-clockwise polygon.
Polygon clip_convex(Polygon subject, const Polygon& clip) {
  for (std::size_t i = 0, n = clip.size(); i < n && !subject.empty(); ++i) {
    const Point2 a = clip[i];
    const Point2 edge = clip[(i + 1) % n] - a;
    auto side = [&](const Point2& p) { return edge.x() * (p.y() - a.y()) - edge.y() * (p.x() - a.x()); };
    Polygon out;
    out.reserve(subject.size() + 2);
    for (std::size_t k = 0, m = subject.size(); k < m; ++k) {
      const Point2& cur = subject[k];
      const Point2& nxt = subject[(k + 1) % m];
      const double sc = side(cur), sn = side(nxt);
      if (sc >= 0) out.push_back(cur);
      if ((sc >= 0) != (sn >= 0)) out.push_back(cur + (nxt - cur) * (sc / (sc - sn)));
    }
    subject = std::move(out);
  }
  return subject;
}

Polygon face_polygon(const Tiling& t, const Tile& f, double scale) {
  Polygon poly;
  poly.reserve(f.boundary.size());
  for (int v : f.boundary) poly.push_back(scale * to_physical(t.vertices()[v]));
  return poly;
}

bool convex_shape(Shape s) { return s == Shape::R || s == Shape::P || s == Shape::H; }

int shape_slot(Shape s) {
  switch (s) {
    case Shape::R: return 0;
    case Shape::P: return 1;
    case Shape::H: return 2;
    default: return -1;
  }
}

}  // namespace

std::string to_string(PairCase c) { return c == PairCase::Same ? "same" : "opposite"; }

Matrix6 InflationMatrix::to_double() const {
  return m.unaryExpr([](const GoldenNum& x) { return x.to_double(); });
}

std::pair<InflationMatrix, InflationMatrix> build_matrices() {
  const GoldenNum half5 = g(5, 0, 2);
  const GoldenNum inv_tau2 = g(2, -1);         // 1 / tau^2
  const GoldenNum c_d = g(0, 1, 2);            // 1 - 1/(2 tau^2)
  const GoldenNum d_d = g(4, 1, 2);            // 3 - 1/(2 tau^2)
  const GoldenNum e_d = g(2, 1);               // 4 - 1/tau^2
  InflationMatrix m1, m2;
  m1.label = PairCase::Same;
  m2.label = PairCase::Opposite;
  m1.m << 1, 0, 0, inv_tau2, 1, 0,
          half5, 1, 5, 0, 0, 0,
          2, 2, 3, c_d, 0, 0,
          half5, 3, 2, d_d, 0, 0,
          2, 4, 0, e_d, 0, 0,
          3, 2, 4, 2, 0, 0;
  m2.m << 1, 0, 0, inv_tau2, 0, 1,
          half5, 1, 5, 0, 0, 0,
          2, 1, 4, c_d, 0, 0,
          half5, 2, 3, d_d, 0, 0,
          2, 2, 2, e_d, 0, 0,
          3, 2, 4, 2, 0, 0;
  return {m1, m2};
}

PerronResult perron(const Matrix6& m, double tolerance, int max_iterations) {
  PerronResult r;
  auto iterate = [&](const Matrix6& a, Vector6& v, double& lambda, double& residual) {
    v.setOnes();
    for (int it = 1; it <= max_iterations; ++it) {
      Vector6 w = a * v;
      const double norm = w.cwiseAbs().maxCoeff();
      if (norm == 0.0) throw std::runtime_error("perron: matrix annihilates the start vector");
      lambda = w.dot(v) / v.dot(v);
      residual = (w - lambda * v).cwiseAbs().maxCoeff();
      r.iterations = std::max(r.iterations, it);
      if (residual < tolerance) return;
      v = w / norm;
    }
    throw std::runtime_error("perron: no convergence after " + std::to_string(max_iterations) + " iterations");
  };
  double lambda_left = 0.0;
  iterate(m, r.right, r.eigenvalue, r.right_residual);
  iterate(m.transpose(), r.left, lambda_left, r.left_residual);
  r.right /= r.right(5);
  r.left *= tau4().to_double() / r.left(0);
  r.right_residual = (m * r.right - r.eigenvalue * r.right).cwiseAbs().maxCoeff();
  r.left_residual = (r.left.transpose() * m - r.eigenvalue * r.left.transpose()).cwiseAbs().maxCoeff();
  return r;
}

GoldenRow6 left_vector(PairCase c) {
  const GoldenNum t3 = GoldenNum::tau_pow(3);
  GoldenRow6 u;
  if (c == PairCase::Same)
    u << tau4(), t3 + g(1), g(2) * t3, t3 - g(1), 1, 0;
  else
    u << tau4(), t3 - g(1), g(2) * t3 + g(2), t3 - g(1), 0, 1;
  return u;
}

GoldenCol6 right_vector() {
  const GoldenNum half = g(1, 0, 2) * (g(1) + g(2, -1));
  GoldenCol6 v;
  v << GoldenNum::tau_pow(3) - g(4), half, half, 1, 1, 1;
  return v;
}

CrossRelations verify_cross_relations() {
  const auto [m1, m2] = build_matrices();
  const GoldenRow6 u1 = left_vector(PairCase::Same);
  const GoldenRow6 u2 = left_vector(PairCase::Opposite);
  const GoldenCol6 v = right_vector();
  const GoldenNum t4 = tau4();
  const GoldenNum t8 = t4 * t4;
  CrossRelations c;
  c.u1_m1 = GoldenRow6(u1 * m1.m) == GoldenRow6(u1 * t4);
  c.u2_m2 = GoldenRow6(u2 * m2.m) == GoldenRow6(u2 * t4);
  c.u1_m2 = GoldenRow6(u1 * m2.m) == GoldenRow6(u2 * t4);
  c.u2_m1 = GoldenRow6(u2 * m1.m) == GoldenRow6(u1 * t4);
  c.right_m1 = GoldenCol6(m1.m * v) == GoldenCol6(v * t4);
  c.right_m2 = GoldenCol6(m2.m * v) == GoldenCol6(v * t4);
  const GoldenMatrix6 m21 = m2.m * m1.m;
  const GoldenRow6 diff = u1 - u2;
  c.two_step = GoldenRow6(u1 * m21) == GoldenRow6(u1 * t8) && GoldenRow6(diff * m21) == GoldenRow6::Constant(g(0));
  return c;
}

char class_letter(TileClass c) { return c == TileClass::Unclassified ? '?' : static_cast<char>('A' + static_cast<int>(c)); }

const std::array<Fingerprint, 6>& class_fingerprints() {
  // Row sums of the matrices over the columns of each shape: a is R; b, c are P; d, e, f are H.
  static const std::array<Fingerprint, 6> fp = [] {
    const Matrix6 m = build_matrices().first.to_double();
    const Shape shapes[6] = {Shape::R, Shape::P, Shape::P, Shape::H, Shape::H, Shape::H};
    std::array<Fingerprint, 6> out{};
    for (int i = 0; i < 6; ++i)
      out[i] = {shapes[i], m(i, 0), m(i, 1) + m(i, 2), m(i, 3) + m(i, 4) + m(i, 5)};
    return out;
  }();
  return fp;
}

Division divide(const Tiling& parent, const Tiling& child, int sigma_exponent) {
  const double scale = std::pow(kTau, sigma_exponent);
  const auto& pf = parent.faces();
  const auto& cf = child.faces();
  Division d;
  d.parts.resize(pf.size());
  d.complete.assign(pf.size(), 0);

  // Expanded parent polygons, bucketed by bounding box.
  constexpr double cell = 4.0;
  auto key = [](long ix, long iy) { return (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint32_t>(iy); };
  std::vector<Polygon> ppoly(pf.size());
  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  for (std::size_t i = 0; i < pf.size(); ++i) {
    if (!convex_shape(pf[i].shape)) continue;
    ppoly[i] = face_polygon(parent, pf[i], scale);
    Eigen::AlignedBox2d box;
    for (const Point2& p : ppoly[i]) box.extend(p);
    for (long ix = std::floor(box.min().x() / cell); ix <= std::floor(box.max().x() / cell); ++ix)
      for (long iy = std::floor(box.min().y() / cell); iy <= std::floor(box.max().y() / cell); ++iy)
        grid[key(ix, iy)].push_back(static_cast<int>(i));
  }

  std::vector<double> covered(pf.size(), 0.0);
  std::vector<char> touches_peripheral(pf.size(), 0);
  std::vector<double> child_sum(cf.size(), 0.0);
  std::vector<int> candidates;
  for (std::size_t c = 0; c < cf.size(); ++c) {
    const Polygon cpoly = face_polygon(child, cf[c], 1.0);
    const double carea = polygon_area(cpoly);
    Eigen::AlignedBox2d box;
    for (const Point2& p : cpoly) box.extend(p);
    candidates.clear();
    for (long ix = std::floor(box.min().x() / cell); ix <= std::floor(box.max().x() / cell); ++ix)
      for (long iy = std::floor(box.min().y() / cell); iy <= std::floor(box.max().y() / cell); ++iy) {
        auto it = grid.find(key(ix, iy));
        if (it != grid.end()) candidates.insert(candidates.end(), it->second.begin(), it->second.end());
      }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (int p : candidates) {
      const Polygon piece = clip_convex(cpoly, ppoly[p]);
      if (piece.size() < 3) continue;
      const double a = polygon_area(piece);
      if (a <= 1e-9 * carea) continue;
      const double frac = a / carea;
      d.parts[p].emplace_back(static_cast<int>(c), frac);
      covered[p] += a;
      child_sum[c] += frac;
      if (cf[c].peripheral || !convex_shape(cf[c].shape)) touches_peripheral[p] = 1;
    }
  }

  for (std::size_t p = 0; p < pf.size(); ++p) {
    if (pf[p].peripheral || !convex_shape(pf[p].shape) || touches_peripheral[p]) continue;
    const double target = polygon_area(ppoly[p]);
    if (std::abs(covered[p] - target) > 1e-9 * target) continue;
    d.complete[p] = 1;
    for (const auto& [c, frac] : d.parts[p]) d.attribution_defect = std::max(d.attribution_defect, std::abs(child_sum[c] - 1.0));
  }
  return d;
}

Labels classify(const Tiling& parent, const Tiling& child, const Division& division) {
  const auto& fps = class_fingerprints();
  const auto& pf = parent.faces();
  const auto& cf = child.faces();
  Labels l;
  l.classes.assign(pf.size(), TileClass::Unclassified);
  for (std::size_t p = 0; p < pf.size(); ++p) {
    if (!division.complete[p]) continue;
    std::array<double, 3> comp{};
    for (const auto& [c, frac] : division.parts[p]) comp[shape_slot(cf[c].shape)] += frac;
    int best = -1;
    for (int k = 0; k < 6; ++k) {
      if (fps[k].shape != pf[p].shape) continue;
      const double err = std::max({std::abs(comp[0] - fps[k].r), std::abs(comp[1] - fps[k].p), std::abs(comp[2] - fps[k].h)});
      if (err < 1e-6) best = k;
    }
    if (best < 0) {
      ++l.unmatched;
      continue;
    }
    l.classes[p] = static_cast<TileClass>(best);
    ++l.classified;
  }
  return l;
}

Census census(const Tiling& tiling) {
  Census c;
  c.generation = tiling.generation;
  c.shape_counts = tiling.shape_counts(true);
  long n = 0;
  for (const Tile& f : tiling.faces()) {
    if (f.peripheral) continue;
    c.interior_area += f.area();
    ++n;
  }
  c.mean_area = n ? c.interior_area / n : 0.0;
  return c;
}

Census census(const Tiling& tiling, const Tiling& next) {
  const Division d = divide(tiling, next);
  const Labels l = classify(tiling, next, d);
  const auto& cf = next.faces();
  Census c = census(tiling);
  c.classified = l.classified;
  c.unmatched = l.unmatched;
  c.attribution_defect = d.attribution_defect;
  for (std::size_t p = 0; p < tiling.faces().size(); ++p) {
    const TileClass k = l.classes[p];
    if (k == TileClass::Unclassified) continue;
    const int i = static_cast<int>(k);
    ++c.class_counts[i];
    for (const auto& [ch, frac] : d.parts[p]) {
      c.composition[i][shape_slot(cf[ch].shape)] += frac;
      c.attributed_small_tiles += frac;
    }
  }
  for (int i = 0; i < 6; ++i)
    if (c.class_counts[i])
      for (double& x : c.composition[i]) x /= static_cast<double>(c.class_counts[i]);
  return c;
}

EmpiricalMatrix empirical_matrix(const Tiling& t0, const Tiling& t1, const Tiling& t2) {
  const Division d0 = divide(t0, t1);
  const Labels l0 = classify(t0, t1, d0);
  const Labels l1 = classify(t1, t2, divide(t1, t2));
  EmpiricalMatrix e;
  for (std::size_t p = 0; p < t0.faces().size(); ++p) {
    const TileClass k = l0.classes[p];
    if (k == TileClass::Unclassified) continue;
    Eigen::Matrix<double, 1, 6> row = Eigen::Matrix<double, 1, 6>::Zero();
    bool ok = true;
    for (const auto& [c, frac] : d0.parts[p]) {
      const TileClass j = l1.classes[c];
      if (j == TileClass::Unclassified) {
        ok = false;
        break;
      }
      row(static_cast<int>(j)) += frac;
    }
    if (!ok) continue;
    const int i = static_cast<int>(k);
    e.m.row(i) += row;
    ++e.samples[i];
  }
  for (int i = 0; i < 6; ++i)
    if (e.samples[i]) e.m.row(i) /= static_cast<double>(e.samples[i]);
  return e;
}

EmpiricalMatrix pooled(const EmpiricalMatrix& a, const EmpiricalMatrix& b) {
  EmpiricalMatrix e;
  for (int i = 0; i < 6; ++i) {
    e.samples[i] = a.samples[i] + b.samples[i];
    if (e.samples[i])
      e.m.row(i) = (a.m.row(i) * static_cast<double>(a.samples[i]) + b.m.row(i) * static_cast<double>(b.samples[i])) /
                   static_cast<double>(e.samples[i]);
  }
  return e;
}

PrototileRatios prototile_ratios(const Census& c) {
  const double nr = c.shape_counts[static_cast<int>(Shape::R)];
  const double np = c.shape_counts[static_cast<int>(Shape::P)];
  const double nh = c.shape_counts[static_cast<int>(Shape::H)];
  PrototileRatios r;
  if (nh == 0) return r;
  r.r_over_h = nr / nh;
  r.p_over_h = np / nh;
  if (nr > 0) r.r_over_h_error = r.r_over_h * std::sqrt(1.0 / nr + 1.0 / nh);
  if (np > 0) r.p_over_h_error = r.p_over_h * std::sqrt(1.0 / np + 1.0 / nh);
  r.mean_area = c.mean_area;
  r.mean_area_over_h = c.mean_area / (tile_area(Shape::H).to_double() * std::sin(M_PI / 5));
  return r;
}

SymmetryCenters symmetry_center_census(const Tiling& tiling, const Tiling& next, const Tiling& mirror_next) {
  const Labels l = classify(tiling, next, divide(tiling, next));
  const Labels m = classify(tiling, mirror_next, divide(tiling, mirror_next));
  auto b_both = [&](int f) { return l.classes[f] == TileClass::B && m.classes[f] == TileClass::B; };
  const auto& faces = tiling.faces();
  SymmetryCenters s;
  for (std::size_t p = 0; p < faces.size(); ++p) {
    const TileClass k = l.classes[p];
    if (k == TileClass::Unclassified) continue;
    ++s.classified_tiles;
    if (faces[p].shape == Shape::P) ++s.classified_p;
    if (k == TileClass::A) ++s.twofold_r;
    if (k == TileClass::B) ++s.fivefold;
    if (k == TileClass::E || k == TileClass::F) ++s.twofold_h;
  }
  for (const auto& [i, j] : tiling.edges()) {
    const int d = direction_of(tiling.vertices()[j] - tiling.vertices()[i]);
    const int a = tiling.face_left_of(i, d);
    const int b = tiling.face_left_of(j, (d + 5) % 10);
    if (a >= 0 && b >= 0 && b_both(a) && b_both(b)) ++s.twofold_pp;
  }
  return s;
}

double predicted_b_fraction_of_p(PairCase c) {
  const GoldenRow6 u = left_vector(c);
  return u(1).to_double() / (u(1) + u(2)).to_double();
}

}  // namespace qtile

#include "doctest.h"
#include "qtile/diffraction.hpp"
#include "qtile/gpp.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace qtile;

namespace {

const double kPi = std::acos(-1.0);

std::vector<Point2> physical(const std::vector<ModuleVector>& v) {
  std::vector<Point2> out;
  for (const auto& p : v) out.push_back(to_physical(p));
  return out;
}

std::vector<ReciprocalPeak> with_indices(const std::vector<ReciprocalIndex>& idx) {
  std::vector<ReciprocalPeak> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i].index = idx[i];
  return out;
}

const Tiling& patch() {
  static const Tiling t = run_sequence({{"rph-l", "rph-l", "rph-l"}, "P"});
  return t;
}

}  // namespace

TEST_CASE("reciprocal basis is dual to the module basis") {
  const Eigen::Matrix4d& b = reciprocal_basis();
  Eigen::Matrix4d e;
  e.topRows<2>() = physical_projection();
  e.bottomRows<2>() = perp_projection();
  const Eigen::Matrix4d prod = b.transpose() * e;
  CHECK((prod - 2 * kPi * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reciprocal points") {
  const auto pts = reciprocal_points(2, 1e9);
  CHECK(pts.size() == 625);
  CHECK(pts[0].index == ReciprocalIndex::Zero());
  CHECK(pts[0].k.norm() == 0.0);
  CHECK(reciprocal_points(3, 1e9).size() == 2401);
  const auto cut = reciprocal_points(4, 3.0);
  for (std::size_t i = 1; i < cut.size(); ++i) {
    CHECK(cut[i].kperp <= 3.0);
    CHECK(cut[i - 1].kperp <= cut[i].kperp);
  }
  CHECK_THROWS(reciprocal_points(0, 1.0));
}

TEST_CASE("structure factor normalization") {
  const Tiling& t = patch();
  CHECK(std::abs(structure_factor(t, Point2::Zero()) - std::complex<double>(1, 0)) < 1e-15);

  auto peaks = reciprocal_points(3, 6.0);
  std::vector<ModuleVector> one{mv(2, -1, 0, 3)};
  compute_intensities(one, peaks);
  for (const auto& p : peaks) CHECK(std::abs(std::abs(p.amplitude) - 1.0) < 1e-12);
  CHECK_THROWS(compute_intensities({}, peaks));
}

TEST_CASE("fast intensities agree with direct summation") {
  const auto& pts = patch().vertices().points();
  auto peaks = reciprocal_points(3, 5.0);
  compute_intensities(pts, peaks);
  CHECK(peaks[0].intensity == doctest::Approx(1.0).epsilon(1e-14));
  const auto phys = physical(pts);
  for (std::size_t i = 0; i < peaks.size(); i += 37) {
    const std::complex<double> direct = structure_factor(phys, peaks[i].k);
    CHECK(std::abs(direct - peaks[i].amplitude) < 1e-9);
    CHECK(peaks[i].intensity == doctest::Approx(std::norm(peaks[i].amplitude)).epsilon(1e-12));
  }
}

TEST_CASE("Friedel symmetry is exact") {
  auto peaks = reciprocal_points(4, 6.0);
  compute_intensities(patch().vertices().points(), peaks);
  std::map<std::vector<std::int64_t>, double> by_index;
  for (const auto& p : peaks) by_index[{p.index(0), p.index(1), p.index(2), p.index(3)}] = p.intensity;
  long pairs = 0;
  for (const auto& p : peaks) {
    auto it = by_index.find({-p.index(0), -p.index(1), -p.index(2), -p.index(3)});
    REQUIRE(it != by_index.end());
    CHECK(std::abs(it->second - p.intensity) <= 1e-12);
    ++pairs;
  }
  CHECK(pairs == long(peaks.size()));
}

TEST_CASE("intensities are equivariant under the decagonal group") {
  const auto& pts = patch().vertices().points();
  auto base = reciprocal_points(3, 5.0);
  compute_intensities(pts, base);
  for (const D10Element& g : D10Element::all()) {
    std::vector<ModuleVector> moved;
    for (const auto& v : pts) moved.push_back(apply_symmetry(g, v));
    std::vector<ReciprocalIndex> idx;
    for (const auto& p : base) idx.push_back(transform_index(g, p.index));
    auto peaks = with_indices(idx);
    compute_intensities(moved, peaks);
    const double ang = 2 * kPi / 10 * g.rotation;
    Eigen::Matrix2d q;
    q << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    if (g.reflected) q = q * Eigen::Vector2d(1, -1).asDiagonal();
    const Eigen::Matrix<double, 2, 4> bphys = reciprocal_basis().topRows<2>();
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(std::abs(peaks[i].intensity - base[i].intensity) < 1e-10);
      CHECK((bphys * idx[i].cast<double>() - q * base[i].k).norm() < 1e-9);
    }
  }
}

TEST_CASE("windows") {
  const Tiling& t = patch();
  const Disc d = inscribed_disc(t);
  CHECK(d.radius > 0);
  const auto inside = circular_window(t, d);
  CHECK(!inside.empty());
  CHECK(inside.size() < std::size_t(t.vertices().size()));
  for (const auto& v : inside) CHECK((to_physical(v) - d.center).norm() <= d.radius + 1e-12);
  const Disc o = off_centre(d, 0.3);
  CHECK((o.center - d.center).norm() == doctest::Approx(0.3 * d.radius));
  CHECK(o.radius == doctest::Approx(0.7 * d.radius));
}

TEST_CASE("chirality report") {
  // A mirror-symmetric point set has mirror-symmetric intensities.
  std::vector<ModuleVector> sym;
  for (const auto& v : patch().vertices().points()) {
    sym.push_back(v);
    sym.push_back(apply_symmetry(D10Element::reflection(), v));
  }
  std::sort(sym.begin(), sym.end(), ModuleVectorLess());
  sym.erase(std::unique(sym.begin(), sym.end()), sym.end());
  // Keep only peaks whose mirror partner is on the grid too.
  std::vector<ReciprocalPeak> peaks;
  for (const auto& p : reciprocal_points(3, 5.0))
    if (transform_index(D10Element::reflection(), p.index).cwiseAbs().maxCoeff() <= 3) peaks.push_back(p);
  compute_intensities(sym, peaks);
  const ChiralityReport r = chirality_report(peaks, 0.01);
  CHECK(r.unpaired == 0);
  CHECK(r.strong_max < 1e-9);
  for (double a : r.weak) CHECK(a < 1e-6);
  CHECK(r.strong_threshold == doctest::Approx(0.01 * r.max_intensity));
}

TEST_CASE("rank test and quantiles") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> a, b;
  for (int i = 0; i < 400; ++i) {
    a.push_back(n(rng) + 0.5);
    b.push_back(n(rng));
  }
  const RankTest t = mann_whitney_greater(a, b);
  CHECK(t.p_value < 1e-6);
  CHECK(t.effect > 0.6);
  const RankTest rev = mann_whitney_greater(b, a);
  CHECK(rev.p_value > 0.99);
  CHECK(t.effect + rev.effect == doctest::Approx(1.0));
  const RankTest same = mann_whitney_greater(a, a);
  CHECK(same.p_value == doctest::Approx(0.5).epsilon(0.05));

  CHECK(quantile({1, 2, 3, 4, 5}, 0.5) == 3.0);
  CHECK(quantile({1, 2, 3, 4, 5}, 0.0) == 1.0);
  CHECK(quantile({1, 2, 3, 4, 5}, 1.0) == 5.0);
  CHECK(quantile({0, 10}, 0.25) == doctest::Approx(2.5));
}

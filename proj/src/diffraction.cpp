#include "qtile/diffraction.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace qtile {

const Eigen::Matrix4d& reciprocal_basis() {
  static const Eigen::Matrix4d b = [] {
    Eigen::Matrix4d e;
    e.topRows<2>() = physical_projection();
    e.bottomRows<2>() = perp_projection();
    return Eigen::Matrix4d(2.0 * std::numbers::pi * e.inverse().transpose());
  }();
  return b;
}

namespace {

bool index_less(const ReciprocalIndex& a, const ReciprocalIndex& b) {
  return std::lexicographical_compare(a.data(), a.data() + 4, b.data(), b.data() + 4);
}

struct IndexLess {
  bool operator()(const ReciprocalIndex& a, const ReciprocalIndex& b) const { return index_less(a, b); }
};

}  // namespace

std::vector<ReciprocalPeak> reciprocal_points(int max_index, double kperp_cutoff) {
  if (max_index < 1) throw std::invalid_argument("reciprocal_points: max_index must be at least 1");
  const Eigen::Matrix4d& b = reciprocal_basis();
  std::vector<ReciprocalPeak> peaks;
  ReciprocalIndex m;
  for (m(0) = -max_index; m(0) <= max_index; ++m(0))
    for (m(1) = -max_index; m(1) <= max_index; ++m(1))
      for (m(2) = -max_index; m(2) <= max_index; ++m(2))
        for (m(3) = -max_index; m(3) <= max_index; ++m(3)) {
          const Eigen::Vector4d kk = b * m.cast<double>();
          const double kperp = kk.tail<2>().norm();
          if (kperp > kperp_cutoff) continue;
          ReciprocalPeak p;
          p.index = m;
          p.k = kk.head<2>();
          p.kperp = kperp;
          peaks.push_back(p);
        }
  std::sort(peaks.begin(), peaks.end(), [](const ReciprocalPeak& a, const ReciprocalPeak& c) {
    if (a.kperp != c.kperp) return a.kperp < c.kperp;
    return index_less(a.index, c.index);
  });
  return peaks;
}

ReciprocalIndex transform_index(const D10Element& g, const ReciprocalIndex& m) {
  // b m' = R b m with R the hyperspace isometry of g, which gives m' = S(g^-1)^T m.
  return symmetry_matrix(g.inverse()).transpose() * m;
}

std::complex<double> structure_factor(const std::vector<Point2>& points, const Point2& k) {
  if (points.empty()) throw std::invalid_argument("structure_factor: empty point set");
  std::complex<double> sum = 0.0;
  for (const Point2& r : points) sum += std::polar(1.0, k.dot(r));
  return sum / static_cast<double>(points.size());
}

std::complex<double> structure_factor(const Tiling& tiling, const Point2& k) {
  std::vector<Point2> pts;
  pts.reserve(tiling.vertices().size());
  for (const ModuleVector& v : tiling.vertices().points()) pts.push_back(to_physical(v));
  return structure_factor(pts, k);
}

void compute_intensities(const std::vector<ModuleVector>& points, std::vector<ReciprocalPeak>& peaks) {
  if (points.empty()) throw std::invalid_argument("compute_intensities: empty point set");
  int max_index = 0;
  for (const auto& p : peaks) max_index = std::max<int>(max_index, p.index.cwiseAbs().maxCoeff());
  // k . r = 2 pi m . v - k_perp . r_perp for a module point v, so only the perpendicular phase matters.
  const Eigen::Matrix<double, 2, 4> bperp = reciprocal_basis().bottomRows<2>();
  const int span = max_index + 1;
  std::vector<std::complex<double>> powers(4 * span);
  std::vector<std::complex<double>> amp(peaks.size(), 0.0);
  for (const ModuleVector& v : points) {
    const Point2 rp = to_perp(v);
    for (int j = 0; j < 4; ++j) {
      const std::complex<double> z = std::polar(1.0, -bperp.col(j).dot(rp));
      powers[j * span] = 1.0;
      for (int e = 1; e < span; ++e) powers[j * span + e] = powers[j * span + e - 1] * z;
    }
    auto pw = [&](int j, std::int64_t e) {
      return e >= 0 ? powers[j * span + e] : std::conj(powers[j * span - e]);
    };
    for (std::size_t i = 0; i < peaks.size(); ++i) {
      const ReciprocalIndex& m = peaks[i].index;
      amp[i] += (pw(0, m(0)) * pw(1, m(1))) * (pw(2, m(2)) * pw(3, m(3)));
    }
  }
  const double n = static_cast<double>(points.size());
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    peaks[i].amplitude = amp[i] / n;
    peaks[i].intensity = std::norm(peaks[i].amplitude);
  }
}

std::vector<ModuleVector> circular_window(const Tiling& tiling, const Disc& window) {
  std::vector<ModuleVector> out;
  const double r2 = window.radius * window.radius;
  for (const ModuleVector& v : tiling.vertices().points())
    if ((to_physical(v) - window.center).squaredNorm() <= r2) out.push_back(v);
  return out;
}

Disc inscribed_disc(const Tiling& tiling) {
  const auto& pts = tiling.vertices().points();
  if (pts.empty()) return {};
  Point2 c = Point2::Zero();
  for (const ModuleVector& v : pts) c += to_physical(v);
  c /= static_cast<double>(pts.size());
  double r = std::numeric_limits<double>::infinity();
  for (const Tile& loop : tiling.outer_loops())
    for (int v : loop.boundary) r = std::min(r, (to_physical(pts[v]) - c).norm());
  return {c, std::isfinite(r) ? r : 0.0};
}

Disc off_centre(const Disc& d, double shift) {
  // 0.5 rad is 28.6 degrees, off every multiple of 18 degrees.
  const Point2 dir(std::cos(0.5), std::sin(0.5));
  return {d.center + shift * d.radius * dir, d.radius * (1.0 - shift)};
}

ChiralityReport chirality_report(const std::vector<ReciprocalPeak>& peaks, double strong_fraction) {
  ChiralityReport rep;
  std::map<ReciprocalIndex, std::size_t, IndexLess> where;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    where.emplace(peaks[i].index, i);
    if (!peaks[i].index.isZero()) rep.max_intensity = std::max(rep.max_intensity, peaks[i].intensity);
  }
  rep.strong_threshold = strong_fraction * rep.max_intensity;
  const D10Element mirror = D10Element::reflection();
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const ReciprocalIndex& m = peaks[i].index;
    if (m.isZero()) continue;
    const ReciprocalIndex mm = transform_index(mirror, m);
    if (mm == m) continue;  // on the mirror line
    auto it = where.find(mm);
    if (it == where.end()) {
      ++rep.unpaired;
      continue;
    }
    if (it->second < i) continue;  // pair already seen
    const double a = peaks[i].intensity, b = peaks[it->second].intensity;
    if (a + b < 1e-14) continue;
    const double asym = std::abs(a - b) / (a + b);
    if (std::max(a, b) >= rep.strong_threshold) {
      rep.strong.push_back(asym);
      rep.strong_max = std::max(rep.strong_max, asym);
    } else {
      rep.weak.push_back(asym);
    }
  }
  return rep;
}

RankTest mann_whitney_greater(const std::vector<double>& a, const std::vector<double>& b) {
  RankTest t;
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  if (na == 0 || nb == 0) return t;
  std::vector<std::pair<double, int>> all;
  all.reserve(n);
  for (double x : a) all.emplace_back(x, 0);
  for (double x : b) all.emplace_back(x, 1);
  std::sort(all.begin(), all.end());
  double rank_sum_a = 0.0, ties = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j].first == all[i].first) ++j;
    const double mid = 0.5 * static_cast<double>(i + j + 1);  // ranks start at 1
    for (std::size_t k = i; k < j; ++k)
      if (all[k].second == 0) rank_sum_a += mid;
    const double cnt = static_cast<double>(j - i);
    ties += cnt * cnt * cnt - cnt;
    i = j;
  }
  const double dna = static_cast<double>(na), dnb = static_cast<double>(nb), dn = static_cast<double>(n);
  t.u = rank_sum_a - dna * (dna + 1) / 2;
  t.effect = t.u / (dna * dnb);
  const double var = dna * dnb / 12.0 * ((dn + 1) - ties / (dn * (dn - 1)));
  if (var <= 0) return t;
  t.z = (t.u - dna * dnb / 2 - 0.5) / std::sqrt(var);
  t.p_value = 0.5 * std::erfc(t.z / std::sqrt(2.0));
  return t;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace qtile

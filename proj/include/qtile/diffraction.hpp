#pragma once

#include "qtile/tiling.hpp"

#include <Eigen/Core>

#include <complex>
#include <vector>

namespace qtile {

using ReciprocalIndex = Eigen::Matrix<std::int64_t, 4, 1>;

struct ReciprocalPeak {
  ReciprocalIndex index = ReciprocalIndex::Zero();
  Point2 k = Point2::Zero();
  double kperp = 0.0;  // length of the perpendicular component
  std::complex<double> amplitude{};
  double intensity = 0.0;
};

/// Columns b_j of the 4D reciprocal basis, b_i . e~_j = 2 pi delta_ij in the hyperspace;
/// rows 0-1 are the physical components, rows 2-3 the perpendicular ones.
const Eigen::Matrix4d& reciprocal_basis();

/// All indices with entries in [-max_index, max_index] and |k_perp| <= kperp_cutoff, sorted by
/// |k_perp| then index. Amplitudes are left zero.
std::vector<ReciprocalPeak> reciprocal_points(int max_index, double kperp_cutoff);

/// Index of the peak at the image of k under g.
ReciprocalIndex transform_index(const D10Element& g, const ReciprocalIndex& m);

/// (1/N) sum over points of exp(i k . r), summed in point order.
std::complex<double> structure_factor(const std::vector<Point2>& points, const Point2& k);
std::complex<double> structure_factor(const Tiling& tiling, const Point2& k);

/// Fills amplitude and intensity of every peak for scatterers at the given module points.
void compute_intensities(const std::vector<ModuleVector>& points, std::vector<ReciprocalPeak>& peaks);

struct Disc {
  Point2 center = Point2::Zero();
  double radius = 0.0;
};

/// Vertices inside the closed disc.
std::vector<ModuleVector> circular_window(const Tiling& tiling, const Disc& window);
/// The largest disc about the vertex mean that stays clear of the outer loops.
Disc inscribed_disc(const Tiling& tiling);
/// A disc inside d whose centre is moved by shift * radius along a direction that is not a mirror
/// axis of the decagonal group, so a mirror-symmetric patch does not yield a mirror-symmetric window.
Disc off_centre(const Disc& d, double shift);

struct ChiralityReport {
  double max_intensity = 0.0;  // over k != 0
  double strong_threshold = 0.0;
  std::vector<double> strong;  // asymmetry per mirror pair of strong peaks
  std::vector<double> weak;    // asymmetry per mirror pair of the other peaks
  double strong_max = 0.0;
  long unpaired = 0;           // peaks whose mirror image is missing from the list
};

/// |I(k) - I(mk)| / (I(k) + I(mk)) for each pair {k, mk} under the x-axis mirror; pairs with both
/// intensities below 1e-14 are skipped. Strong peaks have intensity >= strong_fraction * max over k != 0.
ChiralityReport chirality_report(const std::vector<ReciprocalPeak>& peaks, double strong_fraction = 0.01);

/// One-sided Mann-Whitney test of "a tends to exceed b" with the normal approximation and tie correction.
struct RankTest {
  double u = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  double effect = 0.5;  // P(a > b) + P(a = b) / 2
};
RankTest mann_whitney_greater(const std::vector<double>& a, const std::vector<double>& b);

/// Empirical q-quantile by linear interpolation.
double quantile(std::vector<double> values, double q);

}  // namespace qtile

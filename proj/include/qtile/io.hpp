#pragma once

#include "qtile/diffraction.hpp"
#include "qtile/perpspace.hpp"
#include "qtile/stats.hpp"
#include "qtile/tiling.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtile {

using Json = nlohmann::ordered_json;

/// Exact values as {"exact": "p+q*tau", "value": decimal}.
Json golden_json(const GoldenNum& x);

Json tiling_json(const Tiling& t);
/// Vertex table: module coordinates, physical and perpendicular positions.
std::string vertices_csv(const Tiling& t);

struct SvgStyle {
  double half_width = 25.0;  // square viewport about the centre, in edge lengths
  Point2 center = Point2::Zero();
  double pixels_per_unit = 12.0;
  bool mark_peripheral = true;
  std::vector<Point2> markers;  // drawn as dots, e.g. five-fold centres
};
std::string tiling_svg(const Tiling& t, const SvgStyle& style);

std::string cloud_csv(const PerpCloud& c);
/// Point density on a bins x bins grid over [-1.05, 1.05]^2 as an 8-bit greyscale PNG.
std::vector<std::uint8_t> cloud_png(const PerpCloud& c, int bins = 512);
/// Density as SVG rectangles, optionally with region outlines on top.
std::string cloud_svg(const PerpCloud& c, const std::vector<PerpRegion>& outlines = {}, int bins = 160);

Json region_json(const PerpRegion& r);
std::string region_svg(const std::vector<PerpRegion>& regions, double pixels_per_unit = 220.0);

std::string peaks_csv(const std::vector<ReciprocalPeak>& peaks);
/// Spots with area proportional to intensity; k = 0 is omitted.
std::string peaks_svg(const std::vector<ReciprocalPeak>& peaks, double min_intensity = 1e-4);

Json matrix_json(const Matrix6& m);
Json golden_matrix_json(const GoldenMatrix6& m);
Json census_json(const Census& c);

std::string sha256_hex(const std::string& bytes);

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes bytes and returns the manifest entry {path, bytes, sha256}.
Json write_artifact(const std::string& dir, const std::string& name, const std::string& bytes);
Json write_artifact(const std::string& dir, const std::string& name, const std::vector<std::uint8_t>& bytes);

}  // namespace qtile

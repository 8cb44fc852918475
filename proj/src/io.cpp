#include "qtile/io.hpp"

#include <openssl/evp.h>
#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qtile {

namespace {

std::string num(double x, int digits = 10) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

const char* shape_fill(Shape s) {
  switch (s) {
    case Shape::R: return "#e9b44c";
    case Shape::P: return "#50a2a7";
    case Shape::H: return "#9b2915";
    case Shape::C: return "#6d597a";
    case Shape::S: return "#1c3144";
    default: return "#cccccc";
  }
}

}  // namespace

Json golden_json(const GoldenNum& x) { return Json{{"exact", x.str()}, {"value", x.to_double()}}; }

Json tiling_json(const Tiling& t) {
  Json j;
  j["generation"] = t.generation;
  j["rule_history"] = t.rule_history;
  Json verts = Json::array(), pos = Json::array();
  for (const ModuleVector& v : t.vertices().points()) {
    verts.push_back({v(0), v(1), v(2), v(3)});
    const Point2 p = to_physical(v);
    pos.push_back({p.x(), p.y()});
  }
  j["vertices"] = std::move(verts);
  j["positions"] = std::move(pos);
  Json edges = Json::array();
  for (const auto& [a, b] : t.edges()) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  Json faces = Json::array();
  for (const Tile& f : t.faces())
    faces.push_back({{"shape", std::string(1, shape_letter(f.shape))}, {"boundary", f.boundary}, {"peripheral", f.peripheral}});
  j["faces"] = std::move(faces);
  const auto counts = t.shape_counts(false);
  const auto interior = t.shape_counts(true);
  Json c, ci;
  for (Shape s : {Shape::R, Shape::P, Shape::H, Shape::C, Shape::S, Shape::Unknown}) {
    c[std::string(1, shape_letter(s))] = counts[static_cast<int>(s)];
    ci[std::string(1, shape_letter(s))] = interior[static_cast<int>(s)];
  }
  j["face_counts"] = c;
  j["interior_face_counts"] = ci;
  return j;
}

std::string vertices_csv(const Tiling& t) {
  std::string out = "n0,n1,n2,n3,x,y,x_perp,y_perp\n";
  for (const ModuleVector& v : t.vertices().points()) {
    const Point2 p = to_physical(v), q = to_perp(v);
    out += std::to_string(v(0)) + ',' + std::to_string(v(1)) + ',' + std::to_string(v(2)) + ',' + std::to_string(v(3)) + ',' +
           num(p.x()) + ',' + num(p.y()) + ',' + num(q.x()) + ',' + num(q.y()) + '\n';
  }
  return out;
}

std::string tiling_svg(const Tiling& t, const SvgStyle& st) {
  const double w = 2 * st.half_width * st.pixels_per_unit;
  auto sx = [&](double x) { return num((x - st.center.x() + st.half_width) * st.pixels_per_unit, 7); };
  auto sy = [&](double y) { return num((st.center.y() + st.half_width - y) * st.pixels_per_unit, 7); };
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(w) +
                    "\" viewBox=\"0 0 " + num(w) + ' ' + num(w) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<g stroke=\"#222\" stroke-width=\"0.6\" stroke-linejoin=\"round\">\n";
  const auto& pts = t.vertices();
  for (const Tile& f : t.faces()) {
    bool visible = false;
    for (int v : f.boundary) {
      const Point2 p = to_physical(pts[v]) - st.center;
      if (std::abs(p.x()) <= st.half_width + 1 && std::abs(p.y()) <= st.half_width + 1) visible = true;
    }
    if (!visible) continue;
    out += "<polygon points=\"";
    for (int v : f.boundary) {
      const Point2 p = to_physical(pts[v]);
      out += sx(p.x()) + ',' + sy(p.y()) + ' ';
    }
    out.back() = '"';
    out += std::string(" fill=\"") + shape_fill(f.shape) + '"';
    if (st.mark_peripheral && f.peripheral) out += " fill-opacity=\"0.35\"";
    out += "/>\n";
  }
  out += "</g>\n";
  if (!st.markers.empty()) {
    out += "<g fill=\"black\">\n";
    for (const Point2& m : st.markers) {
      const Point2 d = m - st.center;
      if (std::abs(d.x()) > st.half_width || std::abs(d.y()) > st.half_width) continue;
      out += "<circle cx=\"" + sx(m.x()) + "\" cy=\"" + sy(m.y()) + "\" r=\"" + num(0.25 * st.pixels_per_unit, 4) + "\"/>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string cloud_csv(const PerpCloud& c) {
  std::string out = "x_perp,y_perp\n";
  for (const Point2& p : c.points) out += num(p.x()) + ',' + num(p.y()) + '\n';
  return out;
}

namespace {

std::vector<std::uint32_t> density(const PerpCloud& c, int bins, double half) {
  std::vector<std::uint32_t> h(static_cast<std::size_t>(bins) * bins, 0);
  for (const Point2& p : c.points) {
    const int ix = static_cast<int>(std::floor((p.x() + half) / (2 * half) * bins));
    const int iy = static_cast<int>(std::floor((half - p.y()) / (2 * half) * bins));
    if (ix >= 0 && ix < bins && iy >= 0 && iy < bins) ++h[static_cast<std::size_t>(iy) * bins + ix];
  }
  return h;
}

void png_append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

}  // namespace

std::vector<std::uint8_t> cloud_png(const PerpCloud& c, int bins) {
  const auto h = density(c, bins, 1.05);
  const double peak = std::max<double>(1.0, *std::max_element(h.begin(), h.end()));
  std::vector<std::uint8_t> img(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    img[i] = static_cast<std::uint8_t>(255 - std::lround(255.0 * std::sqrt(h[i] / peak)));

  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) throw std::runtime_error("cloud_png: libpng initialisation failed");
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("cloud_png: encoding failed");
  }
  png_set_write_fn(png, &out, png_append, nullptr);
  png_set_IHDR(png, info, bins, bins, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < bins; ++r) png_write_row(png, img.data() + static_cast<std::size_t>(r) * bins);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::string cloud_svg(const PerpCloud& c, const std::vector<PerpRegion>& outlines, int bins) {
  const double half = 1.05, px = 600.0, cell = px / bins;
  const auto h = density(c, bins, half);
  const double peak = std::max<double>(1.0, *std::max_element(h.begin(), h.end()));
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n"
                    "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g fill=\"black\" stroke=\"none\">\n";
  for (int iy = 0; iy < bins; ++iy)
    for (int ix = 0; ix < bins; ++ix) {
      const auto n = h[static_cast<std::size_t>(iy) * bins + ix];
      if (!n) continue;
      out += "<rect x=\"" + num(ix * cell, 6) + "\" y=\"" + num(iy * cell, 6) + "\" width=\"" + num(cell, 6) +
             "\" height=\"" + num(cell, 6) + "\" fill-opacity=\"" + num(std::sqrt(n / peak), 3) + "\"/>\n";
    }
  out += "</g>\n<g fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1\">\n";
  for (const PerpRegion& r : outlines)
    for (const auto& ring : rings_of(r)) {
      out += "<polygon points=\"";
      for (const Point2& p : ring)
        out += num((p.x() + half) / (2 * half) * px, 7) + ',' + num((half - p.y()) / (2 * half) * px, 7) + ' ';
      out.back() = '"';
      out += "/>\n";
    }
  out += "</g>\n</svg>\n";
  return out;
}

Json region_json(const PerpRegion& r) {
  Json rings = Json::array();
  for (const auto& ring : rings_of(r)) {
    Json pts = Json::array();
    for (const Point2& p : ring) pts.push_back({p.x(), p.y()});
    rings.push_back(std::move(pts));
  }
  return Json{{"area", area(r)}, {"rings", std::move(rings)}};
}

std::string region_svg(const std::vector<PerpRegion>& regions, double ppu) {
  const double half = 1.05, w = 2 * half * ppu;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(w) + "\">\n"
                    "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const bool last = i + 1 == regions.size();
    out += std::string("<path fill-rule=\"nonzero\" fill=\"") + (last ? "#2c3e50" : "none") + "\" stroke=\"" +
           (last ? "none" : "#95a5a6") + "\" stroke-width=\"0.8\" d=\"";
    for (const auto& ring : rings_of(regions[i])) {
      char cmd = 'M';
      for (const Point2& p : ring) {
        out += cmd;
        out += num((p.x() + half) * ppu, 7) + ' ' + num((half - p.y()) * ppu, 7) + ' ';
        cmd = 'L';
      }
      out += "Z ";
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string peaks_csv(const std::vector<ReciprocalPeak>& peaks) {
  std::string out = "m0,m1,m2,m3,kx,ky,k_perp,intensity\n";
  for (const auto& p : peaks)
    out += std::to_string(p.index(0)) + ',' + std::to_string(p.index(1)) + ',' + std::to_string(p.index(2)) + ',' +
           std::to_string(p.index(3)) + ',' + num(p.k.x()) + ',' + num(p.k.y()) + ',' + num(p.kperp) + ',' +
           num(p.intensity, 12) + '\n';
  return out;
}

std::string peaks_svg(const std::vector<ReciprocalPeak>& peaks, double min_intensity) {
  double kmax = 1.0;
  for (const auto& p : peaks)
    if (p.intensity >= min_intensity) kmax = std::max(kmax, p.k.norm());
  const double px = 700.0, scale = 0.48 * px / kmax, rmax = 0.02 * px;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"700\" height=\"700\">\n"
                    "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g fill=\"black\">\n";
  for (const auto& p : peaks) {
    if (p.index.isZero() || p.intensity < min_intensity) continue;
    // Area proportional to intensity.
    out += "<circle cx=\"" + num(px / 2 + p.k.x() * scale, 7) + "\" cy=\"" + num(px / 2 - p.k.y() * scale, 7) + "\" r=\"" +
           num(rmax * std::sqrt(p.intensity), 5) + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

Json matrix_json(const Matrix6& m) {
  Json rows = Json::array();
  for (int i = 0; i < 6; ++i) {
    Json r = Json::array();
    for (int j = 0; j < 6; ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Json golden_matrix_json(const GoldenMatrix6& m) {
  Json rows = Json::array();
  for (int i = 0; i < 6; ++i) {
    Json r = Json::array();
    for (int j = 0; j < 6; ++j) r.push_back(m(i, j).str());
    rows.push_back(std::move(r));
  }
  return rows;
}

Json census_json(const Census& c) {
  Json j;
  j["generation"] = c.generation;
  Json shapes;
  for (Shape s : {Shape::R, Shape::P, Shape::H, Shape::C, Shape::S, Shape::Unknown})
    shapes[std::string(1, shape_letter(s))] = c.shape_counts[static_cast<int>(s)];
  j["interior_shape_counts"] = shapes;
  Json classes, comp;
  for (int i = 0; i < 6; ++i) {
    const std::string k(1, class_letter(static_cast<TileClass>(i)));
    classes[k] = c.class_counts[i];
    comp[k] = {c.composition[i][0], c.composition[i][1], c.composition[i][2]};
  }
  j["class_counts"] = classes;
  j["mean_composition_RPH"] = comp;
  j["classified"] = c.classified;
  j["unmatched"] = c.unmatched;
  j["attributed_small_tiles"] = c.attributed_small_tiles;
  j["attribution_defect"] = c.attribution_defect;
  j["mean_area"] = c.mean_area;
  return j;
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

Json write_artifact(const std::string& dir, const std::string& name, const std::string& bytes) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("cannot write " + path.string());
  return Json{{"path", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}};
}

Json write_artifact(const std::string& dir, const std::string& name, const std::vector<std::uint8_t>& bytes) {
  return write_artifact(dir, name, std::string(bytes.begin(), bytes.end()));
}

}  // namespace qtile

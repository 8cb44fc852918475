// Acceptance report: one PASS/FAIL line per criterion, followed by the measurements behind it.
// Exits non-zero only with --strict and a failing criterion.

#include "qtile/diffraction.hpp"
#include "qtile/gpp.hpp"
#include "qtile/perpspace.hpp"
#include "qtile/stats.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace qtile;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  failed: " << what << '\n';
    }
  }
};

const RuleCatalog& cat() { return RuleCatalog::builtin(); }
const double kTau2 = kTau * kTau;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> seq_of(const std::string& chiralities) {
  std::vector<std::string> out;
  for (char c : chiralities) out.push_back(c == 'l' ? "rph-l" : "rph-r");
  return out;
}

// Every generation produced by the report, for the unit-connectivity tally.
struct UcTally {
  long generations = 0;
  long failures = 0;
  void see(const Tiling& t) {
    ++generations;
    failures += !t.uc().ok;
  }
} uc_tally;

std::vector<Tiling> last_three(const std::vector<std::string>& ids) {
  std::vector<Tiling> tail;
  run_sequence({ids, "P"}, cat(), [&](const Tiling& t) {
    uc_tally.see(t);
    tail.push_back(t);
    if (tail.size() > 3) tail.erase(tail.begin());
  });
  return tail;
}

// ---------------------------------------------------------------------------------------------

Outcome eigen_analysis() {
  Outcome o;
  const auto [m1, m2] = build_matrices();
  Vector6 right, u1, u2;
  right << 0.236, 0.691, 0.691, 1, 1, 1;
  u1 << 6.854, 5.236, 8.472, 3.236, 1, 0;
  u2 << 6.854, 3.236, 10.472, 3.236, 0, 1;
  const auto t0 = std::chrono::steady_clock::now();
  const PerronResult p1 = perron(m1.to_double()), p2 = perron(m2.to_double());
  const CrossRelations cr = verify_cross_relations();
  const double ms = 1000 * seconds_since(t0);
  for (const auto& [name, p, u] : {std::tuple{"M1", p1, u1}, std::tuple{"M2", p2, u2}}) {
    const double de = std::abs(p.eigenvalue - 6.8541019662496845);
    const double dr = (p.right - right).cwiseAbs().maxCoeff();
    const double dl = (p.left - u).cwiseAbs().maxCoeff();
    o.detail << "  " << name << ": lambda = " << std::setprecision(12) << p.eigenvalue << " (|d| = " << std::setprecision(3)
             << de << "), right dev " << dr << ", left dev " << dl << ", residuals " << p.right_residual << ' '
             << p.left_residual << '\n';
    o.require(de < 1e-9, std::string(name) + " eigenvalue");
    o.require(dr < 5e-4, std::string(name) + " right vector to 3 decimals");
    o.require(dl < 5e-4, std::string(name) + " left vector to 3 decimals");
  }
  o.detail << "  exact: u1 M2 = tau^4 u2 " << cr.u1_m2 << ", u2 M1 = tau^4 u1 " << cr.u2_m1 << ", u1 M1 " << cr.u1_m1
           << ", u2 M2 " << cr.u2_m2 << ", M v = tau^4 v " << (cr.right_m1 && cr.right_m2) << ", two-step " << cr.two_step
           << "; " << std::setprecision(3) << ms << " ms\n";
  o.require(cr.all(), "exact cross relations");
  return o;
}

Outcome exact_algebra() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> d(-100000, 100000);
  std::set<ModuleVector, ModuleVectorLess> in, out;
  long bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const ModuleVector v = mv(d(rng), d(rng), d(rng), d(rng));
    const ModuleVector up = tau_scale(v, 1);
    if (tau_scale(up, -1) != v || tau_scale(tau_scale(v, -1), 1) != v) ++bad;
    if (norm_squared(up) != norm_squared(v) * GoldenNum::tau_pow(2)) ++bad;
    in.insert(v);
    out.insert(up);
  }
  const GoldenNum t2 = GoldenNum::tau_pow(2);
  const bool conj_ok = t2.conj() == GoldenNum(1) / t2;
  const bool norm_ok = norm_squared(mv(1, 1, 0, 0)) == GoldenNum(1) + GoldenNum::tau();
  o.detail << "  10^4 random vectors: " << bad << " round-trip or norm failures, " << in.size() << " inputs -> "
           << out.size() << " distinct images\n  conj(tau^2) = " << t2.conj() << ", 1/tau^2 = " << GoldenNum(1) / t2
           << "; norm_squared([1,1,0,0]) = " << norm_squared(mv(1, 1, 0, 0)) << '\n';
  o.require(bad == 0 && in.size() == out.size(), "tau round trip is a bijection");
  o.require(conj_ok, "conj(tau^2) = 1/tau^2");
  o.require(norm_ok, "norm_squared([1,1,0,0]) = 1+tau");
  return o;
}

// One generation-6 run per catalog rule serves criteria 3, 6 and 9.
struct RuleRun {
  std::string id;
  double seconds = 0;
  long vertices = 0;
  std::array<long, 6> all{}, interior{};
  bool s_after_two = false;   // an S face at generation >= 3
  long uc_checked = 0;
  bool uc_ok = true;
  std::string error;
  double hull = 0, rotation = 0, mirror = 0;
};

struct CatalogRuns {
  std::vector<RuleRun> runs;
  Tiling rph_left;  // generation 6, kept for the surface checks
};

CatalogRuns run_catalog() {
  CatalogRuns out;
  for (const GppRule& rule : cat().rules()) {
    RuleRun r;
    r.id = rule.id;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Tiling last = run_sequence({std::vector<std::string>(6, rule.id), "P"}, cat(), [&](const Tiling& t) {
        ++r.uc_checked;
        r.uc_ok = r.uc_ok && t.uc().ok;
        uc_tally.see(t);
        if (t.generation >= 3 && t.shape_counts()[static_cast<int>(Shape::S)] > 0) r.s_after_two = true;
      });
      r.seconds = seconds_since(t0);
      r.vertices = last.vertices().size();
      r.all = last.shape_counts(false);
      r.interior = last.shape_counts(true);
      const PerpCloud cloud = project_cloud(last);
      r.hull = hull_containment(cloud.points);
      r.rotation = symmetry_mismatch(cloud, D10Element::rotation_by(1), 32);
      r.mirror = symmetry_mismatch(cloud, D10Element::reflection(), 32);
      if (rule.id == "rph-l") out.rph_left = std::move(last);
    } catch (const std::exception& e) {
      r.error = e.what();
      r.uc_ok = false;
    }
    std::cerr << "  [catalog] " << r.id << " done in " << std::setprecision(3) << seconds_since(t0) << " s\n";
    out.runs.push_back(r);
  }
  return out;
}

std::string present(const std::array<long, 6>& c) {
  std::string s;
  for (int i = 0; i < 6; ++i)
    if (c[i]) s += shape_letter(static_cast<Shape>(i));
  return s;
}

Outcome prototile_closure(const CatalogRuns& cr) {
  Outcome o;
  for (const RuleRun& r : cr.runs) {
    const GppRule& rule = cat().get(r.id);
    const std::string shapes = present(r.interior);
    const std::string want = rule.family == "para-penrose" ? "RPHCS" : rule.family == "rphc" ? "RPHC" : "RPH";
    const long rim_unknown = r.all[static_cast<int>(Shape::Unknown)];
    o.detail << "  " << std::left << std::setw(13) << r.id << std::right << " V=" << r.vertices << " interior shapes "
             << shapes << " (rim unclassified " << rim_unknown << ")"
             << (rule.family == "rphc" && r.s_after_two ? " S after gen 2" : "") << ", "
             << std::setprecision(3) << r.seconds << " s\n";
    o.require(r.error.empty(), r.id + ": " + r.error);
    if (rule.family == "para-penrose") o.require(shapes == want, r.id + " has all five prototiles");
    else o.require(shapes == want, r.id + " prototile set");
    if (rule.family == "rphc") o.require(!r.s_after_two, r.id + " no S after iteration 2");
    o.require(r.interior[static_cast<int>(Shape::Unknown)] == 0, r.id + " unknown interior faces");
    o.require(r.seconds < 60, r.id + " under one minute");
  }
  return o;
}

Outcome rph_statistics() {
  Outcome o;
  const auto [m1, m2] = build_matrices();
  const auto ll = last_three(seq_of("llllll"));
  const auto rll = last_three(seq_of("lllrll"));
  const auto lr = last_three(seq_of("lllllr"));
  const auto rlr = last_three(seq_of("lllrlr"));

  const PrototileRatios r = prototile_ratios(census(ll[2]));
  const double e_rh = r.r_over_h / kTau - 1, e_ph = r.p_over_h / (2 * kTau) - 1, e_a = r.mean_area_over_h * kTau - 1;
  o.detail << std::setprecision(5) << "  generation 6 interior: R:P:H = 1 : " << r.p_over_h / r.r_over_h << " : "
           << 1 / r.r_over_h << " (R/H " << r.r_over_h << " +- " << r.r_over_h_error << ", P/H " << r.p_over_h
           << " +- " << r.p_over_h_error << "); mean area / H = " << r.mean_area_over_h << '\n'
           << std::setprecision(3) << "  relative errors: R/H " << 100 * e_rh << "%, P/H " << 100 * e_ph
           << "%, mean area " << 100 * e_a << "%\n";
  o.require(std::abs(e_rh) < 0.02, "R/H within 2%");
  o.require(std::abs(e_ph) < 0.02, "P/H within 2%");
  o.require(std::abs(e_a) < 0.02, "mean area within 2%");

  auto compare = [&](const char* name, const EmpiricalMatrix& e, const Matrix6& ref) {
    double worst = 0;
    int rows = 0;
    for (int i = 0; i < 6; ++i) {
      if (!e.samples[i]) continue;
      ++rows;
      for (int j = 0; j < 6; ++j) {
        const double dev = std::abs(e.m(i, j) - ref(i, j));
        worst = std::max(worst, ref(i, j) != 0 ? dev / std::abs(ref(i, j)) : dev);
      }
    }
    o.detail << "  empirical " << name << ": " << rows << " rows from";
    for (long s : e.samples) o.detail << ' ' << s;
    o.detail << " tiles, worst entry deviation " << std::setprecision(3) << worst << '\n';
    o.require(rows == 6 && worst < 0.03, std::string(name) + " entrywise within 3%");
  };
  compare("M1 (ll)", pooled(empirical_matrix(ll[0], ll[1], ll[2]), empirical_matrix(rll[0], rll[1], rll[2])),
          m1.to_double());
  compare("M2 (lr)", pooled(empirical_matrix(lr[0], lr[1], lr[2]), empirical_matrix(rlr[0], rlr[1], rlr[2])),
          m2.to_double());
  return o;
}

Outcome sequence_dependence() {
  Outcome o;
  struct Row {
    std::string seq;
    Census c;
    SymmetryCenters s;
  };
  std::vector<Row> rows;
  for (const std::string s : {"llllll", "llrlll", "rrlrll", "lllllr", "rrlrlr"}) {
    const auto g = last_three(seq_of(s));
    const Tiling& t5 = g[1];
    const Tiling& t6 = g[2];
    const Tiling mirror6 = iterate(t5, cat().get(cat().get(t6.rule_history.back()).mirror));
    rows.push_back({s, census(t5, t6), symmetry_center_census(t5, t6, mirror6)});
  }
  auto frac = [](const Census& c, int i) { return double(c.class_counts[i]) / c.classified; };
  for (const Row& r : rows) {
    o.detail << "  " << r.seq << ": classes";
    for (int i = 0; i < 6; ++i) o.detail << ' ' << class_letter(static_cast<TileClass>(i)) << '=' << r.c.class_counts[i];
    o.detail << std::setprecision(4) << "; B share of P " << double(r.s.fivefold) / r.s.classified_p
             << ", five-fold per tile " << r.s.fivefold_per_tile() << ", two-fold per tile " << r.s.twofold_per_tile()
             << '\n';
  }
  // Same final pair: class fractions agree within three binomial standard errors.
  auto agree = [&](const Row& a, const Row& b) {
    double worst = 0;
    for (int i = 0; i < 6; ++i) {
      const double p = frac(a.c, i), q = frac(b.c, i);
      const double se = std::sqrt(p * (1 - p) / a.c.classified + q * (1 - q) / b.c.classified) + 1e-12;
      worst = std::max(worst, std::abs(p - q) / se);
    }
    o.detail << "  " << a.seq << " vs " << b.seq << ": largest class-fraction gap " << std::setprecision(3) << worst
             << " standard errors\n";
    o.require(worst <= 3, a.seq + " and " + b.seq + " agree");
  };
  agree(rows[0], rows[1]);
  agree(rows[0], rows[2]);
  agree(rows[3], rows[4]);
  const double b_ll = double(rows[0].s.fivefold) / rows[0].s.classified_p;
  const double b_lr = double(rows[3].s.fivefold) / rows[3].s.classified_p;
  o.detail << std::setprecision(4) << "  five-fold: ll " << rows[0].s.fivefold_per_tile() << " vs lr "
           << rows[3].s.fivefold_per_tile() << " per tile; B share of P " << b_ll << " (u1 predicts "
           << predicted_b_fraction_of_p(PairCase::Same) << ") vs " << b_lr << " (u2 predicts "
           << predicted_b_fraction_of_p(PairCase::Opposite) << ")\n";
  o.require(rows[0].s.fivefold_per_tile() > rows[3].s.fivefold_per_tile(), "five-fold frequency ll > lr");
  o.require(b_ll > b_lr, "B share of P ll > lr");
  const double two_gap = std::abs(rows[0].s.twofold_per_tile() / rows[3].s.twofold_per_tile() - 1);
  o.detail << "  two-fold totals per tile differ by " << std::setprecision(3) << 100 * two_gap << "% between ll and lr\n";
  return o;
}

Outcome perpendicular_space(const CatalogRuns& cr, double threshold) {
  Outcome o;
  for (const RuleRun& r : cr.runs) {
    const GppRule& rule = cat().get(r.id);
    const bool symmetric = rule.chirality == Chirality::None;
    o.detail << "  " << std::left << std::setw(13) << r.id << std::right << std::setprecision(3) << " hull excess "
             << r.hull << ", rotation " << r.rotation << ", mirror " << r.mirror << (symmetric ? " (symmetric)" : " (chiral)")
             << '\n';
    o.require(r.hull <= 1e-9, r.id + " inside the hull decagon");
    if (symmetric) o.require(r.mirror < threshold, r.id + " mirror mismatch below threshold");
    else o.require(r.rotation < r.mirror, r.id + " rotation mismatch below mirror mismatch");
  }
  o.detail << "  threshold " << threshold << " at 32 bins, generation 6\n";
  return o;
}

Outcome dual_map_convergence(const Tiling& rph_left) {
  Outcome o;
  const DualMapConfig cfg = DualMapConfig::for_rule(cat().get("rph-l"));
  const auto xs = surface_iterates(star_decagon(), cfg, 8);
  std::vector<double> d;
  for (int i = 0; i + 1 < int(xs.size()); ++i) d.push_back(hausdorff(xs[i + 1], xs[i]));
  o.detail << "  d(X_i+1, X_i):";
  for (double x : d) o.detail << ' ' << std::setprecision(4) << x;
  o.detail << "\n  ratios i=1..5 (window [" << std::setprecision(4) << 0.8 / kTau2 << ", " << 1.2 / kTau2 << "]):";
  bool ratios_ok = true;
  for (int i = 1; i <= 5; ++i) {
    const double q = d[i] / d[i - 1];
    o.detail << ' ' << q;
    ratios_ok = ratios_ok && q >= 0.8 / kTau2 && q <= 1.2 / kTau2;
  }
  o.detail << '\n';
  o.require(ratios_ok, "Hausdorff ratios within 20% of 1/tau^2 over i=1..5");

  const SurfaceReport interior = validate_surface(project_cloud(rph_left, true), xs[5]);
  const SurfaceReport all = validate_surface(project_cloud(rph_left), xs[5]);
  o.detail << std::setprecision(4) << "  generation-6 RPH-L cloud outside X_5: " << 100 * interior.outside_fraction
           << "% of interior-face vertices (" << 100 * all.outside_fraction << "% of all vertices)\n";
  o.require(interior.outside_fraction < 0.005, "cloud outside X_5 below 0.5%");

  const Occupancy occ = edge_triangle_occupancy(xs[7], 0);
  o.detail << "  occupancy on X_7: pentagon " << occ.pentagon << " (target 0.6), triangles " << occ.triangles
           << " (target 0.5; " << occ.left << " + " << occ.right << ")\n";
  o.require(std::abs(occ.pentagon - 0.6) <= 0.05 * 0.6, "pentagon occupancy within 5% of 3/5");
  o.require(std::abs(occ.triangles - 0.5) <= 0.05 * 0.5, "triangle occupancy within 5% of 1/2");
  return o;
}

Outcome diffraction() {
  Outcome o;
  const Tiling a = run_sequence({std::vector<std::string>(5, "rph-l"), "P"});
  const Tiling c = run_sequence({std::vector<std::string>(5, "para-penrose"), "P"});
  Disc da = inscribed_disc(a), dc = inscribed_disc(c);
  da.radius = dc.radius = 0.9 * std::min(da.radius, dc.radius);
  const auto wa = circular_window(a, off_centre(da, 0.3));
  const auto wc = circular_window(c, off_centre(dc, 0.3));
  auto pa = reciprocal_points(6, 8.0), pc = pa;
  compute_intensities(wa, pa);
  compute_intensities(wc, pc);

  std::map<std::vector<std::int64_t>, double> by_index;
  for (const auto& p : pa) by_index[{p.index(0), p.index(1), p.index(2), p.index(3)}] = p.intensity;
  double friedel = 0;
  for (const auto& p : pa) {
    const auto it = by_index.find({-p.index(0), -p.index(1), -p.index(2), -p.index(3)});
    if (it != by_index.end()) friedel = std::max(friedel, std::abs(it->second - p.intensity));
  }
  const double i0 = pa.front().intensity;

  const ChiralityReport ra = chirality_report(pa, 0.01), rc = chirality_report(pc, 0.01);
  std::vector<double> control = rc.strong;
  control.insert(control.end(), rc.weak.begin(), rc.weak.end());
  const double p99 = quantile(control, 0.99);
  const RankTest t = mann_whitney_greater(ra.weak, rc.weak);
  o.detail << std::setprecision(4) << "  scatterers " << wa.size() << " (RPH-L) / " << wc.size() << " (para-Penrose), "
           << pa.size() << " peaks\n  I(0) - 1 = " << i0 - 1 << ", Friedel max |I(k) - I(-k)| = " << friedel
           << "\n  strong pairs " << ra.strong.size() << ", max asymmetry " << ra.strong_max
           << "; control 99th percentile " << p99 << "\n  weak pairs " << ra.weak.size()
           << ", median asymmetry " << quantile(ra.weak, 0.5) << " vs control " << quantile(rc.weak, 0.5)
           << "; one-sided rank test p = " << t.p_value << ", effect " << t.effect << '\n';
  o.require(std::abs(i0 - 1) < 1e-12, "I(0) = 1");
  o.require(friedel <= 1e-12, "Friedel symmetry to 1e-12");
  o.require(!ra.strong.empty() && ra.strong_max < p99, "strong-peak asymmetry below the control's 99th percentile");
  o.require(t.p_value < 0.01, "weak-peak asymmetry dominates the control");
  return o;
}

Outcome unit_connectivity(const CatalogRuns& cr) {
  Outcome o;
  long iterations = 0;
  for (const RuleRun& r : cr.runs) {
    iterations += r.uc_checked;
    o.require(r.uc_ok && r.uc_checked == 7, r.id + " UC at every iteration");
  }
  o.require(uc_tally.failures == 0, "UC on the mixed sequences");
  o.detail << "  " << cr.runs.size() << " catalog sequences, " << iterations << " generations (seed included); "
           << uc_tally.generations << " generations over all sequences of this report, " << uc_tally.failures
           << " UC failures\n";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, Outcome>> results;
  auto record = [&](const std::string& name, Outcome o) {
    std::cerr << "  [done] " << name << " at " << std::setprecision(3) << seconds_since(t0) << " s\n";
    results.emplace_back(name, std::move(o));
  };

  record("1 eigen-analysis", eigen_analysis());
  record("2 exact algebra", exact_algebra());
  const CatalogRuns catalog = run_catalog();
  record("3 prototile closure", prototile_closure(catalog));
  Outcome stats;
  try {
    stats = rph_statistics();
  } catch (const std::exception& e) {
    stats.require(false, e.what());
  }
  record("4 RPH statistics", std::move(stats));
  Outcome seqdep;
  try {
    seqdep = sequence_dependence();
  } catch (const std::exception& e) {
    seqdep.require(false, e.what());
  }
  record("5 sequence dependence", std::move(seqdep));
  record("6 perpendicular space", perpendicular_space(catalog, 0.0075));
  record("7 dual-map convergence", dual_map_convergence(catalog.rph_left));
  record("8 diffraction", diffraction());
  record("9 unit connectivity", unit_connectivity(catalog));

  int failed = 0;
  for (const auto& [name, o] : results) {
    std::cout << "Criterion " << name << ": " << (o.pass ? "PASS" : "FAIL") << '\n';
    failed += !o.pass;
  }
  std::cout << '\n';
  for (const auto& [name, o] : results) std::cout << "[" << name << "]\n" << o.detail.str();
  std::cout << "\n" << results.size() - failed << " of " << results.size() << " criteria pass; total "
            << std::setprecision(3) << seconds_since(t0) << " s\n";
  return strict && failed ? 1 : 0;
}

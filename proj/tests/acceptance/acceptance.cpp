// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../oracles/oracles.hpp"
#include "rlab/discriminant.hpp"
#include "rlab/experiments.hpp"
#include "rlab/projection.hpp"
#include "rlab/topology.hpp"

using namespace rlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Certified plane-curve results seen anywhere in the suite: (degree, max nest depth).
std::vector<std::pair<int, int>> g_nests;

HomogeneousPolynomial draw(int n, int d, std::uint64_t seed, std::uint64_t i) {
  return sample_gaussian(make_basis(n, d), sample_stream(seed, d, i));
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ExperimentConfig config(ExperimentKind kind, int n, std::vector<int> degrees, int samples, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.n = n;
  cfg.degrees = std::move(degrees);
  cfg.samples_per_degree = samples;
  cfg.master_seed = seed;
  cfg.threads = default_thread_count();
  return cfg;
}

Outcome projection_exactness() {
  double residual = 0.0, orthogonality = 0.0, divisibility = 0.0;
  int cases = 0;
  for (auto [n, d] : {std::pair{1, 10}, {1, 20}, {2, 8}, {2, 12}}) {
    const auto sigma = build_sigma(n);
    for (int ell : {1, 2}) {
      HomogeneousPolynomial power = sigma.poly;
      for (int i = 1; i < ell; ++i) power = multiply(power, sigma.poly);
      for (std::uint64_t i = 0; i < 100; ++i) {
        const auto s = draw(n, d, 101, i);
        const auto sp = split(s, sigma, ell);
        const double scale = s.norm();
        residual = std::max(residual, (sp.s_zero + sp.s_perp - s).norm() / scale);
        double dot = 0.0;
        for (std::size_t k = 0; k < s.coeffs().size(); ++k) dot += sp.s_zero.coeffs()[k] * sp.s_perp.coeffs()[k];
        orthogonality = std::max(orthogonality, std::abs(dot) / (scale * scale));
        divisibility = std::max(divisibility, (multiply(power, sp.quotient) - sp.s_zero).norm() / scale);
        ++cases;
      }
    }
  }
  return {residual <= 1e-9 && orthogonality <= 1e-9 && divisibility <= 1e-9,
          std::to_string(cases) + " splits, residual " + fmt("%.1e", residual) + ", orthogonality " +
              fmt("%.1e", orthogonality) + ", divisibility " + fmt("%.1e", divisibility)};
}

Outcome distance_oracle() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const int d = 2 + static_cast<int>(i % 9);
    const auto s = draw(1, d, 102, i);
    const double ours = distance_to_discriminant(s).exact;
    const double ref = oracle::dense_grid_distance(s, 10000);
    worst = std::max(worst, std::abs(ours - ref) / ref);
  }
  return {worst <= 0.01, "50 samples, d in 2..10, worst relative error " + fmt("%.2e", worst)};
}

Outcome distance_constant() {
  std::vector<Quartiles> q;
  for (int d : {10, 20, 40}) {
    std::vector<double> ratios;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto r = distance_to_discriminant(draw(1, d, 103, i));
      ratios.push_back(r.exact / r.asymptotic);
    }
    q.push_back(quartiles(ratios));
  }
  const bool median_ok = std::abs(q[2].median - 1.0) <= 0.15;
  const bool iqr_ok = q[1].iqr() <= q[0].iqr() + 1e-12 && q[2].iqr() <= q[1].iqr() + 1e-12;
  // The same ratio without the volume normalization, for the record.
  AsymptoticConvention raw;
  raw.normalization = VolumeNormalization::Probability;
  const auto r = distance_to_discriminant(draw(1, 40, 103, 0), 0, true, raw);
  return {median_ok && iqr_ok,
          "medians " + fmt("%.4f", q[0].median) + " / " + fmt("%.4f", q[1].median) + " / " +
              fmt("%.4f", q[2].median) + " at d = 10/20/40, IQR " + fmt("%.1e", q[0].iqr()) + " / " +
              fmt("%.1e", q[1].iqr()) + " / " + fmt("%.1e", q[2].iqr()) + ", unnormalized constant " +
              fmt("%.4f", r.exact / r.asymptotic)};
}

Outcome topology_oracle() {
  int total = 0, certified = 0, compared = 0, mismatches = 0, harnack = 0, parity = 0;
  for (int d = 2; d <= 6; ++d) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      const auto s = draw(2, d, 104, i);
      const auto t = curve_topology(s);
      ++total;
      if (!t.certified) continue;
      ++certified;
      g_nests.emplace_back(d, t.max_nest_depth);
      harnack += t.b0 > t.harnack_bound;
      parity += t.pseudolines != d % 2;
      const auto a = oracle::marching_topology(s, 64), b = oracle::marching_topology(s, 128);
      if (a.b0 != b.b0) continue;
      ++compared;
      mismatches += t.b0 != b.b0;
    }
  }
  const double rate = static_cast<double>(certified) / total;
  return {mismatches == 0 && rate >= 0.95 && harnack == 0 && parity == 0,
          std::to_string(certified) + "/" + std::to_string(total) + " certified (" + fmt("%.1f%%", 100 * rate) +
              "), " + std::to_string(compared) + " doubly resolved, " + std::to_string(mismatches) +
              " mismatches, " + std::to_string(harnack) + " Harnack and " + std::to_string(parity) +
              " parity violations"};
}

Outcome rarefaction_trend() {
  auto cfg = config(ExperimentKind::Rarefaction, 1, {3, 5, 7}, 10000, 106);
  cfg.thresholds = {1.0};
  const auto rec = run_rarefaction(cfg);
  const auto rows = rec.series("betti_at_least", 1.0);
  bool ok = rows.size() == 3;
  std::string detail = "frequencies";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ok = ok && rows[i]->frequency.has_value();
    detail += " " + fmt("%.4f", rows[i]->frequency.value_or(NAN));
    if (i > 0 && ok) {
      ok = ok && *rows[i]->frequency < *rows[i - 1]->frequency && rows[i]->wilson->high < rows[i - 1]->wilson->low;
    }
  }
  const DecayFit* fit = nullptr;
  for (const auto& f : rec.fits)
    if (f.series == "betti_at_least") fit = &f.fit;
  ok = ok && fit && fit->fit && fit->fit->slope < 0.0;
  if (fit && fit->fit) detail += ", fitted slope " + fmt("%.3f", fit->fit->slope);
  return {ok, detail};
}

Outcome c1_decay() {
  auto cfg = config(ExperimentKind::C1Decay, 1, {8, 12, 16, 20}, 200, 107);
  cfg.ell = 1;
  const auto rec = run_c1_decay(cfg);
  const auto rows = rec.observable("c1_perp_relative");
  bool ok = rows.size() == 4 && rec.assertions_passed();
  std::string detail = "medians";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += " " + fmt("%.4f", rows[i]->quartiles->median);
    if (i > 0) ok = ok && rows[i]->quartiles->median < rows[i - 1]->quartiles->median;
  }
  const auto& fit = rec.fits.at(0).fit;
  ok = ok && fit.fit && fit.fit->slope <= -0.1 && fit.fit->r_squared >= 0.9;
  if (fit.fit) detail += ", slope " + fmt("%.3f", fit.fit->slope) + ", r^2 " + fmt("%.3f", fit.fit->r_squared);
  return {ok, detail};
}

Outcome approximation() {
  auto cfg = config(ExperimentKind::Approximation, 1, {8, 16, 20}, 500, 108);
  cfg.ell = 1;
  const auto rec = run_approximation(cfg);
  const auto holds = rec.series("criterion_holds");
  const auto match = rec.series("topology_match");
  bool ok = rec.assertions_passed() && holds.size() == 3 && *holds[2]->frequency >= *holds[0]->frequency;
  std::string detail = "n=1: criterion frequency " + fmt("%.3f", *holds[0]->frequency) + " / " +
                       fmt("%.3f", *holds[1]->frequency) + " / " + fmt("%.3f", *holds[2]->frequency) +
                       " at d = 8/16/20, matches";
  for (const auto* row : match) {
    ok = ok && row->event_count == row->n_certified;
    detail += " " + std::to_string(row->event_count) + "/" + std::to_string(row->n_certified);
  }

  auto curves = config(ExperimentKind::Approximation, 2, {8}, 100, 109);
  curves.ell = 1;
  const auto rec2 = run_approximation(curves);
  const auto m2 = rec2.series("topology_match").at(0);
  ok = ok && rec2.assertions_passed() && m2->event_count == m2->n_certified;
  detail += "; n=2, d=8: criterion holds for " + std::to_string(m2->n_samples) + "/100, matches " +
            std::to_string(m2->event_count) + "/" + std::to_string(m2->n_certified);

  // ell = 0 control: every sample is its own approximation.
  curves.ell = 0;
  const auto rec3 = run_approximation(curves);
  const auto m3 = rec3.series("topology_match").at(0);
  ok = ok && rec3.assertions_passed() && m3->event_count == m3->n_certified;
  detail += "; ell=0 control matches " + std::to_string(m3->event_count) + "/" + std::to_string(m3->n_certified);

  // Feed the nest bound with the certified curves of the approximation runs.
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto t = curve_topology(draw(2, 8, 109, i));
    if (t.certified) g_nests.emplace_back(8, t.max_nest_depth);
  }
  return {ok, detail};
}

Outcome nest_bound() {
  // Larger degrees exercise deeper nests.
  for (int d : {8, 10, 12}) {
    for (std::uint64_t i = 0; i < 60; ++i) {
      const auto t = curve_topology(draw(2, d, 105, i));
      if (t.certified) g_nests.emplace_back(d, t.max_nest_depth);
    }
  }
  int violations = 0, deepest = 0;
  for (auto [d, depth] : g_nests) {
    violations += depth > d / 2;
    deepest = std::max(deepest, depth);
  }
  return {violations == 0, std::to_string(g_nests.size()) + " certified curves, deepest nest " +
                               std::to_string(deepest) + ", " + std::to_string(violations) + " violations"};
}

Outcome tube_volume() {
  auto cfg = config(ExperimentKind::TubeVolume, 1, {6}, 2000, 110);
  cfg.radii = {1e-4, 1e-3, 1e-2};
  const auto rec = run_tube_volume(cfg);
  const auto rows = rec.series("tube");
  const double bound = std::pow(6.0, 2 * cfg.n);
  bool ok = rows.size() == 3 && rec.assertions_passed();
  std::string detail = "frequency/r";
  for (const auto* row : rows) {
    ok = ok && row->ratio && *row->ratio <= bound;
    detail += " " + fmt("%.2f", row->ratio.value_or(NAN));
  }
  detail += " (bound d^2n = " + fmt("%.0f", bound) + "), counts";
  for (const auto* row : rows) detail += " " + std::to_string(row->event_count);
  return {ok, detail};
}

Outcome determinism() {
  int runs = 0;
  bool ok = true;
  const std::vector<ExperimentConfig> configs = {
      config(ExperimentKind::Rarefaction, 1, {3, 5}, 300, 111), config(ExperimentKind::Rarefaction, 2, {3, 4}, 40, 111),
      config(ExperimentKind::TubeVolume, 1, {6}, 200, 111),     config(ExperimentKind::C1Decay, 1, {8, 12}, 60, 111),
      config(ExperimentKind::Approximation, 1, {12}, 80, 111), config(ExperimentKind::DistanceStats, 2, {4}, 30, 111)};
  for (auto cfg : configs) {
    cfg.keep_samples = true;
    cfg.threads = 1;
    const auto base = run_experiment(cfg);
    const auto csv = record_to_csv(base), json = record_to_json(base).dump();
    for (int threads : {1, 2, 4}) {
      cfg.threads = threads;
      const auto again = run_experiment(cfg);
      ok = ok && record_to_csv(again) == csv && record_to_json(again).dump() == json;
      ++runs;
    }
  }
  return {ok, std::to_string(runs) + " reruns over 6 configurations at 1, 2 and 4 threads"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 projection exactness", projection_exactness},
      {"2 distance oracle", distance_oracle},
      {"3 distance asymptotic constant", distance_constant},
      {"4 topology oracle", topology_oracle},
      {"6 rarefaction trend", rarefaction_trend},
      {"7 C1 decay", c1_decay},
      {"8 end-to-end approximation", approximation},
      {"5 nest bound", nest_bound},
      {"9 tube volume", tube_volume},
      {"10 determinism", determinism},
  };
  // Criterion 5 runs after 4 and 8 so it sees their curves; lines print in numeric order.
  std::vector<std::pair<int, std::string>> lines;
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.1f s)", secs);
    lines.emplace_back(std::stoi(name), std::string(out.pass ? "PASS " : "FAIL ") + name + ": " + out.detail + buf);
    failed += !out.pass;
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [number, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%d/%zu criteria passed\n", static_cast<int>(lines.size()) - failed, lines.size());
  return failed == 0 ? 0 : 1;
}

#include "rlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "rlab/digest.hpp"
#include "rlab/discriminant.hpp"
#include "rlab/errors.hpp"
#include "rlab/poly_core.hpp"
#include "rlab/projection.hpp"
#include "rlab/topology.hpp"

namespace rlab {

namespace {

const std::map<ExperimentKind, std::string> kKindNames = {
    {ExperimentKind::Rarefaction, "rarefaction"},
    {ExperimentKind::TubeVolume, "tube_volume"},
    {ExperimentKind::C1Decay, "c1_decay"},
    {ExperimentKind::Approximation, "approximation"},
    {ExperimentKind::DistanceStats, "distance_stats"},
};

// Stream key separating control samples from the main draws.
constexpr std::uint64_t kControlStream = 0xc0a7'0001ULL;

HomogeneousPolynomial draw(const ExperimentConfig& cfg, int degree, std::size_t index) {
  return sample_gaussian(make_basis(cfg.n, degree), sample_stream(cfg.master_seed, degree, index));
}

// Evaluates f on every (degree, index) pair on the worker pool; result[k][i]
// belongs to degrees[k], sample i.
template <class T, class F>
std::vector<std::vector<T>> sample_all(const ExperimentConfig& cfg, F f) {
  const std::size_t per = static_cast<std::size_t>(cfg.samples_per_degree);
  std::vector<std::vector<T>> out(cfg.degrees.size(), std::vector<T>(per));
  parallel_for(cfg.degrees.size() * per, cfg.threads, [&](std::size_t flat) {
    const std::size_t k = flat / per, i = flat % per;
    const int degree = cfg.degrees[k];
    out[k][i] = f(draw(cfg, degree, i), degree, i);
  });
  return out;
}

ExperimentRow event_row(int degree, std::string event, std::optional<double> threshold, long long n_samples,
                        long long n_certified, long long count) {
  ExperimentRow row;
  row.degree = degree;
  row.event = std::move(event);
  row.threshold = threshold;
  row.n_samples = n_samples;
  row.n_certified = n_certified;
  row.event_count = count;
  if (n_certified > 0) {
    row.frequency = static_cast<double>(count) / static_cast<double>(n_certified);
    row.wilson = wilson_interval(count, n_certified);
  }
  row.frequency_worst_case =
      n_samples > 0 ? static_cast<double>(count + (n_samples - n_certified)) / static_cast<double>(n_samples)
                    : 0.0;
  return row;
}

ExperimentRow observable_row(int degree, std::string name, const std::vector<double>& values,
                             long long n_samples) {
  ExperimentRow row;
  row.degree = degree;
  row.observable = std::move(name);
  row.n_samples = n_samples;
  row.n_certified = static_cast<long long>(values.size());
  if (!values.empty()) row.quartiles = quartiles(values);
  return row;
}

void add_fit(ExperimentRecord& record, const std::string& event, std::optional<double> threshold) {
  std::vector<std::pair<int, double>> points;
  for (const auto* row : record.series(event, threshold)) {
    if (row->frequency) points.emplace_back(row->degree, *row->frequency);
  }
  record.fits.push_back({event, threshold, fit_decay(points)});
}

ExperimentRecord start_record(const ExperimentConfig& cfg, ExperimentKind expected) {
  cfg.validate();
  if (cfg.kind != expected) throw InvalidArgument("experiment kind does not match the runner");
  ExperimentRecord record;
  record.config = cfg;
  record.config_hash = config_hash(cfg);
  return record;
}

double relative(double value, const HomogeneousPolynomial& s) {
  const double norm = s.norm();
  return norm > 0.0 ? value / norm : 0.0;
}

// Canonical shape of the oval nest forest, independent of oval numbering.
std::string nest_signature(const CurveTopology& t) {
  const int count = static_cast<int>(t.nest_parent.size());
  std::vector<std::vector<int>> children(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i < count; ++i) {
    const int parent = t.nest_parent[i];
    children[parent < 0 ? count : parent].push_back(i);
  }
  std::function<std::string(int)> encode = [&](int node) {
    std::vector<std::string> parts;
    for (int c : children[node]) parts.push_back(encode(c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const auto& p : parts) s += p;
    return s + ")";
  };
  return encode(count);
}

struct Topo {
  bool certified = false;
  int bstar = 0;
  bool maximal = false;
  int b0 = 0;
  int pseudolines = 0;
  int max_nest_depth = 0;
  std::string shape;
};

Topo topology_of(const HomogeneousPolynomial& s, int resolution) {
  Topo t;
  if (s.n() == 1) {
    const RootCount rc = count_real_roots(s);
    t.certified = rc.certified;
    t.bstar = t.b0 = rc.real_roots;
    t.maximal = rc.certified && maximality_verdict(rc);
    t.shape = std::to_string(rc.real_roots);
  } else {
    const CurveTopology ct = curve_topology(s, resolution);
    t.certified = ct.certified;
    t.b0 = ct.b0;
    t.bstar = 2 * ct.b0;
    t.pseudolines = ct.pseudolines;
    t.max_nest_depth = ct.max_nest_depth;
    t.maximal = ct.certified && maximality_verdict(ct);
    t.shape = std::to_string(ct.pseudolines) + nest_signature(ct);
  }
  return t;
}

void check_curve_invariants(ExperimentRecord& record, const std::vector<std::pair<int, Topo>>& certified) {
  if (record.config.n != 2) return;
  long long harnack = 0, parity = 0, nest = 0;
  for (const auto& [d, t] : certified) {
    if (t.b0 > harnack_bound(d)) ++harnack;
    if (t.pseudolines != d % 2) ++parity;
    if (t.max_nest_depth > d / 2) ++nest;
  }
  record.assertions.push_back({"harnack bound", harnack == 0, std::to_string(harnack) + " violations"});
  record.assertions.push_back({"pseudoline parity", parity == 0, std::to_string(parity) + " violations"});
  record.assertions.push_back({"nest depth bound", nest == 0, std::to_string(nest) + " violations"});
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string to_string(ExperimentKind kind) { return kKindNames.at(kind); }

ExperimentKind parse_kind(const std::string& name) {
  for (const auto& [kind, label] : kKindNames) {
    if (label == name) return kind;
  }
  throw InvalidArgument("unknown experiment kind '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (n != 1 && n != 2) throw InvalidArgument("n must be 1 or 2");
  if (degrees.empty()) throw InvalidArgument("at least one degree is required");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 1) throw InvalidArgument("degrees must be positive");
    if (i > 0 && degrees[i] <= degrees[i - 1]) throw InvalidArgument("degrees must be strictly increasing");
  }
  if (samples_per_degree < 1) throw InvalidArgument("samples per degree must be at least 1");
  if (ell < 0) throw InvalidArgument("ell must be non-negative");
  if (resolution < 1 || resolution > 30) throw InvalidArgument("resolution must lie in [1, 30]");
  if (grid_density != 0 && grid_density < 8) throw InvalidArgument("grid density must be 0 or at least 8");
  if (kind == ExperimentKind::Rarefaction && thresholds.empty()) {
    throw InvalidArgument("rarefaction needs at least one threshold");
  }
  if (kind == ExperimentKind::TubeVolume) {
    if (radii.empty()) throw InvalidArgument("tube_volume needs at least one radius");
    for (double r : radii)
      if (!(r >= 0.0)) throw InvalidArgument("radii must be non-negative");
  }
  if (kind == ExperimentKind::C1Decay || kind == ExperimentKind::Approximation) {
    for (int d : degrees) {
      if (d - 2 * ell < 1) {
        throw DimensionError("degree " + std::to_string(d) + " leaves no quotient degree for ell = " +
                             std::to_string(ell));
      }
    }
  }
  if ((kind == ExperimentKind::TubeVolume || kind == ExperimentKind::DistanceStats ||
       kind == ExperimentKind::Approximation) &&
      degrees.front() < 2) {
    throw InvalidArgument("distance experiments need degree >= 2");
  }
}

Json config_to_json(const ExperimentConfig& cfg) {
  return Json{{"kind", to_string(cfg.kind)},
              {"n", cfg.n},
              {"degrees", cfg.degrees},
              {"samples_per_degree", cfg.samples_per_degree},
              {"master_seed", cfg.master_seed},
              {"thresholds", cfg.thresholds},
              {"radii", cfg.radii},
              {"ell", cfg.ell},
              {"resolution", cfg.resolution},
              {"grid_density", cfg.grid_density},
              {"keep_samples", cfg.keep_samples}};
}

ExperimentConfig config_from_json(const Json& j) {
  try {
    ExperimentConfig cfg;
    cfg.kind = parse_kind(j.at("kind").get<std::string>());
    cfg.n = j.at("n").get<int>();
    cfg.degrees = j.at("degrees").get<std::vector<int>>();
    cfg.samples_per_degree = j.at("samples_per_degree").get<int>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.thresholds = j.value("thresholds", cfg.thresholds);
    cfg.radii = j.value("radii", cfg.radii);
    cfg.ell = j.value("ell", cfg.ell);
    cfg.resolution = j.value("resolution", cfg.resolution);
    cfg.grid_density = j.value("grid_density", cfg.grid_density);
    cfg.keep_samples = j.value("keep_samples", cfg.keep_samples);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment config: ") + e.what());
  }
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(config_to_json(cfg).dump()); }

bool ExperimentRecord::assertions_passed() const {
  return std::ranges::all_of(assertions, [](const Assertion& a) { return a.passed; });
}

std::vector<const ExperimentRow*> ExperimentRecord::series(const std::string& event,
                                                           std::optional<double> threshold) const {
  std::vector<const ExperimentRow*> out;
  for (const auto& row : rows) {
    if (row.event == event && (!threshold || row.threshold == threshold)) out.push_back(&row);
  }
  return out;
}

std::vector<const ExperimentRow*> ExperimentRecord::observable(const std::string& name) const {
  std::vector<const ExperimentRow*> out;
  for (const auto& row : rows) {
    if (row.observable == name) out.push_back(&row);
  }
  return out;
}

ExperimentRecord run_rarefaction(const ExperimentConfig& cfg) {
  ExperimentRecord record = start_record(cfg, ExperimentKind::Rarefaction);
  const auto outcomes = sample_all<Topo>(cfg, [&](const HomogeneousPolynomial& s, int, std::size_t) {
    return topology_of(s, cfg.resolution);
  });
  std::vector<std::pair<int, Topo>> certified_all;
  bool nesting_ok = true;
  for (std::size_t k = 0; k < cfg.degrees.size(); ++k) {
    const int d = cfg.degrees[k];
    const auto& out = outcomes[k];
    const long long total = static_cast<long long>(out.size());
    long long certified = 0, maximal = 0;
    std::vector<double> bstar;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Topo& t = out[i];
      if (t.certified) {
        ++certified;
        maximal += t.maximal;
        bstar.push_back(t.bstar);
        certified_all.emplace_back(d, t);
      }
      if (cfg.keep_samples) {
        Json sample{{"degree", d}, {"index", i}, {"certified", t.certified}};
        if (t.certified) {
          sample["b_star"] = t.bstar;
          sample["b0"] = t.b0;
          sample["maximal"] = t.maximal;
          if (cfg.n == 2) sample["max_nest_depth"] = t.max_nest_depth;
        }
        record.samples.push_back(sample);
      }
    }
    record.rows.push_back(event_row(d, "maximal", std::nullopt, total, certified, maximal));
    std::vector<std::pair<double, long long>> by_threshold;
    for (double a : cfg.thresholds) {
      const double bar = a * std::pow(static_cast<double>(d), cfg.n);
      long long count = 0;
      for (const Topo& t : out) count += t.certified && t.bstar >= bar;
      record.rows.push_back(event_row(d, "betti_at_least", a, total, certified, count));
      by_threshold.emplace_back(a, count);
    }
    std::ranges::sort(by_threshold);
    for (std::size_t i = 1; i < by_threshold.size(); ++i) {
      nesting_ok = nesting_ok && by_threshold[i].second <= by_threshold[i - 1].second;
    }
    record.rows.push_back(observable_row(d, "b_star", bstar, total));
  }
  add_fit(record, "maximal", std::nullopt);
  for (double a : cfg.thresholds) add_fit(record, "betti_at_least", a);
  record.assertions.push_back({"threshold nesting", nesting_ok, "event counts non-increasing in a"});
  check_curve_invariants(record, certified_all);
  return record;
}

ExperimentRecord run_tube_volume(const ExperimentConfig& cfg) {
  ExperimentRecord record = start_record(cfg, ExperimentKind::TubeVolume);
  struct Outcome {
    bool certified = false;
    double relative = 0.0;
  };
  const auto outcomes = sample_all<Outcome>(cfg, [&](const HomogeneousPolynomial& s, int, std::size_t) {
    Outcome o;
    try {
      const DistanceResult dist = distance_to_discriminant(s, cfg.grid_density);
      o.certified = true;
      o.relative = relative(dist.exact, s);
    } catch (const GramDegeneracyError&) {
    }
    return o;
  });
  std::vector<double> radii = cfg.radii;
  std::ranges::sort(radii);
  bool monotone = true;
  for (std::size_t k = 0; k < cfg.degrees.size(); ++k) {
    const int d = cfg.degrees[k];
    const auto& out = outcomes[k];
    const long long total = static_cast<long long>(out.size());
    std::vector<double> rel;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].certified) rel.push_back(out[i].relative);
      if (cfg.keep_samples) {
        Json sample{{"degree", d}, {"index", i}, {"certified", out[i].certified}};
        if (out[i].certified) sample["relative_distance"] = out[i].relative;
        record.samples.push_back(sample);
      }
    }
    long long previous = -1;
    for (double r : radii) {
      long long count = 0;
      for (double v : rel) count += v <= r;
      ExperimentRow row = event_row(d, "tube", r, total, static_cast<long long>(rel.size()), count);
      if (row.frequency && r > 0.0) row.ratio = *row.frequency / r;
      record.rows.push_back(row);
      monotone = monotone && count >= previous;
      previous = count;
    }
    record.rows.push_back(observable_row(d, "relative_distance", rel, total));
  }
  record.assertions.push_back({"tube frequency monotone in r", monotone, "nested events"});
  return record;
}

ExperimentRecord run_c1_decay(const ExperimentConfig& cfg) {
  ExperimentRecord record = start_record(cfg, ExperimentKind::C1Decay);
  const auto sigma = build_sigma(cfg.n);
  const auto outcomes = sample_all<double>(cfg, [&](const HomogeneousPolynomial& s, int, std::size_t) {
    return relative(split(s, sigma, cfg.ell, cfg.grid_density).c1_perp, s);
  });
  std::vector<std::pair<int, double>> medians;
  bool control_ok = true;
  for (std::size_t k = 0; k < cfg.degrees.size(); ++k) {
    const int d = cfg.degrees[k];
    const auto& out = outcomes[k];
    const long long total = static_cast<long long>(out.size());
    ExperimentRow row = observable_row(d, "c1_perp_relative", out, total);
    medians.emplace_back(d, row.quartiles->median);
    record.rows.push_back(row);

    // Control: a section divisible by sigma^ell has no orthogonal component.
    HomogeneousPolynomial power = sigma.poly;
    for (int i = 1; i < cfg.ell; ++i) power = multiply(power, sigma.poly);
    const auto q = sample_gaussian(make_basis(cfg.n, d - 2 * cfg.ell),
                                   RngStream{cfg.master_seed, kControlStream}.child(static_cast<std::uint64_t>(d)));
    const auto control = cfg.ell == 0 ? q : multiply(power, q);
    const double control_value = relative(split(control, sigma, cfg.ell, cfg.grid_density).c1_perp, control);
    control_ok = control_ok && control_value <= 1e-9;
    record.rows.push_back(observable_row(d, "control_c1_perp_relative", {control_value}, 1));

    if (cfg.keep_samples) {
      for (std::size_t i = 0; i < out.size(); ++i) {
        record.samples.push_back(Json{{"degree", d}, {"index", i}, {"c1_perp_relative", out[i]}});
      }
    }
  }
  record.fits.push_back({"c1_perp_relative median", std::nullopt, fit_decay(medians, "log-median vs d linear")});
  if (cfg.ell > 0) {
    record.assertions.push_back({"divisible control vanishes", control_ok, "control c1_perp / |coeffs| <= 1e-9"});
  }
  return record;
}

ExperimentRecord run_approximation(const ExperimentConfig& cfg) {
  ExperimentRecord record = start_record(cfg, ExperimentKind::Approximation);
  const auto sigma = build_sigma(cfg.n);
  struct Outcome {
    bool distance_ok = false;
    bool holds = false;
    double margin = 0.0;
    bool certified = false;
    bool match = false;
    Topo original, approx;
  };
  const auto outcomes = sample_all<Outcome>(cfg, [&](const HomogeneousPolynomial& s, int, std::size_t) {
    Outcome o;
    try {
      const DistanceResult dist = distance_to_discriminant(s, cfg.grid_density);
      const ApproximationResult ap = approx_pipeline(split(s, sigma, cfg.ell, cfg.grid_density), dist);
      o.distance_ok = true;
      o.holds = ap.criterion_holds;
      o.margin = relative(ap.margin, s);
      if (o.holds) {
        o.original = topology_of(s, cfg.resolution);
        o.approx = topology_of(ap.s_prime, cfg.resolution);
        o.certified = o.original.certified && o.approx.certified;
        o.match = o.certified && o.original.shape == o.approx.shape;
      }
    } catch (const GramDegeneracyError&) {
    }
    return o;
  });
  long long mismatches = 0;
  for (std::size_t k = 0; k < cfg.degrees.size(); ++k) {
    const int d = cfg.degrees[k];
    const auto& out = outcomes[k];
    const long long total = static_cast<long long>(out.size());
    long long evaluated = 0, holds = 0, certified = 0, match = 0;
    std::vector<double> margins;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Outcome& o = out[i];
      evaluated += o.distance_ok;
      holds += o.holds;
      certified += o.certified;
      match += o.match;
      if (o.distance_ok) margins.push_back(o.margin);
      if (cfg.keep_samples) {
        Json sample{{"degree", d}, {"index", i}, {"criterion_holds", o.holds}};
        if (o.distance_ok) sample["margin_relative"] = o.margin;
        if (o.holds) {
          sample["certified"] = o.certified;
          sample["b_original"] = o.original.b0;
          sample["b_approx"] = o.approx.b0;
          sample["match"] = o.match;
        }
        record.samples.push_back(sample);
      }
    }
    mismatches += certified - match;
    record.rows.push_back(event_row(d, "criterion_holds", std::nullopt, total, evaluated, holds));
    record.rows.push_back(event_row(d, "topology_match", std::nullopt, holds, certified, match));
    record.rows.push_back(observable_row(d, "margin_relative", margins, total));
  }
  record.assertions.push_back({"isotopy: topology match among criterion-holding certified samples", mismatches == 0,
                               std::to_string(mismatches) + " mismatches"});
  return record;
}

ExperimentRecord run_distance_stats(const ExperimentConfig& cfg) {
  ExperimentRecord record = start_record(cfg, ExperimentKind::DistanceStats);
  struct Outcome {
    bool ok = false;
    double relative = 0.0, ratio = 0.0, condition = 0.0;
  };
  const auto outcomes = sample_all<Outcome>(cfg, [&](const HomogeneousPolynomial& s, int, std::size_t) {
    Outcome o;
    try {
      const DistanceResult dist = distance_to_discriminant(s, cfg.grid_density);
      o.ok = true;
      o.relative = relative(dist.exact, s);
      o.ratio = dist.asymptotic > 0.0 ? dist.exact / dist.asymptotic : 0.0;
      o.condition = dist.gram_condition;
    } catch (const GramDegeneracyError&) {
    }
    return o;
  });
  for (std::size_t k = 0; k < cfg.degrees.size(); ++k) {
    const int d = cfg.degrees[k];
    const auto& out = outcomes[k];
    const long long total = static_cast<long long>(out.size());
    std::vector<double> rel, ratio, cond;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Outcome& o = out[i];
      if (o.ok) {
        rel.push_back(o.relative);
        ratio.push_back(o.ratio);
        cond.push_back(o.condition);
      }
      if (cfg.keep_samples) {
        Json sample{{"degree", d}, {"index", i}, {"ok", o.ok}};
        if (o.ok) {
          sample["relative_distance"] = o.relative;
          sample["ratio_exact_asymptotic"] = o.ratio;
          sample["gram_condition"] = o.condition;
        }
        record.samples.push_back(sample);
      }
    }
    record.rows.push_back(observable_row(d, "relative_distance", rel, total));
    record.rows.push_back(observable_row(d, "ratio_exact_asymptotic", ratio, total));
    record.rows.push_back(observable_row(d, "gram_condition", cond, total));
  }
  return record;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::Rarefaction:
      return run_rarefaction(cfg);
    case ExperimentKind::TubeVolume:
      return run_tube_volume(cfg);
    case ExperimentKind::C1Decay:
      return run_c1_decay(cfg);
    case ExperimentKind::Approximation:
      return run_approximation(cfg);
    case ExperimentKind::DistanceStats:
      return run_distance_stats(cfg);
  }
  throw InvalidArgument("unknown experiment kind");
}

Json record_to_json(const ExperimentRecord& record) {
  Json j;
  j["kind"] = to_string(record.config.kind);
  j["config"] = config_to_json(record.config);
  j["config_hash"] = record.config_hash;
  Json rows = Json::array();
  for (const auto& row : record.rows) {
    Json r{{"degree", row.degree}};
    if (row.observable.empty()) {
      r["event"] = row.event;
      r["threshold"] = optional_json(row.threshold);
      r["n_samples"] = row.n_samples;
      r["n_certified"] = row.n_certified;
      r["event_count"] = row.event_count;
      r["frequency"] = optional_json(row.frequency);
      r["frequency_worst_case"] = row.frequency_worst_case;
      r["wilson_95_interval"] = row.wilson ? to_json(*row.wilson) : Json(nullptr);
      if (row.ratio) r["ratio"] = *row.ratio;
    } else {
      r["observable"] = row.observable;
      r["n_samples"] = row.n_samples;
      r["n_values"] = row.n_certified;
      r["quartiles"] = row.quartiles ? to_json(*row.quartiles) : Json(nullptr);
    }
    rows.push_back(r);
  }
  j["rows"] = rows;
  Json fits = Json::array();
  for (const auto& f : record.fits) {
    Json fj = to_json(f.fit);
    fj["series"] = f.series;
    fj["threshold"] = optional_json(f.threshold);
    fits.push_back(fj);
  }
  j["fits"] = fits;
  Json assertions = Json::array();
  for (const auto& a : record.assertions) {
    assertions.push_back(Json{{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  }
  j["assertions"] = assertions;
  if (record.config.keep_samples) j["samples"] = record.samples;
  return j;
}

ExperimentRecord record_from_json(const Json& j) {
  try {
    ExperimentRecord record;
    record.config = config_from_json(j.at("config"));
    record.config_hash = j.at("config_hash").get<std::string>();
    auto opt = [](const Json& v) -> std::optional<double> {
      if (v.is_null()) return std::nullopt;
      return v.get<double>();
    };
    for (const auto& r : j.at("rows")) {
      ExperimentRow row;
      row.degree = r.at("degree").get<int>();
      row.n_samples = r.at("n_samples").get<long long>();
      if (r.contains("observable")) {
        row.observable = r.at("observable").get<std::string>();
        row.n_certified = r.at("n_values").get<long long>();
        if (!r.at("quartiles").is_null()) {
          const auto& q = r.at("quartiles");
          row.quartiles = Quartiles{q.at("q1").get<double>(), q.at("median").get<double>(), q.at("q3").get<double>()};
        }
      } else {
        row.event = r.at("event").get<std::string>();
        row.threshold = opt(r.at("threshold"));
        row.n_certified = r.at("n_certified").get<long long>();
        row.event_count = r.at("event_count").get<long long>();
        row.frequency = opt(r.at("frequency"));
        row.frequency_worst_case = r.at("frequency_worst_case").get<double>();
        const auto& w = r.at("wilson_95_interval");
        if (!w.is_null()) row.wilson = Interval{w.at(0).get<double>(), w.at(1).get<double>()};
        if (r.contains("ratio")) row.ratio = r.at("ratio").get<double>();
      }
      record.rows.push_back(row);
    }
    for (const auto& f : j.at("fits")) {
      NamedFit nf;
      nf.series = f.at("series").get<std::string>();
      nf.threshold = opt(f.at("threshold"));
      nf.fit.model = f.at("model").get<std::string>();
      nf.fit.points = f.at("points").get<int>();
      if (f.at("slope").is_null()) {
        nf.fit.reason = f.value("reason", "");
      } else {
        nf.fit.fit = LinearFit{f.at("slope").get<double>(), f.at("intercept").get<double>(),
                               f.at("r_squared").get<double>()};
      }
      record.fits.push_back(nf);
    }
    for (const auto& a : j.at("assertions")) {
      record.assertions.push_back(
          {a.at("name").get<std::string>(), a.at("passed").get<bool>(), a.at("detail").get<std::string>()});
    }
    if (j.contains("samples")) record.samples = j.at("samples");
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment record: ") + e.what());
  }
}

std::string record_to_csv(const ExperimentRecord& record) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& row : record.rows) {
    out << row.degree << ',' << row.event << ',' << opt(row.threshold) << ',' << row.n_samples << ','
        << row.n_certified << ',';
    if (row.observable.empty()) {
      out << row.event_count << ',' << opt(row.frequency) << ',' << format_double(row.frequency_worst_case) << ','
          << (row.wilson ? format_double(row.wilson->low) : "") << ','
          << (row.wilson ? format_double(row.wilson->high) : "") << ',' << opt(row.ratio) << ",,,,\n";
    } else {
      out << ",,,,,," << row.observable << ',';
      if (row.quartiles) {
        out << format_double(row.quartiles->q1) << ',' << format_double(row.quartiles->median) << ','
            << format_double(row.quartiles->q3);
      } else {
        out << ",,";
      }
      out << '\n';
    }
  }
  return out.str();
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int default_thread_count() {
  if (const char* env = std::getenv("RAREFACTION_LAB_THREADS")) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), value);
    if (ec == std::errc() && *ptr == '\0' && value >= 0) return value;
  }
  return 1;
}

}  // namespace rlab

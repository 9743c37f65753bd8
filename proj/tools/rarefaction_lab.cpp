// rarefaction-lab: command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error, 3 a hard assertion
// of an experiment failed.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlab/cli_io.hpp"
#include "rlab/discriminant.hpp"
#include "rlab/errors.hpp"
#include "rlab/experiments.hpp"
#include "rlab/projection.hpp"
#include "rlab/serialize.hpp"
#include "rlab/topology.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitAssert = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int n = 1;
  std::vector<int> degrees;
  int samples = 100;
  std::uint64_t seed = 0;
  int ell = 1;
  std::vector<double> thresholds;
  std::vector<double> radii;
  int resolution = rlab::kDefaultResolution;
  int grid_density = 0;
  std::string out;
  std::string format = "both";
  std::string config;
  int threads = 1;
  bool keep_samples = false;
  std::string input;
  std::string kind;
  std::string record;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rlab::Error("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

rlab::Json parse_json_file(const std::string& path) {
  try {
    return rlab::Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Flat JSON config: keys are flag names without dashes; explicit flags win.
void apply_config(CLI::App& app, Options& o) {
  if (o.config.empty()) return;
  const rlab::Json cfg = parse_json_file(o.config);
  if (!cfg.is_object()) throw UsageError("config file must hold a flat JSON object");
  auto unset = [&](const std::string& flag) { return app.get_option("--" + flag)->count() == 0; };
  auto int_list = [](const rlab::Json& v) {
    return v.is_array() ? v.get<std::vector<int>>() : std::vector<int>{v.get<int>()};
  };
  auto double_list = [](const rlab::Json& v) {
    return v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
  };
  try {
    for (const auto& [key, value] : cfg.items()) {
      if (key == "n") {
        if (unset(key)) o.n = value.get<int>();
      } else if (key == "degree") {
        if (unset(key)) o.degrees = int_list(value);
      } else if (key == "samples") {
        if (unset(key)) o.samples = value.get<int>();
      } else if (key == "seed") {
        if (unset(key)) o.seed = value.get<std::uint64_t>();
      } else if (key == "ell") {
        if (unset(key)) o.ell = value.get<int>();
      } else if (key == "threshold") {
        if (unset(key)) o.thresholds = double_list(value);
      } else if (key == "radii") {
        if (unset(key)) o.radii = double_list(value);
      } else if (key == "resolution") {
        if (unset(key)) o.resolution = value.get<int>();
      } else if (key == "grid-density") {
        if (unset(key)) o.grid_density = value.get<int>();
      } else if (key == "out") {
        if (unset(key)) o.out = value.get<std::string>();
      } else if (key == "format") {
        if (unset(key)) o.format = value.get<std::string>();
      } else if (key == "threads") {
        if (unset(key)) o.threads = value.get<int>();
      } else if (key == "keep-samples") {
        if (unset(key)) o.keep_samples = value.get<bool>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::type_error& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  if (o.format != "csv" && o.format != "json" && o.format != "both") {
    throw UsageError("format must be csv, json or both");
  }
}

int single_degree(const Options& o) {
  if (o.degrees.size() != 1) throw UsageError("exactly one --degree is required");
  return o.degrees.front();
}

rlab::HomogeneousPolynomial input_polynomial(const Options& o) {
  if (!o.input.empty()) return rlab::polynomial_from_json(parse_json_file(o.input));
  const int d = single_degree(o);
  try {
    return rlab::sample_gaussian(rlab::make_basis(o.n, d), rlab::sample_stream(o.seed, d, 0));
  } catch (const rlab::InvalidArgument& e) {
    throw UsageError(e.what());
  } catch (const rlab::DimensionError& e) {
    throw UsageError(e.what());
  }
}

std::vector<int> default_degrees(rlab::ExperimentKind kind, int n) {
  using K = rlab::ExperimentKind;
  switch (kind) {
    case K::Rarefaction:
      return n == 1 ? std::vector<int>{3, 5, 7} : std::vector<int>{2, 3, 4, 5, 6};
    case K::TubeVolume:
      return {6};
    case K::C1Decay:
      return {8, 12, 16, 20};
    case K::Approximation:
      return n == 1 ? std::vector<int>{8, 12, 16, 20} : std::vector<int>{8};
    case K::DistanceStats:
      return n == 1 ? std::vector<int>{10, 20, 40} : std::vector<int>{4, 6, 8};
  }
  return {};
}

class Output {
 public:
  Output(const Options& o, std::string command) : dir_(o.out) {
    manifest_.command = std::move(command);
    manifest_.started_at = rlab::utc_timestamp();
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }
  rlab::RunManifest& manifest() { return manifest_; }

  void emit(const std::string& name, const std::string& content) {
    if (dir_.empty()) {
      std::cout << content;
    } else {
      rlab::write_output(dir_, name, content, manifest_);
    }
  }
  void finish() {
    if (!dir_.empty()) rlab::write_manifest(dir_, manifest_);
  }

 private:
  std::filesystem::path dir_;
  rlab::RunManifest manifest_;
};

int run_sample(const Options& o) {
  const int d = single_degree(o);
  rlab::Json out = rlab::Json::array();
  const auto basis = rlab::make_basis(o.n, d);
  for (int i = 0; i < o.samples; ++i) {
    out.push_back(rlab::to_json(rlab::sample_gaussian(basis, rlab::sample_stream(o.seed, d, static_cast<std::uint64_t>(i)))));
  }
  Output sink(o, "sample");
  sink.emit("samples.json", (o.samples == 1 ? out.front() : out).dump(2) + "\n");
  sink.finish();
  return kExitOk;
}

int run_topology(const Options& o) {
  const auto s = input_polynomial(o);
  Output sink(o, "topology");
  if (s.n() == 1) {
    sink.emit("topology.json", rlab::to_json(rlab::count_real_roots(s)).dump(2) + "\n");
  } else if (s.n() == 2) {
    rlab::TopologyOptions options;
    options.max_depth = o.resolution;
    options.keep_trace = !o.out.empty();
    const auto topology = rlab::curve_topology(s, options);
    sink.emit("topology.json", rlab::to_json(topology).dump(2) + "\n");
    if (!o.out.empty()) sink.emit("curve.svg", rlab::curve_svg(topology));
  } else {
    throw UsageError("topology supports n = 1 or n = 2");
  }
  sink.finish();
  return kExitOk;
}

int run_distance(const Options& o) {
  const auto s = input_polynomial(o);
  const auto dist = rlab::distance_to_discriminant(s, o.grid_density);
  Output sink(o, "distance");
  sink.emit("distance.json", rlab::to_json(dist).dump(2) + "\n");
  sink.finish();
  return kExitOk;
}

int run_project(const Options& o) {
  const auto s = input_polynomial(o);
  const auto sp = rlab::split(s, rlab::build_sigma(s.n()), o.ell, o.grid_density);
  const auto dist = rlab::distance_to_discriminant(s, o.grid_density);
  const auto ap = rlab::approx_pipeline(sp, dist);
  rlab::Json j{{"split", rlab::to_json(sp)}, {"distance", rlab::to_json(dist)}, {"approximation", rlab::to_json(ap)}};
  Output sink(o, "project");
  sink.emit("project.json", j.dump(2) + "\n");
  sink.finish();
  return kExitOk;
}

int run_experiment_cmd(const Options& o) {
  rlab::ExperimentConfig cfg;
  try {
    cfg.kind = rlab::parse_kind(o.kind);
    cfg.n = o.n;
    cfg.degrees = o.degrees.empty() ? default_degrees(cfg.kind, o.n) : o.degrees;
    cfg.samples_per_degree = o.samples;
    cfg.master_seed = o.seed;
    if (!o.thresholds.empty()) cfg.thresholds = o.thresholds;
    if (!o.radii.empty()) cfg.radii = o.radii;
    cfg.ell = o.ell;
    cfg.resolution = o.resolution;
    cfg.grid_density = o.grid_density;
    cfg.keep_samples = o.keep_samples;
    cfg.threads = o.threads;
    cfg.validate();
  } catch (const rlab::Error& e) {
    throw UsageError(e.what());
  }
  Output sink(o, "experiment " + o.kind);
  sink.manifest().config = rlab::config_to_json(cfg);
  sink.manifest().config_hash = rlab::config_hash(cfg);
  const auto record = rlab::run_experiment(cfg);
  const bool to_stdout = o.out.empty();
  if (o.format == "csv" || (o.format == "both" && !to_stdout)) sink.emit("record.csv", rlab::record_to_csv(record));
  if (o.format == "json" || o.format == "both") sink.emit("record.json", rlab::record_to_json(record).dump(2) + "\n");
  sink.finish();
  for (const auto& a : record.assertions) {
    if (!a.passed) std::cerr << "assertion failed: " << a.name << " (" << a.detail << ")\n";
  }
  return record.assertions_passed() ? kExitOk : kExitAssert;
}

int run_chart(const Options& o) {
  const auto record = rlab::record_from_json(parse_json_file(o.record));
  Output sink(o, "chart");
  sink.manifest().config = rlab::config_to_json(record.config);
  sink.manifest().config_hash = record.config_hash;
  sink.emit("chart.svg", rlab::chart_svg(record));
  sink.finish();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for random real algebraic geometry on RP^1 and RP^2", "rarefaction-lab"};
  app.require_subcommand(1);
  Options o;
  o.threads = rlab::default_thread_count();

  app.add_option("--n", o.n, "Projective dimension (1 or 2)")->check(CLI::Range(1, 2));
  app.add_option("--degree", o.degrees, "Degree, or comma-separated degrees for experiments")->delimiter(',');
  app.add_option("--samples", o.samples, "Samples (per degree for experiments)")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--ell", o.ell, "Power of sigma in the divisible subspace")->check(CLI::NonNegativeNumber);
  app.add_option("--threshold", o.thresholds, "Rarefaction thresholds a (event b_* >= a d^n)")->delimiter(',');
  app.add_option("--radii", o.radii, "Relative tube radii")->delimiter(',');
  app.add_option("--resolution", o.resolution, "Subdivision depth cap for curve topology")->check(CLI::Range(1, 30));
  app.add_option("--grid-density", o.grid_density, "Sphere grid density (0 = per-degree default)");
  app.add_option("--out", o.out, "Output directory (stdout when omitted)");
  app.add_option("--format", o.format, "Experiment output format")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--config", o.config, "Flat JSON config; explicit flags take precedence")->check(CLI::ExistingFile);
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores; default $RAREFACTION_LAB_THREADS or 1)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--keep-samples", o.keep_samples, "Embed per-sample observables in the JSON record");
  app.add_option("--input", o.input, "Polynomial JSON instead of a fresh sample")->check(CLI::ExistingFile);

  auto* sample = app.add_subcommand("sample", "Draw Kostlan samples");
  auto* topology = app.add_subcommand("topology", "Certified real root count or curve topology");
  auto* distance = app.add_subcommand("distance", "Distance to the real discriminant");
  auto* project = app.add_subcommand("project", "Split against the sigma^ell-divisible subspace");
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  experiment->add_option("kind", o.kind, "rarefaction | tube_volume | c1_decay | approximation | distance_stats")
      ->required()
      ->check(CLI::IsMember({"rarefaction", "tube_volume", "c1_decay", "approximation", "distance_stats"}));
  auto* chart = app.add_subcommand("chart", "SVG chart of an experiment record");
  chart->add_option("record", o.record, "record.json from an experiment run")->required()->check(CLI::ExistingFile);
  for (auto* sub : {sample, topology, distance, project, experiment, chart}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    apply_config(app, o);
    if (*sample) return run_sample(o);
    if (*topology) return run_topology(o);
    if (*distance) return run_distance(o);
    if (*project) return run_project(o);
    if (*experiment) return run_experiment_cmd(o);
    if (*chart) return run_chart(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

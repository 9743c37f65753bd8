#pragma once

// Seeded Monte Carlo campaigns over the Kostlan ensemble.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rlab/serialize.hpp"
#include "rlab/stats.hpp"

namespace rlab {

enum class ExperimentKind { Rarefaction, TubeVolume, C1Decay, Approximation, DistanceStats };

std::string to_string(ExperimentKind kind);
/// Accepts "rarefaction", "tube_volume", "c1_decay", "approximation", "distance_stats".
ExperimentKind parse_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Rarefaction;
  int n = 1;
  std::vector<int> degrees;
  int samples_per_degree = 100;
  std::uint64_t master_seed = 0;
  /// Rarefaction thresholds a for the event b_* >= a d^n.
  std::vector<double> thresholds = {1.0};
  /// Relative tube radii.
  std::vector<double> radii = {1e-4, 1e-3, 1e-2};
  int ell = 1;
  int resolution = 12;
  /// 0 selects the per-degree default.
  int grid_density = 0;
  bool keep_samples = false;
  /// Worker count (0 = hardware concurrency). Not part of the config identity.
  int threads = 1;

  /// Throws InvalidArgument when an invariant fails.
  void validate() const;
};

/// Canonical echo used for hashing (excludes `threads`).
Json config_to_json(const ExperimentConfig& cfg);
/// kind, n, degrees, samples_per_degree and master_seed are required; the rest default.
ExperimentConfig config_from_json(const Json& j);
/// SHA-256 (hex) of the canonical config echo.
std::string config_hash(const ExperimentConfig& cfg);

/// One row per (degree, event, threshold) or per (degree, observable).
struct ExperimentRow {
  int degree = 0;
  std::string event;       ///< empty for observable rows
  std::optional<double> threshold;
  long long n_samples = 0;
  long long n_certified = 0;
  long long event_count = 0;
  /// event_count / n_certified; empty when nothing was certified.
  std::optional<double> frequency;
  /// (event_count + uncertified) / n_samples
  double frequency_worst_case = 0.0;
  std::optional<Interval> wilson;
  /// frequency / threshold (tube rows).
  std::optional<double> ratio;
  std::string observable;  ///< empty for event rows
  std::optional<Quartiles> quartiles;

  bool is_null() const { return !frequency && !quartiles; }
};

struct NamedFit {
  std::string series;
  std::optional<double> threshold;
  DecayFit fit;
};

struct Assertion {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<ExperimentRow> rows;
  std::vector<NamedFit> fits;
  std::vector<Assertion> assertions;
  /// Per-sample observables, filled when config.keep_samples is set.
  Json samples = Json::array();

  bool assertions_passed() const;
  /// Rows for one event (and threshold when given), in degree order.
  std::vector<const ExperimentRow*> series(const std::string& event,
                                           std::optional<double> threshold = {}) const;
  std::vector<const ExperimentRow*> observable(const std::string& name) const;
};

ExperimentRecord run_rarefaction(const ExperimentConfig& cfg);
ExperimentRecord run_tube_volume(const ExperimentConfig& cfg);
ExperimentRecord run_c1_decay(const ExperimentConfig& cfg);
ExperimentRecord run_approximation(const ExperimentConfig& cfg);
ExperimentRecord run_distance_stats(const ExperimentConfig& cfg);
/// Dispatches on cfg.kind.
ExperimentRecord run_experiment(const ExperimentConfig& cfg);

Json record_to_json(const ExperimentRecord& record);
ExperimentRecord record_from_json(const Json& j);

inline constexpr const char* kCsvHeader =
    "degree,event,threshold,n_samples,n_certified,event_count,frequency,frequency_worst_case,"
    "wilson_low,wilson_high,ratio,observable,q1,median,q3";
std::string record_to_csv(const ExperimentRecord& record);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results must
/// be written by index; exceptions are rethrown for the lowest failing index.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Threads from RAREFACTION_LAB_THREADS, else 1.
int default_thread_count();

}  // namespace rlab

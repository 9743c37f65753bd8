#include <doctest.h>

#include <climits>
#include <cmath>

#include "rlab/digest.hpp"
#include "rlab/errors.hpp"
#include "rlab/experiments.hpp"

using namespace rlab;

namespace {

ExperimentConfig config(ExperimentKind kind, int n, std::vector<int> degrees, int samples, std::uint64_t seed = 1) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.n = n;
  cfg.degrees = std::move(degrees);
  cfg.samples_per_degree = samples;
  cfg.master_seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("wilson interval") {
  for (auto [k, n] : {std::pair{0LL, 10LL}, {3LL, 10LL}, {10LL, 10LL}, {1LL, 10000LL}}) {
    const auto w = wilson_interval(k, n);
    const double p = static_cast<double>(k) / static_cast<double>(n);
    CHECK(w.low <= p);
    CHECK(p <= w.high);
    CHECK(w.low >= 0.0);
    CHECK(w.high <= 1.0);
  }
  const auto half = wilson_interval(50, 100);
  CHECK(half.low == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(half.high == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK_THROWS_AS(wilson_interval(1, 0), InvalidArgument);
}

TEST_CASE("quartiles") {
  const std::vector<double> v = {5, 1, 4, 2, 3};
  const auto q = quartiles(v);
  CHECK(q.q1 == 2.0);
  CHECK(q.median == 3.0);
  CHECK(q.q3 == 4.0);
}

TEST_CASE("fit_decay") {
  std::vector<std::pair<int, double>> exp_rows, const_rows;
  for (int d : {3, 5, 7, 9}) {
    exp_rows.emplace_back(d, std::exp(-static_cast<double>(d)));
    const_rows.emplace_back(d, 0.25);
  }
  const auto e = fit_decay(exp_rows);
  REQUIRE(e.fit);
  CHECK(std::abs(e.fit->slope + 1.0) <= 1e-9);
  CHECK(e.fit->r_squared == doctest::Approx(1.0));
  const auto c = fit_decay(const_rows);
  REQUIRE(c.fit);
  CHECK(std::abs(c.fit->slope) <= 1e-9);

  const std::vector<std::pair<int, double>> sparse = {{3, 0.5}, {5, 0.0}, {7, 0.1}};
  const auto null_fit = fit_decay(sparse);
  CHECK_FALSE(null_fit.fit);
  CHECK_FALSE(null_fit.reason.empty());
}

TEST_CASE("config validation and hashing") {
  auto cfg = config(ExperimentKind::Rarefaction, 1, {3, 5, 7}, 10);
  CHECK_NOTHROW(cfg.validate());
  const auto echo = config_to_json(cfg);
  CHECK(config_hash(cfg) == sha256_hex(echo.dump()));
  CHECK(config_hash(config_from_json(echo)) == config_hash(cfg));
  auto threaded = cfg;
  threaded.threads = 4;
  CHECK(config_hash(threaded) == config_hash(cfg));
  auto reseeded = cfg;
  reseeded.master_seed = 2;
  CHECK(config_hash(reseeded) != config_hash(cfg));

  auto bad = cfg;
  bad.degrees = {5, 3};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.samples_per_degree = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = config(ExperimentKind::C1Decay, 1, {2, 8}, 10);
  CHECK_THROWS_AS(bad.validate(), DimensionError);
  CHECK_THROWS_AS(parse_kind("nonsense"), InvalidArgument);
}

TEST_CASE("records are independent of the worker count") {
  for (auto kind : {ExperimentKind::Rarefaction, ExperimentKind::TubeVolume, ExperimentKind::C1Decay,
                    ExperimentKind::Approximation, ExperimentKind::DistanceStats}) {
    auto cfg = config(kind, 1, {6, 8}, 40, 77);
    cfg.keep_samples = true;
    const auto one = record_to_json(run_experiment(cfg)).dump();
    cfg.threads = 3;
    const auto three = record_to_json(run_experiment(cfg)).dump();
    CHECK(one == three);
    CHECK(record_to_json(run_experiment(cfg)).dump() == one);
  }
  auto curves = config(ExperimentKind::Rarefaction, 2, {3, 4}, 20, 5);
  const auto a = record_to_csv(run_experiment(curves));
  curves.threads = 2;
  CHECK(record_to_csv(run_experiment(curves)) == a);
}

TEST_CASE("rarefaction rows") {
  auto cfg = config(ExperimentKind::Rarefaction, 1, {3, 5, 7}, 400, 9);
  cfg.thresholds = {0.2, 0.5, 1.0};
  const auto rec = run_rarefaction(cfg);
  CHECK(rec.assertions_passed());
  for (const auto& row : rec.rows) {
    CHECK(row.event_count <= row.n_certified);
    CHECK(row.n_certified <= row.n_samples);
    if (row.frequency && row.wilson) {
      CHECK(row.wilson->low <= *row.frequency);
      CHECK(*row.frequency <= row.wilson->high);
    }
  }
  for (int d : {3, 5, 7}) {
    long long previous = LLONG_MAX;
    for (double a : cfg.thresholds) {
      for (const auto* row : rec.series("betti_at_least", a)) {
        if (row->degree != d) continue;
        CHECK(row->event_count <= previous);
        previous = row->event_count;
      }
    }
  }
  const auto all_real = rec.series("betti_at_least", 1.0);
  REQUIRE(all_real.size() == 3);
  CHECK(*all_real[0]->frequency > *all_real[2]->frequency);
  CHECK(rec.fits.size() == 4);

  const auto conics = run_rarefaction(config(ExperimentKind::Rarefaction, 2, {2}, 200, 10));
  const auto maximal = conics.series("maximal");
  REQUIRE(maximal.size() == 1);
  CHECK(*maximal[0]->frequency > 0.0);
  CHECK(*maximal[0]->frequency < 1.0);
  CHECK(conics.assertions_passed());
  CHECK_FALSE(conics.fits.front().fit.fit.has_value());
}

TEST_CASE("tube volume rows") {
  auto cfg = config(ExperimentKind::TubeVolume, 1, {6}, 200, 11);
  cfg.radii = {1e-3, 1e-2, 10.0};
  const auto rec = run_tube_volume(cfg);
  const auto rows = rec.series("tube");
  REQUIRE(rows.size() == 3);
  CHECK(*rows[2]->frequency == 1.0);
  CHECK(rows[0]->event_count <= rows[1]->event_count);
  REQUIRE(rows[1]->ratio);
  CHECK(*rows[1]->ratio == doctest::Approx(*rows[1]->frequency / 1e-2));
  CHECK(rec.assertions_passed());
}

TEST_CASE("c1 decay control and fit") {
  auto cfg = config(ExperimentKind::C1Decay, 1, {8, 12, 16}, 30, 12);
  const auto rec = run_c1_decay(cfg);
  CHECK(rec.assertions_passed());
  for (const auto* row : rec.observable("control_c1_perp_relative")) CHECK(row->quartiles->median <= 1e-9);
  REQUIRE(rec.fits.size() == 1);
  REQUIRE(rec.fits[0].fit.fit);
  CHECK(rec.fits[0].fit.fit->slope < 0.0);
}

TEST_CASE("approximation with ell = 0 is the identity") {
  auto cfg = config(ExperimentKind::Approximation, 1, {6, 9}, 50, 13);
  cfg.ell = 0;
  const auto rec = run_approximation(cfg);
  for (const auto* row : rec.series("criterion_holds")) CHECK(row->event_count == row->n_samples);
  for (const auto* row : rec.series("topology_match")) CHECK(row->event_count == row->n_certified);
  for (const auto* row : rec.observable("margin_relative")) CHECK(row->quartiles->q1 > 0.0);
  CHECK(rec.assertions_passed());
}

TEST_CASE("record serialization round trip") {
  auto cfg = config(ExperimentKind::Rarefaction, 1, {3, 5}, 50, 14);
  cfg.keep_samples = true;
  const auto rec = run_experiment(cfg);
  const auto j = record_to_json(rec);
  CHECK(j["samples"].size() == 100);
  CHECK(record_to_json(record_from_json(j)).dump() == j.dump());
  const auto csv = record_to_csv(rec);
  CHECK(csv.starts_with(std::string(kCsvHeader) + "\n"));
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <unistd.h>

#include "rlab/cli_io.hpp"
#include "rlab/digest.hpp"
#include "rlab/errors.hpp"

using namespace rlab;

namespace {

// Every opened element is closed in order.
bool balanced_xml(const std::string& text) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([a-zA-Z]+)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[3].length() > 0) continue;
    if (m[1].length() == 0) {
      stack.push_back(m[2]);
    } else {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

ExperimentRecord synthetic() {
  ExperimentRecord rec;
  rec.config.kind = ExperimentKind::Rarefaction;
  rec.config.degrees = {3, 5};
  for (auto [d, k] : {std::pair{3, 40}, {5, 8}}) {
    ExperimentRow row;
    row.degree = d;
    row.event = "maximal";
    row.n_samples = row.n_certified = 100;
    row.event_count = k;
    row.frequency = k / 100.0;
    row.wilson = wilson_interval(k, 100);
    rec.rows.push_back(row);
  }
  return rec;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("rlab_test_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("chart of a synthetic record") {
  const auto svg = chart_svg(synthetic());
  CHECK(svg.starts_with("<?xml"));
  CHECK(balanced_xml(svg));
  CHECK(chart_svg(synthetic()) == svg);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("chart draws one line per threshold") {
  ExperimentConfig cfg;
  cfg.degrees = {3, 5, 7};
  cfg.samples_per_degree = 500;
  cfg.thresholds = {0.2, 0.6, 1.0};
  const auto rec = run_rarefaction(cfg);
  const auto svg = chart_svg(rec);
  std::size_t lines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++lines;
  CHECK(lines == cfg.thresholds.size());
  CHECK(balanced_xml(svg));
}

TEST_CASE("empty record cannot be charted") {
  ExperimentRecord rec;
  CHECK_THROWS_AS(chart_svg(rec), InvalidArgument);
}

TEST_CASE("outputs are write-once and digested") {
  TempDir tmp;
  RunManifest manifest;
  manifest.command = "test";
  write_output(tmp.path, "a.txt", "hello", manifest);
  REQUIRE(manifest.outputs.size() == 1);
  CHECK(manifest.outputs[0].sha256 == sha256_hex("hello"));
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(manifest.outputs[0].bytes == 5);
  CHECK_THROWS_AS(write_output(tmp.path, "a.txt", "again", manifest), Error);
  write_manifest(tmp.path, manifest);
  std::ifstream in(tmp.path / "manifest.json");
  const auto j = Json::parse(in);
  CHECK(j["outputs"][0]["path"] == "a.txt");
  CHECK_FALSE(j["finished_at"].get<std::string>().empty());
  write_chart(synthetic(), tmp.path / "chart.svg");
  CHECK(std::filesystem::exists(tmp.path / "chart.svg"));
}

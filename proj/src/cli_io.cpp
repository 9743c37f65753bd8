#include "rlab/cli_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "rlab/digest.hpp"
#include "rlab/errors.hpp"

namespace rlab {

namespace {

void write_new_file(const std::filesystem::path& path, const std::string& content) {
  if (std::filesystem::exists(path)) throw Error("refusing to overwrite " + path.string());
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw Error("failed to write " + path.string());
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

}  // namespace

Json RunManifest::to_json() const {
  Json files = Json::array();
  for (const auto& e : outputs) files.push_back(Json{{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  return Json{{"tool_version", tool_version}, {"command", command},     {"config", config},
              {"config_hash", config_hash},   {"started_at", started_at}, {"finished_at", finished_at},
              {"outputs", files}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_output(const std::filesystem::path& dir, const std::string& name, const std::string& content,
                  RunManifest& manifest) {
  const auto path = dir / name;
  write_new_file(path, content);
  manifest.outputs.push_back({name, sha256_file(path), std::filesystem::file_size(path)});
}

void write_manifest(const std::filesystem::path& dir, RunManifest& manifest) {
  if (manifest.finished_at.empty()) manifest.finished_at = utc_timestamp();
  write_new_file(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
}

std::string chart_svg(const ExperimentRecord& record) {
  struct Point {
    int degree;
    double freq, low, high;
  };
  std::map<std::string, std::vector<Point>> series;
  // When events carry thresholds, each threshold gets its own line and the
  // unthresholded summaries are left out.
  const bool thresholded =
      std::ranges::any_of(record.rows, [](const ExperimentRow& r) { return !r.event.empty() && r.threshold; });
  for (const auto& row : record.rows) {
    if (row.event.empty() || !row.frequency || *row.frequency <= 0.0) continue;
    if (thresholded && !row.threshold) continue;
    std::string label = row.event;
    if (row.threshold) {
      std::ostringstream s;
      s << row.event << " @ " << *row.threshold;
      label = s.str();
    }
    series[label].push_back({row.degree, *row.frequency, row.wilson ? row.wilson->low : *row.frequency,
                             row.wilson ? row.wilson->high : *row.frequency});
  }
  // Records without events (c1_decay, distance_stats) chart observable medians with IQR whiskers.
  const bool medians = series.empty();
  if (medians) {
    for (const auto& row : record.rows) {
      if (row.observable.empty() || !row.quartiles || row.quartiles->median <= 0.0) continue;
      const auto& q = *row.quartiles;
      series["median " + row.observable].push_back({row.degree, q.median, std::max(q.q1, 0.0), q.q3});
    }
  }
  if (series.empty()) throw InvalidArgument("record has no non-null row to chart");

  int dmin = series.begin()->second.front().degree, dmax = dmin;
  double ymin = 0.0, ymax = -1e300;
  bool first = true;
  for (const auto& [label, pts] : series) {
    for (const auto& p : pts) {
      dmin = std::min(dmin, p.degree);
      dmax = std::max(dmax, p.degree);
      const double lo = std::log10(std::max(p.low, p.freq * 1e-3));
      const double hi = std::log10(p.high);
      ymin = first ? lo : std::min(ymin, lo);
      ymax = first ? hi : std::max(ymax, hi);
      first = false;
    }
  }
  ymin = std::floor(ymin);
  ymax = std::max(std::ceil(ymax), ymin + 1.0);
  if (dmax == dmin) {
    --dmin;
    ++dmax;
  }

  constexpr double W = 640, H = 400, L = 70, R = 200, T = 30, B = 50;
  auto px = [&](double d) { return L + (d - dmin) / (dmax - dmin) * (W - L - R); };
  auto py = [&](double y) { return T + (ymax - y) / (ymax - ymin) * (H - T - B); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
      << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << L << "\" y=\"18\" font-size=\"13\">" << to_string(record.config.kind) << " (n = "
      << record.config.n << ")</text>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  for (double y = ymin; y <= ymax + 1e-9; y += 1.0) {
    svg << "<line x1=\"" << L - 4 << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << W - R << "\" y2=\"" << fmt(py(y))
        << "\" stroke=\"#ddd\"/>\n<text x=\"" << L - 8 << "\" y=\"" << fmt(py(y) + 4)
        << "\" text-anchor=\"end\">1e" << static_cast<int>(y) << "</text>\n";
  }
  std::vector<int> degrees;
  for (const auto& [label, pts] : series)
    for (const auto& p : pts) degrees.push_back(p.degree);
  std::ranges::sort(degrees);
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  for (int d : degrees) {
    svg << "<text x=\"" << fmt(px(d)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << d
        << "</text>\n";
  }
  svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">degree d</text>\n"
      << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
      << ")\" text-anchor=\"middle\">" << (medians ? "median" : "frequency") << "</text>\n";

  std::size_t index = 0;
  for (const auto& [label, pts] : series) {
    const char* colour = kPalette[index % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      svg << (i ? " " : "") << fmt(px(pts[i].degree)) << ',' << fmt(py(std::log10(pts[i].freq)));
    }
    svg << "\"/>\n";
    for (const auto& p : pts) {
      const double x = px(p.degree);
      const double y0 = py(std::log10(std::max(p.low, p.freq * 1e-3))), y1 = py(std::log10(p.high));
      svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(y1)
          << "\" stroke=\"" << colour << "\"/>\n"
          << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(py(std::log10(p.freq))) << "\" r=\"2.5\" fill=\""
          << colour << "\"/>\n";
    }
    const double ly = T + 14.0 * static_cast<double>(index);
    svg << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4
        << "\">" << label << "</text>\n";
    ++index;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_chart(const ExperimentRecord& record, const std::filesystem::path& path) {
  write_new_file(path, chart_svg(record));
}

}  // namespace rlab

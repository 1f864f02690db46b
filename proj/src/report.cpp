// Copyright 2026 The qrelx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrelx/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "qrelx/csv.hpp"
#include "qrelx/errors.hpp"

namespace qrelx {

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "seed,fraction,K,tau_baseline,tau_expanded,n_pseudo,n_zero_queries\n";
  for (const auto& r : result.rows) {
    out << csv::row({std::to_string(r.seed), csv::real(r.fraction), csv::real(r.k), csv::real(r.tau_baseline),
                     csv::real(r.tau_expanded), std::to_string(r.n_pseudo), std::to_string(r.n_zero_queries)});
  }
}

void write_sweep_deciles_csv(std::ostream& out, const SweepResult& result) {
  out << "seed,fraction,decile,count,positive_fraction\n";
  for (const auto& d : result.deciles) {
    for (const auto& row : d.report) {
      out << csv::row({std::to_string(d.seed), csv::real(d.fraction), std::to_string(row.decile),
                       std::to_string(row.pair_count), csv::real(row.positive_fraction)});
    }
  }
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_tau_svg(std::span<const SweepRow> rows, double fraction) {
  // Seed averages per K.
  std::map<double, std::pair<double, int>> expanded;
  double baseline_sum = 0.0;
  int baseline_n = 0;
  std::set<std::uint64_t> baseline_seeds;
  for (const auto& r : rows) {
    if (r.fraction != fraction) continue;
    auto& e = expanded[r.k];
    e.first += r.tau_expanded;
    ++e.second;
    if (baseline_seeds.insert(r.seed).second) {
      baseline_sum += r.tau_baseline;
      ++baseline_n;
    }
  }

  constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kRight = 30, kTop = 50, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;

  std::vector<std::pair<double, double>> points;
  for (const auto& [k, acc] : expanded) points.emplace_back(k, acc.first / acc.second);
  const double baseline = baseline_n ? baseline_sum / baseline_n : 0.0;

  double y_min = baseline;
  for (const auto& p : points) y_min = std::min(y_min, p.second);
  y_min = std::min(0.0, std::floor(y_min * 10.0) / 10.0);
  const double y_max = 1.0;
  const double x_min = points.empty() ? 0.0 : points.front().first;
  const double x_max = points.empty() ? 1.0 : points.back().first;

  auto sx = [&](double k) {
    if (x_max == x_min) return kLeft + plot_w / 2.0;
    return kLeft + (k - x_min) / (x_max - x_min) * plot_w;
  };
  auto sy = [&](double tau) { return kTop + (y_max - tau) / (y_max - y_min) * plot_h; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
       xml_escape("Kendall's tau of system orderings, qrel fraction " + fmt("%g", fraction)) + "</text>\n";

  // Axes.
  s += "<line x1=\"" + fmt("%.3f", kLeft) + "\" y1=\"" + fmt("%.3f", kTop) + "\" x2=\"" + fmt("%.3f", kLeft) +
       "\" y2=\"" + fmt("%.3f", kTop + plot_h) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt("%.3f", kLeft) + "\" y1=\"" + fmt("%.3f", kTop + plot_h) + "\" x2=\"" +
       fmt("%.3f", kLeft + plot_w) + "\" y2=\"" + fmt("%.3f", kTop + plot_h) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double tau = y_min + (y_max - y_min) * i / 5.0;
    s += "<text x=\"" + fmt("%.3f", kLeft - 8) + "\" y=\"" + fmt("%.3f", sy(tau) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt("%.2f", tau) + "</text>\n";
  }
  for (const auto& p : points) {
    s += "<text x=\"" + fmt("%.3f", sx(p.first)) + "\" y=\"" + fmt("%.3f", kTop + plot_h + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fmt("%g", p.first) + "</text>\n";
  }
  s += "<text x=\"" + fmt("%.3f", kLeft + plot_w / 2) + "\" y=\"" + fmt("%.3f", kHeight - 15) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">K (% of candidates added)</text>\n";
  s += "<text x=\"18\" y=\"" + fmt("%.3f", kTop + plot_h / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 " +
       fmt("%.3f", kTop + plot_h / 2) + ")\">Kendall's tau</text>\n";

  // Series.
  std::string baseline_pts = fmt("%.3f", kLeft) + "," + fmt("%.3f", sy(baseline)) + " " +
                             fmt("%.3f", kLeft + plot_w) + "," + fmt("%.3f", sy(baseline));
  s += "<polyline class=\"baseline\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"6,4\" points=\"" +
       baseline_pts + "\"/>\n";
  std::string expanded_pts;
  for (const auto& p : points) {
    if (!expanded_pts.empty()) expanded_pts += ' ';
    expanded_pts += fmt("%.3f", sx(p.first)) + "," + fmt("%.3f", sy(p.second));
  }
  s += "<polyline class=\"expanded\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"" + expanded_pts +
       "\"/>\n";
  for (const auto& p : points) {
    s += "<circle cx=\"" + fmt("%.3f", sx(p.first)) + "\" cy=\"" + fmt("%.3f", sy(p.second)) +
         "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }

  // Legend.
  s += "<text x=\"" + fmt("%.3f", kLeft + plot_w - 10) + "\" y=\"" + fmt("%.3f", kTop + 16) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#1f77b4\">with pseudo-qrels</text>\n";
  s += "<text x=\"" + fmt("%.3f", kLeft + plot_w - 10) + "\" y=\"" + fmt("%.3f", kTop + 32) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#888888\">baseline</text>\n";
  s += "</svg>\n";
  return s;
}

std::vector<std::filesystem::path> emit_report(const SweepResult& result, const std::filesystem::path& out_dir) {
  if (result.rows.empty()) throw DataError("nothing to report: the sweep produced no rows");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& p, auto&& fill) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + p.string());
    fill(out);
    if (!out) throw DataError("error writing " + p.string());
    written.push_back(p);
  };

  write(out_dir / "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, result); });
  if (!result.deciles.empty()) {
    write(out_dir / "deciles.csv", [&](std::ostream& o) { write_sweep_deciles_csv(o, result); });
  }
  std::set<double> fractions;
  for (const auto& r : result.rows) fractions.insert(r.fraction);
  for (double f : fractions) {
    write(out_dir / ("tau_fraction_" + fmt("%g", f) + ".svg"),
          [&](std::ostream& o) { o << render_tau_svg(result.rows, f); });
  }
  return written;
}

}  // namespace qrelx

// Copyright 2026 The tc3d Authors
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

#include "tc3d/cli/commands.hpp"

#include "tc3d/errors.hpp"
#include "tc3d/simulation/scenario_simulator.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace tc3d
{
namespace
{

// Fixed notation keeps CSV output byte-stable across platforms.
std::string fixed(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

void write_text(const std::filesystem::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::filesystem::path prepare_directory(const std::string & directory)
{
  std::filesystem::path dir(directory.empty() ? "." : directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir.string() + "': " + ec.message());
  return dir;
}

}  // namespace

FrameLog cmd_simulate(const RunConfig & config, int jobs)
{
  const int scenes = config.simulation.scenes;
  std::vector<FrameLog> parts(static_cast<std::size_t>(scenes));
  const int width = std::max(1, jobs);
  for (int start = 0; start < scenes; start += width) {
    std::vector<std::future<FrameLog>> batch;
    for (int i = start; i < std::min(scenes, start + width); ++i) {
      batch.push_back(std::async(
        width > 1 ? std::launch::async : std::launch::deferred,
        [&config, i] { return generate_scene(config.scene_config(i)); }));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) parts[start + k] = batch[k].get();
  }
  FrameLog log;
  for (auto & part : parts) {
    for (auto & f : part.frames) log.frames.push_back(std::move(f));
  }
  return log;
}

FrameLog cmd_attack(const RunConfig & config, const FrameLog & log)
{
  return inject_attack(log, config.attack, config.attack_seed);
}

std::vector<FrameVerdicts> cmd_check(const RunConfig & config, const FrameLog & log, int jobs)
{
  validate_frame_log(log);
  return check_log(log, config.pipeline, jobs);
}

EvalReports cmd_eval(const std::vector<FrameVerdicts> & verdicts, const FrameLog & log)
{
  return {match_ratio_from_verdicts(verdicts), attack_eval(verdicts, log)};
}

RuntimeReport cmd_bench(const RunConfig & config, const FrameLog & log)
{
  return benchmark(
    config.pipeline, log, static_cast<std::size_t>(config.bench.repetitions),
    static_cast<std::size_t>(config.bench.warmup));
}

Json match_ratio_to_json(const MatchRatioReport & report)
{
  Json rows = Json::array();
  for (const auto & c : report.cells()) {
    rows.push_back(Json{
      {"class", std::string(to_string(c.cls))},
      {"region", std::string(to_string(c.region))},
      {"matched_cells", c.matched_cells},
      {"total_bbox_cells", c.total_bbox_cells},
      {"ratio", c.ratio}});
  }
  return Json{{"report", "match_ratio"}, {"cells", rows}};
}

Json attack_eval_to_json(const AttackEvalReport & report)
{
  Json rows = Json::array();
  for (const auto & c : report.classes) {
    rows.push_back(Json{
      {"class", std::string(to_string(c.cls))},
      {"injected", c.injected},
      {"successfully_spoofed", c.successfully_spoofed},
      {"identified", c.identified},
      {"spoofed_unverifiable", c.spoofed_unverifiable},
      {"asr", c.asr},
      {"dsr", c.dsr},
      {"dsr_degenerate", c.dsr_degenerate},
      {"genuine_total", c.genuine_total},
      {"genuine_benign", c.genuine_benign},
      {"genuine_flagged", c.genuine_flagged},
      {"genuine_unverifiable", c.genuine_unverifiable},
      {"recall_spoofed", c.recall_spoofed},
      {"recall_benign", c.recall_benign},
      {"macro_recall", c.macro_recall},
      {"precision_spoofed", c.precision_spoofed},
      {"false_alarm_rate", c.false_alarm_rate}});
  }
  return Json{{"report", "attack_eval"}, {"classes", rows}};
}

Json runtime_report_to_json(const RuntimeReport & report)
{
  Json rows = Json::array();
  for (const auto & s : report.stages) {
    rows.push_back(Json{
      {"stage", s.stage},
      {"mean_seconds", s.mean_seconds},
      {"std_seconds", s.std_seconds},
      {"frames_per_second", s.frames_per_second}});
  }
  return Json{
    {"report", "runtime"},
    {"repetitions", report.repetitions},
    {"warmup", report.warmup},
    {"samples", report.samples},
    {"stages", rows}};
}

std::string match_ratio_to_csv(const MatchRatioReport & report)
{
  std::ostringstream out;
  out << "class,region,matched_cells,total_bbox_cells,ratio\n";
  for (const auto & c : report.cells()) {
    out << to_string(c.cls) << ',' << to_string(c.region) << ',' << c.matched_cells << ','
        << c.total_bbox_cells << ',' << fixed(c.ratio) << '\n';
  }
  return out.str();
}

std::string attack_eval_to_csv(const AttackEvalReport & report)
{
  std::ostringstream out;
  out << "class,injected,successfully_spoofed,identified,spoofed_unverifiable,asr,dsr,"
         "dsr_degenerate,genuine_total,genuine_benign,genuine_flagged,genuine_unverifiable,"
         "recall_spoofed,recall_benign,macro_recall,precision_spoofed,false_alarm_rate\n";
  for (const auto & c : report.classes) {
    out << to_string(c.cls) << ',' << c.injected << ',' << c.successfully_spoofed << ','
        << c.identified << ',' << c.spoofed_unverifiable << ',' << fixed(c.asr) << ','
        << fixed(c.dsr) << ',' << (c.dsr_degenerate ? "true" : "false") << ',' << c.genuine_total
        << ',' << c.genuine_benign << ',' << c.genuine_flagged << ',' << c.genuine_unverifiable
        << ',' << fixed(c.recall_spoofed) << ',' << fixed(c.recall_benign) << ','
        << fixed(c.macro_recall) << ',' << fixed(c.precision_spoofed) << ','
        << fixed(c.false_alarm_rate) << '\n';
  }
  return out.str();
}

std::string runtime_report_to_csv(const RuntimeReport & report)
{
  std::ostringstream out;
  out << "stage,mean_seconds,std_seconds,frames_per_second\n";
  for (const auto & s : report.stages) {
    out << s.stage << ',' << fixed(s.mean_seconds) << ',' << fixed(s.std_seconds) << ','
        << fixed(s.frames_per_second) << '\n';
  }
  return out.str();
}

std::vector<std::string> write_eval_reports(
  const EvalReports & reports, const std::string & directory, ReportFormat format)
{
  const auto dir = prepare_directory(directory);
  const bool csv = format == ReportFormat::Csv;
  const auto mr = dir / (csv ? "match_ratio.csv" : "match_ratio.json");
  const auto ae = dir / (csv ? "attack_eval.csv" : "attack_eval.json");
  write_text(mr, csv ? match_ratio_to_csv(reports.match_ratio)
                     : match_ratio_to_json(reports.match_ratio).dump(2) + "\n");
  write_text(ae, csv ? attack_eval_to_csv(reports.attack)
                     : attack_eval_to_json(reports.attack).dump(2) + "\n");
  return {mr.string(), ae.string()};
}

std::string write_runtime_report(
  const RuntimeReport & report, const std::string & directory, ReportFormat format)
{
  const auto dir = prepare_directory(directory);
  const bool csv = format == ReportFormat::Csv;
  const auto path = dir / (csv ? "runtime.csv" : "runtime.json");
  write_text(path, csv ? runtime_report_to_csv(report) : runtime_report_to_json(report).dump(2) + "\n");
  return path.string();
}

}  // namespace tc3d

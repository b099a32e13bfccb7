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
#include "tc3d/io/frame_log.hpp"
#include "tc3d/io/verdict_log.hpp"

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr const char * kConfigEnv = "TC3D_CONFIG";

struct CommonFlags
{
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs{1};
  std::string output;
  std::string format;
};

void add_common(CLI::App & cmd, CommonFlags & flags)
{
  cmd.add_option("--config", flags.config, "Run config (JSON); defaults to $TC3D_CONFIG");
  cmd.add_option("--seed", flags.seed, "Override the simulation seed");
  cmd.add_option("--jobs", flags.jobs, "Scenes processed concurrently")->check(CLI::PositiveNumber);
  cmd.add_option("--output", flags.output, "Output file, or directory for eval and bench");
  cmd.add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"records", "csv"}));
}

tc3d::RunConfig resolve_config(const CommonFlags & flags)
{
  std::string path = flags.config;
  if (path.empty()) {
    if (const char * env = std::getenv(kConfigEnv)) path = env;
  }
  tc3d::RunConfig cfg = path.empty() ? tc3d::RunConfig{} : tc3d::load_run_config(path);
  if (flags.seed) cfg.set_seed(*flags.seed);
  if (!flags.output.empty()) cfg.output.path = flags.output;
  if (!flags.format.empty()) {
    cfg.output.format = flags.format == "csv" ? tc3d::ReportFormat::Csv : tc3d::ReportFormat::Records;
  }
  return cfg;
}

void emit_log(const tc3d::FrameLog & log, const std::string & path)
{
  if (path.empty() || path == "-") {
    tc3d::write_frame_log(std::cout, log);
  } else {
    tc3d::save_frame_log(path, log);
  }
}

void emit_error(const std::string & kind, const std::string & message, const tc3d::Json & extra)
{
  tc3d::Json record{{"error", kind}, {"message", message}};
  for (const auto & [k, v] : extra.items()) record[k] = v;
  std::cerr << record.dump() << '\n';
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Temporal consistency checks for LiDAR object detections"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input;
  std::string verdict_path;

  auto * simulate = app.add_subcommand("simulate", "Generate synthetic scenes as a frame log");
  add_common(*simulate, flags);

  auto * attack = app.add_subcommand("attack", "Inject ghost detections into a frame log");
  add_common(*attack, flags);
  attack->add_option("log", input, "Input frame log")->required()->check(CLI::ExistingFile);

  auto * check = app.add_subcommand("check", "Run the consistency check and write verdicts");
  add_common(*check, flags);
  check->add_option("log", input, "Input frame log")->required()->check(CLI::ExistingFile);

  auto * eval = app.add_subcommand("eval", "Score verdicts against a frame log");
  add_common(*eval, flags);
  eval->add_option("verdicts", verdict_path, "Verdict log")->required()->check(CLI::ExistingFile);
  eval->add_option("log", input, "Frame log the verdicts came from")->required()->check(CLI::ExistingFile);

  auto * bench = app.add_subcommand("bench", "Time the pipeline stages on a frame log");
  add_common(*bench, flags);
  bench->add_option("log", input, "Input frame log")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    const auto cfg = resolve_config(flags);
    const std::string & out = cfg.output.path;
    if (simulate->parsed()) {
      emit_log(tc3d::cmd_simulate(cfg, flags.jobs), out);
    } else if (attack->parsed()) {
      emit_log(tc3d::cmd_attack(cfg, tc3d::load_frame_log(input)), out);
    } else if (check->parsed()) {
      const auto verdicts = tc3d::cmd_check(cfg, tc3d::load_frame_log(input), flags.jobs);
      if (out.empty() || out == "-") {
        tc3d::write_verdict_log(std::cout, verdicts);
      } else {
        tc3d::save_verdict_log(out, verdicts);
      }
    } else if (eval->parsed()) {
      const auto reports =
        tc3d::cmd_eval(tc3d::load_verdict_log(verdict_path), tc3d::load_frame_log(input));
      if (out.empty() || out == "-") {
        if (cfg.output.format == tc3d::ReportFormat::Csv) {
          std::cout << tc3d::match_ratio_to_csv(reports.match_ratio) << '\n'
                    << tc3d::attack_eval_to_csv(reports.attack);
        } else {
          std::cout << tc3d::match_ratio_to_json(reports.match_ratio).dump() << '\n'
                    << tc3d::attack_eval_to_json(reports.attack).dump() << '\n';
        }
      } else {
        tc3d::write_eval_reports(reports, out, cfg.output.format);
      }
    } else if (bench->parsed()) {
      const auto report = tc3d::cmd_bench(cfg, tc3d::load_frame_log(input));
      if (out.empty() || out == "-") {
        std::cout << (cfg.output.format == tc3d::ReportFormat::Csv
                        ? tc3d::runtime_report_to_csv(report)
                        : tc3d::runtime_report_to_json(report).dump() + "\n");
      } else {
        tc3d::write_runtime_report(report, out, cfg.output.format);
      }
    }
  } catch (const tc3d::ConfigError & e) {
    emit_error("config", e.what(), tc3d::Json{{"location", e.location()}});
    return kExitConfig;
  } catch (const tc3d::DataError & e) {
    tc3d::Json extra = tc3d::Json::object();
    if (e.line()) extra["line"] = *e.line();
    emit_error("data", e.what(), extra);
    return kExitData;
  } catch (const std::exception & e) {
    emit_error("internal", e.what(), tc3d::Json::object());
    return 1;
  }
  return kExitOk;
}

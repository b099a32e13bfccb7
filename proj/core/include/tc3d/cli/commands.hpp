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

#pragma once

#include "tc3d/io/frame_log.hpp"
#include "tc3d/io/run_config.hpp"
#include "tc3d/metrics/evaluation.hpp"
#include "tc3d/metrics/runtime_benchmark.hpp"

#include <string>
#include <vector>

namespace tc3d
{

/// All configured scenes, concatenated in scene order.
FrameLog cmd_simulate(const RunConfig & config, int jobs = 1);

FrameLog cmd_attack(const RunConfig & config, const FrameLog & log);

std::vector<FrameVerdicts> cmd_check(const RunConfig & config, const FrameLog & log, int jobs = 1);

struct EvalReports
{
  MatchRatioReport match_ratio;
  AttackEvalReport attack;
};

/// Match ratio over genuine detections and attack scoring against the
/// injection bookkeeping of `log`.
EvalReports cmd_eval(const std::vector<FrameVerdicts> & verdicts, const FrameLog & log);

RuntimeReport cmd_bench(const RunConfig & config, const FrameLog & log);

Json match_ratio_to_json(const MatchRatioReport & report);
Json attack_eval_to_json(const AttackEvalReport & report);
Json runtime_report_to_json(const RuntimeReport & report);

std::string match_ratio_to_csv(const MatchRatioReport & report);
std::string attack_eval_to_csv(const AttackEvalReport & report);
std::string runtime_report_to_csv(const RuntimeReport & report);

/// Writes match_ratio.{json,csv} and attack_eval.{json,csv} into `directory`,
/// creating it if needed. Returns the written paths.
std::vector<std::string> write_eval_reports(
  const EvalReports & reports, const std::string & directory, ReportFormat format);

/// Writes runtime.{json,csv} into `directory`.
std::string write_runtime_report(
  const RuntimeReport & report, const std::string & directory, ReportFormat format);

}  // namespace tc3d

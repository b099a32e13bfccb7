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

#include "tc3d/alignment/alignment.hpp"
#include "tc3d/detection/cmcs.hpp"
#include "tc3d/io/frame_log.hpp"
#include "tc3d/pipeline/consistency_pipeline.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tc3d
{

/// Fraction helper used by every report: 0 when the denominator is 0.
double safe_ratio(std::size_t numerator, std::size_t denominator);

struct MatchRatioCell
{
  ObjectClass cls{ObjectClass::Vehicle};
  Region region{Region::FrontNear};
  std::size_t matched_cells{0};
  std::size_t total_bbox_cells{0};
  double ratio{0.0};
};

/// Per (class, region) match ratios over FrontNear and FrontFar; boxes in
/// Region::Other are not counted.
class MatchRatioReport
{
public:
  MatchRatioReport();

  void add(ObjectClass cls, Region region, std::size_t matched, std::size_t total);
  const MatchRatioCell & at(ObjectClass cls, Region region) const;
  const std::vector<MatchRatioCell> & cells() const noexcept { return cells_; }

private:
  MatchRatioCell & cell(ObjectClass cls, Region region);

  std::vector<MatchRatioCell> cells_;  // foreground class major, FrontNear then FrontFar
};

/// Accumulates over frame-aligned detections and predicted maps. Injected
/// detections are skipped unless `include_injected`. Throws DataError on a
/// length mismatch.
MatchRatioReport match_ratio(
  std::span<const std::vector<AlignedDetection>> aligned_frames,
  std::span<const PredictedCellMap> maps, const CmcsOptions & options = {},
  bool include_injected = false);

/// Same accumulation from serialized verdicts; frames with insufficient
/// history contribute nothing.
MatchRatioReport match_ratio_from_verdicts(
  std::span<const FrameVerdicts> verdicts, bool include_injected = false);

struct ClassAttackEval
{
  ObjectClass cls{ObjectClass::Vehicle};
  std::size_t injected{0};              // attack attempts
  std::size_t successfully_spoofed{0};  // ghosts the detector output
  std::size_t identified{0};            // ghosts judged Spoofed
  std::size_t spoofed_unverifiable{0};
  double asr{0.0};
  double dsr{0.0};
  bool dsr_degenerate{false};  // no successful spoofs, dsr reported as 0

  std::size_t genuine_total{0};
  std::size_t genuine_benign{0};
  std::size_t genuine_flagged{0};
  std::size_t genuine_unverifiable{0};

  double recall_spoofed{0.0};
  double recall_benign{0.0};
  double macro_recall{0.0};
  double precision_spoofed{0.0};
  double false_alarm_rate{0.0};
};

struct AttackEvalReport
{
  std::vector<ClassAttackEval> classes;  // one per foreground class

  const ClassAttackEval & at(ObjectClass cls) const;
  ClassAttackEval & at(ObjectClass cls);
};

/// Scores verdicts against the attack bookkeeping carried in `log`.
/// Throws DataError when an attacked frame or an injected id has no verdict.
AttackEvalReport attack_eval(std::span<const FrameVerdicts> verdicts, const FrameLog & log);

}  // namespace tc3d

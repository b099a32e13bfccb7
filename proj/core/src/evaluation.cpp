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

#include "tc3d/metrics/evaluation.hpp"

#include "tc3d/errors.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace tc3d
{

double safe_ratio(std::size_t numerator, std::size_t denominator)
{
  return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator);
}

MatchRatioReport::MatchRatioReport()
{
  for (const auto cls : kForegroundClasses) {
    cells_.push_back({cls, Region::FrontNear});
    cells_.push_back({cls, Region::FrontFar});
  }
}

void MatchRatioReport::add(ObjectClass cls, Region region, std::size_t matched, std::size_t total)
{
  if (region == Region::Other || cls == ObjectClass::Background) return;
  auto & c = cell(cls, region);
  c.matched_cells += matched;
  c.total_bbox_cells += total;
  c.ratio = safe_ratio(c.matched_cells, c.total_bbox_cells);
}

MatchRatioCell & MatchRatioReport::cell(ObjectClass cls, Region region)
{
  for (auto & c : cells_) {
    if (c.cls == cls && c.region == region) return c;
  }
  throw std::out_of_range("no match-ratio cell for this class/region");
}

const MatchRatioCell & MatchRatioReport::at(ObjectClass cls, Region region) const
{
  return const_cast<MatchRatioReport *>(this)->cell(cls, region);
}

MatchRatioReport match_ratio(
  std::span<const std::vector<AlignedDetection>> aligned_frames,
  std::span<const PredictedCellMap> maps, const CmcsOptions & options, bool include_injected)
{
  if (aligned_frames.size() != maps.size()) {
    throw DataError(
      "match_ratio: " + std::to_string(aligned_frames.size()) + " aligned frames but " +
      std::to_string(maps.size()) + " maps");
  }
  MatchRatioReport report;
  for (std::size_t f = 0; f < maps.size(); ++f) {
    const auto & map = maps[f];
    for (const auto & a : aligned_frames[f]) {
      if (!include_injected && a.detection.provenance == Provenance::Injected) continue;
      std::size_t matched = 0;
      for (const auto & cell : a.footprint_cells) {
        if (labels_compatible(a.detection.cls, map.label(cell), options)) ++matched;
      }
      report.add(a.detection.cls, a.region, matched, a.footprint_cells.size());
    }
  }
  return report;
}

MatchRatioReport match_ratio_from_verdicts(std::span<const FrameVerdicts> verdicts, bool include_injected)
{
  MatchRatioReport report;
  for (const auto & fv : verdicts) {
    if (fv.insufficient_history) continue;
    for (const auto & rec : fv.verdicts) {
      if (!include_injected && rec.provenance == Provenance::Injected) continue;
      report.add(rec.verdict.detected_class, rec.region, rec.verdict.matched_cells, rec.verdict.footprint_cells);
    }
  }
  return report;
}

ClassAttackEval & AttackEvalReport::at(ObjectClass cls)
{
  for (auto & c : classes) {
    if (c.cls == cls) return c;
  }
  throw std::out_of_range("no attack-eval row for this class");
}

const ClassAttackEval & AttackEvalReport::at(ObjectClass cls) const
{
  return const_cast<AttackEvalReport *>(this)->at(cls);
}

AttackEvalReport attack_eval(std::span<const FrameVerdicts> verdicts, const FrameLog & log)
{
  std::map<std::pair<std::string, std::int64_t>, const FrameVerdicts *> by_frame;
  for (const auto & fv : verdicts) by_frame[{fv.scene_id, fv.frame_index}] = &fv;

  AttackEvalReport report;
  for (const auto cls : kForegroundClasses) report.classes.push_back({cls});
  const auto row = [&](ObjectClass cls) -> ClassAttackEval & { return report.at(cls); };

  for (const auto & frame : log.frames) {
    if (!frame.attack) continue;
    const auto & attack = *frame.attack;
    const auto it = by_frame.find({frame.scene_id, frame.frame_index});
    if (it == by_frame.end()) {
      throw DataError(
        "attack bookkeeping references frame " + std::to_string(frame.frame_index) + " of scene '" +
        frame.scene_id + "' which has no verdicts");
    }
    auto & r = row(attack.target_class);
    ++r.injected;
    if (!attack.spoof_succeeded) continue;
    ++r.successfully_spoofed;
    for (const auto & id : attack.injected_ids) {
      const auto & list = it->second->verdicts;
      const auto v = std::find_if(list.begin(), list.end(), [&](const VerdictRecord & rec) {
        return rec.verdict.detection_id == id;
      });
      if (v == list.end()) {
        throw DataError("injected detection '" + id + "' has no verdict");
      }
      if (v->verdict.decision == Decision::Spoofed) ++r.identified;
      if (v->verdict.decision == Decision::Unverifiable) ++r.spoofed_unverifiable;
    }
  }

  for (const auto & fv : verdicts) {
    for (const auto & rec : fv.verdicts) {
      if (rec.provenance == Provenance::Injected) continue;
      if (rec.verdict.detected_class == ObjectClass::Background) continue;
      auto & r = row(rec.verdict.detected_class);
      ++r.genuine_total;
      switch (rec.verdict.decision) {
        case Decision::Benign:
          ++r.genuine_benign;
          break;
        case Decision::Spoofed:
          ++r.genuine_flagged;
          break;
        case Decision::Unverifiable:
          ++r.genuine_unverifiable;
          break;
      }
    }
  }

  for (auto & r : report.classes) {
    r.asr = safe_ratio(r.successfully_spoofed, r.injected);
    r.dsr = safe_ratio(r.identified, r.successfully_spoofed);
    r.dsr_degenerate = r.successfully_spoofed == 0;
    r.recall_spoofed = safe_ratio(r.identified, r.successfully_spoofed - r.spoofed_unverifiable);
    const auto genuine_verifiable = r.genuine_benign + r.genuine_flagged;
    r.recall_benign = safe_ratio(r.genuine_benign, genuine_verifiable);
    r.macro_recall = 0.5 * (r.recall_spoofed + r.recall_benign);
    r.precision_spoofed = safe_ratio(r.identified, r.identified + r.genuine_flagged);
    r.false_alarm_rate = safe_ratio(r.genuine_flagged, genuine_verifiable);
  }
  return report;
}

}  // namespace tc3d

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

#include "tc3d/detection/cmcs.hpp"

#include <algorithm>

namespace tc3d
{

std::string_view to_string(Decision d)
{
  switch (d) {
    case Decision::Benign:
      return "Benign";
    case Decision::Spoofed:
      return "Spoofed";
    case Decision::Unverifiable:
      return "Unverifiable";
  }
  return "Unverifiable";
}

std::optional<Decision> parse_decision(std::string_view name)
{
  if (name == "Benign") return Decision::Benign;
  if (name == "Spoofed") return Decision::Spoofed;
  if (name == "Unverifiable") return Decision::Unverifiable;
  return std::nullopt;
}

bool labels_compatible(ObjectClass detected, ObjectClass predicted, const CmcsOptions & options)
{
  if (predicted == ObjectClass::Background) return false;
  if (predicted == detected) return true;
  return options.others_is_wildcard && predicted == ObjectClass::Others;
}

int tie_rank(ObjectClass cls)
{
  switch (cls) {
    case ObjectClass::Background:
      return 0;
    case ObjectClass::Others:
      return 1;
    case ObjectClass::Vehicle:
      return 2;
    case ObjectClass::Pedestrian:
      return 3;
    case ObjectClass::Bike:
      return 4;
  }
  return 5;
}

Verdict cmcs(const AlignedDetection & aligned, const PredictedCellMap & map, const CmcsOptions & options)
{
  Verdict v;
  v.detection_id = aligned.detection.detection_id;
  v.detected_class = aligned.detection.cls;
  for (const auto & cell : aligned.footprint_cells) {
    ++v.class_counts[static_cast<std::size_t>(map.labels[map.grid.flat_index(cell)])];
  }
  v.footprint_cells = aligned.footprint_cells.size();
  if (v.footprint_cells == 0) {
    v.decision = Decision::Unverifiable;
    v.plurality_class = ObjectClass::Background;
    return v;
  }

  const auto better = [&](ObjectClass a, ObjectClass b) {
    const auto ca = count_of(v.class_counts, a);
    const auto cb = count_of(v.class_counts, b);
    if (ca != cb) return ca > cb;
    if (options.tie_mode == TieMode::DetectedClassFirst) {
      if (a == v.detected_class) return true;
      if (b == v.detected_class) return false;
    }
    return tie_rank(a) < tie_rank(b);
  };
  v.plurality_class = kAllClasses[0];
  for (const auto cls : kAllClasses) {
    if (better(cls, v.plurality_class)) v.plurality_class = cls;
  }

  for (const auto cls : kAllClasses) {
    if (labels_compatible(v.detected_class, cls, options)) v.matched_cells += count_of(v.class_counts, cls);
  }
  v.match_fraction = static_cast<double>(v.matched_cells) / static_cast<double>(v.footprint_cells);

  bool benign = labels_compatible(v.detected_class, v.plurality_class, options);
  if (options.strict_majority) benign = benign && v.match_fraction > 0.5;
  v.decision = benign ? Decision::Benign : Decision::Spoofed;
  return v;
}

std::vector<Verdict> check_frame(
  std::span<const AlignedDetection> detections, const PredictedCellMap & map,
  const CmcsOptions & options)
{
  std::vector<Verdict> out;
  out.reserve(detections.size());
  for (const auto & d : detections) out.push_back(cmcs(d, map, options));
  return out;
}

}  // namespace tc3d

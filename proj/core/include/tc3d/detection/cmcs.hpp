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
#include "tc3d/prediction/prediction_map.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tc3d
{

enum class Decision { Benign, Spoofed, Unverifiable };

std::string_view to_string(Decision d);
std::optional<Decision> parse_decision(std::string_view name);

enum class TieMode {
  SafetyFirst,         // Background > Others > Vehicle > Pedestrian > Bike
  DetectedClassFirst,  // the detected class wins a tie, otherwise SafetyFirst
};

struct CmcsOptions
{
  /// Benign additionally requires more than half of the footprint to match.
  bool strict_majority{false};
  /// A predicted Others label is compatible with every detected class.
  bool others_is_wildcard{false};
  TieMode tie_mode{TieMode::SafetyFirst};
};

/// Cell tallies indexed by static_cast<size_t>(ObjectClass).
using ClassCounts = std::array<std::size_t, 5>;

inline std::size_t count_of(const ClassCounts & counts, ObjectClass cls)
{
  return counts[static_cast<std::size_t>(cls)];
}

struct Verdict
{
  std::string detection_id;
  ObjectClass detected_class{ObjectClass::Vehicle};
  Decision decision{Decision::Unverifiable};
  ObjectClass plurality_class{ObjectClass::Background};
  ClassCounts class_counts{};
  std::size_t footprint_cells{0};
  std::size_t matched_cells{0};  // cells whose label is compatible with detected_class
  double match_fraction{0.0};    // matched_cells / max(1, footprint_cells)
};

/// Whether a predicted cell label supports a detection of class `detected`.
bool labels_compatible(ObjectClass detected, ObjectClass predicted, const CmcsOptions & options);

/// Precedence rank used to break plurality ties; lower wins.
int tie_rank(ObjectClass cls);

/// Cell-match counting: tallies the predicted labels under the detection's
/// footprint and compares the plurality label with the detected class.
Verdict cmcs(
  const AlignedDetection & aligned, const PredictedCellMap & map, const CmcsOptions & options = {});

std::vector<Verdict> check_frame(
  std::span<const AlignedDetection> detections, const PredictedCellMap & map,
  const CmcsOptions & options = {});

}  // namespace tc3d

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

#include "tc3d/geometry/bev_geometry.hpp"
#include "tc3d/prediction/prediction_map.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tc3d
{

enum class Provenance { Simulated, Injected, Ingested };

std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view name);

/// One object-detector output box, in the ego frame of its frame.
struct Detection
{
  std::string detection_id;
  ObjectClass cls{ObjectClass::Vehicle};
  Obb3 box;
  double confidence{1.0};
  Provenance provenance{Provenance::Simulated};
};

enum class Region { FrontNear, FrontFar, Other };

std::string_view to_string(Region r);

struct AlignmentOptions
{
  double near_distance{8.0};
  /// 90 degrees means the open half-plane x > 0; smaller values narrow
  /// "front" to a cone around the forward axis.
  double front_half_angle_deg{90.0};
  Vec2 lidar_offset;

  void validate() const;
};

struct AlignedDetection
{
  Detection detection;
  std::vector<CellIndex> footprint_cells;
  Region region{Region::Other};
};

/// Region of a box center. The near boundary is closed: exactly
/// near_distance counts as FrontNear.
Region classify_region(const Vec2 & center, const AlignmentOptions & options = {});

/// Projects and rasterizes every detection onto `grid`, preserving order.
/// Detections that miss the grid are kept with an empty footprint.
std::vector<AlignedDetection> align(
  std::span<const Detection> detections, const GridSpec & grid,
  const AlignmentOptions & options = {});

inline std::vector<AlignedDetection> align(
  std::span<const Detection> detections, const PredictedCellMap & map,
  const AlignmentOptions & options = {})
{
  return align(detections, map.grid, options);
}

}  // namespace tc3d

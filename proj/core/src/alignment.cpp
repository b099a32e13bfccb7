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

#include "tc3d/alignment/alignment.hpp"

#include "tc3d/errors.hpp"

#include <cmath>
#include <numbers>

namespace tc3d
{

std::string_view to_string(Provenance p)
{
  switch (p) {
    case Provenance::Simulated:
      return "simulated";
    case Provenance::Injected:
      return "injected";
    case Provenance::Ingested:
      return "ingested";
  }
  return "ingested";
}

std::optional<Provenance> parse_provenance(std::string_view name)
{
  if (name == "simulated") return Provenance::Simulated;
  if (name == "injected") return Provenance::Injected;
  if (name == "ingested") return Provenance::Ingested;
  return std::nullopt;
}

std::string_view to_string(Region r)
{
  switch (r) {
    case Region::FrontNear:
      return "FrontNear";
    case Region::FrontFar:
      return "FrontFar";
    case Region::Other:
      return "Other";
  }
  return "Other";
}

void AlignmentOptions::validate() const
{
  if (!std::isfinite(near_distance) || near_distance < 0.0) {
    throw ConfigError("near_distance must be finite and >= 0");
  }
  if (!(front_half_angle_deg > 0.0 && front_half_angle_deg <= 90.0)) {
    throw ConfigError("front_half_angle_deg must be in (0, 90]");
  }
  if (!std::isfinite(lidar_offset.x) || !std::isfinite(lidar_offset.y)) {
    throw ConfigError("lidar_offset must be finite");
  }
}

Region classify_region(const Vec2 & center, const AlignmentOptions & options)
{
  const double x = center.x - options.lidar_offset.x;
  const double y = center.y - options.lidar_offset.y;
  if (!(x > 0.0)) return Region::Other;
  if (options.front_half_angle_deg < 90.0) {
    const double half_angle = options.front_half_angle_deg * std::numbers::pi / 180.0;
    if (std::abs(std::atan2(y, x)) > half_angle) return Region::Other;
  }
  return std::hypot(x, y) <= options.near_distance ? Region::FrontNear : Region::FrontFar;
}

std::vector<AlignedDetection> align(
  std::span<const Detection> detections, const GridSpec & grid, const AlignmentOptions & options)
{
  std::vector<AlignedDetection> out;
  out.reserve(detections.size());
  for (const auto & det : detections) {
    const ObbBev footprint = project_to_bev(det.box);
    out.push_back(
      {det, rasterize(footprint, grid), classify_region(footprint.center, options)});
  }
  return out;
}

}  // namespace tc3d

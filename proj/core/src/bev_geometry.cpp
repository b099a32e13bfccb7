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

#include "tc3d/geometry/bev_geometry.hpp"

#include "tc3d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tc3d
{

std::string_view to_string(ObjectClass cls)
{
  switch (cls) {
    case ObjectClass::Vehicle:
      return "Vehicle";
    case ObjectClass::Pedestrian:
      return "Pedestrian";
    case ObjectClass::Bike:
      return "Bike";
    case ObjectClass::Others:
      return "Others";
    case ObjectClass::Background:
      return "Background";
  }
  return "Background";
}

std::optional<ObjectClass> parse_object_class(std::string_view name)
{
  if (name == "Vehicle" || name == "Car") return ObjectClass::Vehicle;
  if (name == "Pedestrian") return ObjectClass::Pedestrian;
  if (name == "Bike" || name == "Cyclist") return ObjectClass::Bike;
  if (name == "Others" || name == "Other") return ObjectClass::Others;
  if (name == "Background") return ObjectClass::Background;
  return std::nullopt;
}

double normalize_angle(double radians)
{
  constexpr double pi = std::numbers::pi;
  double a = std::remainder(radians, 2.0 * pi);  // [-pi, pi]
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

bool Obb3::valid() const
{
  const auto finite = [](double v) { return std::isfinite(v); };
  return finite(center.x) && finite(center.y) && finite(center.z) && finite(yaw) &&
         finite(size.x) && finite(size.y) && finite(size.z) && size.x > 0.0 && size.y > 0.0 &&
         size.z > 0.0;
}

bool ObbBev::contains(double x, double y) const
{
  return detail::RectFrame::from(*this).contains(x, y);
}

GridSpec::GridSpec() : GridSpec(kDefaultCellSize, kDefaultHalfExtent) {}

GridSpec::GridSpec(double cell_size, double half_extent)
: cell_size_(cell_size), half_extent_(half_extent), cells_per_side_(0)
{
  if (!std::isfinite(cell_size) || cell_size <= 0.0) {
    throw ConfigError("cell_size must be finite and > 0, got " + std::to_string(cell_size));
  }
  if (!std::isfinite(half_extent) || half_extent <= 0.0) {
    throw ConfigError("half_extent must be finite and > 0, got " + std::to_string(half_extent));
  }
  const double ratio = 2.0 * half_extent / cell_size;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw ConfigError("2 * half_extent must be an integer multiple of cell_size");
  }
  if (rounded > 1 << 15) {
    throw ConfigError("grid too large: " + std::to_string(rounded) + " cells per side");
  }
  cells_per_side_ = static_cast<int>(rounded);
}

Vec2 GridSpec::cell_center(CellIndex idx) const
{
  if (!contains(idx)) {
    throw std::out_of_range(
      "cell (" + std::to_string(idx.row) + ", " + std::to_string(idx.col) + ") outside grid");
  }
  return {-half_extent_ + (idx.row + 0.5) * cell_size_, -half_extent_ + (idx.col + 0.5) * cell_size_};
}

std::optional<CellIndex> GridSpec::point_to_cell(double x, double y) const
{
  if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
  const double row = std::floor((x + half_extent_) / cell_size_);
  const double col = std::floor((y + half_extent_) / cell_size_);
  if (row < 0.0 || col < 0.0 || row >= cells_per_side_ || col >= cells_per_side_) {
    return std::nullopt;
  }
  return CellIndex{static_cast<int>(row), static_cast<int>(col)};
}

ObbBev project_to_bev(const Obb3 & box)
{
  return ObbBev{{box.center.x, box.center.y}, box.size.x, box.size.y, box.yaw};
}

namespace detail
{

RectFrame RectFrame::from(const ObbBev & obb)
{
  constexpr double snap = 1e-12;
  double c = std::cos(obb.yaw);
  double s = std::sin(obb.yaw);
  if (std::abs(s) < snap) {
    s = 0.0;
    c = c > 0.0 ? 1.0 : -1.0;
  } else if (std::abs(c) < snap) {
    c = 0.0;
    s = s > 0.0 ? 1.0 : -1.0;
  }
  return {obb.center.x, obb.center.y, c, s, 0.5 * obb.length, 0.5 * obb.width};
}

CellScanRange scan_range(const ObbBev & obb, const GridSpec & grid)
{
  const auto frame = RectFrame::from(obb);
  if (!std::isfinite(frame.half_length) || !std::isfinite(frame.half_width) ||
      !std::isfinite(obb.center.x) || !std::isfinite(obb.center.y) ||
      !std::isfinite(frame.cos_yaw)) {
    return {0, 0, 0, 0};
  }
  const double ext_x =
    std::abs(frame.cos_yaw) * frame.half_length + std::abs(frame.sin_yaw) * frame.half_width;
  const double ext_y =
    std::abs(frame.sin_yaw) * frame.half_length + std::abs(frame.cos_yaw) * frame.half_width;
  const double h = grid.half_extent();
  const double c = grid.cell_size();
  const int n = grid.cells_per_side();

  const auto to_index = [&](double v) {
    const double idx = std::floor((v + h) / c);
    // Clamp in floating point first; far-away boxes must not overflow int.
    return static_cast<int>(std::clamp(idx, -2.0, static_cast<double>(n) + 2.0));
  };
  CellScanRange r{};
  r.row_begin = std::max(0, to_index(obb.center.x - ext_x) - 1);
  r.row_end = std::min(n, to_index(obb.center.x + ext_x) + 2);
  r.col_begin = std::max(0, to_index(obb.center.y - ext_y) - 1);
  r.col_end = std::min(n, to_index(obb.center.y + ext_y) + 2);
  return r;
}

}  // namespace detail

std::vector<CellIndex> rasterize(const ObbBev & obb, const GridSpec & grid)
{
  std::vector<CellIndex> cells;
  for_each_covered_cell(obb, grid, [&](std::size_t flat) { cells.push_back(grid.from_flat(flat)); });
  return cells;
}

Pose2 ego_transform(const Pose2 & world_pose, const Pose2 & ego_pose)
{
  const double dx = world_pose.x - ego_pose.x;
  const double dy = world_pose.y - ego_pose.y;
  const double c = std::cos(ego_pose.yaw);
  const double s = std::sin(ego_pose.yaw);
  return {c * dx + s * dy, -s * dx + c * dy, normalize_angle(world_pose.yaw - ego_pose.yaw)};
}

Pose2 ego_to_world(const Pose2 & ego_relative, const Pose2 & ego_pose)
{
  const double c = std::cos(ego_pose.yaw);
  const double s = std::sin(ego_pose.yaw);
  return {
    ego_pose.x + c * ego_relative.x - s * ego_relative.y,
    ego_pose.y + s * ego_relative.x + c * ego_relative.y,
    normalize_angle(ego_relative.yaw + ego_pose.yaw)};
}

}  // namespace tc3d

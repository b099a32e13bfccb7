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

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace tc3d
{

/// Object taxonomy of the BEV class map. Background only ever labels cells.
enum class ObjectClass { Vehicle, Pedestrian, Bike, Others, Background };

inline constexpr std::array<ObjectClass, 5> kAllClasses = {
  ObjectClass::Vehicle, ObjectClass::Pedestrian, ObjectClass::Bike, ObjectClass::Others,
  ObjectClass::Background};

inline constexpr std::array<ObjectClass, 4> kForegroundClasses = {
  ObjectClass::Vehicle, ObjectClass::Pedestrian, ObjectClass::Bike, ObjectClass::Others};

std::string_view to_string(ObjectClass cls);

/// Accepts the canonical names plus the detector-side aliases Car, Cyclist
/// and Other. Returns nullopt for anything else.
std::optional<ObjectClass> parse_object_class(std::string_view name);

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

struct Pose2
{
  double x{0.0};
  double y{0.0};
  double yaw{0.0};
};

struct Vec2
{
  double x{0.0};
  double y{0.0};
};

struct Vec3
{
  double x{0.0};
  double y{0.0};
  double z{0.0};
};

/// Oriented 3D box. size = (length along heading, width, height).
struct Obb3
{
  Vec3 center;
  Vec3 size;
  double yaw{0.0};

  bool valid() const;
};

/// Planar footprint of an Obb3.
struct ObbBev
{
  Vec2 center;
  double length{0.0};
  double width{0.0};
  double yaw{0.0};

  /// Closed-rectangle membership test in the box's local frame.
  bool contains(double x, double y) const;
};

struct CellIndex
{
  int row{0};
  int col{0};

  auto operator<=>(const CellIndex &) const = default;
};

/// Square BEV grid centered on the ego vehicle.
///
/// Rows run along ego x (forward), columns along ego y (left); cell (0, 0)
/// sits at the (-x, -y) corner and storage is row-major.
class GridSpec
{
public:
  static constexpr double kDefaultCellSize = 0.25;
  static constexpr double kDefaultHalfExtent = 32.0;

  GridSpec();

  /// Throws ConfigError unless both values are finite and positive and
  /// 2 * half_extent is an integer multiple of cell_size.
  GridSpec(double cell_size, double half_extent);

  double cell_size() const noexcept { return cell_size_; }
  double half_extent() const noexcept { return half_extent_; }
  int cells_per_side() const noexcept { return cells_per_side_; }
  std::size_t cell_count() const noexcept
  {
    return static_cast<std::size_t>(cells_per_side_) * static_cast<std::size_t>(cells_per_side_);
  }

  bool contains(CellIndex idx) const noexcept
  {
    return idx.row >= 0 && idx.col >= 0 && idx.row < cells_per_side_ && idx.col < cells_per_side_;
  }

  std::size_t flat_index(CellIndex idx) const noexcept
  {
    return static_cast<std::size_t>(idx.row) * static_cast<std::size_t>(cells_per_side_) +
           static_cast<std::size_t>(idx.col);
  }

  CellIndex from_flat(std::size_t flat) const noexcept
  {
    const auto n = static_cast<std::size_t>(cells_per_side_);
    return {static_cast<int>(flat / n), static_cast<int>(flat % n)};
  }

  /// Metric center of a cell. Throws std::out_of_range for indices outside the grid.
  Vec2 cell_center(CellIndex idx) const;

  /// Quantizes an ego-frame point. Cell intervals are half-open, [lo, hi).
  std::optional<CellIndex> point_to_cell(double x, double y) const;

  bool operator==(const GridSpec &) const = default;

private:
  double cell_size_;
  double half_extent_;
  int cells_per_side_;
};

ObbBev project_to_bev(const Obb3 & box);

/// Cells of `grid` whose center lies inside or on the boundary of `obb`,
/// sorted in row-major order. Parts outside the grid are clipped away.
std::vector<CellIndex> rasterize(const ObbBev & obb, const GridSpec & grid);

/// Visits the flat indices of rasterize(obb, grid) in row-major order
/// without allocating.
template <typename Visitor>
void for_each_covered_cell(const ObbBev & obb, const GridSpec & grid, Visitor && visit);

/// Expresses a world-frame pose in the frame of `ego_pose`.
Pose2 ego_transform(const Pose2 & world_pose, const Pose2 & ego_pose);

/// Inverse of ego_transform: ego-frame pose back to the world frame.
Pose2 ego_to_world(const Pose2 & ego_relative, const Pose2 & ego_pose);

// ---------------------------------------------------------------------------

namespace detail
{
/// Precomputed local frame of an ObbBev. Headings within 1e-12 of an axis
/// are snapped onto it so that boxes rotated by pi cover identical cells.
struct RectFrame
{
  double cx;
  double cy;
  double cos_yaw;
  double sin_yaw;
  double half_length;
  double half_width;

  static RectFrame from(const ObbBev & obb);

  bool contains(double x, double y) const noexcept
  {
    const double dx = x - cx;
    const double dy = y - cy;
    const double u = dx * cos_yaw + dy * sin_yaw;
    const double v = -dx * sin_yaw + dy * cos_yaw;
    return u <= half_length && u >= -half_length && v <= half_width && v >= -half_width;
  }
};

struct CellScanRange
{
  int row_begin;
  int row_end;
  int col_begin;
  int col_end;
};

// Conservative index window covering the rectangle's axis-aligned bounds
// (one cell of slack on each side), clipped to the grid.
CellScanRange scan_range(const ObbBev & obb, const GridSpec & grid);
}  // namespace detail

template <typename Visitor>
void for_each_covered_cell(const ObbBev & obb, const GridSpec & grid, Visitor && visit)
{
  const auto range = detail::scan_range(obb, grid);
  const auto frame = detail::RectFrame::from(obb);
  const double h = grid.half_extent();
  const double c = grid.cell_size();
  const auto n = static_cast<std::size_t>(grid.cells_per_side());
  for (int row = range.row_begin; row < range.row_end; ++row) {
    const double x = -h + (row + 0.5) * c;
    for (int col = range.col_begin; col < range.col_end; ++col) {
      const double y = -h + (col + 0.5) * c;
      if (frame.contains(x, y)) {
        visit(static_cast<std::size_t>(row) * n + static_cast<std::size_t>(col));
      }
    }
  }
}

}  // namespace tc3d

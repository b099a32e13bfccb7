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
#include "tc3d/prediction/kinematic_predictors.hpp"
#include "tc3d/prediction/track_store.hpp"

#include <optional>
#include <vector>

namespace tc3d
{

enum class PredictorMode { ConstantVelocity, Kalman };

/// Dense per-cell class labels for one predicted frame, plus an optional
/// per-cell velocity layer.
struct PredictedCellMap
{
  GridSpec grid;
  std::vector<ObjectClass> labels;
  std::vector<Vec2> velocities;  // empty unless requested

  explicit PredictedCellMap(GridSpec g = {});

  ObjectClass label(CellIndex idx) const { return labels[grid.flat_index(idx)]; }
  std::size_t count(ObjectClass cls) const;
};

struct RenderOptions
{
  PredictorMode mode{PredictorMode::ConstantVelocity};
  int min_observations{2};
  CvOptions cv;
  KalmanParams kf;
  /// When set, predicted poses are world-frame and get expressed in this
  /// ego pose before rasterization.
  std::optional<Pose2> target_ego_pose;
  bool with_velocities{false};
};

bool is_predictable(const Track & track, const RenderOptions & options);

/// Predicted pose and velocity of a predictable track, in the map frame.
MotionPrediction predict_track(const Track & track, double t_target, const RenderOptions & options);

/// Paints every predictable track's footprint at `t_target` into a fresh map.
///
/// Larger footprints paint first, ties by ascending object_key, and a cell
/// keeps the first label written to it. Untouched cells stay Background.
PredictedCellMap render_prediction(
  const TrackStore & store, double t_target, const GridSpec & grid, const RenderOptions & options);

/// Same as above but reuses `out`'s storage.
void render_prediction_into(
  const TrackStore & store, double t_target, const RenderOptions & options, PredictedCellMap & out);

}  // namespace tc3d

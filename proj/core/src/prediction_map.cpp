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

#include "tc3d/prediction/prediction_map.hpp"

#include <algorithm>

namespace tc3d
{

PredictedCellMap::PredictedCellMap(GridSpec g)
: grid(g), labels(g.cell_count(), ObjectClass::Background)
{
}

std::size_t PredictedCellMap::count(ObjectClass cls) const
{
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), cls));
}

bool is_predictable(const Track & track, const RenderOptions & options)
{
  const auto needed = static_cast<std::size_t>(std::max(options.min_observations, 2));
  return track.observations.size() >= needed;
}

MotionPrediction predict_track(const Track & track, double t_target, const RenderOptions & options)
{
  MotionPrediction p;
  if (options.mode == PredictorMode::Kalman) {
    const auto kf = predict_kf(track, t_target, options.kf);
    p = {kf.pose, kf.velocity};
  } else {
    p = predict_cv(track, t_target, options.cv);
  }
  if (options.target_ego_pose) {
    const auto & ego = *options.target_ego_pose;
    p.pose = ego_transform(p.pose, ego);
    const Pose2 v = ego_transform({p.velocity.x, p.velocity.y, 0.0}, {0.0, 0.0, ego.yaw});
    p.velocity = {v.x, v.y};
  }
  return p;
}

void render_prediction_into(
  const TrackStore & store, double t_target, const RenderOptions & options, PredictedCellMap & out)
{
  const auto & grid = out.grid;
  out.labels.assign(grid.cell_count(), ObjectClass::Background);
  if (options.with_velocities) {
    out.velocities.assign(grid.cell_count(), Vec2{});
  } else {
    out.velocities.clear();
  }

  struct Painter
  {
    const Track * track;
    ObbBev footprint;
    Vec2 velocity;
    double area;
  };
  std::vector<Painter> painters;
  painters.reserve(store.tracks().size());
  for (const auto & [key, track] : store.tracks()) {
    if (!is_predictable(track, options)) continue;
    const auto p = predict_track(track, t_target, options);
    const auto & last = track.last();
    painters.push_back(
      {&track, ObbBev{{p.pose.x, p.pose.y}, last.length, last.width, p.pose.yaw}, p.velocity,
       last.length * last.width});
  }
  // tracks() iterates in ascending key order, so a stable sort keeps that
  // order among equal areas.
  std::stable_sort(painters.begin(), painters.end(), [](const Painter & a, const Painter & b) {
    return a.area > b.area;
  });

  for (const auto & painter : painters) {
    const ObjectClass cls = painter.track->cls;
    for_each_covered_cell(painter.footprint, grid, [&](std::size_t flat) {
      if (out.labels[flat] != ObjectClass::Background) return;
      out.labels[flat] = cls;
      if (options.with_velocities) out.velocities[flat] = painter.velocity;
    });
  }
}

PredictedCellMap render_prediction(
  const TrackStore & store, double t_target, const GridSpec & grid, const RenderOptions & options)
{
  PredictedCellMap map(grid);
  render_prediction_into(store, t_target, options, map);
  return map;
}

}  // namespace tc3d

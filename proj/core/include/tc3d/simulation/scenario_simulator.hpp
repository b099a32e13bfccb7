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
#include "tc3d/io/frame_log.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tc3d
{

/// Spawn profile of one object class.
struct ClassProfile
{
  int count{0};
  double speed_min{0.0};  // m/s
  double speed_max{0.0};
  Vec3 size;                   // length, width, height
  double parked_fraction{0.0};  // share of objects that never move
};

struct DetectorStubConfig
{
  double position_sigma{0.1};  // m
  double yaw_sigma{0.02};      // rad
  double drop_probability{0.02};
  double p_asr{0.97};            // chance an injected ghost is actually detected
  double detection_range{70.0};  // m, planar

  void validate() const;
};

struct SceneConfig
{
  std::uint64_t seed{0};
  std::string scene_id{"scene-0000"};
  double duration{40.0};  // s
  double frame_rate{2.0};  // Hz
  int key_frame_stride{1};
  int history_depth{20};  // K; key frames start once K prior frames exist
  double ego_speed{8.0};
  double ego_heading{0.0};
  double spawn_extent{60.0};  // m beyond the ego route on either end

  ClassProfile vehicle{14, 4.0, 14.0, {4.5, 1.8, 1.6}, 0.0};
  ClassProfile pedestrian{8, 0.5, 1.8, {0.6, 0.6, 1.7}, 0.2};
  ClassProfile bike{4, 3.0, 7.0, {1.7, 0.6, 1.5}, 0.0};
  ClassProfile others{3, 0.0, 0.0, {0.8, 0.8, 1.0}, 1.0};

  double segment_min_duration{8.0};  // s
  double segment_max_duration{16.0};
  double max_speed_change{1.5};  // m/s between segments
  double max_heading_offset{0.012};  // rad from the lane heading

  DetectorStubConfig detector;

  /// Throws ConfigError, including when the scene is too short for one key
  /// frame with full history.
  void validate() const;
  int frame_count() const;
  bool is_key_frame(std::int64_t frame_index) const;
};

/// Piecewise-constant velocity leg starting at `t_start`.
struct TrajectorySegment
{
  double t_start{0.0};
  double speed{0.0};
  double heading{0.0};
};

struct GroundTruthObject
{
  std::string object_key;
  ObjectClass cls{ObjectClass::Vehicle};
  Vec3 size;
  Vec2 start;  // world position at t = 0
  std::vector<TrajectorySegment> segments;  // sorted, first starts at 0
  double alive_from{0.0};
  double alive_until{0.0};

  /// Continuous world pose; yaw follows the active segment's heading.
  Pose2 pose_at(double t) const;
  bool alive_at(double t) const { return t >= alive_from && t <= alive_until; }
};

Pose2 ego_pose_at(const SceneConfig & config, double t);

/// Object census with trajectories, deterministic in config.seed.
std::vector<GroundTruthObject> generate_ground_truth(const SceneConfig & config);

/// Full scene: per-frame ego pose, ground truth and noisy stub detections.
FrameLog generate_scene(const SceneConfig & config);

struct AttackConfig
{
  ObjectClass target_class{ObjectClass::Vehicle};
  double distance_min{5.0};  // planar range from the ego origin
  double distance_max{8.0};
  double lateral_jitter{1.0};
  /// Frame indices to attack in every scene; empty means all key frames.
  std::vector<std::int64_t> frames;
  int duration_frames{1};
  int point_budget{200};
  double p_asr{0.97};
  std::optional<Vec3> ghost_size;  // class prior when unset
  Vec2 ghost_velocity;  // world frame, only matters for multi-frame attacks

  void validate() const;
};

/// Default ghost footprint per class.
Vec3 ghost_size_prior(ObjectClass cls);

/// Appends ghost detections to the targeted frames. Ground truth and the
/// existing detections are left untouched; every targeted frame gets an
/// AttackRecord whether or not the spoof succeeded.
FrameLog inject_attack(const FrameLog & log, const AttackConfig & attack, std::uint64_t seed);

}  // namespace tc3d

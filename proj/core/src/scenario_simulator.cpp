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

#include "tc3d/simulation/scenario_simulator.hpp"

#include "tc3d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>

namespace tc3d
{
namespace
{

constexpr double kPi = std::numbers::pi;

bool probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void validate_profile(const ClassProfile & p, const char * name)
{
  const std::string where = std::string("/simulator/census/") + name;
  if (p.count < 0) throw ConfigError("count must be >= 0", where);
  if (!(p.speed_min >= 0.0 && p.speed_max >= p.speed_min && std::isfinite(p.speed_max))) {
    throw ConfigError("speed range must satisfy 0 <= min <= max", where);
  }
  if (!(p.size.x > 0.0 && p.size.y > 0.0 && p.size.z > 0.0) || !std::isfinite(p.size.x) ||
      !std::isfinite(p.size.y) || !std::isfinite(p.size.z)) {
    throw ConfigError("sizes must be finite and > 0", where);
  }
  if (!probability(p.parked_fraction)) throw ConfigError("parked_fraction must be in [0, 1]", where);
}

class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi)
  {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }
  bool coin() { return bernoulli(0.5); }

private:
  std::mt19937_64 engine_;
};

std::string make_key(const char * prefix, int i)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%04d", prefix, i);
  return buf;
}

struct Lane
{
  double y;
  double heading;  // 0 or pi, lane coordinates
};

Lane pick_lane(ObjectClass cls, bool parked, Rng & rng)
{
  const double side = rng.coin() ? 1.0 : -1.0;
  const double heading = rng.coin() ? 0.0 : kPi;
  switch (cls) {
    case ObjectClass::Vehicle:
      if (parked) return {side * 10.5, heading};
      // Near lanes run with the ego vehicle, far lanes against it.
      return rng.coin() ? Lane{side * 3.5, 0.0} : Lane{side * 7.0, kPi};
    case ObjectClass::Pedestrian:
      return {side * rng.uniform(12.0, 14.0), heading};
    case ObjectClass::Bike:
      return {side * 5.25, heading};
    default:
      return {side * rng.uniform(9.0, 11.0), heading};
  }
}

}  // namespace

void DetectorStubConfig::validate() const
{
  if (!std::isfinite(position_sigma) || position_sigma < 0.0) {
    throw ConfigError("position_sigma must be >= 0", "/simulator/detector/position_sigma");
  }
  if (!std::isfinite(yaw_sigma) || yaw_sigma < 0.0) {
    throw ConfigError("yaw_sigma must be >= 0", "/simulator/detector/yaw_sigma");
  }
  if (!probability(drop_probability)) {
    throw ConfigError("drop_probability must be in [0, 1]", "/simulator/detector/drop_probability");
  }
  if (!probability(p_asr)) throw ConfigError("p_asr must be in [0, 1]", "/simulator/detector/p_asr");
  if (!std::isfinite(detection_range) || detection_range <= 0.0) {
    throw ConfigError("detection_range must be > 0", "/simulator/detector/detection_range");
  }
}

int SceneConfig::frame_count() const
{
  return static_cast<int>(std::floor(duration * frame_rate + 1e-9));
}

bool SceneConfig::is_key_frame(std::int64_t frame_index) const
{
  return frame_index >= history_depth && (frame_index - history_depth) % key_frame_stride == 0;
}

void SceneConfig::validate() const
{
  if (!std::isfinite(frame_rate) || frame_rate <= 0.0) {
    throw ConfigError("frame_rate must be > 0", "/simulator/frame_rate");
  }
  if (!std::isfinite(duration) || duration <= 0.0) {
    throw ConfigError("duration must be > 0", "/simulator/duration");
  }
  if (key_frame_stride < 1) throw ConfigError("key_frame_stride must be >= 1", "/simulator/key_frame_stride");
  if (history_depth < 2) throw ConfigError("history depth K must be >= 2", "/predictor/history_depth");
  if (frame_count() < history_depth + 1) {
    throw ConfigError(
      "duration * frame_rate = " + std::to_string(frame_count()) +
        " frames, need at least K + 1 = " + std::to_string(history_depth + 1),
      "/simulator/duration");
  }
  if (!std::isfinite(ego_speed) || ego_speed < 0.0) throw ConfigError("ego_speed must be >= 0", "/simulator/ego_speed");
  if (!std::isfinite(ego_heading)) throw ConfigError("ego_heading must be finite", "/simulator/ego_heading");
  if (!std::isfinite(spawn_extent) || spawn_extent < 0.0) {
    throw ConfigError("spawn_extent must be >= 0", "/simulator/spawn_extent");
  }
  validate_profile(vehicle, "vehicle");
  validate_profile(pedestrian, "pedestrian");
  validate_profile(bike, "bike");
  validate_profile(others, "others");
  if (!(segment_min_duration > 0.0 && segment_max_duration >= segment_min_duration) ||
      !std::isfinite(segment_max_duration)) {
    throw ConfigError("segment durations must satisfy 0 < min <= max", "/simulator/segment_min_duration");
  }
  if (!std::isfinite(max_speed_change) || max_speed_change < 0.0) {
    throw ConfigError("max_speed_change must be >= 0", "/simulator/max_speed_change");
  }
  if (!std::isfinite(max_heading_offset) || max_heading_offset < 0.0) {
    throw ConfigError("max_heading_offset must be >= 0", "/simulator/max_heading_offset");
  }
  detector.validate();
}

Pose2 GroundTruthObject::pose_at(double t) const
{
  double x = start.x;
  double y = start.y;
  double yaw = segments.empty() ? 0.0 : segments.front().heading;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto & seg = segments[i];
    if (t < seg.t_start) break;
    const double end = i + 1 < segments.size() ? std::min(t, segments[i + 1].t_start) : t;
    const double dt = end - seg.t_start;
    x += seg.speed * dt * std::cos(seg.heading);
    y += seg.speed * dt * std::sin(seg.heading);
    yaw = seg.heading;
  }
  return {x, y, normalize_angle(yaw)};
}

Pose2 ego_pose_at(const SceneConfig & config, double t)
{
  const double d = config.ego_speed * t;
  return {d * std::cos(config.ego_heading), d * std::sin(config.ego_heading),
          normalize_angle(config.ego_heading)};
}

std::vector<GroundTruthObject> generate_ground_truth(const SceneConfig & config)
{
  config.validate();
  Rng rng(config.seed);
  const double route = config.ego_speed * config.duration;
  const double c = std::cos(config.ego_heading);
  const double s = std::sin(config.ego_heading);

  std::vector<GroundTruthObject> objects;
  const auto spawn = [&](const ClassProfile & profile, ObjectClass cls, const char * prefix) {
    for (int i = 0; i < profile.count; ++i) {
      GroundTruthObject obj;
      obj.object_key = make_key(prefix, i);
      obj.cls = cls;
      obj.size = profile.size;
      obj.alive_from = 0.0;
      obj.alive_until = config.duration;
      const bool parked = profile.speed_max <= 0.0 || rng.bernoulli(profile.parked_fraction);
      const Lane lane = pick_lane(cls, parked, rng);
      const double lane_x = rng.uniform(-config.spawn_extent, route + config.spawn_extent);

      // Segments are built in lane coordinates, then rotated by the route heading.
      double speed = parked ? 0.0 : rng.uniform(profile.speed_min, profile.speed_max);
      double lateral = 0.0;
      double t = 0.0;
      while (t < config.duration) {
        double offset = 0.0;
        if (speed > 0.0 && config.max_heading_offset > 0.0) {
          const double magnitude = rng.uniform(0.0, config.max_heading_offset);
          // Steer back toward the lane center.
          const double toward = lateral > 0.0 ? -1.0 : 1.0;
          offset = toward * std::cos(lane.heading) * magnitude;
        }
        const double heading = lane.heading + offset;
        const double length = rng.uniform(config.segment_min_duration, config.segment_max_duration);
        obj.segments.push_back({t, speed, normalize_angle(heading + config.ego_heading)});
        lateral += speed * std::sin(heading) * length;
        t += length;
        if (!parked) {
          speed = std::clamp(
            speed + rng.uniform(-config.max_speed_change, config.max_speed_change), profile.speed_min,
            profile.speed_max);
        }
      }
      obj.start = {c * lane_x - s * lane.y, s * lane_x + c * lane.y};
      objects.push_back(std::move(obj));
    }
  };
  spawn(config.vehicle, ObjectClass::Vehicle, "veh");
  spawn(config.pedestrian, ObjectClass::Pedestrian, "ped");
  spawn(config.bike, ObjectClass::Bike, "bik");
  spawn(config.others, ObjectClass::Others, "oth");
  return objects;
}

FrameLog generate_scene(const SceneConfig & config)
{
  const auto objects = generate_ground_truth(config);
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  const auto & det = config.detector;

  FrameLog log;
  const int n = config.frame_count();
  log.frames.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Frame frame;
    frame.scene_id = config.scene_id;
    frame.frame_index = i;
    frame.is_key_frame = config.is_key_frame(i);
    frame.timestamp = i / config.frame_rate;
    frame.ego_pose = ego_pose_at(config, frame.timestamp);

    for (const auto & obj : objects) {
      if (!obj.alive_at(frame.timestamp)) continue;
      const Pose2 world = obj.pose_at(frame.timestamp);
      frame.ground_truth.push_back({obj.object_key, obj.cls, world, obj.size});

      const Pose2 rel = ego_transform(world, frame.ego_pose);
      // Draw every variate unconditionally so the stream does not depend on outcomes.
      const bool dropped = rng.bernoulli(det.drop_probability);
      const double nx = rng.normal();
      const double ny = rng.normal();
      const double nyaw = rng.normal();
      const double confidence = rng.uniform(0.5, 1.0);
      if (std::hypot(rel.x, rel.y) > det.detection_range || dropped) continue;

      Detection d;
      d.detection_id = obj.object_key;
      d.cls = obj.cls;
      d.box.center = {rel.x + det.position_sigma * nx, rel.y + det.position_sigma * ny, 0.5 * obj.size.z};
      d.box.size = obj.size;
      d.box.yaw = normalize_angle(rel.yaw + det.yaw_sigma * nyaw);
      d.confidence = confidence;
      d.provenance = Provenance::Simulated;
      frame.detections.push_back(std::move(d));
    }
    log.frames.push_back(std::move(frame));
  }
  return log;
}

void AttackConfig::validate() const
{
  if (target_class == ObjectClass::Background || target_class == ObjectClass::Others) {
    throw ConfigError("target_class must be Vehicle, Pedestrian or Bike", "/attack/target_class");
  }
  if (!(std::isfinite(distance_min) && std::isfinite(distance_max) && distance_min > 0.0 &&
        distance_max >= distance_min)) {
    throw ConfigError("distance range must satisfy 0 < min <= max", "/attack/distance_min");
  }
  if (!std::isfinite(lateral_jitter) || lateral_jitter < 0.0 || lateral_jitter >= distance_min) {
    throw ConfigError("lateral_jitter must be in [0, distance_min)", "/attack/lateral_jitter");
  }
  if (duration_frames < 1) throw ConfigError("duration_frames must be >= 1", "/attack/duration_frames");
  if (point_budget < 0 || point_budget > 200) {
    throw ConfigError("point_budget must be in [0, 200]", "/attack/point_budget");
  }
  if (!probability(p_asr)) throw ConfigError("p_asr must be in [0, 1]", "/simulator/detector/p_asr");
  if (ghost_size && !(ghost_size->x > 0.0 && ghost_size->y > 0.0 && ghost_size->z > 0.0)) {
    throw ConfigError("ghost sizes must be > 0", "/attack/ghost_size");
  }
}

Vec3 ghost_size_prior(ObjectClass cls)
{
  switch (cls) {
    case ObjectClass::Vehicle:
      return {4.5, 1.8, 1.6};
    case ObjectClass::Pedestrian:
      return {0.6, 0.6, 1.7};
    case ObjectClass::Bike:
      return {1.7, 0.6, 1.5};
    default:
      return {1.0, 1.0, 1.0};
  }
}

FrameLog inject_attack(const FrameLog & input, const AttackConfig & attack, std::uint64_t seed)
{
  attack.validate();
  validate_frame_log(input);
  FrameLog log = input;
  Rng rng(seed);
  const Vec3 size = attack.ghost_size.value_or(ghost_size_prior(attack.target_class));
  const std::string cls_name(to_string(attack.target_class));

  for (auto scene : split_scenes(log)) {
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < scene.size(); ++i) {
      const auto & f = scene[i];
      const bool wanted =
        attack.frames.empty()
          ? f.is_key_frame
          : std::find(attack.frames.begin(), attack.frames.end(), f.frame_index) != attack.frames.end();
      if (wanted) targets.push_back(i);
    }
    if (!attack.frames.empty() && targets.size() != attack.frames.size()) {
      throw DataError(
        "scene '" + std::string(scene.front().scene_id) + "' lacks some of the requested attack frames");
    }

    std::set<std::string> seen_ids;
    std::set<std::size_t> covered;  // frames already carrying a ghost from this run
    std::size_t scanned = 0;
    for (const auto target : targets) {
      if (covered.count(target) != 0) continue;
      for (; scanned < target; ++scanned) {
        for (const auto & d : scene[scanned].detections) seen_ids.insert(d.detection_id);
        for (const auto & g : scene[scanned].ground_truth) seen_ids.insert(g.object_key);
      }
      auto & frame = scene[target];
      if (frame.attack) {
        throw DataError(
          "frame " + std::to_string(frame.frame_index) + " of scene '" + frame.scene_id +
          "' is already attacked");
      }
      const bool success = rng.bernoulli(attack.p_asr);
      const double range = rng.uniform(attack.distance_min, attack.distance_max);
      const double lateral = rng.uniform(-attack.lateral_jitter, attack.lateral_jitter);

      AttackRecord record;
      record.target_class = attack.target_class;
      record.point_budget = attack.point_budget;
      record.spoof_succeeded = success;
      if (success) {
        std::string id = "ghost-" + cls_name + "-" + frame.scene_id + "-" + std::to_string(frame.frame_index);
        for (int suffix = 1; seen_ids.count(id) != 0 ||
                             std::any_of(frame.detections.begin(), frame.detections.end(),
                                         [&](const Detection & d) { return d.detection_id == id; });
             ++suffix) {
          id += "-" + std::to_string(suffix);
        }
        const Pose2 ghost_rel{std::sqrt(range * range - lateral * lateral), lateral, 0.0};
        const Pose2 ghost_world = ego_to_world(ghost_rel, frame.ego_pose);

        for (int k = 0; k < attack.duration_frames && target + k < scene.size(); ++k) {
          auto & f = scene[target + k];
          if (k > 0 && f.attack) break;
          const double dt = f.timestamp - frame.timestamp;
          const Pose2 world{
            ghost_world.x + attack.ghost_velocity.x * dt, ghost_world.y + attack.ghost_velocity.y * dt,
            ghost_world.yaw};
          const Pose2 rel = ego_transform(world, f.ego_pose);
          Detection d;
          d.detection_id = id;
          d.cls = attack.target_class;
          d.box.center = {rel.x, rel.y, 0.5 * size.z};
          d.box.size = size;
          d.box.yaw = rel.yaw;
          d.confidence = 0.8;
          d.provenance = Provenance::Injected;
          f.detections.push_back(std::move(d));
          AttackRecord r = record;
          r.injected_ids = {id};
          r.distance = std::hypot(rel.x, rel.y);
          f.attack = std::move(r);
          covered.insert(target + k);
        }
      } else {
        frame.attack = std::move(record);
      }
    }
  }
  return log;
}

}  // namespace tc3d

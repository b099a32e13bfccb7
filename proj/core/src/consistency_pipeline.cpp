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

#include "tc3d/pipeline/consistency_pipeline.hpp"

#include "tc3d/errors.hpp"

#include <algorithm>
#include <chrono>
#include <future>

namespace tc3d
{
namespace
{
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}
}  // namespace

void PipelineConfig::validate() const
{
  tracks.validate();
  render.kf.validate();
  alignment.validate();
  if (render.min_observations < 2) {
    throw ConfigError("min_observations must be >= 2", "/predictor/min_observations");
  }
  if (render.cv.smoothing_window < 2) {
    throw ConfigError("smoothing_window must be >= 2", "/predictor/smoothing_window");
  }
}

ScenePipeline::ScenePipeline(PipelineConfig config)
: config_(std::move(config)), store_(config_.tracks), map_(config_.grid)
{
  config_.validate();
}

std::vector<Observation> ScenePipeline::observations_of(const Frame & frame) const
{
  std::vector<Observation> out;
  if (config_.source == PredictorSource::Detections) {
    out.reserve(frame.detections.size());
    for (const auto & d : frame.detections) {
      Pose2 pose{d.box.center.x, d.box.center.y, d.box.yaw};
      if (config_.ego_compensation) pose = ego_to_world(pose, frame.ego_pose);
      out.push_back(
        {frame.frame_index, frame.timestamp, pose, d.box.size.x, d.box.size.y, d.cls, d.detection_id});
    }
  } else {
    out.reserve(frame.ground_truth.size());
    for (const auto & g : frame.ground_truth) {
      if (g.cls == ObjectClass::Background) continue;
      const Pose2 pose = config_.ego_compensation ? g.pose : ego_transform(g.pose, frame.ego_pose);
      out.push_back({frame.frame_index, frame.timestamp, pose, g.size.x, g.size.y, g.cls, g.object_key});
    }
  }
  return out;
}

std::optional<FrameVerdicts> ScenePipeline::process(const Frame & frame, StageTimings * timings)
{
  const auto start = Clock::now();
  StageTimings local;
  std::optional<FrameVerdicts> result;

  if (frame.is_key_frame) {
    FrameVerdicts fv;
    fv.scene_id = frame.scene_id;
    fv.frame_index = frame.frame_index;
    fv.timestamp = frame.timestamp;
    fv.insufficient_history = frames_seen_ < config_.tracks.history_depth;

    auto t0 = Clock::now();
    RenderOptions render = config_.render;
    if (config_.ego_compensation) render.target_ego_pose = frame.ego_pose;
    if (!fv.insufficient_history) render_prediction_into(store_, frame.timestamp, render, map_);
    local.prediction += seconds_since(t0);

    t0 = Clock::now();
    aligned_ = align(frame.detections, config_.grid, config_.alignment);
    local.alignment = seconds_since(t0);

    t0 = Clock::now();
    fv.verdicts.reserve(aligned_.size());
    for (const auto & a : aligned_) {
      VerdictRecord rec;
      if (fv.insufficient_history) {
        rec.verdict.detection_id = a.detection.detection_id;
        rec.verdict.detected_class = a.detection.cls;
        rec.verdict.decision = Decision::Unverifiable;
      } else {
        rec.verdict = cmcs(a, map_, config_.cmcs);
      }
      rec.region = a.region;
      rec.provenance = a.detection.provenance;
      fv.verdicts.push_back(std::move(rec));
    }
    local.detection = seconds_since(t0);
    result = std::move(fv);
  }

  const auto t0 = Clock::now();
  const auto observations = observations_of(frame);
  store_.ingest_frame(frame.frame_index, observations, config_.association);
  ++frames_seen_;
  local.prediction += seconds_since(t0);

  local.total = seconds_since(start);
  if (timings) *timings = local;
  return result;
}

std::vector<FrameVerdicts> check_scene(std::span<const Frame> scene, const PipelineConfig & config)
{
  ScenePipeline pipeline(config);
  std::vector<FrameVerdicts> out;
  for (const auto & frame : scene) {
    if (auto v = pipeline.process(frame)) out.push_back(std::move(*v));
  }
  return out;
}

std::vector<FrameVerdicts> check_log(const FrameLog & log, const PipelineConfig & config, int jobs)
{
  config.validate();
  validate_frame_log(log);
  const auto scenes = split_scenes(log);
  std::vector<std::vector<FrameVerdicts>> per_scene(scenes.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t begin = 0; begin < scenes.size(); begin += workers) {
    std::vector<std::future<std::vector<FrameVerdicts>>> batch;
    const std::size_t end = std::min(scenes.size(), begin + workers);
    for (std::size_t i = begin; i < end; ++i) {
      if (workers == 1) {
        per_scene[i] = check_scene(scenes[i], config);
      } else {
        batch.push_back(std::async(std::launch::async, [&, i] { return check_scene(scenes[i], config); }));
      }
    }
    for (std::size_t k = 0; k < batch.size(); ++k) per_scene[begin + k] = batch[k].get();
  }
  std::vector<FrameVerdicts> out;
  for (auto & v : per_scene) {
    std::move(v.begin(), v.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace tc3d

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
#include "tc3d/detection/cmcs.hpp"
#include "tc3d/io/frame_log.hpp"
#include "tc3d/prediction/prediction_map.hpp"
#include "tc3d/prediction/track_store.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tc3d
{

/// What the motion predictor learns tracks from.
enum class PredictorSource {
  Detections,   // previous frames' detector output (default)
  GroundTruth,  // oracle histories from the log's ground truth
};

struct PipelineConfig
{
  GridSpec grid;
  TrackStoreConfig tracks;
  RenderOptions render;
  AssociationMode association{AssociationMode::ByKey};
  PredictorSource source{PredictorSource::Detections};
  /// Track in the world frame and re-express predictions in the key
  /// frame's ego pose. Off means histories stay in their own ego frames.
  bool ego_compensation{true};
  AlignmentOptions alignment;
  CmcsOptions cmcs;

  void validate() const;
};

struct VerdictRecord
{
  Verdict verdict;
  Region region{Region::Other};
  Provenance provenance{Provenance::Simulated};
};

/// Output of the check for one key frame.
struct FrameVerdicts
{
  std::string scene_id;
  std::int64_t frame_index{0};
  double timestamp{0.0};
  bool insufficient_history{false};
  std::vector<VerdictRecord> verdicts;
};

/// Wall-clock seconds spent per stage on one key frame.
struct StageTimings
{
  double prediction{0.0};  // rendering plus ingesting the frame into the track store
  double alignment{0.0};
  double detection{0.0};
  double total{0.0};
};

/// Sequential check of one scene. Frames must be fed in order; key frames
/// are checked against the prediction built from the frames before them.
class ScenePipeline
{
public:
  explicit ScenePipeline(PipelineConfig config);

  /// Returns verdicts for key frames, nullopt otherwise. Key frames with
  /// fewer than K prior frames get all-Unverifiable verdicts.
  std::optional<FrameVerdicts> process(const Frame & frame, StageTimings * timings = nullptr);

  const TrackStore & tracks() const noexcept { return store_; }
  /// Prediction rendered for the most recent key frame.
  const PredictedCellMap & last_prediction() const noexcept { return map_; }
  /// Aligned detections of the most recent key frame.
  const std::vector<AlignedDetection> & last_alignment() const noexcept { return aligned_; }

private:
  std::vector<Observation> observations_of(const Frame & frame) const;

  PipelineConfig config_;
  TrackStore store_;
  PredictedCellMap map_;
  std::vector<AlignedDetection> aligned_;
  std::int64_t frames_seen_{0};
};

std::vector<FrameVerdicts> check_scene(std::span<const Frame> scene, const PipelineConfig & config);

/// Checks every scene of `log`, up to `jobs` scenes concurrently. Output
/// order follows the log.
std::vector<FrameVerdicts> check_log(const FrameLog & log, const PipelineConfig & config, int jobs = 1);

}  // namespace tc3d

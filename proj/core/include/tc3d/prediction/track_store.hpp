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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tc3d
{

/// One sighting of an object. `pose` is in the world frame when ego-motion
/// compensation is on, otherwise in the ego frame of its own frame.
struct Observation
{
  std::int64_t frame_index{0};
  double timestamp{0.0};
  Pose2 pose;
  double length{0.0};
  double width{0.0};
  ObjectClass cls{ObjectClass::Others};
  std::string object_key;
};

struct Track
{
  std::string object_key;
  ObjectClass cls{ObjectClass::Others};
  std::vector<Observation> observations;  // time-ordered, oldest first
  std::int64_t last_frame_index{0};

  const Observation & last() const { return observations.back(); }
};

enum class AssociationMode {
  ByKey,            // object_key identifies the track (simulator ids)
  NearestNeighbor,  // greedy gated matching for ingested logs
};

struct TrackStoreConfig
{
  int history_depth{20};  // K
  int max_coast{2};
  double gating_radius{2.0};

  /// Throws ConfigError on K < 2, negative coast or a non-positive gate.
  void validate() const;
};

/// Per-scene motion histories. Single writer: frames must arrive in
/// strictly increasing frame_index order.
class TrackStore
{
public:
  explicit TrackStore(TrackStoreConfig config = {});

  /// Appends one frame worth of observations. All observations must share
  /// `frame_index`, which must exceed every frame already ingested
  /// (OrderingError otherwise). Evicts observations older than K frames and
  /// tracks that went unseen for more than max_coast frames.
  void ingest_frame(
    std::int64_t frame_index, std::span<const Observation> observations, AssociationMode mode);

  const std::map<std::string, Track> & tracks() const noexcept { return tracks_; }
  const TrackStoreConfig & config() const noexcept { return config_; }
  std::int64_t frames_ingested() const noexcept { return frames_ingested_; }
  std::optional<std::int64_t> last_frame_index() const noexcept { return last_frame_; }

private:
  void associate_by_key(std::int64_t frame_index, std::span<const Observation> observations);
  void associate_nearest(std::int64_t frame_index, std::span<const Observation> observations);
  void append(Track & track, const Observation & obs, std::int64_t frame_index);
  std::string next_track_key();
  void evict(std::int64_t frame_index);

  TrackStoreConfig config_;
  std::map<std::string, Track> tracks_;
  std::optional<std::int64_t> last_frame_;
  std::int64_t frames_ingested_{0};
  std::uint64_t generated_keys_{0};
};

}  // namespace tc3d

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

#include "tc3d/prediction/track_store.hpp"

#include "tc3d/errors.hpp"
#include "tc3d/prediction/kinematic_predictors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace tc3d
{

void TrackStoreConfig::validate() const
{
  if (history_depth < 2) {
    throw ConfigError("history_depth must be >= 2, got " + std::to_string(history_depth));
  }
  if (max_coast < 0) {
    throw ConfigError("max_coast must be >= 0, got " + std::to_string(max_coast));
  }
  if (!std::isfinite(gating_radius) || gating_radius <= 0.0) {
    throw ConfigError("gating_radius must be finite and > 0");
  }
}

TrackStore::TrackStore(TrackStoreConfig config) : config_(config) { config_.validate(); }

void TrackStore::ingest_frame(
  std::int64_t frame_index, std::span<const Observation> observations, AssociationMode mode)
{
  if (last_frame_ && frame_index <= *last_frame_) {
    throw OrderingError(
      "frame " + std::to_string(frame_index) + " is not after already ingested frame " +
      std::to_string(*last_frame_));
  }
  for (const auto & obs : observations) {
    if (obs.frame_index != frame_index) {
      throw OrderingError(
        "observation '" + obs.object_key + "' belongs to frame " + std::to_string(obs.frame_index) +
        ", expected " + std::to_string(frame_index));
    }
    if (obs.cls == ObjectClass::Background) {
      throw DataError("observation '" + obs.object_key + "' has class Background");
    }
  }

  if (mode == AssociationMode::ByKey) {
    associate_by_key(frame_index, observations);
  } else {
    associate_nearest(frame_index, observations);
  }
  last_frame_ = frame_index;
  ++frames_ingested_;
  evict(frame_index);
}

void TrackStore::append(Track & track, const Observation & obs, std::int64_t frame_index)
{
  if (!track.observations.empty() && obs.timestamp <= track.last().timestamp) {
    throw OrderingError("timestamps of track '" + track.object_key + "' are not increasing");
  }
  track.observations.push_back(obs);
  track.cls = obs.cls;
  track.last_frame_index = frame_index;
}

void TrackStore::associate_by_key(
  std::int64_t frame_index, std::span<const Observation> observations)
{
  for (const auto & obs : observations) {
    auto [it, inserted] = tracks_.try_emplace(obs.object_key);
    if (inserted) it->second.object_key = obs.object_key;
    append(it->second, obs, frame_index);
  }
}

void TrackStore::associate_nearest(
  std::int64_t frame_index, std::span<const Observation> observations)
{
  struct Candidate
  {
    double distance;
    std::size_t obs;
    const std::string * key;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto & obs = observations[i];
    for (const auto & [key, track] : tracks_) {
      if (track.cls != obs.cls || track.observations.empty()) continue;
      Vec2 expected{track.last().pose.x, track.last().pose.y};
      if (track.observations.size() >= 2 && obs.timestamp > track.last().timestamp) {
        const auto p = predict_cv(track, obs.timestamp);
        expected = {p.pose.x, p.pose.y};
      }
      const double d = std::hypot(obs.pose.x - expected.x, obs.pose.y - expected.y);
      if (d <= config_.gating_radius) candidates.push_back({d, i, &key});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate & a, const Candidate & b) {
    return std::tie(a.distance, a.obs, *a.key) < std::tie(b.distance, b.obs, *b.key);
  });

  std::vector<bool> obs_taken(observations.size(), false);
  std::vector<const std::string *> tracks_taken;
  for (const auto & c : candidates) {
    if (obs_taken[c.obs]) continue;
    if (std::find(tracks_taken.begin(), tracks_taken.end(), c.key) != tracks_taken.end()) continue;
    obs_taken[c.obs] = true;
    tracks_taken.push_back(c.key);
    append(tracks_.at(*c.key), observations[c.obs], frame_index);
  }
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (obs_taken[i]) continue;
    const auto key = next_track_key();
    auto & track = tracks_[key];
    track.object_key = key;
    append(track, observations[i], frame_index);
  }
}

std::string TrackStore::next_track_key()
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trk-%08llu", static_cast<unsigned long long>(generated_keys_++));
  return buf;
}

void TrackStore::evict(std::int64_t frame_index)
{
  const std::int64_t oldest_kept = frame_index - config_.history_depth + 1;
  for (auto it = tracks_.begin(); it != tracks_.end();) {
    auto & obs = it->second.observations;
    obs.erase(
      obs.begin(), std::find_if(obs.begin(), obs.end(), [&](const Observation & o) {
        return o.frame_index >= oldest_kept;
      }));
    const bool stale = frame_index - it->second.last_frame_index > config_.max_coast;
    if (obs.empty() || stale) {
      it = tracks_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace tc3d

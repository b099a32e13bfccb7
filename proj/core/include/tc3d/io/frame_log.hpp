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
#include "tc3d/geometry/bev_geometry.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tc3d
{

using Json = nlohmann::ordered_json;

inline constexpr int kFrameLogSchemaVersion = 1;

/// Ground-truth state of one object at one frame (world frame).
struct GroundTruthState
{
  std::string object_key;
  ObjectClass cls{ObjectClass::Vehicle};
  Pose2 pose;
  Vec3 size;  // length, width, height
};

/// Attack bookkeeping attached to a frame the injector targeted.
struct AttackRecord
{
  ObjectClass target_class{ObjectClass::Vehicle};
  bool spoof_succeeded{false};
  std::vector<std::string> injected_ids;
  int point_budget{200};
  double distance{0.0};  // planar range of the ghost center, 0 when not injected
};

struct Frame
{
  int schema_version{kFrameLogSchemaVersion};
  std::string scene_id;
  std::int64_t frame_index{0};
  bool is_key_frame{false};
  double timestamp{0.0};
  Pose2 ego_pose;
  std::vector<GroundTruthState> ground_truth;
  std::vector<Detection> detections;
  std::optional<AttackRecord> attack;

  // Unknown fields, carried through a read/write round trip untouched.
  Json extra = Json::object();
  std::map<std::string, Json> ground_truth_extra;  // by object_key
  std::map<std::string, Json> detection_extra;     // by detection_id

  bool operator==(const Frame &) const;
};

/// One log file: frames of one or more scenes, each scene contiguous with
/// strictly increasing frame_index.
struct FrameLog
{
  std::vector<Frame> frames;

  bool operator==(const FrameLog &) const = default;
};

/// Contiguous per-scene views into `log.frames`, in file order.
std::vector<std::span<const Frame>> split_scenes(const FrameLog & log);
std::vector<std::span<Frame>> split_scenes(FrameLog & log);

Json frame_to_json(const Frame & frame);

/// Throws DataError (without line information) on schema violations.
Frame frame_from_json(const Json & record);

/// Checks the ordering invariants; throws DataError naming the line
/// (1-based record position) of the first violation.
void validate_frame_log(const FrameLog & log);

void write_frame_log(std::ostream & out, const FrameLog & log);
std::string frame_log_to_string(const FrameLog & log);

/// Parses newline-delimited records. Blank lines are skipped; errors carry
/// the 1-based line number.
FrameLog read_frame_log(std::istream & in);

FrameLog load_frame_log(const std::string & path);
void save_frame_log(const std::string & path, const FrameLog & log);

}  // namespace tc3d

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

#include "tc3d/io/frame_log.hpp"

#include "tc3d/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tc3d
{
namespace
{

const Json & require(const Json & obj, const char * key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const Json & obj, const char * key, const std::string & where)
{
  const auto & v = require(obj, key, where);
  if (!v.is_number()) throw DataError(where + ": field '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw DataError(where + ": field '" + key + "' must be finite");
  return d;
}

std::string text(const Json & obj, const char * key, const std::string & where)
{
  const auto & v = require(obj, key, where);
  if (!v.is_string()) throw DataError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

ObjectClass object_class(const Json & obj, const char * key, const std::string & where)
{
  const auto name = text(obj, key, where);
  const auto cls = parse_object_class(name);
  if (!cls) throw DataError(where + ": unknown object class '" + name + "'");
  return *cls;
}

Json collect_unknown(const Json & obj, std::initializer_list<const char *> known)
{
  Json extra = Json::object();
  for (const auto & [key, value] : obj.items()) {
    bool is_known = false;
    for (const char * k : known) is_known = is_known || key == k;
    if (!is_known) extra[key] = value;
  }
  return extra;
}

void merge_extra(Json & obj, const Json & extra)
{
  for (const auto & [key, value] : extra.items()) obj[key] = value;
}

Json pose_to_json(const Pose2 & p) { return Json{{"x", p.x}, {"y", p.y}, {"yaw", p.yaw}}; }

Pose2 pose_from_json(const Json & j, const std::string & where)
{
  if (!j.is_object()) throw DataError(where + " must be an object");
  return {number(j, "x", where), number(j, "y", where), number(j, "yaw", where)};
}

}  // namespace

bool Frame::operator==(const Frame & other) const
{
  return frame_to_json(*this) == frame_to_json(other);
}

Json frame_to_json(const Frame & frame)
{
  Json j;
  j["schema_version"] = frame.schema_version;
  j["scene_id"] = frame.scene_id;
  j["frame_index"] = frame.frame_index;
  j["is_key_frame"] = frame.is_key_frame;
  j["timestamp"] = frame.timestamp;
  j["ego_pose"] = pose_to_json(frame.ego_pose);

  Json gt = Json::array();
  for (const auto & g : frame.ground_truth) {
    Json o;
    o["object_key"] = g.object_key;
    o["class"] = std::string(to_string(g.cls));
    o["pose"] = pose_to_json(g.pose);
    o["size"] = Json{{"l", g.size.x}, {"w", g.size.y}, {"h", g.size.z}};
    if (const auto it = frame.ground_truth_extra.find(g.object_key);
        it != frame.ground_truth_extra.end()) {
      merge_extra(o, it->second);
    }
    gt.push_back(std::move(o));
  }
  j["ground_truth"] = std::move(gt);

  Json dets = Json::array();
  for (const auto & d : frame.detections) {
    Json o;
    o["detection_id"] = d.detection_id;
    o["class"] = std::string(to_string(d.cls));
    o["box3d"] = Json{
      {"cx", d.box.center.x}, {"cy", d.box.center.y}, {"cz", d.box.center.z}, {"l", d.box.size.x},
      {"w", d.box.size.y},    {"h", d.box.size.z},    {"yaw", d.box.yaw}};
    o["confidence"] = d.confidence;
    o["provenance"] = std::string(to_string(d.provenance));
    if (const auto it = frame.detection_extra.find(d.detection_id);
        it != frame.detection_extra.end()) {
      merge_extra(o, it->second);
    }
    dets.push_back(std::move(o));
  }
  j["detections"] = std::move(dets);

  if (frame.attack) {
    const auto & a = *frame.attack;
    j["attack"] = Json{
      {"target_class", std::string(to_string(a.target_class))},
      {"spoof_succeeded", a.spoof_succeeded},
      {"injected_ids", a.injected_ids},
      {"point_budget", a.point_budget},
      {"distance", a.distance}};
  }
  merge_extra(j, frame.extra);
  return j;
}

Frame frame_from_json(const Json & record)
{
  if (!record.is_object()) throw DataError("record must be a JSON object");
  Frame f;
  const auto & version = require(record, "schema_version", "record");
  if (!version.is_number_integer() || version.get<int>() != kFrameLogSchemaVersion) {
    throw DataError(
      "unsupported schema_version " + version.dump() + ", expected " +
      std::to_string(kFrameLogSchemaVersion));
  }
  f.schema_version = kFrameLogSchemaVersion;
  f.scene_id = text(record, "scene_id", "record");
  const auto & index = require(record, "frame_index", "record");
  if (!index.is_number_integer() || index.get<std::int64_t>() < 0) {
    throw DataError("record: frame_index must be a non-negative integer");
  }
  f.frame_index = index.get<std::int64_t>();
  const auto & key = require(record, "is_key_frame", "record");
  if (!key.is_boolean()) throw DataError("record: is_key_frame must be a boolean");
  f.is_key_frame = key.get<bool>();
  f.timestamp = number(record, "timestamp", "record");
  f.ego_pose = pose_from_json(require(record, "ego_pose", "record"), "ego_pose");

  const auto & gt = require(record, "ground_truth", "record");
  if (!gt.is_array()) throw DataError("record: ground_truth must be an array");
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const std::string where = "ground_truth[" + std::to_string(i) + "]";
    const auto & o = gt[i];
    if (!o.is_object()) throw DataError(where + " must be an object");
    GroundTruthState g;
    g.object_key = text(o, "object_key", where);
    g.cls = object_class(o, "class", where);
    g.pose = pose_from_json(require(o, "pose", where), where + ".pose");
    const auto & size = require(o, "size", where);
    g.size = {number(size, "l", where), number(size, "w", where), number(size, "h", where)};
    auto extra = collect_unknown(o, {"object_key", "class", "pose", "size"});
    if (!extra.empty()) f.ground_truth_extra[g.object_key] = std::move(extra);
    f.ground_truth.push_back(std::move(g));
  }

  const auto & dets = require(record, "detections", "record");
  if (!dets.is_array()) throw DataError("record: detections must be an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const std::string where = "detections[" + std::to_string(i) + "]";
    const auto & o = dets[i];
    if (!o.is_object()) throw DataError(where + " must be an object");
    Detection d;
    d.detection_id = text(o, "detection_id", where);
    if (!ids.insert(d.detection_id).second) {
      throw DataError(where + ": duplicate detection_id '" + d.detection_id + "'");
    }
    d.cls = object_class(o, "class", where);
    if (d.cls == ObjectClass::Background) throw DataError(where + ": class must not be Background");
    const auto & b = require(o, "box3d", where);
    const std::string bw = where + ".box3d";
    d.box.center = {number(b, "cx", bw), number(b, "cy", bw), number(b, "cz", bw)};
    d.box.size = {number(b, "l", bw), number(b, "w", bw), number(b, "h", bw)};
    d.box.yaw = number(b, "yaw", bw);
    if (!d.box.valid()) throw DataError(bw + ": box sizes must be > 0");
    d.confidence = number(o, "confidence", where);
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      throw DataError(where + ": confidence must be in [0, 1]");
    }
    const auto prov = text(o, "provenance", where);
    const auto parsed = parse_provenance(prov);
    if (!parsed) throw DataError(where + ": unknown provenance '" + prov + "'");
    d.provenance = *parsed;
    auto extra = collect_unknown(o, {"detection_id", "class", "box3d", "confidence", "provenance"});
    if (!extra.empty()) f.detection_extra[d.detection_id] = std::move(extra);
    f.detections.push_back(std::move(d));
  }

  if (const auto it = record.find("attack"); it != record.end() && !it->is_null()) {
    const auto & a = *it;
    if (!a.is_object()) throw DataError("record: attack must be an object");
    AttackRecord rec;
    rec.target_class = object_class(a, "target_class", "attack");
    const auto & ok = require(a, "spoof_succeeded", "attack");
    if (!ok.is_boolean()) throw DataError("attack: spoof_succeeded must be a boolean");
    rec.spoof_succeeded = ok.get<bool>();
    const auto & ids_json = require(a, "injected_ids", "attack");
    if (!ids_json.is_array()) throw DataError("attack: injected_ids must be an array");
    for (const auto & id : ids_json) {
      if (!id.is_string()) throw DataError("attack: injected_ids must hold strings");
      rec.injected_ids.push_back(id.get<std::string>());
    }
    const auto & budget = require(a, "point_budget", "attack");
    if (!budget.is_number_integer() || budget.get<int>() < 0) {
      throw DataError("attack: point_budget must be a non-negative integer");
    }
    rec.point_budget = budget.get<int>();
    rec.distance = a.contains("distance") ? number(a, "distance", "attack") : 0.0;
    f.attack = std::move(rec);
  }

  f.extra = collect_unknown(
    record, {"schema_version", "scene_id", "frame_index", "is_key_frame", "timestamp", "ego_pose",
             "ground_truth", "detections", "attack"});
  return f;
}

namespace
{
template <typename FrameT, typename LogT>
std::vector<std::span<FrameT>> split_impl(LogT & log)
{
  std::vector<std::span<FrameT>> scenes;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= log.frames.size(); ++i) {
    if (i == log.frames.size() || log.frames[i].scene_id != log.frames[begin].scene_id) {
      scenes.emplace_back(log.frames.data() + begin, i - begin);
      begin = i;
    }
  }
  return scenes;
}
}  // namespace

std::vector<std::span<const Frame>> split_scenes(const FrameLog & log)
{
  return split_impl<const Frame>(log);
}

std::vector<std::span<Frame>> split_scenes(FrameLog & log) { return split_impl<Frame>(log); }

void validate_frame_log(const FrameLog & log)
{
  std::set<std::string> finished;
  for (std::size_t i = 0; i < log.frames.size(); ++i) {
    const auto & f = log.frames[i];
    if (i > 0 && log.frames[i - 1].scene_id == f.scene_id) {
      if (f.frame_index <= log.frames[i - 1].frame_index) {
        throw DataError("frame_index must be strictly increasing within a scene", i + 1);
      }
      if (f.timestamp <= log.frames[i - 1].timestamp) {
        throw DataError("timestamp must be strictly increasing within a scene", i + 1);
      }
    } else {
      if (i > 0) finished.insert(log.frames[i - 1].scene_id);
      if (finished.count(f.scene_id) != 0) {
        throw DataError("scene '" + f.scene_id + "' is not contiguous", i + 1);
      }
    }
  }
}

void write_frame_log(std::ostream & out, const FrameLog & log)
{
  for (const auto & f : log.frames) out << frame_to_json(f).dump() << '\n';
}

std::string frame_log_to_string(const FrameLog & log)
{
  std::ostringstream out;
  write_frame_log(out, log);
  return out.str();
}

FrameLog read_frame_log(std::istream & in)
{
  FrameLog log;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const nlohmann::json::parse_error & e) {
      throw DataError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    try {
      log.frames.push_back(frame_from_json(record));
    } catch (const DataError & e) {
      throw DataError(e.what(), line_no);
    }
    line_of.push_back(line_no);
  }
  try {
    validate_frame_log(log);
  } catch (const DataError & e) {
    // validate_frame_log counts records; map back to physical lines.
    const auto record = e.line().value_or(1);
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    throw DataError(colon == std::string::npos ? msg : msg.substr(colon + 2), line_of.at(record - 1));
  }
  return log;
}

FrameLog load_frame_log(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw DataError("cannot open frame log '" + path + "'");
  return read_frame_log(in);
}

void save_frame_log(const std::string & path, const FrameLog & log)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write frame log '" + path + "'");
  write_frame_log(out, log);
  if (!out) throw DataError("failed writing frame log '" + path + "'");
}

}  // namespace tc3d

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

#include "tc3d/io/verdict_log.hpp"

#include "tc3d/errors.hpp"

#include <fstream>

namespace tc3d
{
namespace
{

template <typename T>
T field(const Json & obj, const char * key)
{
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception &) {
    throw DataError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename Enum, typename Parser>
Enum enum_field(const Json & obj, const char * key, Parser parse)
{
  const auto name = field<std::string>(obj, key);
  const auto value = parse(name);
  if (!value) throw DataError(std::string("field '") + key + "' has unknown value '" + name + "'");
  return *value;
}

std::optional<Region> parse_region(std::string_view name)
{
  if (name == "FrontNear") return Region::FrontNear;
  if (name == "FrontFar") return Region::FrontFar;
  if (name == "Other") return Region::Other;
  return std::nullopt;
}

}  // namespace

Json frame_verdicts_to_json(const FrameVerdicts & fv)
{
  Json j;
  j["schema_version"] = kVerdictSchemaVersion;
  j["scene_id"] = fv.scene_id;
  j["frame_index"] = fv.frame_index;
  j["timestamp"] = fv.timestamp;
  j["insufficient_history"] = fv.insufficient_history;
  Json list = Json::array();
  for (const auto & rec : fv.verdicts) {
    const auto & v = rec.verdict;
    Json counts = Json::object();
    for (const auto cls : kAllClasses) counts[std::string(to_string(cls))] = count_of(v.class_counts, cls);
    list.push_back(Json{
      {"detection_id", v.detection_id},
      {"detected_class", std::string(to_string(v.detected_class))},
      {"provenance", std::string(to_string(rec.provenance))},
      {"region", std::string(to_string(rec.region))},
      {"decision", std::string(to_string(v.decision))},
      {"plurality_class", std::string(to_string(v.plurality_class))},
      {"class_counts", std::move(counts)},
      {"footprint_cells", v.footprint_cells},
      {"matched_cells", v.matched_cells},
      {"match_fraction", v.match_fraction}});
  }
  j["verdicts"] = std::move(list);
  return j;
}

FrameVerdicts frame_verdicts_from_json(const Json & record)
{
  if (!record.is_object()) throw DataError("verdict record must be a JSON object");
  if (field<int>(record, "schema_version") != kVerdictSchemaVersion) {
    throw DataError("unsupported verdict schema_version");
  }
  FrameVerdicts fv;
  fv.scene_id = field<std::string>(record, "scene_id");
  fv.frame_index = field<std::int64_t>(record, "frame_index");
  fv.timestamp = field<double>(record, "timestamp");
  fv.insufficient_history = field<bool>(record, "insufficient_history");
  const auto it = record.find("verdicts");
  if (it == record.end() || !it->is_array()) throw DataError("field 'verdicts' must be an array");
  for (const auto & o : *it) {
    if (!o.is_object()) throw DataError("verdict entries must be objects");
    VerdictRecord rec;
    auto & v = rec.verdict;
    v.detection_id = field<std::string>(o, "detection_id");
    v.detected_class = enum_field<ObjectClass>(o, "detected_class", parse_object_class);
    rec.provenance = enum_field<Provenance>(o, "provenance", parse_provenance);
    rec.region = enum_field<Region>(o, "region", parse_region);
    v.decision = enum_field<Decision>(o, "decision", parse_decision);
    v.plurality_class = enum_field<ObjectClass>(o, "plurality_class", parse_object_class);
    const auto counts = o.find("class_counts");
    if (counts == o.end() || !counts->is_object()) throw DataError("field 'class_counts' must be an object");
    std::size_t sum = 0;
    for (const auto cls : kAllClasses) {
      const auto n = field<std::size_t>(*counts, std::string(to_string(cls)).c_str());
      v.class_counts[static_cast<std::size_t>(cls)] = n;
      sum += n;
    }
    v.footprint_cells = field<std::size_t>(o, "footprint_cells");
    v.matched_cells = field<std::size_t>(o, "matched_cells");
    v.match_fraction = field<double>(o, "match_fraction");
    if (sum != v.footprint_cells && v.decision != Decision::Unverifiable) {
      throw DataError("class_counts of '" + v.detection_id + "' do not sum to footprint_cells");
    }
    if (v.matched_cells > v.footprint_cells) {
      throw DataError("matched_cells of '" + v.detection_id + "' exceeds footprint_cells");
    }
    fv.verdicts.push_back(std::move(rec));
  }
  return fv;
}

void write_verdict_log(std::ostream & out, const std::vector<FrameVerdicts> & verdicts)
{
  for (const auto & fv : verdicts) out << frame_verdicts_to_json(fv).dump() << '\n';
}

std::vector<FrameVerdicts> read_verdict_log(std::istream & in)
{
  std::vector<FrameVerdicts> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(frame_verdicts_from_json(Json::parse(line)));
    } catch (const nlohmann::json::parse_error & e) {
      throw DataError(std::string("malformed JSON: ") + e.what(), line_no);
    } catch (const DataError & e) {
      throw DataError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<FrameVerdicts> load_verdict_log(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw DataError("cannot open verdict file '" + path + "'");
  return read_verdict_log(in);
}

void save_verdict_log(const std::string & path, const std::vector<FrameVerdicts> & verdicts)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write verdict file '" + path + "'");
  write_verdict_log(out, verdicts);
}

}  // namespace tc3d

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

#include "tc3d/io/run_config.hpp"

#include "tc3d/errors.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <set>

namespace tc3d
{
namespace
{

// Walks one JSON object, remembering which keys were read so that leftovers
// can be reported with their location.
class Section
{
public:
  Section(const Json & node, std::string pointer) : node_(node), pointer_(std::move(pointer))
  {
    if (!node_.is_object()) throw ConfigError("expected an object", where());
  }

  ~Section() = default;
  Section(const Section &) = delete;
  Section & operator=(const Section &) = delete;

  std::string where(const std::string & key = {}) const
  {
    return key.empty() ? (pointer_.empty() ? "/" : pointer_) : pointer_ + "/" + key;
  }

  const Json * find(const std::string & key)
  {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void number(const std::string & key, double & out)
  {
    if (const auto * v = find(key)) {
      if (!v->is_number()) throw ConfigError("expected a number", where(key));
      out = v->get<double>();
    }
  }

  void integer(const std::string & key, int & out)
  {
    if (const auto * v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError("expected an integer", where(key));
      out = v->get<int>();
    }
  }

  void unsigned_integer(const std::string & key, std::uint64_t & out)
  {
    if (const auto * v = find(key)) {
      if (!v->is_number_unsigned()) throw ConfigError("expected a non-negative integer", where(key));
      out = v->get<std::uint64_t>();
    }
  }

  void boolean(const std::string & key, bool & out)
  {
    if (const auto * v = find(key)) {
      if (!v->is_boolean()) throw ConfigError("expected true or false", where(key));
      out = v->get<bool>();
    }
  }

  void text(const std::string & key, std::string & out)
  {
    if (const auto * v = find(key)) {
      if (!v->is_string()) throw ConfigError("expected a string", where(key));
      out = v->get<std::string>();
    }
  }

  template <typename Enum>
  void choice(const std::string & key, Enum & out, std::initializer_list<std::pair<const char *, Enum>> options)
  {
    std::string name;
    text(key, name);
    if (name.empty() && find(key) == nullptr) return;
    for (const auto & [label, value] : options) {
      if (name == label) {
        out = value;
        return;
      }
    }
    std::string allowed;
    for (const auto & [label, value] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(label);
    throw ConfigError("unknown value '" + name + "', expected one of: " + allowed, where(key));
  }

  void child(const std::string & key, const std::function<void(Section &)> & fn)
  {
    if (const auto * v = find(key)) {
      Section sub(*v, where(key));
      fn(sub);
      sub.finish();
    }
  }

  void finish() const
  {
    for (const auto & [key, value] : node_.items()) {
      if (seen_.count(key) == 0) throw ConfigError("unknown key", where(key));
    }
  }

private:
  const Json & node_;
  std::string pointer_;
  std::set<std::string> seen_;
};

void read_size(Section & s, const std::string & key, Vec3 & size)
{
  s.child(key, [&](Section & z) {
    z.number("l", size.x);
    z.number("w", size.y);
    z.number("h", size.z);
  });
}

void read_profile(Section & s, const std::string & key, ClassProfile & p)
{
  s.child(key, [&](Section & c) {
    c.integer("count", p.count);
    c.number("speed_min", p.speed_min);
    c.number("speed_max", p.speed_max);
    read_size(c, "size", p.size);
    c.number("parked_fraction", p.parked_fraction);
  });
}

Json size_json(const Vec3 & v) { return Json{{"l", v.x}, {"w", v.y}, {"h", v.z}}; }

Json profile_json(const ClassProfile & p)
{
  return Json{
    {"count", p.count},
    {"speed_min", p.speed_min},
    {"speed_max", p.speed_max},
    {"size", size_json(p.size)},
    {"parked_fraction", p.parked_fraction}};
}

// Re-throws validation errors that lack a location under `pointer`.
template <typename Fn>
void validated(const std::string & pointer, Fn && fn)
{
  try {
    fn();
  } catch (const ConfigError & e) {
    if (!e.location().empty()) throw;
    throw ConfigError(e.what(), pointer);
  }
}

}  // namespace

SceneConfig RunConfig::scene_config(int index) const
{
  SceneConfig c = simulation.scene;
  c.seed = simulation.seed * 1000003ULL + static_cast<std::uint64_t>(index);
  char id[32];
  std::snprintf(id, sizeof(id), "scene-%04d", index);
  c.scene_id = id;
  c.history_depth = pipeline.tracks.history_depth;
  return c;
}

void RunConfig::set_seed(std::uint64_t seed)
{
  simulation.seed = seed;
  attack_seed = seed + 1000;
}

RunConfig parse_run_config(const Json & document)
{
  RunConfig cfg;
  Section root(document, "");
  bool attack_seed_given = false;

  root.child("grid", [&](Section & s) {
    double cell = cfg.pipeline.grid.cell_size();
    double half = cfg.pipeline.grid.half_extent();
    s.number("cell_size", cell);
    s.number("half_extent", half);
    validated(s.where(), [&] { cfg.pipeline.grid = GridSpec(cell, half); });
  });

  root.child("predictor", [&](Section & s) {
    auto & p = cfg.pipeline;
    s.choice("mode", p.render.mode, {{"cv", PredictorMode::ConstantVelocity}, {"kf", PredictorMode::Kalman}});
    s.integer("history_depth", p.tracks.history_depth);
    s.integer("min_observations", p.render.min_observations);
    s.number("gating_radius", p.tracks.gating_radius);
    s.integer("max_coast", p.tracks.max_coast);
    s.number("process_noise", p.render.kf.process_noise);
    s.number("measurement_noise", p.render.kf.measurement_noise);
    s.number("initial_speed_std", p.render.kf.initial_speed_std);
    s.boolean("ego_compensation", p.ego_compensation);
    s.choice(
      "association", p.association,
      {{"by_key", AssociationMode::ByKey}, {"nearest_neighbor", AssociationMode::NearestNeighbor}});
    s.choice(
      "source", p.source,
      {{"detections", PredictorSource::Detections}, {"ground_truth", PredictorSource::GroundTruth}});
    s.boolean("smoothing", p.render.cv.smoothing);
    s.integer("smoothing_window", p.render.cv.smoothing_window);
    s.number("heading_speed_threshold", p.render.cv.heading_speed_threshold);
    p.render.kf.heading_speed_threshold = p.render.cv.heading_speed_threshold;
    validated(s.where(), [&] {
      p.tracks.validate();
      p.render.kf.validate();
      if (p.render.min_observations < 2) throw ConfigError("must be >= 2", s.where("min_observations"));
      if (p.render.cv.smoothing_window < 2) throw ConfigError("must be >= 2", s.where("smoothing_window"));
    });
  });

  root.child("alignment", [&](Section & s) {
    auto & a = cfg.pipeline.alignment;
    s.number("near_distance", a.near_distance);
    s.number("front_half_angle_deg", a.front_half_angle_deg);
    s.child("lidar_offset", [&](Section & o) {
      o.number("x", a.lidar_offset.x);
      o.number("y", a.lidar_offset.y);
    });
    validated(s.where(), [&] { a.validate(); });
  });

  root.child("cmcs", [&](Section & s) {
    auto & c = cfg.pipeline.cmcs;
    s.choice(
      "tie_mode", c.tie_mode,
      {{"safety_first", TieMode::SafetyFirst}, {"detected_class_first", TieMode::DetectedClassFirst}});
    s.boolean("strict_majority", c.strict_majority);
    s.boolean("others_is_wildcard", c.others_is_wildcard);
  });

  root.child("simulator", [&](Section & s) {
    auto & sim = cfg.simulation;
    auto & sc = sim.scene;
    s.unsigned_integer("seed", sim.seed);
    s.integer("scenes", sim.scenes);
    s.number("duration", sc.duration);
    s.number("frame_rate", sc.frame_rate);
    s.integer("key_frame_stride", sc.key_frame_stride);
    s.number("ego_speed", sc.ego_speed);
    s.number("ego_heading", sc.ego_heading);
    s.number("spawn_extent", sc.spawn_extent);
    s.number("segment_min_duration", sc.segment_min_duration);
    s.number("segment_max_duration", sc.segment_max_duration);
    s.number("max_speed_change", sc.max_speed_change);
    s.number("max_heading_offset", sc.max_heading_offset);
    s.child("census", [&](Section & c) {
      read_profile(c, "vehicle", sc.vehicle);
      read_profile(c, "pedestrian", sc.pedestrian);
      read_profile(c, "bike", sc.bike);
      read_profile(c, "others", sc.others);
    });
    s.child("detector", [&](Section & d) {
      d.number("position_sigma", sc.detector.position_sigma);
      d.number("yaw_sigma", sc.detector.yaw_sigma);
      d.number("drop_probability", sc.detector.drop_probability);
      d.number("p_asr", sc.detector.p_asr);
      d.number("detection_range", sc.detector.detection_range);
    });
    if (sim.scenes < 1) throw ConfigError("must be >= 1", s.where("scenes"));
  });

  root.child("attack", [&](Section & s) {
    auto & a = cfg.attack;
    s.choice(
      "target_class", a.target_class,
      {{"Vehicle", ObjectClass::Vehicle}, {"Car", ObjectClass::Vehicle},
       {"Pedestrian", ObjectClass::Pedestrian}, {"Bike", ObjectClass::Bike},
       {"Cyclist", ObjectClass::Bike}, {"Others", ObjectClass::Others},
       {"Background", ObjectClass::Background}});
    s.number("distance_min", a.distance_min);
    s.number("distance_max", a.distance_max);
    s.number("lateral_jitter", a.lateral_jitter);
    if (const auto * frames = s.find("frames")) {
      if (frames->is_string() && frames->get<std::string>() == "key") {
        a.frames.clear();
      } else if (frames->is_array()) {
        a.frames.clear();
        for (const auto & f : *frames) {
          if (!f.is_number_integer()) throw ConfigError("expected frame indices", s.where("frames"));
          a.frames.push_back(f.get<std::int64_t>());
        }
      } else {
        throw ConfigError("expected \"key\" or a list of frame indices", s.where("frames"));
      }
    }
    s.integer("duration_frames", a.duration_frames);
    s.integer("point_budget", a.point_budget);
    if (s.find("seed") != nullptr) attack_seed_given = true;
    s.unsigned_integer("seed", cfg.attack_seed);
    if (s.find("ghost_size") != nullptr) {
      Vec3 size = ghost_size_prior(a.target_class);
      read_size(s, "ghost_size", size);
      a.ghost_size = size;
    }
    s.child("ghost_velocity", [&](Section & v) {
      v.number("x", a.ghost_velocity.x);
      v.number("y", a.ghost_velocity.y);
    });
  });

  root.child("bench", [&](Section & s) {
    s.integer("repetitions", cfg.bench.repetitions);
    s.integer("warmup", cfg.bench.warmup);
    if (cfg.bench.repetitions < 10) throw ConfigError("must be >= 10", s.where("repetitions"));
    if (cfg.bench.warmup < 0 || cfg.bench.warmup >= cfg.bench.repetitions) {
      throw ConfigError("must be in [0, repetitions)", s.where("warmup"));
    }
  });

  root.child("output", [&](Section & s) {
    s.text("path", cfg.output.path);
    s.choice("format", cfg.output.format, {{"records", ReportFormat::Records}, {"csv", ReportFormat::Csv}});
  });
  root.finish();

  if (!attack_seed_given) cfg.attack_seed = cfg.simulation.seed + 1000;
  cfg.attack.p_asr = cfg.simulation.scene.detector.p_asr;
  validated("/simulator", [&] { cfg.scene_config(0).validate(); });
  validated("/attack", [&] { cfg.attack.validate(); });
  return cfg;
}

RunConfig load_run_config(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error & e) {
    throw ConfigError(std::string("malformed config: ") + e.what(), path);
  }
  return parse_run_config(doc);
}

Json run_config_to_json(const RunConfig & cfg)
{
  const auto & p = cfg.pipeline;
  const auto & sc = cfg.simulation.scene;
  const auto & a = cfg.attack;
  Json frames = Json::array();
  for (const auto f : a.frames) frames.push_back(f);
  Json j;
  j["grid"] = Json{{"cell_size", p.grid.cell_size()}, {"half_extent", p.grid.half_extent()}};
  j["predictor"] = Json{
    {"mode", p.render.mode == PredictorMode::Kalman ? "kf" : "cv"},
    {"history_depth", p.tracks.history_depth},
    {"min_observations", p.render.min_observations},
    {"gating_radius", p.tracks.gating_radius},
    {"max_coast", p.tracks.max_coast},
    {"process_noise", p.render.kf.process_noise},
    {"measurement_noise", p.render.kf.measurement_noise},
    {"initial_speed_std", p.render.kf.initial_speed_std},
    {"ego_compensation", p.ego_compensation},
    {"association", p.association == AssociationMode::ByKey ? "by_key" : "nearest_neighbor"},
    {"source", p.source == PredictorSource::Detections ? "detections" : "ground_truth"},
    {"smoothing", p.render.cv.smoothing},
    {"smoothing_window", p.render.cv.smoothing_window},
    {"heading_speed_threshold", p.render.cv.heading_speed_threshold}};
  j["alignment"] = Json{
    {"near_distance", p.alignment.near_distance},
    {"front_half_angle_deg", p.alignment.front_half_angle_deg},
    {"lidar_offset", Json{{"x", p.alignment.lidar_offset.x}, {"y", p.alignment.lidar_offset.y}}}};
  j["cmcs"] = Json{
    {"tie_mode", p.cmcs.tie_mode == TieMode::SafetyFirst ? "safety_first" : "detected_class_first"},
    {"strict_majority", p.cmcs.strict_majority},
    {"others_is_wildcard", p.cmcs.others_is_wildcard}};
  j["simulator"] = Json{
    {"seed", cfg.simulation.seed},
    {"scenes", cfg.simulation.scenes},
    {"duration", sc.duration},
    {"frame_rate", sc.frame_rate},
    {"key_frame_stride", sc.key_frame_stride},
    {"ego_speed", sc.ego_speed},
    {"ego_heading", sc.ego_heading},
    {"spawn_extent", sc.spawn_extent},
    {"segment_min_duration", sc.segment_min_duration},
    {"segment_max_duration", sc.segment_max_duration},
    {"max_speed_change", sc.max_speed_change},
    {"max_heading_offset", sc.max_heading_offset},
    {"census",
     Json{
       {"vehicle", profile_json(sc.vehicle)},
       {"pedestrian", profile_json(sc.pedestrian)},
       {"bike", profile_json(sc.bike)},
       {"others", profile_json(sc.others)}}},
    {"detector",
     Json{
       {"position_sigma", sc.detector.position_sigma},
       {"yaw_sigma", sc.detector.yaw_sigma},
       {"drop_probability", sc.detector.drop_probability},
       {"p_asr", sc.detector.p_asr},
       {"detection_range", sc.detector.detection_range}}}};
  j["attack"] = Json{
    {"target_class", std::string(to_string(a.target_class))},
    {"distance_min", a.distance_min},
    {"distance_max", a.distance_max},
    {"lateral_jitter", a.lateral_jitter},
    {"frames", a.frames.empty() ? Json("key") : frames},
    {"duration_frames", a.duration_frames},
    {"point_budget", a.point_budget},
    {"seed", cfg.attack_seed},
    {"ghost_size", size_json(a.ghost_size.value_or(ghost_size_prior(a.target_class)))},
    {"ghost_velocity", Json{{"x", a.ghost_velocity.x}, {"y", a.ghost_velocity.y}}}};
  j["bench"] = Json{{"repetitions", cfg.bench.repetitions}, {"warmup", cfg.bench.warmup}};
  j["output"] = Json{
    {"path", cfg.output.path}, {"format", cfg.output.format == ReportFormat::Csv ? "csv" : "records"}};
  return j;
}

}  // namespace tc3d

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

#include "tc3d/errors.hpp"
#include "tc3d/io/run_config.hpp"

#include <gtest/gtest.h>

#include <fstream>

namespace tc3d
{
namespace
{

std::string location_of(const Json & doc)
{
  try {
    parse_run_config(doc);
  } catch (const ConfigError & e) {
    return e.location();
  }
  return "<accepted>";
}

TEST(RunConfig, EmptyDocumentGivesDefaults)
{
  const auto cfg = parse_run_config(Json::object());
  EXPECT_DOUBLE_EQ(cfg.pipeline.grid.cell_size(), 0.25);
  EXPECT_DOUBLE_EQ(cfg.pipeline.grid.half_extent(), 32.0);
  EXPECT_EQ(cfg.pipeline.grid.cells_per_side(), 256);
  EXPECT_EQ(cfg.pipeline.tracks.history_depth, 20);
  EXPECT_EQ(cfg.pipeline.render.mode, PredictorMode::ConstantVelocity);
  EXPECT_EQ(cfg.pipeline.association, AssociationMode::ByKey);
  EXPECT_TRUE(cfg.pipeline.ego_compensation);
  EXPECT_DOUBLE_EQ(cfg.pipeline.alignment.near_distance, 8.0);
  EXPECT_EQ(cfg.pipeline.cmcs.tie_mode, TieMode::SafetyFirst);
  EXPECT_EQ(cfg.simulation.scenes, 10);
  EXPECT_EQ(cfg.simulation.seed, 7u);
  EXPECT_EQ(cfg.attack_seed, 1007u);
  EXPECT_DOUBLE_EQ(cfg.attack.p_asr, 0.97);
  EXPECT_EQ(cfg.attack.point_budget, 200);
  EXPECT_EQ(cfg.bench.repetitions, 50);
  EXPECT_EQ(cfg.output.format, ReportFormat::Records);
}

TEST(RunConfig, OverridesApply)
{
  const auto cfg = parse_run_config(Json::parse(R"({
    "grid": {"cell_size": 0.5, "half_extent": 16},
    "predictor": {"mode": "kf", "association": "nearest_neighbor", "history_depth": 10},
    "cmcs": {"strict_majority": true},
    "simulator": {"seed": 3, "scenes": 2, "detector": {"p_asr": 0.5}},
    "attack": {"target_class": "Pedestrian", "frames": [12, 14], "seed": 99},
    "output": {"format": "csv"}
  })"));
  EXPECT_EQ(cfg.pipeline.grid.cells_per_side(), 64);
  EXPECT_EQ(cfg.pipeline.render.mode, PredictorMode::Kalman);
  EXPECT_EQ(cfg.pipeline.association, AssociationMode::NearestNeighbor);
  EXPECT_TRUE(cfg.pipeline.cmcs.strict_majority);
  EXPECT_EQ(cfg.simulation.seed, 3u);
  EXPECT_EQ(cfg.attack_seed, 99u);
  EXPECT_DOUBLE_EQ(cfg.attack.p_asr, 0.5);
  EXPECT_EQ(cfg.attack.target_class, ObjectClass::Pedestrian);
  EXPECT_EQ(cfg.attack.frames, (std::vector<std::int64_t>{12, 14}));
  EXPECT_EQ(cfg.output.format, ReportFormat::Csv);
  EXPECT_EQ(cfg.scene_config(1).history_depth, 10);
}

TEST(RunConfig, UnknownKeysNamed)
{
  EXPECT_EQ(location_of(Json::parse(R"({"predictor": {"bogus": 1}})")), "/predictor/bogus");
  EXPECT_EQ(location_of(Json::parse(R"({"nope": {}})")), "/nope");
  EXPECT_EQ(
    location_of(Json::parse(R"({"simulator": {"census": {"vehicle": {"size": {"q": 1}}}}})")),
    "/simulator/census/vehicle/size/q");
}

TEST(RunConfig, BadValuesNamed)
{
  EXPECT_EQ(location_of(Json::parse(R"({"grid": {"cell_size": -1}})")).rfind("/grid", 0), 0u);
  EXPECT_EQ(location_of(Json::parse(R"({"grid": {"cell_size": "big"}})")), "/grid/cell_size");
  EXPECT_EQ(location_of(Json::parse(R"({"predictor": {"mode": "ukf"}})")), "/predictor/mode");
  EXPECT_EQ(location_of(Json::parse(R"({"predictor": {"min_observations": 1}})")), "/predictor/min_observations");
  EXPECT_EQ(
    location_of(Json::parse(R"({"simulator": {"detector": {"drop_probability": 2}}})")),
    "/simulator/detector/drop_probability");
  EXPECT_EQ(location_of(Json::parse(R"({"simulator": {"scenes": 0}})")), "/simulator/scenes");
  EXPECT_EQ(location_of(Json::parse(R"({"attack": {"point_budget": 500}})")), "/attack/point_budget");
  EXPECT_EQ(location_of(Json::parse(R"({"attack": {"target_class": "Background"}})")), "/attack/target_class");
  EXPECT_EQ(location_of(Json::parse(R"({"attack": {"frames": "all"}})")), "/attack/frames");
  EXPECT_EQ(location_of(Json::parse(R"({"bench": {"repetitions": 5}})")), "/bench/repetitions");
}

TEST(RunConfig, EffectiveConfigReparses)
{
  auto cfg = parse_run_config(Json::parse(R"({"predictor": {"mode": "kf"}, "simulator": {"scenes": 3}})"));
  const auto doc = run_config_to_json(cfg);
  const auto again = parse_run_config(doc);
  EXPECT_EQ(run_config_to_json(again).dump(), doc.dump());
}

TEST(RunConfig, SeedsPerScene)
{
  RunConfig cfg;
  cfg.set_seed(5);
  EXPECT_EQ(cfg.attack_seed, 1005u);
  EXPECT_EQ(cfg.scene_config(0).seed, 5u * 1000003u);
  EXPECT_EQ(cfg.scene_config(2).seed, 5u * 1000003u + 2u);
  EXPECT_EQ(cfg.scene_config(2).scene_id, "scene-0002");
}

TEST(RunConfig, LoadFromFile)
{
  const std::string path = ::testing::TempDir() + "tc3d_cfg.json";
  {
    std::ofstream out(path);
    out << R"({"simulator": {"scenes": 4}})";
  }
  EXPECT_EQ(load_run_config(path).simulation.scenes, 4);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_run_config(path), ConfigError);
  EXPECT_THROW(load_run_config(path + ".missing"), ConfigError);
}

}  // namespace
}  // namespace tc3d

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

#include "tc3d/io/frame_log.hpp"
#include "tc3d/pipeline/consistency_pipeline.hpp"
#include "tc3d/simulation/scenario_simulator.hpp"

#include <cstdint>
#include <string>

namespace tc3d
{

struct SimulationSettings
{
  SceneConfig scene;  // template; seed and scene_id are set per scene
  int scenes{10};
  std::uint64_t seed{7};
};

struct BenchSettings
{
  int repetitions{50};
  int warmup{3};
};

enum class ReportFormat { Records, Csv };

struct OutputSettings
{
  std::string path;  // file for simulate/attack/check, directory for eval/bench
  ReportFormat format{ReportFormat::Records};
};

/// Everything a CLI run needs. Defaults reproduce the documented module
/// defaults; a config document only has to name what it changes.
struct RunConfig
{
  PipelineConfig pipeline;
  SimulationSettings simulation;
  AttackConfig attack;
  std::uint64_t attack_seed{1007};
  BenchSettings bench;
  OutputSettings output;

  /// Per-scene simulator config for scene `index`.
  SceneConfig scene_config(int index) const;

  /// Overrides the simulation seed and the attack seed derived from it.
  void set_seed(std::uint64_t seed);
};

/// Parses a config document over the defaults. Unknown keys and bad values
/// throw ConfigError whose location() is the JSON pointer of the offender.
RunConfig parse_run_config(const Json & document);
RunConfig load_run_config(const std::string & path);

/// Effective configuration, every key spelled out.
Json run_config_to_json(const RunConfig & config);

}  // namespace tc3d

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

#include "tc3d/alignment/alignment.hpp"
#include "tc3d/detection/cmcs.hpp"
#include "tc3d/geometry/bev_geometry.hpp"
#include "tc3d/pipeline/consistency_pipeline.hpp"
#include "tc3d/prediction/prediction_map.hpp"
#include "tc3d/simulation/scenario_simulator.hpp"

#include <benchmark/benchmark.h>

namespace
{

using namespace tc3d;

// Pipeline state just before the first key frame of a default scene.
struct Fixture
{
  Fixture()
  {
    SceneConfig cfg;
    cfg.seed = 7;
    cfg.duration = 15.0;
    AttackConfig attack;
    attack.p_asr = 1.0;
    log = inject_attack(generate_scene(cfg), attack, 1);
    ScenePipeline pipeline(config);
    for (const auto & f : log.frames) {
      if (f.is_key_frame) {
        key = f;
        break;
      }
      pipeline.process(f);
    }
    before_key = pipeline;
    after = ScenePipeline(pipeline);
    after.process(key);
  }

  PipelineConfig config;
  FrameLog log;
  Frame key;
  ScenePipeline before_key{config};
  ScenePipeline after{config};
};

const Fixture & fixture()
{
  static const Fixture f;
  return f;
}

void BM_Rasterize(benchmark::State & state)
{
  const GridSpec grid;
  const ObbBev box{{12.3, -4.1}, 4.5 * static_cast<double>(state.range(0)), 1.8, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(rasterize(box, grid));
}
BENCHMARK(BM_Rasterize)->Arg(1)->Arg(4);

void BM_RenderPrediction(benchmark::State & state)
{
  const auto & f = fixture();
  RenderOptions render = f.config.render;
  render.target_ego_pose = f.key.ego_pose;
  PredictedCellMap map(f.config.grid);
  for (auto _ : state) {
    render_prediction_into(f.before_key.tracks(), f.key.timestamp, render, map);
    benchmark::DoNotOptimize(map.labels.data());
  }
}
BENCHMARK(BM_RenderPrediction);

void BM_Align(benchmark::State & state)
{
  const auto & f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(align(f.key.detections, f.config.grid, f.config.alignment));
  state.counters["detections"] = static_cast<double>(f.key.detections.size());
}
BENCHMARK(BM_Align);

void BM_CheckFrame(benchmark::State & state)
{
  const auto & f = fixture();
  const auto & aligned = f.after.last_alignment();
  for (auto _ : state) benchmark::DoNotOptimize(check_frame(aligned, f.after.last_prediction(), f.config.cmcs));
}
BENCHMARK(BM_CheckFrame);

void BM_KeyFrame(benchmark::State & state)
{
  const auto & f = fixture();
  for (auto _ : state) {
    ScenePipeline p = f.before_key;
    benchmark::DoNotOptimize(p.process(f.key));
  }
}
BENCHMARK(BM_KeyFrame);

}  // namespace

BENCHMARK_MAIN();

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

#include "tc3d/metrics/runtime_benchmark.hpp"

#include "tc3d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tc3d
{

const StageStats & RuntimeReport::at(const std::string & stage) const
{
  for (const auto & s : stages) {
    if (s.stage == stage) return s;
  }
  throw std::out_of_range("no runtime stage '" + stage + "'");
}

StageStats summarize_stage(std::string stage, std::span<const double> seconds)
{
  StageStats s;
  s.stage = std::move(stage);
  if (seconds.empty()) return s;
  const double n = static_cast<double>(seconds.size());
  s.mean_seconds = std::accumulate(seconds.begin(), seconds.end(), 0.0) / n;
  double ss = 0.0;
  for (const double v : seconds) ss += (v - s.mean_seconds) * (v - s.mean_seconds);
  s.std_seconds = std::sqrt(ss / n);
  s.frames_per_second = s.mean_seconds > 0.0 ? 1.0 / s.mean_seconds : 0.0;
  return s;
}

RuntimeReport benchmark(
  const PipelineConfig & config, const FrameLog & log, std::size_t repetitions, std::size_t warmup)
{
  if (repetitions < 10) {
    throw ConfigError("benchmark needs at least 10 repetitions", "/bench/repetitions");
  }
  if (warmup >= repetitions) throw ConfigError("warmup must be below repetitions", "/bench/warmup");
  validate_frame_log(log);
  if (std::none_of(log.frames.begin(), log.frames.end(), [](const Frame & f) { return f.is_key_frame; })) {
    throw DataError("benchmark needs a log with at least one key frame");
  }
  config.validate();

  std::vector<double> prediction;
  std::vector<double> alignment;
  std::vector<double> detection;
  std::vector<double> total;
  const auto scenes = split_scenes(log);
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    for (const auto scene : scenes) {
      ScenePipeline pipeline(config);
      for (const auto & frame : scene) {
        StageTimings t;
        const bool key = pipeline.process(frame, &t).has_value();
        if (!key || rep < warmup) continue;
        prediction.push_back(t.prediction);
        alignment.push_back(t.alignment);
        detection.push_back(t.detection);
        total.push_back(t.total);
      }
    }
  }

  RuntimeReport report;
  report.repetitions = repetitions;
  report.warmup = warmup;
  report.samples = total.size();
  report.stages.push_back(summarize_stage("prediction", prediction));
  report.stages.push_back(summarize_stage("alignment", alignment));
  report.stages.push_back(summarize_stage("detection", detection));
  report.stages.push_back(summarize_stage("total", total));
  return report;
}

}  // namespace tc3d

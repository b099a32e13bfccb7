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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tc3d
{

struct StageStats
{
  std::string stage;
  double mean_seconds{0.0};
  double std_seconds{0.0};
  double frames_per_second{0.0};  // 1 / mean, 0 when the mean is 0
};

struct RuntimeReport
{
  std::vector<StageStats> stages;  // prediction, alignment, detection, total
  std::size_t repetitions{0};
  std::size_t warmup{0};
  std::size_t samples{0};  // key frames timed after warm-up

  const StageStats & at(const std::string & stage) const;
};

/// Mean, population std and rate of a sample of durations.
StageStats summarize_stage(std::string stage, std::span<const double> seconds);

/// Runs the full check over `log` `repetitions` times, one key frame per
/// sample, discarding the first `warmup` repetitions. Throws ConfigError
/// for fewer than 10 repetitions or warmup >= repetitions, DataError when
/// the log holds no key frame.
RuntimeReport benchmark(
  const PipelineConfig & config, const FrameLog & log, std::size_t repetitions,
  std::size_t warmup = 3);

}  // namespace tc3d

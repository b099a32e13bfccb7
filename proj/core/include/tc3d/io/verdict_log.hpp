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

#include <iosfwd>
#include <string>
#include <vector>

namespace tc3d
{

inline constexpr int kVerdictSchemaVersion = 1;

Json frame_verdicts_to_json(const FrameVerdicts & fv);
FrameVerdicts frame_verdicts_from_json(const Json & record);

void write_verdict_log(std::ostream & out, const std::vector<FrameVerdicts> & verdicts);
std::vector<FrameVerdicts> read_verdict_log(std::istream & in);

std::vector<FrameVerdicts> load_verdict_log(const std::string & path);
void save_verdict_log(const std::string & path, const std::vector<FrameVerdicts> & verdicts);

}  // namespace tc3d

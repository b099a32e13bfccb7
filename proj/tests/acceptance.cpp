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

#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "tc3d/alignment/alignment.hpp"
#include "tc3d/cli/commands.hpp"
#include "tc3d/io/verdict_log.hpp"
#include "tc3d/prediction/kinematic_predictors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace tc3d
{
namespace
{

struct Outcome
{
  bool pass{false};
  std::string detail;
};

std::string fmt(const char * format, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double percent(double fraction) { return std::round(fraction * 10000.0) / 100.0; }

std::size_t key_frames(const FrameLog & log)
{
  return static_cast<std::size_t>(
    std::count_if(log.frames.begin(), log.frames.end(), [](const Frame & f) { return f.is_key_frame; }));
}

RunConfig default_config()
{
  auto cfg = parse_run_config(Json::object());
  cfg.set_seed(7);
  return cfg;
}

struct Run
{
  RunConfig config;
  FrameLog benign;
  FrameLog attacked;
  std::vector<FrameVerdicts> verdicts;
  EvalReports reports;
};

Run full_run(RunConfig cfg)
{
  Run r{cfg, {}, {}, {}, {}};
  r.benign = cmd_simulate(cfg);
  r.attacked = cmd_attack(cfg, r.benign);
  r.verdicts = cmd_check(cfg, r.attacked);
  r.reports = cmd_eval(r.verdicts, r.attacked);
  return r;
}

Outcome ghost_detection(const Run & run)
{
  const auto & v = run.reports.attack.at(ObjectClass::Vehicle);
  const auto scenes = split_scenes(run.attacked).size();
  const auto keys = key_frames(run.attacked);
  const auto & det = run.config.simulation.scene.detector;
  const bool setup = scenes >= 10 && keys >= 300 && det.position_sigma == 0.1 && run.config.attack.p_asr == 0.97 &&
                     run.config.attack.target_class == ObjectClass::Vehicle;
  return {
    setup && !v.dsr_degenerate && v.dsr >= 0.98 && v.recall_benign >= 0.95,
    fmt(
      "scenes=%zu key_frames=%zu injected=%zu spoofed=%zu identified=%zu DSR=%.4f recall_benign=%.4f", scenes, keys,
      v.injected, v.successfully_spoofed, v.identified, v.dsr, v.recall_benign)};
}

Outcome match_ratio(const Run & noisy, const Run & clean)
{
  const auto & a = noisy.reports.match_ratio;
  const auto & b = clean.reports.match_ratio;
  const double nn = a.at(ObjectClass::Vehicle, Region::FrontNear).ratio;
  const double nf = a.at(ObjectClass::Vehicle, Region::FrontFar).ratio;
  const double cn = b.at(ObjectClass::Vehicle, Region::FrontNear).ratio;
  const double cf = b.at(ObjectClass::Vehicle, Region::FrontFar).ratio;
  const bool counted = a.at(ObjectClass::Vehicle, Region::FrontNear).total_bbox_cells > 0 &&
                       a.at(ObjectClass::Vehicle, Region::FrontFar).total_bbox_cells > 0 &&
                       b.at(ObjectClass::Vehicle, Region::FrontNear).total_bbox_cells > 0 &&
                       b.at(ObjectClass::Vehicle, Region::FrontFar).total_bbox_cells > 0;
  return {
    counted && nn >= 0.80 && nf >= 0.80 && cn >= 0.99 && cf >= 0.99,
    fmt("noisy near=%.4f far=%.4f, noiseless near=%.4f far=%.4f", nn, nf, cn, cf)};
}

Outcome runtime(const Run & run)
{
  std::size_t max_dets = 0;
  for (const auto & f : run.attacked.frames) max_dets = std::max(max_dets, f.detections.size());
  const auto report = cmd_bench(run.config, run.attacked);
  const auto & al = report.at("alignment");
  const auto & dt = report.at("detection");
  const auto & tot = report.at("total");
  const bool setup = run.config.pipeline.grid.cells_per_side() == 256 && max_dets <= 30 && report.repetitions >= 50;
  return {
    setup && al.mean_seconds <= 1e-3 && dt.mean_seconds <= 5e-3 && tot.frames_per_second >= 41.0,
    fmt(
      "reps=%zu samples=%zu max_detections=%zu alignment=%.2fus cmcs=%.2fus total=%.2fus (%.0f fps)",
      report.repetitions, report.samples, max_dets, al.mean_seconds * 1e6, dt.mean_seconds * 1e6,
      tot.mean_seconds * 1e6, tot.frames_per_second)};
}

Outcome rasterization()
{
  const std::vector<GridSpec> grids{
    GridSpec(), GridSpec(0.5, 8.0), GridSpec(1.0, 10.0), GridSpec(0.2, 5.0), GridSpec(0.1, 2.0), GridSpec(0.3, 6.0)};
  std::mt19937_64 rng(404);
  std::size_t boxes = 0;
  std::size_t mismatches = 0;
  std::size_t cells = 0;
  for (const auto & g : grids) {
    const double h = g.half_extent();
    const double c = g.cell_size();
    std::uniform_real_distribution<double> pos(-1.2 * h, 1.2 * h);
    std::uniform_real_distribution<double> dim(0.05 * c, 0.4 * h);
    std::uniform_real_distribution<double> yaw(-std::numbers::pi, std::numbers::pi);
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<int> lattice(-static_cast<int>(h / c), static_cast<int>(h / c));
    std::uniform_int_distribution<int> quarter(-4, 4);
    for (int i = 0; i < 1000; ++i) {
      ObbBev box{{pos(rng), pos(rng)}, dim(rng), dim(rng), yaw(rng)};
      switch (kind(rng)) {
        case 1:  // centers on the cell lattice, axis aligned
          box.center = {lattice(rng) * c, lattice(rng) * c};
          box.yaw = quarter(rng) * std::numbers::pi / 2.0;
          box.length = std::round(box.length / c) * c;
          box.width = std::round(box.width / c) * c;
          break;
        case 2:  // half-cell offsets, edges through cell centers
          box.center = {(lattice(rng) + 0.5) * c, (lattice(rng) + 0.5) * c};
          box.yaw = quarter(rng) * std::numbers::pi / 2.0;
          box.length = 2.0 * std::round(box.length / (2.0 * c)) * c;
          box.width = 2.0 * std::round(box.width / (2.0 * c)) * c;
          break;
        default:
          break;
      }
      auto got = rasterize(box, g);
      auto want = testing::oracle_rasterize(box, g);
      const auto order = [](const CellIndex & a, const CellIndex & b) {
        return std::pair(a.row, a.col) < std::pair(b.row, b.col);
      };
      std::sort(got.begin(), got.end(), order);
      std::sort(want.begin(), want.end(), order);
      mismatches += got == want ? 0 : 1;
      cells += want.size();
      ++boxes;
    }
  }
  return {
    mismatches == 0 && boxes >= 1000 && grids.size() >= 5,
    fmt("grids=%zu boxes=%zu oracle_cells=%zu mismatches=%zu", grids.size(), boxes, cells, mismatches)};
}

bool footprint_unpredicted(const AlignedDetection & a, const PredictedCellMap & map)
{
  return std::all_of(a.footprint_cells.begin(), a.footprint_cells.end(), [&](const CellIndex & c) {
    return map.label(c) == ObjectClass::Background;
  });
}

Outcome ghost_theorem(const Run & run)
{
  std::size_t eligible = 0;
  std::size_t overlapping = 0;
  std::size_t spoofed = 0;
  std::mt19937_64 rng(505);
  const double h = run.config.pipeline.grid.half_extent();
  std::uniform_real_distribution<double> pos(-h, h);
  std::uniform_real_distribution<double> yaw(-std::numbers::pi, std::numbers::pi);
  std::uniform_int_distribution<int> cls(0, 3);
  constexpr ObjectClass kinds[] = {ObjectClass::Vehicle, ObjectClass::Pedestrian, ObjectClass::Bike, ObjectClass::Others};
  std::size_t serial = 0;

  for (const auto scene : split_scenes(run.attacked)) {
    ScenePipeline pipeline(run.config.pipeline);
    for (const auto & f : scene) {
      const auto out = pipeline.process(f);
      if (!out || out->insufficient_history) continue;
      const auto & map = pipeline.last_prediction();
      const auto & aligned = pipeline.last_alignment();
      for (std::size_t i = 0; i < aligned.size(); ++i) {
        if (aligned[i].detection.provenance != Provenance::Injected) continue;
        if (aligned[i].footprint_cells.empty() || !footprint_unpredicted(aligned[i], map)) {
          ++overlapping;
          continue;
        }
        ++eligible;
        spoofed += out->verdicts[i].verdict.decision == Decision::Spoofed ? 1 : 0;
      }
      // Extra ghosts with fresh ids anywhere on the grid, one of each per key frame.
      for (int k = 0; k < 4; ++k) {
        Detection d;
        d.detection_id = "probe-" + std::to_string(serial++);
        d.cls = kinds[cls(rng)];
        d.box.center = {pos(rng), pos(rng), 0.0};
        d.box.size = ghost_size_prior(d.cls);
        d.box.yaw = yaw(rng);
        d.provenance = Provenance::Injected;
        const auto a = align(std::vector<Detection>{d}, run.config.pipeline.grid, run.config.pipeline.alignment);
        if (a.front().footprint_cells.empty() || !footprint_unpredicted(a.front(), map)) {
          ++overlapping;
          continue;
        }
        ++eligible;
        spoofed += cmcs(a.front(), map, run.config.pipeline.cmcs).decision == Decision::Spoofed ? 1 : 0;
      }
    }
  }
  return {
    eligible > 0 && spoofed == eligible,
    fmt("disjoint ghosts=%zu spoofed=%zu (skipped overlapping=%zu)", eligible, spoofed, overlapping)};
}

Outcome isolation(const Run & run)
{
  std::vector<std::pair<std::size_t, std::size_t>> keys;  // scene, frame offset
  const auto scenes = split_scenes(run.attacked);
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    for (std::size_t i = 0; i < scenes[s].size(); ++i) {
      if (scenes[s][i].is_key_frame && scenes[s][i].detections.size() >= 2) keys.push_back({s, i});
    }
  }
  std::mt19937_64 rng(606);
  std::shuffle(keys.begin(), keys.end(), rng);
  keys.resize(std::min<std::size_t>(200, keys.size()));
  std::sort(keys.begin(), keys.end());

  std::size_t frames = 0;
  std::size_t removals = 0;
  std::size_t comparisons = 0;
  std::size_t changed = 0;
  std::size_t next = 0;
  for (std::size_t s = 0; s < scenes.size() && next < keys.size(); ++s) {
    ScenePipeline pipeline(run.config.pipeline);
    for (std::size_t i = 0; i < scenes[s].size(); ++i) {
      const auto & f = scenes[s][i];
      if (next < keys.size() && keys[next] == std::pair(s, i)) {
        ++next;
        ++frames;
        const auto full = ScenePipeline(pipeline).process(f);
        for (std::size_t drop = 0; drop < f.detections.size(); ++drop) {
          Frame reduced = f;
          reduced.detections.erase(reduced.detections.begin() + static_cast<std::ptrdiff_t>(drop));
          const auto part = ScenePipeline(pipeline).process(reduced);
          ++removals;
          for (std::size_t a = 0, b = 0; a < full->verdicts.size(); ++a) {
            if (a == drop) continue;
            const auto & x = full->verdicts[a].verdict;
            const auto & y = part->verdicts[b++].verdict;
            ++comparisons;
            if (
              x.detection_id != y.detection_id || x.decision != y.decision || x.class_counts != y.class_counts ||
              x.plurality_class != y.plurality_class) {
              ++changed;
            }
          }
        }
      }
      pipeline.process(f);
    }
  }
  return {
    frames >= 200 && changed == 0,
    fmt("frames=%zu removals=%zu verdicts compared=%zu changed=%zu", frames, removals, comparisons, changed)};
}

Outcome kalman()
{
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::uniform_real_distribution<double> step(0.05, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x0 = u(rng), y0 = u(rng), vx = u(rng), vy = u(rng), dt = step(rng);
    ConstantVelocityKalman kf;
    for (int k = 0; k < 10; ++k) kf.update(k * dt, x0 + vx * k * dt, y0 + vy * k * dt);
    kf.predict_to(10 * dt);
    worst = std::max(worst, std::hypot(kf.state()(0) - (x0 + vx * 10 * dt), kf.state()(1) - (y0 + vy * 10 * dt)));
  }

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> gap(0.01, 2.0);
  std::uniform_real_distribution<double> q(0.01, 5.0);
  std::uniform_real_distribution<double> r(0.01, 2.0);
  double min_eig = 1e300;
  double asym = 0.0;
  int cycles = 0;
  for (int run = 0; run < 10; ++run) {
    ConstantVelocityKalman kf({q(rng), r(rng), 10.0, 0.1});
    double t = 0.0;
    for (int i = 0; i < 1000; ++i, ++cycles) {
      t += gap(rng);
      if (!kf.initialized() || coin(rng) < 0.6) {
        kf.update(t, 50.0 * u(rng), 50.0 * u(rng));
      } else {
        kf.predict_to(t);
      }
      const auto & p = kf.covariance();
      asym = std::max(asym, (p - p.transpose()).cwiseAbs().maxCoeff());
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(p).eigenvalues().minCoeff());
    }
  }
  return {
    worst <= 1e-6 && min_eig >= -1e-9 && asym == 0.0 && cycles >= 10000,
    fmt("max one-step error=%.3g m, cycles=%d min eigenvalue=%.3g max asymmetry=%.3g", worst, cycles, min_eig, asym)};
}

Outcome metric_arithmetic()
{
  const auto [log, verdicts] = testing::synthetic_attack_run(362, 353, 348);
  const auto scored = attack_eval(verdicts, log);
  const auto & v = scored.at(ObjectClass::Vehicle);
  return {
    percent(v.asr) == 97.51 && percent(v.dsr) == 98.58 && v.asr == 353.0 / 362.0 && v.dsr == 348.0 / 353.0,
    fmt("ASR=%zu/%zu=%.2f%% DSR=%zu/%zu=%.2f%%", v.successfully_spoofed, v.injected, percent(v.asr), v.identified,
        v.successfully_spoofed, percent(v.dsr))};
}

std::string slurp(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome determinism()
{
  const auto base = std::filesystem::temp_directory_path() / "tc3d_acceptance";
  std::filesystem::remove_all(base);
  std::vector<std::string> outputs[2];
  for (int k = 0; k < 2; ++k) {
    auto cfg = default_config();
    const auto dir = base / std::to_string(k);
    const auto run = full_run(cfg);
    std::filesystem::create_directories(dir);
    save_frame_log((dir / "attacked.jsonl").string(), run.attacked);
    save_verdict_log((dir / "verdicts.jsonl").string(), run.verdicts);
    auto paths = write_eval_reports(run.reports, dir.string(), ReportFormat::Records);
    const auto csv = write_eval_reports(run.reports, dir.string(), ReportFormat::Csv);
    paths.insert(paths.end(), csv.begin(), csv.end());
    paths.push_back((dir / "attacked.jsonl").string());
    paths.push_back((dir / "verdicts.jsonl").string());
    for (const auto & p : paths) outputs[k].push_back(slurp(p));
  }
  std::size_t bytes = 0;
  for (const auto & s : outputs[0]) bytes += s.size();
  const bool same = outputs[0] == outputs[1];
  std::filesystem::remove_all(base);
  return {same && bytes > 0, fmt("files=%zu bytes=%zu identical=%s", outputs[0].size(), bytes, same ? "yes" : "no")};
}

}  // namespace
}  // namespace tc3d

int main()
{
  using namespace tc3d;
  int failures = 0;
  const auto report = [&](int id, const char * name, const std::function<Outcome()> & fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception & e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << "AC" << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
  };

  const Run noisy = full_run(default_config());
  auto clean_cfg = default_config();
  clean_cfg.simulation.scene.detector.position_sigma = 0.0;
  clean_cfg.simulation.scene.detector.yaw_sigma = 0.0;
  clean_cfg.simulation.scene.detector.drop_probability = 0.0;
  const Run clean = full_run(clean_cfg);

  report(1, "ghost detection", [&] { return ghost_detection(noisy); });
  report(2, "vehicle match ratio", [&] { return match_ratio(noisy, clean); });
  report(3, "runtime budget", [&] { return runtime(noisy); });
  report(4, "rasterization oracle", [] { return rasterization(); });
  report(5, "single-frame ghost theorem", [&] { return ghost_theorem(noisy); });
  report(6, "verdict isolation", [&] { return isolation(noisy); });
  report(7, "kalman convergence", [] { return kalman(); });
  report(8, "metric arithmetic", [] { return metric_arithmetic(); });
  report(9, "end-to-end determinism", [] { return determinism(); });
  return failures == 0 ? 0 : 1;
}

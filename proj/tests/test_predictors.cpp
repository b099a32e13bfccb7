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
#include "tc3d/errors.hpp"
#include "tc3d/prediction/kinematic_predictors.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace tc3d
{
namespace
{

using testing::make_obs;
using testing::make_track;

Track cv_track(double vx, double vy, int n, double dt, double x0 = 1.0, double y0 = -2.0)
{
  std::vector<Observation> obs;
  for (int i = 0; i < n; ++i) {
    obs.push_back(make_obs("t", i, i * dt, x0 + vx * i * dt, y0 + vy * i * dt, std::atan2(vy, vx)));
  }
  return make_track("t", obs);
}

TEST(PredictCv, TwoPointExample)
{
  const auto track = make_track("a", {make_obs("a", 0, 0.0, 0, 0), make_obs("a", 1, 0.5, 1, 0)});
  const auto p = predict_cv(track, 1.0);
  EXPECT_DOUBLE_EQ(p.pose.x, 2.0);
  EXPECT_DOUBLE_EQ(p.pose.y, 0.0);
  EXPECT_DOUBLE_EQ(p.velocity.x, 2.0);
  EXPECT_DOUBLE_EQ(p.pose.yaw, 0.0);
}

TEST(PredictCv, StationaryKeepsLastPose)
{
  const auto track = make_track("a", {make_obs("a", 0, 0.0, 3, 4, 1.1), make_obs("a", 1, 0.5, 3, 4, 1.2)});
  const auto p = predict_cv(track, 5.0);
  EXPECT_DOUBLE_EQ(p.pose.x, 3.0);
  EXPECT_DOUBLE_EQ(p.pose.y, 4.0);
  EXPECT_DOUBLE_EQ(p.pose.yaw, 1.2);
}

TEST(PredictCv, SlowTracksKeepObservedYaw)
{
  // 0.08 m/s is under the heading threshold
  const auto track = make_track("a", {make_obs("a", 0, 0.0, 0, 0, 0.4), make_obs("a", 1, 1.0, 0, 0.08, 0.5)});
  EXPECT_DOUBLE_EQ(predict_cv(track, 2.0).pose.yaw, 0.5);
  const auto fast = make_track("a", {make_obs("a", 0, 0.0, 0, 0, 0.4), make_obs("a", 1, 1.0, 0, 0.2, 0.5)});
  EXPECT_NEAR(predict_cv(fast, 2.0).pose.yaw, std::numbers::pi / 2, 1e-12);
}

TEST(PredictCv, ExactOnConstantVelocity)
{
  const auto track = cv_track(3.0, -1.0, 6, 0.5);
  const auto p = predict_cv(track, 3.0);
  EXPECT_NEAR(p.pose.x, 1.0 + 3.0 * 3.0, 1e-9);
  EXPECT_NEAR(p.pose.y, -2.0 - 1.0 * 3.0, 1e-9);
}

TEST(PredictCv, ExactForAnyHorizonUpTo10s)
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> v(-20.0, 20.0);
  std::uniform_real_distribution<double> dt(0.05, 1.0);
  std::uniform_real_distribution<double> horizon(0.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double vx = v(rng);
    const double vy = v(rng);
    const double step = dt(rng);
    const auto track = cv_track(vx, vy, 2 + i % 6, step, v(rng), v(rng));
    const double t = track.last().timestamp + horizon(rng);
    for (const bool smooth : {false, true}) {
      const auto p = predict_cv(track, t, {smooth, 5, 0.1});
      const double ex = track.observations.front().pose.x + vx * t;
      const double ey = track.observations.front().pose.y + vy * t;
      ASSERT_NEAR(p.pose.x, ex, 1e-9) << "case " << i << " smoothing " << smooth;
      ASSERT_NEAR(p.pose.y, ey, 1e-9) << "case " << i << " smoothing " << smooth;
    }
  }
}

TEST(PredictCv, SmoothingUsesLastFiveOnly)
{
  // an old outlier outside the window must not matter
  auto track = cv_track(2.0, 0.0, 8, 0.5);
  track.observations.front().pose.y = 50.0;
  const auto p = predict_cv(track, 4.0, {true, 5, 0.1});
  EXPECT_NEAR(p.pose.y, -2.0, 1e-9);
  EXPECT_NEAR(p.velocity.x, 2.0, 1e-9);
}

TEST(PredictCv, NeedsTwoObservations)
{
  const auto one = make_track("a", {make_obs("a", 0, 0.0, 0, 0)});
  EXPECT_THROW(predict_cv(one, 1.0), NotPredictableError);
  EXPECT_THROW(predict_cv(make_track("a", {}), 1.0), NotPredictableError);
}

TEST(Kalman, NoiselessConvergesWithinTenUpdates)
{
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> v(-15.0, 15.0);
  for (int i = 0; i < 200; ++i) {
    const double vx = v(rng);
    const double vy = v(rng);
    const auto track = cv_track(vx, vy, 10, 0.5, v(rng), v(rng));
    const auto p = predict_kf(track, 5.0, {});
    const double ex = track.observations.front().pose.x + vx * 5.0;
    const double ey = track.observations.front().pose.y + vy * 5.0;
    ASSERT_LE(std::hypot(p.pose.x - ex, p.pose.y - ey), 1e-6) << "case " << i;
  }
}

TEST(Kalman, SingleObservationPureProjection)
{
  ConstantVelocityKalman kf;
  kf.update(0.0, 3.0, -1.0);
  const double before = kf.covariance().trace();
  kf.predict_to(1.0);
  EXPECT_DOUBLE_EQ(kf.state()(0), 3.0);
  EXPECT_DOUBLE_EQ(kf.state()(1), -1.0);
  EXPECT_GT(kf.covariance().trace(), before);
  const double mid = kf.covariance()(0, 0);
  kf.predict_to(2.0);
  EXPECT_GT(kf.covariance()(0, 0), mid);

  const auto one = make_track("a", {make_obs("a", 0, 0.0, 3.0, -1.0, 0.7)});
  const auto p = predict_kf(one, 2.0, {});
  EXPECT_DOUBLE_EQ(p.pose.x, 3.0);
  EXPECT_DOUBLE_EQ(p.pose.y, -1.0);
  EXPECT_DOUBLE_EQ(p.pose.yaw, 0.7);
}

TEST(Kalman, CovarianceStaysSymmetricPsd)
{
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> pos(-50.0, 50.0);
  std::uniform_real_distribution<double> dt(0.01, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  ConstantVelocityKalman kf({0.5, 0.1, 10.0, 0.1});
  double t = 0.0;
  for (int i = 0; i < 10000; ++i) {
    t += dt(rng);
    if (coin(rng) < 0.6 || !kf.initialized()) {
      kf.update(t, pos(rng), pos(rng));
    } else {
      kf.predict_to(t);
    }
    const auto & p = kf.covariance();
    ASSERT_LE((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, p.cwiseAbs().maxCoeff()));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(p);
    ASSERT_GE(eig.eigenvalues().minCoeff(), -1e-9) << "cycle " << i;
  }
}

TEST(Kalman, LargeMeasurementNoiseTendsToPriorExtrapolation)
{
  std::mt19937_64 rng(31);
  std::normal_distribution<double> noise(0.0, 0.2);
  std::vector<Observation> obs;
  for (int i = 0; i < 12; ++i) {
    obs.push_back(make_obs("n", i, 0.5 * i, 4.0 * 0.5 * i + noise(rng), 1.0 + noise(rng)));
  }
  const auto track = make_track("n", obs);
  const double target = 6.5;

  // With r dominating q the filter carries no process noise and becomes
  // the constant-velocity line fitted to every observation.
  double tm = 0, xm = 0, ym = 0;
  for (const auto & o : obs) {
    tm += o.timestamp;
    xm += o.pose.x;
    ym += o.pose.y;
  }
  tm /= obs.size();
  xm /= obs.size();
  ym /= obs.size();
  double stt = 0, stx = 0, sty = 0;
  for (const auto & o : obs) {
    stt += (o.timestamp - tm) * (o.timestamp - tm);
    stx += (o.timestamp - tm) * (o.pose.x - xm);
    sty += (o.timestamp - tm) * (o.pose.y - ym);
  }
  const double prior_x = xm + stx / stt * (target - tm);
  const double prior_y = ym + sty / stt * (target - tm);

  const auto cv = predict_cv(track, target);
  const double truth_x = 4.0 * target;
  const double cv_err = std::hypot(cv.pose.x - truth_x, cv.pose.y - 1.0);
  for (const double r : {1.0, 10.0, 1000.0}) {
    const auto kf = predict_kf(track, target, {0.5, r, 10.0, 0.1});
    const double kf_err = std::hypot(kf.pose.x - truth_x, kf.pose.y - 1.0);
    EXPECT_LE(kf_err, cv_err) << "r = " << r;
    if (r >= 1000.0) {
      EXPECT_NEAR(kf.pose.x, prior_x, 1e-3);
      EXPECT_NEAR(kf.pose.y, prior_y, 1e-3);
    }
  }
}

TEST(Kalman, RejectsNonFiniteParameters)
{
  EXPECT_THROW(ConstantVelocityKalman({std::nan(""), 0.1, 10.0, 0.1}), ConfigError);
  EXPECT_THROW(ConstantVelocityKalman({0.5, std::numeric_limits<double>::infinity(), 10.0, 0.1}), ConfigError);
  EXPECT_THROW(ConstantVelocityKalman({0.5, 0.0, 10.0, 0.1}), ConfigError);
  EXPECT_THROW(ConstantVelocityKalman({-1.0, 0.1, 10.0, 0.1}), ConfigError);
}

TEST(Kalman, PredictBeforeUpdateIsAnError)
{
  ConstantVelocityKalman kf;
  EXPECT_THROW(kf.predict_to(1.0), NotPredictableError);
  EXPECT_THROW(predict_kf(make_track("a", {}), 1.0, {}), NotPredictableError);
}

}  // namespace
}  // namespace tc3d

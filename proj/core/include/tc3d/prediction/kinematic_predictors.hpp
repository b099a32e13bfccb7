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

#include "tc3d/geometry/bev_geometry.hpp"
#include "tc3d/prediction/track_store.hpp"

#include <Eigen/Core>

namespace tc3d
{

struct MotionPrediction
{
  Pose2 pose;
  Vec2 velocity;
};

struct CvOptions
{
  /// Least-squares velocity over the last min(smoothing_window, n)
  /// observations instead of the last-two finite difference.
  bool smoothing{false};
  int smoothing_window{5};
  /// Below this speed the last observed yaw is kept.
  double heading_speed_threshold{0.1};
};

/// Constant-velocity extrapolation. Throws NotPredictableError when the
/// track has fewer than two observations.
MotionPrediction predict_cv(const Track & track, double t_target, const CvOptions & options = {});

struct KalmanParams
{
  double process_noise{0.5};      // q, acceleration std in m/s^2
  double measurement_noise{0.1};  // r, position std in m
  double initial_speed_std{10.0};
  double heading_speed_threshold{0.1};

  void validate() const;
};

/// Planar constant-velocity Kalman filter over (x, y, vx, vy).
///
/// The first measurement fixes position with zero velocity; the second
/// re-initializes from the two-point difference so that noiseless
/// constant-velocity input is tracked exactly from then on. Updates use the
/// Joseph form and re-symmetrize the covariance.
class ConstantVelocityKalman
{
public:
  using State = Eigen::Vector4d;
  using Covariance = Eigen::Matrix4d;

  explicit ConstantVelocityKalman(KalmanParams params = {});

  bool initialized() const noexcept { return updates_ > 0; }
  int updates() const noexcept { return updates_; }
  double time() const noexcept { return time_; }
  const State & state() const noexcept { return state_; }
  const Covariance & covariance() const noexcept { return cov_; }

  void predict_to(double t);
  void update(double t, double x, double y);

private:
  void predict(double dt);

  KalmanParams params_;
  State state_ = State::Zero();
  Covariance cov_ = Covariance::Zero();
  double time_{0.0};
  double first_x_{0.0};
  double first_y_{0.0};
  int updates_{0};
};

struct KfPrediction
{
  Pose2 pose;
  Vec2 velocity;
  Eigen::Matrix4d covariance;
};

/// Runs the filter over every observation of `track`, then predicts to
/// `t_target`. Needs at least one observation.
KfPrediction predict_kf(const Track & track, double t_target, const KalmanParams & params = {});

}  // namespace tc3d

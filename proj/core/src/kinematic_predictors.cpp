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

#include "tc3d/prediction/kinematic_predictors.hpp"

#include "tc3d/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace tc3d
{
namespace
{

double heading_or_last(const Vec2 & v, double last_yaw, double threshold)
{
  const double speed = std::hypot(v.x, v.y);
  return speed > threshold ? std::atan2(v.y, v.x) : normalize_angle(last_yaw);
}

// Ordinary least-squares slope of positions against time.
Vec2 least_squares_velocity(std::span<const Observation> obs)
{
  double t_mean = 0.0;
  double x_mean = 0.0;
  double y_mean = 0.0;
  for (const auto & o : obs) {
    t_mean += o.timestamp;
    x_mean += o.pose.x;
    y_mean += o.pose.y;
  }
  const auto n = static_cast<double>(obs.size());
  t_mean /= n;
  x_mean /= n;
  y_mean /= n;
  double stt = 0.0;
  double stx = 0.0;
  double sty = 0.0;
  for (const auto & o : obs) {
    const double dt = o.timestamp - t_mean;
    stt += dt * dt;
    stx += dt * (o.pose.x - x_mean);
    sty += dt * (o.pose.y - y_mean);
  }
  if (stt <= 0.0) return {};
  return {stx / stt, sty / stt};
}

}  // namespace

MotionPrediction predict_cv(const Track & track, double t_target, const CvOptions & options)
{
  const auto & obs = track.observations;
  if (obs.size() < 2) {
    throw NotPredictableError("track '" + track.object_key + "' has fewer than two observations");
  }
  const auto & last = obs.back();
  Vec2 velocity;
  if (options.smoothing && options.smoothing_window > 2) {
    const auto window = std::min<std::size_t>(obs.size(), options.smoothing_window);
    velocity = least_squares_velocity(std::span(obs).last(window));
  } else {
    const auto & prev = obs[obs.size() - 2];
    const double dt = last.timestamp - prev.timestamp;
    if (dt > 0.0) {
      velocity = {(last.pose.x - prev.pose.x) / dt, (last.pose.y - prev.pose.y) / dt};
    }
  }
  const double horizon = t_target - last.timestamp;
  MotionPrediction out;
  out.velocity = velocity;
  out.pose.x = last.pose.x + velocity.x * horizon;
  out.pose.y = last.pose.y + velocity.y * horizon;
  out.pose.yaw = heading_or_last(velocity, last.pose.yaw, options.heading_speed_threshold);
  return out;
}

void KalmanParams::validate() const
{
  if (!std::isfinite(process_noise) || process_noise < 0.0) {
    throw ConfigError("process noise q must be finite and >= 0");
  }
  if (!std::isfinite(measurement_noise) || measurement_noise <= 0.0) {
    throw ConfigError("measurement noise r must be finite and > 0");
  }
  if (!std::isfinite(initial_speed_std) || initial_speed_std <= 0.0) {
    throw ConfigError("initial speed std must be finite and > 0");
  }
  if (!std::isfinite(heading_speed_threshold) || heading_speed_threshold < 0.0) {
    throw ConfigError("heading speed threshold must be finite and >= 0");
  }
}

ConstantVelocityKalman::ConstantVelocityKalman(KalmanParams params) : params_(params)
{
  params_.validate();
}

void ConstantVelocityKalman::predict(double dt)
{
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  // Piecewise white-noise acceleration.
  const double q2 = params_.process_noise * params_.process_noise;
  const double dt2 = dt * dt;
  Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
  q(0, 0) = q(1, 1) = 0.25 * dt2 * dt2 * q2;
  q(0, 2) = q(2, 0) = q(1, 3) = q(3, 1) = 0.5 * dt2 * dt * q2;
  q(2, 2) = q(3, 3) = dt2 * q2;

  state_ = f * state_;
  cov_ = f * cov_ * f.transpose() + q;
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

void ConstantVelocityKalman::predict_to(double t)
{
  if (!initialized()) throw NotPredictableError("Kalman filter has no measurement yet");
  predict(t - time_);
  time_ = t;
}

void ConstantVelocityKalman::update(double t, double x, double y)
{
  const double r2 = params_.measurement_noise * params_.measurement_noise;
  if (updates_ == 0) {
    const double v2 = params_.initial_speed_std * params_.initial_speed_std;
    state_ << x, y, 0.0, 0.0;
    cov_ = Eigen::Vector4d(r2, r2, v2, v2).asDiagonal();
    first_x_ = x;
    first_y_ = y;
  } else if (updates_ == 1 && t > time_) {
    // Two-point initialization.
    const double dt = t - time_;
    state_ << x, y, (x - first_x_) / dt, (y - first_y_) / dt;
    cov_.setZero();
    cov_(0, 0) = cov_(1, 1) = r2;
    cov_(0, 2) = cov_(2, 0) = cov_(1, 3) = cov_(3, 1) = r2 / dt;
    cov_(2, 2) = cov_(3, 3) = 2.0 * r2 / (dt * dt);
  } else {
    predict(t - time_);
    Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    const Eigen::Matrix2d r = Eigen::Matrix2d::Identity() * r2;
    const Eigen::Vector2d innovation = Eigen::Vector2d(x, y) - h * state_;
    const Eigen::Matrix2d s = h * cov_ * h.transpose() + r;
    const Eigen::Matrix<double, 4, 2> gain = cov_ * h.transpose() * s.inverse();
    state_ += gain * innovation;
    const Eigen::Matrix4d i_kh = Eigen::Matrix4d::Identity() - gain * h;
    cov_ = i_kh * cov_ * i_kh.transpose() + gain * r * gain.transpose();
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  }
  time_ = t;
  ++updates_;
}

KfPrediction predict_kf(const Track & track, double t_target, const KalmanParams & params)
{
  if (track.observations.empty()) {
    throw NotPredictableError("track '" + track.object_key + "' has no observations");
  }
  ConstantVelocityKalman kf(params);
  for (const auto & o : track.observations) kf.update(o.timestamp, o.pose.x, o.pose.y);
  kf.predict_to(t_target);

  KfPrediction out;
  const auto & s = kf.state();
  out.velocity = {s(2), s(3)};
  out.pose.x = s(0);
  out.pose.y = s(1);
  out.pose.yaw =
    heading_or_last(out.velocity, track.last().pose.yaw, params.heading_speed_threshold);
  out.covariance = kf.covariance();
  return out;
}

}  // namespace tc3d

#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "auav/perception/detector.hpp"

namespace auav::perception {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Matrix3 = Eigen::Matrix3d;

// Constant-velocity track: state = (px, py, pz, vx, vy, vz).
struct Track {
  std::string id;
  Category category = Category::person;
  Vector6 state_mean = Vector6::Zero();
  Matrix6 covariance = Matrix6::Identity();
  double confidence = 0.0;  // EMA of detection confidences
  std::uint32_t frames_seen = 0;
  std::uint32_t frames_stationary = 0;
  std::uint64_t last_update_tick = 0;

  Vec3 position() const { return {state_mean(0), state_mean(1), state_mean(2)}; }
  Vec3 velocity() const { return {state_mean(3), state_mean(4), state_mean(5)}; }
  double speed() const { return state_mean.tail<3>().norm(); }
};

// Symmetric and no eigenvalue below -tol * max(1, |largest|).
bool is_symmetric_psd(const Eigen::MatrixXd& m, double tol = 1e-10);

// Discrete white-noise-acceleration process noise, spectral density q per axis.
Matrix6 white_acceleration_noise(double q, double dt);

// position += velocity * dt; P = F P F^T + Q. Throws on dt < 0 or non-PSD Q.
Track kf_predict(const Track& track, double dt, const Matrix6& process_noise);

struct UpdateParams {
  double motion_eps = 0.05;  // m/s; below this the update counts as stationary
  double ema_alpha = 0.3;
};

struct KfUpdateResult {
  Track track;
  bool applied = true;
  std::string health_note;  // set when the update was skipped
};

// Position-only linear update (Joseph form). A singular innovation covariance
// skips the update and reports why instead of throwing.
KfUpdateResult kf_update(const Track& track, const Detection& detection,
                         const Matrix3& measurement_noise, const UpdateParams& params = {});

}  // namespace auav::perception

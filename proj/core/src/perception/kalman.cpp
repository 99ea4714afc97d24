#include "auav/perception/kalman.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "auav/common/error.hpp"

namespace auav::perception {

bool is_symmetric_psd(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (!m.allFinite()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (((m - m.transpose()).cwiseAbs().maxCoeff()) > tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return false;
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

Matrix6 white_acceleration_noise(double q, double dt) {
  Matrix6 Q = Matrix6::Zero();
  const double dt2 = dt * dt;
  for (int i = 0; i < 3; ++i) {
    Q(i, i) = q * dt2 * dt / 3.0;
    Q(i, i + 3) = Q(i + 3, i) = q * dt2 / 2.0;
    Q(i + 3, i + 3) = q * dt;
  }
  return Q;
}

Track kf_predict(const Track& track, double dt, const Matrix6& process_noise) {
  if (dt < 0.0) throw Error(ErrorCode::invalid_argument, "kf_predict: dt must be >= 0");
  if (!is_symmetric_psd(process_noise)) {
    throw Error(ErrorCode::invalid_argument, "kf_predict: process noise is not symmetric PSD");
  }
  Matrix6 F = Matrix6::Identity();
  F.topRightCorner<3, 3>() = Matrix3::Identity() * dt;
  Track out = track;
  out.state_mean = F * track.state_mean;
  out.covariance = F * track.covariance * F.transpose() + process_noise;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

KfUpdateResult kf_update(const Track& track, const Detection& detection,
                         const Matrix3& measurement_noise, const UpdateParams& params) {
  if (!is_symmetric_psd(measurement_noise)) {
    throw Error(ErrorCode::invalid_argument, "kf_update: measurement noise is not symmetric PSD");
  }
  const Matrix3 S = track.covariance.topLeftCorner<3, 3>() + measurement_noise;
  Eigen::LLT<Matrix3> llt(S);
  if (llt.info() != Eigen::Success || S.determinant() <= 1e-300) {
    return {track, false, "track " + track.id + ": singular innovation covariance, update skipped"};
  }

  Eigen::Matrix<double, 6, 3> PHt = track.covariance.leftCols<3>();
  const Eigen::Matrix<double, 6, 3> K = llt.solve(PHt.transpose()).transpose();
  const Eigen::Vector3d z(detection.position.x, detection.position.y, detection.position.z);
  const Eigen::Vector3d innovation = z - track.state_mean.head<3>();

  Track out = track;
  out.state_mean = track.state_mean + K * innovation;

  Eigen::Matrix<double, 3, 6> H = Eigen::Matrix<double, 3, 6>::Zero();
  H.leftCols<3>() = Matrix3::Identity();
  const Matrix6 I_KH = Matrix6::Identity() - K * H;
  out.covariance =
      I_KH * track.covariance * I_KH.transpose() + K * measurement_noise * K.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());

  out.confidence = params.ema_alpha * detection.confidence + (1.0 - params.ema_alpha) * track.confidence;
  out.frames_seen = track.frames_seen + 1;
  out.frames_stationary = out.speed() < params.motion_eps ? track.frames_stationary + 1 : 0;
  return {std::move(out), true, {}};
}

}  // namespace auav::perception

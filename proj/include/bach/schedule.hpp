#pragma once

#include <Eigen/Dense>

namespace bach {

/// Signed BESS power per unit (rows) and slot (columns) in kW.
/// Positive = discharge into the grid, negative = charge from the grid.
struct Schedule {
  Eigen::MatrixXd power;

  static Schedule zeros(Eigen::Index units, Eigen::Index horizon) {
    return Schedule{Eigen::MatrixXd::Zero(units, horizon)};
  }

  Eigen::Index units() const { return power.rows(); }
  Eigen::Index horizon() const { return power.cols(); }

  /// Row-major flattening: unit 0 slots first, then unit 1, ...
  Eigen::VectorXd flatten() const {
    Eigen::VectorXd x(power.size());
    for (Eigen::Index u = 0; u < power.rows(); ++u)
      x.segment(u * power.cols(), power.cols()) = power.row(u).transpose();
    return x;
  }

  static Schedule unflatten(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index units,
                            Eigen::Index horizon) {
    Schedule s = zeros(units, horizon);
    for (Eigen::Index u = 0; u < units; ++u)
      s.power.row(u) = x.segment(u * horizon, horizon).transpose();
    return s;
  }

  friend Schedule operator+(const Schedule& a, const Schedule& b) {
    return Schedule{a.power + b.power};
  }
};

}  // namespace bach

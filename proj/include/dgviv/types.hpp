#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dgviv {

constexpr int kDim = 2;
constexpr int kNumVars = 4;

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using State = Eigen::Matrix<double, kNumVars, 1>;
/// Gradient of a state ordered [d/dx U; d/dy U].
using StateGrad = Eigen::Matrix<double, 2 * kNumVars, 1>;
using Mat4 = Eigen::Matrix<double, kNumVars, kNumVars>;
using Mat8 = Eigen::Matrix<double, 2 * kNumVars, 2 * kNumVars>;
/// Column j holds the flux in direction j.
using Flux = Eigen::Matrix<double, kNumVars, kDim>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using NodalState = Eigen::Matrix<double, Eigen::Dynamic, kNumVars>;

/// Base class for all errors raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when density, pressure or the Roe-averaged sound speed leaves the admissible set.
class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, int element = -1, int location = -1)
      : Error(what + (element >= 0 ? " (element " + std::to_string(element) + ", point " +
                                          std::to_string(location) + ")"
                                    : std::string())),
        base_(what),
        element_(element),
        location_(location) {}

  int element() const { return element_; }
  int location() const { return location_; }
  const std::string& reason() const { return base_; }

  /// Same failure with a prefix describing where in the algorithm it happened.
  PositivityError with_context(const std::string& prefix) const {
    return PositivityError(prefix + base_, element_, location_);
  }

 private:
  std::string base_;
  int element_;
  int location_;
};

}  // namespace dgviv

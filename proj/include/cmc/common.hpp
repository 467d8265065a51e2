#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cmc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;

/// Base of every error the toolkit throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates an operation's precondition (bad parameters, wrong axis, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A root search was handed a bracket without a sign change, or the
/// objective changed character inside it.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure inside a solver: step underflow, non-finite state,
/// missing event, degenerate graph.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Raised when the h'' coefficient of the mean curvature equation vanishes,
/// i.e. the surface stops being a Killing graph.
class GraphDegenerateError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Unreadable or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Tangent vector expressed in a left-invariant orthonormal frame (E1,E2,E3).
struct FrameVector {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  [[nodiscard]] Vec3 vec() const { return {a1, a2, a3}; }
  [[nodiscard]] static FrameVector from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
  [[nodiscard]] double norm() const { return std::sqrt(a1 * a1 + a2 * a2 + a3 * a3); }

  friend FrameVector operator+(const FrameVector& u, const FrameVector& v) {
    return {u.a1 + v.a1, u.a2 + v.a2, u.a3 + v.a3};
  }
  friend FrameVector operator-(const FrameVector& u, const FrameVector& v) {
    return {u.a1 - v.a1, u.a2 - v.a2, u.a3 - v.a3};
  }
  friend FrameVector operator*(double c, const FrameVector& v) { return {c * v.a1, c * v.a2, c * v.a3}; }
  friend bool operator==(const FrameVector&, const FrameVector&) = default;
};

inline double dot(const FrameVector& u, const FrameVector& v) {
  return u.a1 * v.a1 + u.a2 * v.a2 + u.a3 * v.a3;
}

inline void require_frame_index(int i, const char* what) {
  if (i < 1 || i > 3) {
    throw std::out_of_range(std::string(what) + ": frame index must be 1, 2 or 3, got " + std::to_string(i));
  }
}

}  // namespace cmc

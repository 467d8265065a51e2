#pragma once

// The Sol model: R^3 with metric e^{2z}dx^2 + e^{-2z}dy^2 + dz^2, a metric Lie
// group under (x1,y1,z1)*(x2,y2,z2) = (x1 + e^{-z1}x2, y1 + e^{z1}y2, z1 + z2).
//
// Points live in global model coordinates; tangent vectors are FrameVectors in
// the left-invariant frame E1 = e^{-z}d/dx, E2 = e^{z}d/dy, E3 = d/dz.

#include "cmc/common.hpp"

#include <array>

namespace cmc::sol {

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  [[nodiscard]] Vec3 coords() const { return {x, y, z}; }
  [[nodiscard]] static Point from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
  [[nodiscard]] bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

[[nodiscard]] Mat3 metric_at(const Point& p);

[[nodiscard]] Point group_mul(const Point& a, const Point& b);
[[nodiscard]] Point group_inverse(const Point& a);

/// Columns are E1, E2, E3 at p in coordinates.
[[nodiscard]] Mat3 frame_matrix(const Point& p);
[[nodiscard]] FrameVector to_frame(const Point& p, const Vec3& coordinate_vector);
[[nodiscard]] Vec3 to_coords(const Point& p, const FrameVector& v);

enum class IsometryKind {
  TranslateBase,  // Phi_s, left translation along c(s) = (0,0,s)
  TranslateDiag,  // Phi_{+-,s}, left translation along c_{+-}(s) = (s,+-s,0)/sqrt2
  ReflectXZ,      // sigma_xz: y -> -y
  ReflectYZ,      // sigma_yz: x -> -x
  RotatePiC,      // rotation by pi about c
  RotatePiDiag,   // rotation by pi about c_{+-}
};

struct Isometry {
  IsometryKind kind = IsometryKind::TranslateBase;
  int sign = +1;  // only for the diagonal kinds
  double s = 0.0; // only for the translation kinds

  static Isometry translate_base(double s) { return {IsometryKind::TranslateBase, +1, s}; }
  static Isometry translate_diag(int sign, double s) { return {IsometryKind::TranslateDiag, sign, s}; }
  static Isometry reflect_xz() { return {IsometryKind::ReflectXZ, +1, 0.0}; }
  static Isometry reflect_yz() { return {IsometryKind::ReflectYZ, +1, 0.0}; }
  static Isometry rotate_pi_c() { return {IsometryKind::RotatePiC, +1, 0.0}; }
  static Isometry rotate_pi_diag(int sign) { return {IsometryKind::RotatePiDiag, sign, 0.0}; }
};

[[nodiscard]] Point apply(const Isometry& iso, const Point& p);

/// Jacobian of the isometry in coordinates (closed form).
[[nodiscard]] Mat3 differential(const Isometry& iso, const Point& p);

/// nabla_{E_i} E_j as constant frame coefficients, i,j in {1,2,3}.
[[nodiscard]] FrameVector connection(int i, int j);

/// Killing fields K1 = d/dx, K2 = d/dy, K3 = -x K1 + y K2 + E3 at p, in the frame at p.
[[nodiscard]] std::array<FrameVector, 3> killing_fields(const Point& p);

}  // namespace cmc::sol

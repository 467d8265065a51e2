#include "cmc/sol_geometry.hpp"

namespace cmc::sol {

Mat3 metric_at(const Point& p) {
  Mat3 g = Mat3::Zero();
  g(0, 0) = std::exp(2.0 * p.z);
  g(1, 1) = std::exp(-2.0 * p.z);
  g(2, 2) = 1.0;
  return g;
}

Point group_mul(const Point& a, const Point& b) {
  return {a.x + std::exp(-a.z) * b.x, a.y + std::exp(a.z) * b.y, a.z + b.z};
}

Point group_inverse(const Point& a) {
  return {-std::exp(a.z) * a.x, -std::exp(-a.z) * a.y, -a.z};
}

Mat3 frame_matrix(const Point& p) {
  Mat3 m = Mat3::Zero();
  m(0, 0) = std::exp(-p.z);
  m(1, 1) = std::exp(p.z);
  m(2, 2) = 1.0;
  return m;
}

FrameVector to_frame(const Point& p, const Vec3& v) {
  return {std::exp(p.z) * v.x(), std::exp(-p.z) * v.y(), v.z()};
}

Vec3 to_coords(const Point& p, const FrameVector& v) {
  return {std::exp(-p.z) * v.a1, std::exp(p.z) * v.a2, v.a3};
}

Point apply(const Isometry& iso, const Point& p) {
  switch (iso.kind) {
    case IsometryKind::TranslateBase:
      return {std::exp(-iso.s) * p.x, std::exp(iso.s) * p.y, p.z + iso.s};
    case IsometryKind::TranslateDiag: {
      const double step = iso.s / std::numbers::sqrt2;
      return {p.x + step, p.y + iso.sign * step, p.z};
    }
    case IsometryKind::ReflectXZ:
      return {p.x, -p.y, p.z};
    case IsometryKind::ReflectYZ:
      return {-p.x, p.y, p.z};
    case IsometryKind::RotatePiC:
      return {-p.x, -p.y, p.z};
    case IsometryKind::RotatePiDiag:
      return {iso.sign * p.y, iso.sign * p.x, -p.z};
  }
  throw PreconditionError("unknown Sol isometry kind");
}

Mat3 differential(const Isometry& iso, const Point&) {
  Mat3 d = Mat3::Zero();
  switch (iso.kind) {
    case IsometryKind::TranslateBase:
      d.diagonal() << std::exp(-iso.s), std::exp(iso.s), 1.0;
      return d;
    case IsometryKind::TranslateDiag:
      return Mat3::Identity();
    case IsometryKind::ReflectXZ:
      d.diagonal() << 1.0, -1.0, 1.0;
      return d;
    case IsometryKind::ReflectYZ:
      d.diagonal() << -1.0, 1.0, 1.0;
      return d;
    case IsometryKind::RotatePiC:
      d.diagonal() << -1.0, -1.0, 1.0;
      return d;
    case IsometryKind::RotatePiDiag:
      d(0, 1) = iso.sign;
      d(1, 0) = iso.sign;
      d(2, 2) = -1.0;
      return d;
  }
  throw PreconditionError("unknown Sol isometry kind");
}

FrameVector connection(int i, int j) {
  require_frame_index(i, "sol::connection");
  require_frame_index(j, "sol::connection");
  // Rows: nabla_{E_i}; columns: E_j.
  static constexpr std::array<std::array<FrameVector, 3>, 3> table{{
      {{{0, 0, -1}, {0, 0, 0}, {1, 0, 0}}},
      {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}},
      {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}},
  }};
  return table[i - 1][j - 1];
}

std::array<FrameVector, 3> killing_fields(const Point& p) {
  const double ez = std::exp(p.z);
  const FrameVector k1{ez, 0.0, 0.0};
  const FrameVector k2{0.0, 1.0 / ez, 0.0};
  const FrameVector k3 = (-p.x) * k1 + p.y * k2 + FrameVector{0.0, 0.0, 1.0};
  return {k1, k2, k3};
}

}  // namespace cmc::sol

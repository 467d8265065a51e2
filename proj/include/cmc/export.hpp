#pragma once

// Serialization: CSV tables and curves, SVG cross-section plots, OBJ meshes of
// invariant surfaces. Numbers are written with 17 significant digits.

#include "cmc/curve_tools.hpp"
#include "cmc/ode_engine.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace cmc {

[[nodiscard]] std::string format_double(double v);

/// Columns t,x,y,z,hp,chart; x,y,z are model coordinates.
void write_profile_csv(std::ostream& os, const ProfileCurve& profile);

/// Columns index,X,Y,junction (chart coordinates).
void write_closed_curve_csv(std::ostream& os, const ClosedPlaneCurve& curve);

void write_table_csv(std::ostream& os, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

struct SvgCurve {
  std::vector<Vec2> points;
  std::string stroke = "#1f4e9c";
  bool closed = true;
};

struct SvgOptions {
  double half_width = 0.0;  // viewBox is [-w, w]^2; 0 picks ceil of the extent
  bool diagonals = false;   // also draw the lines y = +-x
  double pixels = 600.0;
};

void write_svg(std::ostream& os, const std::vector<SvgCurve>& curves, const SvgOptions& opts = {});

struct InvariantSurfaceMesh {
  std::vector<Vec3> vertices;  // model coordinates
  std::vector<Vec3> normals;   // unit (Euclidean) coordinate vectors
  std::vector<Vec3> frame_normals;  // unit normal in frame coefficients
  std::vector<std::array<std::size_t, 4>> faces;
  std::size_t rings = 0;          // number of s values
  std::size_t ring_size = 0;      // vertices per ring (closed, no duplicate)
  double s_min = 0.0, s_max = 0.0;
  AxisSpec axis;

  [[nodiscard]] std::size_t index(std::size_t ring, std::size_t j) const { return ring * ring_size + j % ring_size; }
  [[nodiscard]] double s_at(std::size_t ring) const;
};

/// Image of the closed chart curve under Phi_s, s in [s_min, s_max], with
/// `rings` values of s. Faces are ordered counterclockwise seen from the
/// side the normal points to; the normal is the outward one for a
/// counterclockwise embedded curve. Throws PreconditionError for a
/// degenerate curve or resolution.
[[nodiscard]] InvariantSurfaceMesh sweep_mesh(const AxisSpec& axis, const ClosedPlaneCurve& curve, double s_min,
                                              double s_max, std::size_t rings);

/// Point Phi_s(embed(X, Y)) of the invariant surface.
[[nodiscard]] Vec3 surface_point(const AxisSpec& axis, double s, double X, double Y);

void write_obj(std::ostream& os, const InvariantSurfaceMesh& mesh);

}  // namespace cmc

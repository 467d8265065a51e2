#include "cmc/export.hpp"

#include <cstdio>
#include <ostream>

namespace cmc {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_profile_csv(std::ostream& os, const ProfileCurve& profile) {
  os << "t,x,y,z,hp,chart\n";
  for (const auto& s : profile.samples) {
    const Vec3 p = embed(profile.axis, s.x, s.y);
    os << format_double(s.t) << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ','
       << format_double(p.z()) << ',' << format_double(s.hp) << ',' << chart_name(s.chart) << '\n';
  }
}

void write_closed_curve_csv(std::ostream& os, const ClosedPlaneCurve& curve) {
  std::vector<bool> junction(curve.vertices.size(), false);
  for (std::size_t j : curve.junctions) {
    if (j < junction.size()) junction[j] = true;
  }
  os << "index,X,Y,junction\n";
  for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
    os << i << ',' << format_double(curve.vertices[i].x()) << ',' << format_double(curve.vertices[i].y()) << ','
       << (junction[i] ? 1 : 0) << '\n';
  }
}

void write_table_csv(std::ostream& os, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw PreconditionError("table row width differs from the header");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

void write_svg(std::ostream& os, const std::vector<SvgCurve>& curves, const SvgOptions& opts) {
  double w = opts.half_width;
  if (!(w > 0.0)) {
    double extent = 0.0;
    for (const auto& c : curves) {
      for (const Vec2& p : c.points) extent = std::max(extent, p.cwiseAbs().maxCoeff());
    }
    w = std::max(1.0, std::ceil(extent * 1.1 * 4.0) / 4.0);
  }
  const std::string W = format_double(w);
  const std::string W2 = format_double(2.0 * w);
  const std::string stroke = format_double(w / 300.0);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.pixels << "\" height=\"" << opts.pixels
     << "\" viewBox=\"-" << W << " -" << W << " " << W2 << " " << W2 << "\">\n";
  // chart y points up
  os << "<g transform=\"scale(1,-1)\" fill=\"none\">\n";
  os << "<g stroke=\"#999999\" stroke-width=\"" << stroke << "\" stroke-dasharray=\"" << format_double(w / 50.0)
     << "\">\n";
  os << "<line x1=\"-" << W << "\" y1=\"0\" x2=\"" << W << "\" y2=\"0\"/>\n";
  os << "<line x1=\"0\" y1=\"-" << W << "\" x2=\"0\" y2=\"" << W << "\"/>\n";
  if (opts.diagonals) {
    os << "<line x1=\"-" << W << "\" y1=\"-" << W << "\" x2=\"" << W << "\" y2=\"" << W << "\"/>\n";
    os << "<line x1=\"-" << W << "\" y1=\"" << W << "\" x2=\"" << W << "\" y2=\"-" << W << "\"/>\n";
  }
  os << "</g>\n";
  for (const auto& c : curves) {
    os << "<" << (c.closed ? "polygon" : "polyline") << " stroke=\"" << c.stroke << "\" stroke-width=\""
       << format_double(2.0 * w / 300.0) << "\" points=\"";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", i ? " " : "", c.points[i].x(), c.points[i].y());
      os << buf;
    }
    os << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
}

double InvariantSurfaceMesh::s_at(std::size_t ring) const {
  if (rings < 2) return s_min;
  return s_min + (s_max - s_min) * static_cast<double>(ring) / static_cast<double>(rings - 1);
}

namespace {

Vec3 translate_point(const AxisSpec& axis, double s, const Vec3& p) {
  switch (axis.axis) {
    case AxisKind::SolBase:
      return sol::apply(sol::Isometry::translate_base(s), sol::Point::from(p)).coords();
    case AxisKind::SolDiagPlus:
    case AxisKind::SolDiagMinus:
      return sol::apply(sol::Isometry::translate_diag(axis.diag_sign(), s), sol::Point::from(p)).coords();
    case AxisKind::EktAxis:
      return ekt::translate(axis.space.ekt, s, ekt::Point::from(p)).coords();
  }
  throw PreconditionError("unknown axis kind");
}

Vec3 frame_to_coords(const AxisSpec& axis, const Vec3& p, const Vec3& v) {
  if (axis.is_sol()) return sol::to_coords(sol::Point::from(p), FrameVector::from(v));
  return ekt::to_coords(axis.space.ekt, ekt::Point::from(p), FrameVector::from(v));
}

double signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) a += v[i].x() * v[i + 1].y() - v[i + 1].x() * v[i].y();
  return 0.5 * a;
}

}  // namespace

Vec3 surface_point(const AxisSpec& axis, double s, double X, double Y) {
  return translate_point(axis, s, embed(axis, X, Y));
}

InvariantSurfaceMesh sweep_mesh(const AxisSpec& axis, const ClosedPlaneCurve& curve, double s_min, double s_max,
                                std::size_t rings) {
  axis.validate();
  const std::size_t n = curve.size();
  if (n < 3) throw PreconditionError("degenerate generating curve: fewer than three distinct vertices");
  if (rings < 2 || !(s_max > s_min)) throw PreconditionError("need at least two rings and s_max > s_min");
  const double area = signed_area(curve.vertices);
  if (!(std::abs(area) > 0.0)) throw PreconditionError("degenerate generating curve: zero enclosed area");
  const double side = area > 0.0 ? 1.0 : -1.0;

  InvariantSurfaceMesh mesh;
  mesh.axis = axis;
  mesh.rings = rings;
  mesh.ring_size = n;
  mesh.s_min = s_min;
  mesh.s_max = s_max;

  // Frame coefficients of the normal do not depend on s.
  std::vector<Vec3> base(n);
  std::vector<Vec3> fnormal(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2& prev = curve.vertices[(j + n - 1) % n];
    const Vec2& next = curve.vertices[j + 1];
    const Vec2 d = next - prev;
    if (d.norm() == 0.0) throw PreconditionError("degenerate generating curve: repeated vertices");
    const ChartJet jet = chart_jet(axis, curve.vertices[j].x(), curve.vertices[j].y());
    const Vec3 T = jet.tangent * d.normalized();
    Vec3 N = jet.generator.cross(T);
    if (!(N.norm() > 0.0)) throw PreconditionError("generating curve tangent to the translation orbits");
    N.normalize();
    const Vec3 right = jet.tangent * Vec2(d.y(), -d.x());
    if (side * N.dot(right) < 0.0) N = -N;
    base[j] = jet.point;
    fnormal[j] = N;
  }

  mesh.vertices.reserve(rings * n);
  for (std::size_t r = 0; r < rings; ++r) {
    const double s = mesh.s_at(r);
    for (std::size_t j = 0; j < n; ++j) {
      const Vec3 p = translate_point(axis, s, base[j]);
      mesh.vertices.push_back(p);
      mesh.normals.push_back(frame_to_coords(axis, p, fnormal[j]).normalized());
      mesh.frame_normals.push_back(fnormal[j]);
    }
  }
  for (std::size_t r = 0; r + 1 < rings; ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      std::array<std::size_t, 4> f{mesh.index(r, j), mesh.index(r, j + 1), mesh.index(r + 1, j + 1),
                                   mesh.index(r + 1, j)};
      const Vec3 c = (mesh.vertices[f[1]] - mesh.vertices[f[0]]).cross(mesh.vertices[f[3]] - mesh.vertices[f[0]]);
      const Vec3 nn = mesh.normals[f[0]] + mesh.normals[f[1]] + mesh.normals[f[2]] + mesh.normals[f[3]];
      if (c.dot(nn) < 0.0) std::swap(f[1], f[3]);
      mesh.faces.push_back(f);
    }
  }
  return mesh;
}

void write_obj(std::ostream& os, const InvariantSurfaceMesh& mesh) {
  os << "# invariant surface, axis " << mesh.axis.name() << ", s in [" << format_double(mesh.s_min) << ", "
     << format_double(mesh.s_max) << "], " << mesh.rings << " rings of " << mesh.ring_size << " vertices\n";
  for (const Vec3& v : mesh.vertices) {
    os << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << '\n';
  }
  for (const Vec3& v : mesh.normals) {
    os << "vn " << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << '\n';
  }
  for (const auto& f : mesh.faces) {
    os << 'f';
    for (std::size_t k : f) os << ' ' << k + 1 << "//" << k + 1;
    os << '\n';
  }
}

}  // namespace cmc

#pragma once

// Finite-difference oracle: mean curvature of a parametrized surface F(u, v)
// in R^3 with a Riemannian metric G(p) given in coordinates. Only the metric
// function and the parametrization enter; Christoffel symbols come from
// central differences of G.

#include <Eigen/Dense>

#include <functional>

namespace oracle {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Metric = std::function<Mat3(const Vec3&)>;
using Surface = std::function<Vec3(double, double)>;

// Gamma^k_ij a^i b^j
inline Vec3 christoffel(const Metric& G, const Vec3& p, const Vec3& a, const Vec3& b, double h = 1e-5) {
  Mat3 dG[3];
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e[k] = h;
    dG[k] = (G(p + e) - G(p - e)) / (2.0 * h);
  }
  // Gamma_{l,ij} = (d_i g_lj + d_j g_li - d_l g_ij) / 2
  Vec3 lowered = Vec3::Zero();
  for (int l = 0; l < 3; ++l) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        s += 0.5 * a[i] * b[j] * (dG[i](l, j) + dG[j](l, i) - dG[l](i, j));
      }
    }
    lowered[l] = s;
  }
  return G(p).ldlt().solve(lowered);
}

struct Result {
  double H = 0.0;
  Vec3 normal;  // coordinates, G-unit
};

// `up` picks the normal orientation: <N, up>_Euclid > 0.
inline Result mean_curvature(const Metric& G, const Surface& F, double u, double v, const Vec3& up,
                             double h = 1e-4) {
  const Vec3 p = F(u, v);
  const Vec3 Fu = (F(u + h, v) - F(u - h, v)) / (2 * h);
  const Vec3 Fv = (F(u, v + h) - F(u, v - h)) / (2 * h);
  const Vec3 Fuu = (F(u + h, v) - 2 * p + F(u - h, v)) / (h * h);
  const Vec3 Fvv = (F(u, v + h) - 2 * p + F(u, v - h)) / (h * h);
  const Vec3 Fuv = (F(u + h, v + h) - F(u + h, v - h) - F(u - h, v + h) + F(u - h, v - h)) / (4 * h * h);
  const Mat3 g = G(p);
  Vec3 N = g.ldlt().solve(Fu.cross(Fv));
  N /= std::sqrt(N.dot(g * N));
  if (N.dot(up) < 0) N = -N;
  const double E = Fu.dot(g * Fu), Fm = Fu.dot(g * Fv), Gm = Fv.dot(g * Fv);
  const double L = (Fuu + christoffel(G, p, Fu, Fu)).dot(g * N);
  const double M = (Fuv + christoffel(G, p, Fu, Fv)).dot(g * N);
  const double Nn = (Fvv + christoffel(G, p, Fv, Fv)).dot(g * N);
  return {(Gm * L - 2 * Fm * M + E * Nn) / (2 * (E * Gm - Fm * Fm)), N};
}

}  // namespace oracle

#pragma once

// Reference computations used only by the tests: central finite differences
// and brute-force constructions that share no code with the engine.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "contactlab/ambient.hpp"
#include "contactlab/immersion.hpp"
#include "contactlab/numjet/expr.hpp"

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kStep = 1e-5;

inline double eval(const contactlab::numjet::Expr& e, const Vec& p) {
  return e.evaluate(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p, double h = kStep) {
  Vec g(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    Vec a = p, b = p;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

// Second differences; diagonal from the three-point stencil, off-diagonal
// from the four-point cross stencil.
inline Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& p, double h = 1e-4) {
  const auto k = p.size();
  Mat H(k, k);
  const double f0 = f(p);
  for (Eigen::Index i = 0; i < k; ++i) {
    Vec a = p, b = p;
    a(i) += h;
    b(i) -= h;
    H(i, i) = (f(a) - 2 * f0 + f(b)) / (h * h);
    for (Eigen::Index j = i + 1; j < k; ++j) {
      Vec pp = p, pm = p, mp = p, mm = p;
      pp(i) += h, pp(j) += h;
      pm(i) += h, pm(j) -= h;
      mp(i) -= h, mp(j) += h;
      mm(i) -= h, mm(j) -= h;
      H(i, j) = H(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h);
    }
  }
  return H;
}

inline Vec fd_vector(const std::function<Vec(const Vec&)>& f, const Vec& p, const Vec& dir, double h = kStep) {
  return (f(p + h * dir) - f(p - h * dir)) / (2 * h);
}

// Christoffel symbols from a finite-differenced metric.
inline std::vector<double> fd_christoffel(const contactlab::ambient::AmbientStructure& s, const Vec& p) {
  const int n = s.dim();
  std::vector<Mat> dg;
  for (int m = 0; m < n; ++m) {
    Vec a = p, b = p;
    a(m) += kStep;
    b(m) -= kStep;
    dg.push_back((s.metric(a) - s.metric(b)) / (2 * kStep));
  }
  const Mat ginv = s.metric(p).inverse();
  std::vector<double> out(static_cast<std::size_t>(n * n * n), 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0;
        for (int l = 0; l < n; ++l) v += 0.5 * ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        out[static_cast<std::size_t>((k * n + i) * n + j)] = v;
      }
  return out;
}

// Tangent-space projector in the ambient metric at domain point q.
inline Mat tangent_projector(const contactlab::immersion::Immersion& im,
                             const contactlab::ambient::AmbientStructure& amb, const Vec& q) {
  const int d = im.ambient_dim(), k = im.k();
  Mat J(d, k);
  for (int m = 0; m < d; ++m) J.row(m) = fd_gradient([&](const Vec& x) { return eval(im.components()[m], x); }, q).transpose();
  const Mat g = amb.metric(im.position(q));
  return J * (J.transpose() * g * J).inverse() * J.transpose() * g;
}

// nabla~_X N by differencing the normal projection of a fixed vector along
// the curve p + s a, plus the Christoffel term from the FD metric.
inline Vec fd_normal_derivative(const contactlab::immersion::Immersion& im,
                                const contactlab::ambient::AmbientStructure& amb, const Vec& p, const Vec& a,
                                const Vec& N) {
  auto field = [&](const Vec& q) {
    const Mat P = tangent_projector(im, amb, q);
    return Vec(N - P * N);
  };
  const double h = 1e-4;
  const Vec dN = (field(p + h * a) - field(p - h * a)) / (2 * h);
  const Vec x = fd_vector([&](const Vec& q) { return im.position(q); }, p, a);
  const int n = amb.dim();
  const auto gamma = fd_christoffel(amb, im.position(p));
  Vec out = dN;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(k) += gamma[static_cast<std::size_t>((k * n + i) * n + j)] * x(i) * N(j);
  return out;
}

}  // namespace oracle

#include "contactlab/tangency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "contactlab/error.hpp"

namespace contactlab::tangency {

using numjet::inner;
using numjet::norm;

PFSplit pf_decompose(const FramedPoint& fp) {
  PFSplit s{Matrix(fp.k(), fp.k()), Matrix(fp.codim(), fp.k())};
  for (int i = 0; i < fp.k(); ++i) {
    const Vector phx = fp.structure.phi * fp.tan_frame[static_cast<std::size_t>(i)];
    s.P.col(i) = fp.tan_coords(phx);
    s.F.col(i) = fp.nor_coords(phx);
  }
  return s;
}

TFSplit tf_decompose(const FramedPoint& fp) {
  TFSplit s{Matrix(fp.k(), fp.codim()), Matrix(fp.codim(), fp.codim())};
  for (int i = 0; i < fp.codim(); ++i) {
    const Vector phn = fp.structure.phi * fp.nor_frame[static_cast<std::size_t>(i)];
    s.t.col(i) = fp.tan_coords(phn);
    s.fOp.col(i) = fp.nor_coords(phn);
  }
  return s;
}

Vector P_of(const FramedPoint& fp, const Vector& x) { return fp.tangent_part(fp.structure.phi * x); }
Vector F_of(const FramedPoint& fp, const Vector& x) { return fp.normal_part(fp.structure.phi * x); }
Vector t_of(const FramedPoint& fp, const Vector& n) { return fp.tangent_part(fp.structure.phi * n); }
Vector f_of(const FramedPoint& fp, const Vector& n) { return fp.normal_part(fp.structure.phi * n); }

double slant_angle(const FramedPoint& fp, const Vector& x) {
  const Matrix& g = fp.metric();
  const double nx = norm(x, g);
  const double nxi = norm(fp.structure.xi, g);
  if (nx == 0.0) throw GeometryError("slant_angle: zero vector");
  const Vector xh = x / nx;
  const Vector xih = fp.structure.xi / nxi;
  if (norm(xh - inner(xh, xih, g) * xih, g) <= 1e-8) throw GeometryError("slant_angle: vector proportional to xi");

  const Vector phx = fp.structure.phi * xh;
  const double nphi = norm(phx, g);
  if (nphi < 1e-12) throw GeometryError("slant_angle: phi X = 0 for X not along xi (broken structure)");
  const double np = norm(fp.tangent_part(phx), g);
  const double nf = norm(fp.normal_part(phx), g);
  const double ratio = np / nphi;
  if (ratio > 1.0 + 1e-9) throw GeometryError("slant_angle: |PX| exceeds |phi X|");
  // Same angle as arccos(ratio), without arccos' loss of digits near 0.
  return std::atan2(nf, np);
}

namespace {

VectorList orthonormal_span(const FramedPoint& fp, const VectorList& basis) {
  return numjet::orthonormalize(basis, fp.metric()).basis;
}

double pfaffian(const Matrix& a) {
  const auto n = a.rows();
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  double acc = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index r = 1; r < n; ++r)
      if (r != j) keep.push_back(r);
    Matrix minor(n - 2, n - 2);
    for (std::size_t r = 0; r < keep.size(); ++r)
      for (std::size_t c = 0; c < keep.size(); ++c) minor(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(keep[r], keep[c]);
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    acc += sign * a(0, j) * pfaffian(minor);
  }
  return acc;
}

}  // namespace

SlantReport slant_function(const FramedPoint& fp, const VectorList& basis, double angle_tol, std::uint64_t seed) {
  const VectorList q = orthonormal_span(fp, basis);
  if (q.empty()) throw GeometryError("slant_function: empty subspace");
  const Matrix& g = fp.metric();

  SlantReport r;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  for (int s = 0; s < 32; ++s) {
    Vector x = Vector::Zero(fp.dim());
    for (const Vector& b : q) x += gauss(rng) * b;
    const double a = slant_angle(fp, x);
    r.per_vector.push_back(a);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    sum += a;
  }
  r.theta = sum / 32.0;
  r.max_deviation = hi - lo;

  const double c2 = std::pow(std::cos(r.theta), 2);
  const Vector& xi = fp.structure.xi;
  for (const Vector& x : q) {
    const Vector p2 = P_of(fp, P_of(fp, x));
    const Vector res = p2 + c2 * (x - fp.structure.eta.dot(x) * xi);
    r.p_squared_residual = std::max(r.p_squared_residual, norm(res, g));
  }

  if (r.max_deviation >= angle_tol) {
    r.verdict = "not-slant";
  } else if (r.theta < angle_tol) {
    r.verdict = "invariant";
  } else if (std::numbers::pi / 2 - r.theta < angle_tol) {
    r.verdict = "anti-invariant";
  } else {
    r.verdict = "pointwise-slant";
  }
  return r;
}

double signed_slant_cosine(const FramedPoint& fp, const VectorList& basis) {
  const VectorList q = orthonormal_span(fp, basis);
  const auto m = static_cast<Eigen::Index>(q.size());
  if (m % 2 == 1) return 0.0;
  Matrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      a(i, j) = inner(fp.structure.phi * q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(j)], fp.metric());
  const double pf = pfaffian(a);
  const double mag = std::pow(std::abs(pf), 2.0 / static_cast<double>(m));
  return pf < 0 ? -mag : mag;
}

IdentityResiduals identity_residuals(const FramedPoint& fp, const Vector& x, const Vector& y, double theta) {
  const Matrix& g = fp.metric();
  const Vector& eta = fp.structure.eta;
  const Vector& xi = fp.structure.xi;
  const double c2 = std::pow(std::cos(theta), 2), s2 = std::pow(std::sin(theta), 2);
  const Vector px = P_of(fp, x), py = P_of(fp, y), fx = F_of(fp, x), fy = F_of(fp, y);
  const double gxy = inner(x, y, g) - eta.dot(x) * eta.dot(y);

  IdentityResiduals r;
  r.antisymmetry = std::abs(inner(px, y, g) + inner(x, py, g));
  r.p_norm = std::abs(inner(px, py, g) - c2 * gxy);
  r.f_norm = std::abs(inner(fx, fy, g) - s2 * gxy);
  r.tf = norm(t_of(fp, fx) - s2 * (-x + eta.dot(x) * xi), g);
  return r;
}

SlantDerivative slant_derivative(const immersion::Immersion& im, const ambient::AmbientStructure& amb,
                                 const FramedPoint& fp, const Vector& z, const Vector& a) {
  const Matrix& J = fp.jac;
  const Matrix& g = fp.metric();
  const Matrix& phi = fp.structure.phi;

  const Matrix dJ = immersion::jacobian_derivative(fp, a);
  const Matrix dphi = immersion::phi_derivative(fp, J * a);
  const Matrix dg = immersion::metric_derivative(fp, J * a);

  const Vector v = phi * (J * z);
  const Vector dv = dphi * (J * z) + phi * (dJ * z);
  const Vector b = J.transpose() * g * v;
  const Vector db = dJ.transpose() * g * v + J.transpose() * dg * v + J.transpose() * g * dv;
  const Matrix G = fp.induced_metric;
  const Matrix dG = immersion::induced_metric_derivative(fp, a);
  const auto llt = G.llt();
  const Vector Gb = llt.solve(b);
  const double q = b.dot(Gb);
  const double dq = 2.0 * db.dot(Gb) - Gb.dot(dG * Gb);
  const double n = v.dot(g * v);
  const double dn = 2.0 * dv.dot(g * v) + v.dot(dg * v);
  const double c2 = q / n;
  const double dc2 = (dq * n - q * dn) / (n * n);
  const double theta = std::acos(std::clamp(std::sqrt(std::max(c2, 0.0)), 0.0, 1.0));

  SlantDerivative r;
  const double s2t = std::sin(2.0 * theta);
  r.exact = std::abs(s2t) < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : -dc2 / s2t;

  constexpr double h = 1e-5;
  auto angle_at = [&](double step) {
    const Vector p = fp.p + step * a;
    const FramedPoint other = immersion::frame_at(im, amb, p, 0.0);
    return slant_angle(other, other.jac * z);
  };
  try {
    r.fd = (angle_at(h) - angle_at(-h)) / (2.0 * h);
  } catch (const Error&) {
    r.fd = std::numeric_limits<double>::quiet_NaN();
  }
  r.flagged = !(std::abs(r.exact - r.fd) <= 1e-4);
  return r;
}

}  // namespace contactlab::tangency

#include "contactlab/semislant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "contactlab/error.hpp"

namespace contactlab::semislant {

using numjet::inner;
using numjet::norm;

DistributionSplit resolve_split(const FramedPoint& fp, const immersion::DomainSplit& split) {
  const Matrix& g = fp.metric();
  DistributionSplit out;
  const Vector xi_unit = fp.structure.xi / norm(fp.structure.xi, g);
  out.xi_dir = split.xi ? fp.push(*split.xi) : fp.tangent_part(fp.structure.xi);
  for (const Vector& a : split.D) {
    const Vector x = fp.push(a);
    out.D.push_back(x - inner(x, xi_unit, g) * xi_unit);
  }
  for (const Vector& a : split.Dtheta) out.Dtheta.push_back(fp.push(a));
  return out;
}

double SplitResiduals::max() const {
  return std::max({orthogonality, completeness, d_invariance, slant_deviation, p_squared, xi_alignment});
}

SplitResiduals verify_split(const FramedPoint& fp, const DistributionSplit& split) {
  if (split.m1() + split.m2() + 1 != fp.k()) {
    throw GeometryError("split dimensions " + std::to_string(split.m1()) + " + " + std::to_string(split.m2()) +
                        " + 1 do not match the submanifold dimension " + std::to_string(fp.k()));
  }
  const Matrix& g = fp.metric();
  SplitResiduals r;
  r.m1 = split.m1();
  r.m2 = split.m2();

  const VectorList d = numjet::orthonormalize(split.D, g).basis;
  const VectorList dt = numjet::orthonormalize(split.Dtheta, g).basis;
  const Vector xi_hat = split.xi_dir / norm(split.xi_dir, g);
  if (static_cast<int>(d.size()) != r.m1 || static_cast<int>(dt.size()) != r.m2) {
    throw GeometryError("split vectors are linearly dependent");
  }

  auto cross = [&](const VectorList& a, const VectorList& b) {
    for (const Vector& x : a)
      for (const Vector& y : b) r.orthogonality = std::max(r.orthogonality, std::abs(inner(x, y, g)));
  };
  cross(d, dt);
  cross(d, {xi_hat});
  cross(dt, {xi_hat});

  VectorList all = d;
  all.insert(all.end(), dt.begin(), dt.end());
  all.push_back(xi_hat);
  for (const Vector& e : fp.tan_frame) r.completeness = std::max(r.completeness, norm(e - numjet::project_onto(e, all, g), g));

  const Vector xi_unit = fp.structure.xi / norm(fp.structure.xi, g);
  r.xi_alignment = std::min(norm(xi_unit - xi_hat, g), norm(xi_unit + xi_hat, g));

  for (const Vector& x : d) r.d_invariance = std::max(r.d_invariance, norm(tangency::F_of(fp, x), g));
  r.d_invariance = std::max(r.d_invariance, norm(fp.structure.phi * fp.structure.xi, g));

  if (r.m2 > 0) {
    const tangency::SlantReport s = tangency::slant_function(fp, dt);
    r.theta = s.theta;
    r.slant_deviation = s.max_deviation;
    r.p_squared = s.p_squared_residual;
  }
  return r;
}

std::string classify(const std::vector<SplitResiduals>& points, double angle_tol) {
  if (points.empty()) return "unclassified";
  const int m1 = points.front().m1, m2 = points.front().m2;
  if (m2 == 0) return "invariant";
  double mean = 0.0, lo = points.front().theta, hi = lo;
  for (const auto& p : points) {
    mean += p.theta;
    lo = std::min(lo, p.theta);
    hi = std::max(hi, p.theta);
  }
  mean /= static_cast<double>(points.size());
  double var = 0.0;
  for (const auto& p : points) var += (p.theta - mean) * (p.theta - mean);
  const double stddev = std::sqrt(var / static_cast<double>(points.size()));

  const double half_pi = std::numbers::pi / 2;
  if (half_pi - lo < angle_tol) return m1 == 0 ? "anti-invariant" : "contact-CR";
  if (hi < angle_tol) return "invariant";
  if (m1 == 0) return "pointwise-slant";
  if (stddev < angle_tol) return "semi-slant";
  return "proper-pointwise-semi-slant";
}

std::string classify(const FramedPoint& fp, const DistributionSplit& split) {
  return classify(std::vector<SplitResiduals>{verify_split(fp, split)});
}

NormalSplit normal_split(const FramedPoint& fp, const DistributionSplit& split) {
  const Matrix& g = fp.metric();
  NormalSplit ns;
  VectorList fz;
  for (const Vector& z : split.Dtheta) fz.push_back(tangency::F_of(fp, z));
  ns.FDtheta = numjet::orthonormalize(fz, g, 1e-8).basis;
  if (static_cast<int>(ns.FDtheta.size()) != split.m2() && split.m2() > 0) {
    const double theta = tangency::slant_function(fp, split.Dtheta).theta;
    if (std::sin(theta) > 1e-6) throw GeometryError("normal_split: F is not injective on D^theta");
  }
  VectorList all = ns.FDtheta;
  all.insert(all.end(), fp.nor_frame.begin(), fp.nor_frame.end());
  const VectorList full = numjet::orthonormalize(all, g).basis;
  ns.nu.assign(full.begin() + static_cast<std::ptrdiff_t>(ns.FDtheta.size()), full.end());
  for (const Vector& n : ns.nu) {
    const Vector phn = fp.structure.phi * n;
    ns.nu_invariance = std::max(ns.nu_invariance, norm(phn - numjet::project_onto(phn, ns.nu, g), g));
  }
  return ns;
}

double sasakian_defect(const FramedPoint& fp) {
  double worst = 0.0;
  for (const Vector& x : fp.tan_frame) {
    for (const Vector& y : fp.tan_frame) {
      const auto r = ambient::check_sasakian(fp.structure, fp.gamma, x, y);
      worst = std::max({worst, r.structure, r.reeb});
    }
  }
  return worst;
}

Lemma1Residuals lemma1_residuals(const FramedPoint& fp, const secondform::SecondFormData& sf, double theta,
                                 const Vector& x, const Vector& y, const Vector& z, const Vector& w) {
  if (sasakian_defect(fp) > 1e-8) throw GeometryError("connection identities need a Sasakian ambient");
  using secondform::h_of;
  using secondform::nabla_of;
  using tangency::F_of;
  using tangency::P_of;
  const Matrix& g = fp.metric();
  const double s2 = std::pow(std::sin(theta), 2);
  Lemma1Residuals r;
  r.first = s2 * inner(nabla_of(sf, fp, x, y), z, g) - inner(h_of(sf, fp, x, P_of(fp, y)), F_of(fp, z), g) +
            inner(h_of(sf, fp, x, y), F_of(fp, P_of(fp, z)), g);
  r.second = s2 * inner(nabla_of(sf, fp, z, w), x, g) - inner(h_of(sf, fp, x, z), F_of(fp, P_of(fp, w)), g) +
             inner(h_of(sf, fp, P_of(fp, x), z), F_of(fp, w), g);
  r.first = std::abs(r.first);
  r.second = std::abs(r.second);
  return r;
}

}  // namespace contactlab::semislant

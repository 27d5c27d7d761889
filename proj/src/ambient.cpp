#include "contactlab/ambient.hpp"

#include <algorithm>
#include <random>

#include "contactlab/error.hpp"

namespace contactlab::ambient {

using numjet::eval_jet2;
using numjet::Jet2;

std::vector<std::string> coordinate_names(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) {
    names.push_back("x" + std::to_string(i));
    names.push_back("y" + std::to_string(i));
  }
  names.push_back("z");
  return names;
}

AmbientStructure::AmbientStructure(std::string name, int n, std::vector<Expr> phi, std::vector<Expr> xi,
                                   std::vector<Expr> eta, std::vector<Expr> metric, bool sasakian_model)
    : name_(std::move(name)),
      n_(n),
      phi_(std::move(phi)),
      xi_(std::move(xi)),
      eta_(std::move(eta)),
      metric_(std::move(metric)),
      sasakian_model_(sasakian_model),
      coords_(ambient::coordinate_names(n)) {
  if (n < 1) throw GeometryError("ambient dimension parameter n must be >= 1");
  const auto d = static_cast<std::size_t>(dim());
  if (phi_.size() != d * d || metric_.size() != d * d || xi_.size() != d || eta_.size() != d) {
    throw GeometryError("ambient structure '" + name_ + "': tensor sizes do not match dimension");
  }
}

AmbientStructure AmbientStructure::from_strings(std::string name, int n, const std::vector<std::string>& phi,
                                                const std::vector<std::string>& xi,
                                                const std::vector<std::string>& eta,
                                                const std::vector<std::string>& metric, bool sasakian_model) {
  const auto coords = ambient::coordinate_names(n);
  auto parse_all = [&](const std::vector<std::string>& src) {
    std::vector<Expr> out;
    out.reserve(src.size());
    for (const auto& s : src) out.push_back(numjet::parse_expr(s, coords));
    return out;
  };
  return AmbientStructure(std::move(name), n, parse_all(phi), parse_all(xi), parse_all(eta), parse_all(metric),
                          sasakian_model);
}

std::vector<Expr> AmbientStructure::all_expressions() const {
  std::vector<Expr> out;
  for (const auto* group : {&phi_, &xi_, &eta_, &metric_}) out.insert(out.end(), group->begin(), group->end());
  return out;
}

namespace {

// Fills value and per-coordinate partials of a matrix field.
void sample_matrix(const std::vector<Expr>& entries, const Vector& p, Matrix& value, std::vector<Matrix>& d) {
  const int n = static_cast<int>(p.size());
  value.setZero(n, n);
  d.assign(static_cast<std::size_t>(n), Matrix::Zero(n, n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Expr& e = entries[static_cast<std::size_t>(r * n + c)];
      if (e.kind() == numjet::Op::Constant) {
        value(r, c) = e.value();
        continue;
      }
      const Jet2 j = eval_jet2(e, p);
      value(r, c) = j.value;
      for (int m = 0; m < n; ++m) d[static_cast<std::size_t>(m)](r, c) = j.grad(m);
    }
  }
}

void sample_vector(const std::vector<Expr>& entries, const Vector& p, Vector& value, std::vector<Vector>& d) {
  const int n = static_cast<int>(p.size());
  value.setZero(n);
  d.assign(static_cast<std::size_t>(n), Vector::Zero(n));
  for (int r = 0; r < n; ++r) {
    const Expr& e = entries[static_cast<std::size_t>(r)];
    if (e.kind() == numjet::Op::Constant) {
      value(r) = e.value();
      continue;
    }
    const Jet2 j = eval_jet2(e, p);
    value(r) = j.value;
    for (int m = 0; m < n; ++m) d[static_cast<std::size_t>(m)](r) = j.grad(m);
  }
}

Matrix values_only(const std::vector<Expr>& entries, const Vector& p) {
  const int n = static_cast<int>(p.size());
  Matrix m(n, n);
  std::span<const double> x(p.data(), static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = entries[static_cast<std::size_t>(r * n + c)].evaluate(x);
  return m;
}

Vector values_only_vec(const std::vector<Expr>& entries, const Vector& p) {
  const int n = static_cast<int>(p.size());
  Vector v(n);
  std::span<const double> x(p.data(), static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) v(r) = entries[static_cast<std::size_t>(r)].evaluate(x);
  return v;
}

}  // namespace

StructureSample AmbientStructure::sample(const Vector& p) const {
  if (p.size() != dim()) throw GeometryError("ambient point has wrong dimension");
  StructureSample s;
  s.point = p;
  sample_matrix(phi_, p, s.phi, s.dphi);
  sample_matrix(metric_, p, s.metric, s.dmetric);
  sample_vector(xi_, p, s.xi, s.dxi);
  sample_vector(eta_, p, s.eta, s.deta);
  if (!numjet::is_spd(s.metric)) throw GeometryError("ambient metric is not SPD at the sample point");
  s.metric_inv = s.metric.llt().solve(Matrix::Identity(dim(), dim()));
  return s;
}

Matrix AmbientStructure::phi(const Vector& p) const { return values_only(phi_, p); }
Matrix AmbientStructure::metric(const Vector& p) const { return values_only(metric_, p); }
Vector AmbientStructure::xi(const Vector& p) const { return values_only_vec(xi_, p); }
Vector AmbientStructure::eta(const Vector& p) const { return values_only_vec(eta_, p); }

// ---------------------------------------------------------------------------

AmbientStructure make_euclidean_acm(int n) {
  if (n < 1) throw GeometryError("make_euclidean_acm: n must be >= 1");
  const int d = 2 * n + 1;
  std::vector<std::string> phi(static_cast<std::size_t>(d * d), "0");
  std::vector<std::string> g(static_cast<std::size_t>(d * d), "0");
  std::vector<std::string> xi(static_cast<std::size_t>(d), "0");
  auto at = [d](int r, int c) { return static_cast<std::size_t>(r * d + c); };
  for (int i = 0; i < n; ++i) {
    const int x = 2 * i, y = 2 * i + 1;
    phi[at(y, x)] = "-1";  // phi d/dx_i = -d/dy_i
    phi[at(x, y)] = "1";   // phi d/dy_i =  d/dx_i
  }
  for (int i = 0; i < d; ++i) g[at(i, i)] = "1";
  xi[static_cast<std::size_t>(d - 1)] = "1";
  std::vector<std::string> eta = xi;
  return AmbientStructure::from_strings("euclidean_acm", n, phi, xi, eta, g, false);
}

AmbientStructure make_standard_sasakian(int n) {
  if (n < 1) throw GeometryError("make_standard_sasakian: n must be >= 1");
  const int d = 2 * n + 1;
  const int z = d - 1;
  const auto coords = ambient::coordinate_names(n);
  auto at = [d](int r, int c) { return static_cast<std::size_t>(r * d + c); };

  std::vector<std::string> phi(static_cast<std::size_t>(d * d), "0");
  std::vector<std::string> eta(static_cast<std::size_t>(d), "0");
  std::vector<std::string> xi(static_cast<std::size_t>(d), "0");
  std::vector<std::string> g(static_cast<std::size_t>(d * d), "0");

  for (int i = 0; i < n; ++i) {
    const int x = 2 * i, y = 2 * i + 1;
    const std::string& yi = coords[static_cast<std::size_t>(y)];
    phi[at(y, x)] = "-1";  // d/dx_i -> -d/dy_i
    phi[at(x, y)] = "1";   // d/dy_i -> d/dx_i + y_i d/dz
    phi[at(z, y)] = yi;
    eta[static_cast<std::size_t>(x)] = "-0.5*" + yi;
  }
  eta[static_cast<std::size_t>(z)] = "0.5";
  xi[static_cast<std::size_t>(z)] = "2";

  // g = eta (x) eta + 1/4 sum(dx_i^2 + dy_i^2)
  auto eta_entry = [&](int a) -> std::string {
    if (a == z) return "0.5";
    if (a % 2 == 0) return "(-0.5*" + coords[static_cast<std::size_t>(a + 1)] + ")";
    return "";
  };
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      std::string term;
      const std::string ea = eta_entry(a), eb = eta_entry(b);
      if (!ea.empty() && !eb.empty()) term = ea + "*" + eb;
      if (a == b && a != z) term = term.empty() ? "0.25" : term + " + 0.25";
      g[at(a, b)] = term.empty() ? "0" : term;
    }
  }

  AmbientStructure s = AmbientStructure::from_strings("standard_sasakian", n, phi, xi, eta, g, true);

  // Self-check at seeded probe points drawn from [-1, 1]^(2n+1).
  std::mt19937_64 rng(0x5a5a1u + static_cast<unsigned>(n));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_vec = [&] {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = unit(rng);
    return v;
  };
  for (int probe = 0; probe < 8; ++probe) {
    const Vector p = random_vec();
    const StructureSample smp = s.sample(p);
    const ChristoffelData gamma = christoffel(smp);
    double worst = check_almost_contact(smp).max();
    for (int pair = 0; pair < 3; ++pair) {
      const SasakianResiduals r = check_sasakian(smp, gamma, random_vec(), random_vec());
      worst = std::max({worst, r.structure, r.reeb});
    }
    if (!(worst < 1e-9)) {
      throw GeometryError("make_standard_sasakian: self-check failed (residual " + std::to_string(worst) +
                          "); phi sign convention is inconsistent with nabla~ xi = -phi X");
    }
  }
  return s;
}

AmbientStructure make_ambient(const std::string& name, int n) {
  if (name == "euclidean_acm") return make_euclidean_acm(n);
  if (name == "standard_sasakian") return make_standard_sasakian(n);
  throw GeometryError("unknown ambient structure '" + name + "'");
}

// ---------------------------------------------------------------------------

double AlmostContactResiduals::max() const {
  return std::max({phi_squared, eta_xi, eta_phi, phi_xi, compatibility});
}

AlmostContactResiduals check_almost_contact(const StructureSample& s) {
  const int d = s.dim();
  AlmostContactResiduals r;
  const Matrix id = Matrix::Identity(d, d);
  r.phi_squared = numjet::max_abs(s.phi * s.phi + id - s.xi * s.eta.transpose());
  r.eta_xi = std::abs(s.eta.dot(s.xi) - 1.0);
  r.eta_phi = numjet::max_abs(s.eta.transpose() * s.phi);
  r.phi_xi = numjet::max_abs(s.phi * s.xi);
  r.compatibility = numjet::max_abs(s.phi.transpose() * s.metric * s.phi - s.metric + s.eta * s.eta.transpose());
  return r;
}

AlmostContactResiduals check_almost_contact(const AmbientStructure& s, const Vector& p) {
  return check_almost_contact(s.sample(p));
}

Vector ChristoffelData::contract(const Vector& x, const Vector& y) const {
  Vector out = Vector::Zero(dim_);
  for (int k = 0; k < dim_; ++k) {
    double acc = 0.0;
    for (int i = 0; i < dim_; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < dim_; ++j) acc += (*this)(k, i, j) * x(i) * y(j);
    }
    out(k) = acc;
  }
  return out;
}

double ChristoffelData::symmetry_defect() const {
  double worst = 0.0;
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) worst = std::max(worst, std::abs((*this)(k, i, j) - (*this)(k, j, i)));
  return worst;
}

double ChristoffelData::max_abs() const {
  double worst = 0.0;
  for (double v : gamma_) worst = std::max(worst, std::abs(v));
  return worst;
}

ChristoffelData christoffel(const StructureSample& s) {
  const int d = s.dim();
  ChristoffelData gamma(d);
  // Lowered symbols Gamma_{l,ij} = (d_i g_jl + d_j g_il - d_l g_ij) / 2.
  std::vector<double> lowered(static_cast<std::size_t>(d * d * d));
  auto low = [&](int l, int i, int j) -> double& { return lowered[static_cast<std::size_t>((l * d + i) * d + j)]; };
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        const double v = 0.5 * (s.dmetric[static_cast<std::size_t>(i)](j, l) +
                                s.dmetric[static_cast<std::size_t>(j)](i, l) -
                                s.dmetric[static_cast<std::size_t>(l)](i, j));
        low(l, i, j) = v;
        low(l, j, i) = v;
      }
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        double acc = 0.0;
        for (int l = 0; l < d; ++l) acc += s.metric_inv(k, l) * low(l, i, j);
        gamma(k, i, j) = acc;
        gamma(k, j, i) = acc;
      }
  return gamma;
}

ChristoffelData christoffel(const AmbientStructure& s, const Vector& p) { return christoffel(s.sample(p)); }

Vector ambient_cov_deriv(const AmbientStructure& s, const VectorFieldExpr& field, const Vector& direction,
                         const Vector& p) {
  const int d = s.dim();
  if (static_cast<int>(field.components.size()) != d || direction.size() != d) {
    throw GeometryError("ambient_cov_deriv: dimension mismatch");
  }
  const StructureSample smp = s.sample(p);
  const ChristoffelData gamma = christoffel(smp);
  Vector value(d), directional(d);
  for (int r = 0; r < d; ++r) {
    const Jet2 j = eval_jet2(field.components[static_cast<std::size_t>(r)], p);
    value(r) = j.value;
    directional(r) = j.grad.dot(direction);
  }
  return directional + gamma.contract(direction, value);
}

namespace {

// (Gamma_X)^k_j = Gamma^k_ij X^i
Matrix gamma_along(const ChristoffelData& gamma, const Vector& x) {
  const int d = gamma.dim();
  Matrix m = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < d; ++j) m(k, j) += gamma(k, i, j) * x(i);
    }
  return m;
}

}  // namespace

Matrix covariant_phi_derivative(const StructureSample& s, const ChristoffelData& gamma, const Vector& x) {
  Matrix dx_phi = Matrix::Zero(s.dim(), s.dim());
  for (int m = 0; m < s.dim(); ++m) dx_phi += x(m) * s.dphi[static_cast<std::size_t>(m)];
  const Matrix gx = gamma_along(gamma, x);
  return dx_phi + gx * s.phi - s.phi * gx;
}

Vector covariant_xi_derivative(const StructureSample& s, const ChristoffelData& gamma, const Vector& x) {
  Vector dx_xi = Vector::Zero(s.dim());
  for (int m = 0; m < s.dim(); ++m) dx_xi += x(m) * s.dxi[static_cast<std::size_t>(m)];
  return dx_xi + gamma.contract(x, s.xi);
}

SasakianResiduals check_sasakian(const StructureSample& s, const ChristoffelData& gamma, const Vector& x,
                                 const Vector& y) {
  SasakianResiduals r;
  const Vector lhs = covariant_phi_derivative(s, gamma, x) * y;
  const Vector rhs = x.dot(s.metric * y) * s.xi - s.eta.dot(y) * x;
  r.structure = numjet::norm(lhs - rhs, s.metric);
  r.reeb = numjet::norm(covariant_xi_derivative(s, gamma, x) + s.phi * x, s.metric);
  return r;
}

SasakianResiduals check_sasakian(const AmbientStructure& s, const Vector& p, const Vector& x, const Vector& y) {
  const StructureSample smp = s.sample(p);
  return check_sasakian(smp, christoffel(smp), x, y);
}

}  // namespace contactlab::ambient

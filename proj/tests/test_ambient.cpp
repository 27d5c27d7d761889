#include <doctest.h>

#include <random>

#include "contactlab/ambient.hpp"
#include "contactlab/error.hpp"
#include "oracles.hpp"

using namespace contactlab;
using ambient::AmbientStructure;

namespace {

std::vector<oracle::Vec> random_points(int dim, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<oracle::Vec> out;
  for (int i = 0; i < count; ++i) {
    oracle::Vec p(dim);
    for (int j = 0; j < dim; ++j) p(j) = u(rng);
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_SUITE("ambient") {
  TEST_CASE("flat structure is almost contact with vanishing connection") {
    const auto s = ambient::make_euclidean_acm(3);
    CHECK(s.coordinate_names() == std::vector<std::string>{"x1", "y1", "x2", "y2", "x3", "y3", "z"});
    for (const auto& p : random_points(7, 5, 1)) {
      CHECK(ambient::check_almost_contact(s, p).max() < 1e-12);
      CHECK(ambient::christoffel(s, p).max_abs() < 1e-12);
    }
  }

  TEST_CASE("flat structure is not Sasakian") {
    const auto s = ambient::make_euclidean_acm(3);
    const auto r = ambient::check_sasakian(s, oracle::Vec::Zero(7), oracle::Vec::Unit(7, 0), oracle::Vec::Unit(7, 0));
    CHECK(r.structure == doctest::Approx(1.0));
  }

  TEST_CASE("injected fault shows on the eta(xi) line") {
    const int n = 1;
    std::vector<std::string> phi = {"0", "-1", "0", "1", "0", "0", "0", "0", "0"};
    std::vector<std::string> g = {"1", "0", "0", "0", "1", "0", "0", "0", "1"};
    const auto broken = AmbientStructure::from_strings("broken", n, phi, {"0", "0", "1"}, {"0", "0", "0"}, g, false);
    const auto r = ambient::check_almost_contact(broken, oracle::Vec::Zero(3));
    CHECK(r.eta_xi == doctest::Approx(1.0));
  }

  TEST_CASE("standard Sasakian identities hold at random points") {
    for (int n : {2, 3}) {
      const auto s = ambient::make_standard_sasakian(n);
      const int d = 2 * n + 1;
      double worst = 0;
      for (const auto& p : random_points(d, 100, 11 + n)) {
        const auto sample = s.sample(p);
        const auto gamma = ambient::christoffel(sample);
        worst = std::max(worst, ambient::check_almost_contact(sample).max());
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            const auto r = ambient::check_sasakian(sample, gamma, oracle::Vec::Unit(d, i), oracle::Vec::Unit(d, j));
            worst = std::max({worst, r.structure, r.reeb});
          }
      }
      CHECK(worst < 1e-9);
    }
  }

  TEST_CASE("Christoffel symbols match the finite-difference metric") {
    const auto s = ambient::make_standard_sasakian(2);
    for (const auto& p : random_points(5, 5, 3)) {
      const auto gamma = ambient::christoffel(s, p);
      const auto ref = oracle::fd_christoffel(s, p);
      double worst = 0;
      for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j) worst = std::max(worst, std::abs(gamma(k, i, j) - ref[static_cast<std::size_t>((k * 5 + i) * 5 + j)]));
      CHECK(worst < 1e-8);
      CHECK(gamma.symmetry_defect() < 1e-14);
    }
  }

  TEST_CASE("connection is metric compatible") {
    // d_k g_ij = Gamma^l_ki g_lj + Gamma^l_kj g_il.
    const auto s = ambient::make_standard_sasakian(2);
    const oracle::Vec p = random_points(5, 1, 9).front();
    const auto sample = s.sample(p);
    const auto gamma = ambient::christoffel(sample);
    double worst = 0;
    for (int k = 0; k < 5; ++k)
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
          double rhs = 0;
          for (int l = 0; l < 5; ++l) rhs += gamma(l, k, i) * sample.metric(l, j) + gamma(l, k, j) * sample.metric(i, l);
          worst = std::max(worst, std::abs(sample.dmetric[k](i, j) - rhs));
        }
    CHECK(worst < 1e-13);
  }

  TEST_CASE("covariant derivative obeys the Leibniz rule") {
    // nabla~_X (q Y) = X(q) Y + q nabla~_X Y for q = x1 and Y = d/dy1.
    const auto s = ambient::make_standard_sasakian(2);
    const auto names = ambient::coordinate_names(2);
    ambient::VectorFieldExpr Y, qY;
    for (int i = 0; i < 5; ++i) {
      Y.components.push_back(numjet::parse_expr(i == 1 ? "1" : "0", names));
      qY.components.push_back(numjet::parse_expr(i == 1 ? "x1" : "0", names));
    }
    const oracle::Vec p = random_points(5, 1, 5).front();
    const oracle::Vec X = random_points(5, 1, 6).front();
    const oracle::Vec lhs = ambient::ambient_cov_deriv(s, qY, X, p);
    const oracle::Vec rhs = X(0) * oracle::Vec::Unit(5, 1) + p(0) * ambient::ambient_cov_deriv(s, Y, X, p);
    CHECK((lhs - rhs).norm() < 1e-13);
  }

  TEST_CASE("unknown ambient name") { CHECK_THROWS_AS(ambient::make_ambient("kenmotsu", 2), Error); }
}

#include <doctest.h>

#include <cmath>

#include "contactlab/catalog.hpp"
#include "contactlab/error.hpp"
#include "contactlab/tangency.hpp"
#include "oracles.hpp"

using namespace contactlab;

namespace {

double closed_form_theta(double w, double t) { return std::acos((t - w) / std::sqrt((t * t + 1) * (w * w + 1))); }

immersion::FramedPoint example_frame(double w, double t) {
  static const auto e = immersion::catalog("example1");
  Eigen::VectorXd p(5);
  p << 0.2, -0.3, w, t, 0.1;
  return immersion::frame_at(e.immersion, e.ambient, p);
}

}  // namespace

TEST_SUITE("tangency") {
  TEST_CASE("P and F on the invariant directions") {
    const auto fp = example_frame(1, 2);
    const auto z1 = fp.jac.col(0), z2 = fp.jac.col(1), z5 = fp.jac.col(4);
    CHECK(tangency::F_of(fp, z1).norm() < 1e-14);
    CHECK((fp.structure.phi * z1 + z2).norm() < 1e-14);
    CHECK(tangency::P_of(fp, z5).norm() < 1e-14);
    CHECK(tangency::F_of(fp, z5).norm() < 1e-14);
  }

  TEST_CASE("hand values at (w,t) = (1,2)") {
    const auto fp = example_frame(1, 2);
    const Eigen::VectorXd z3 = fp.jac.col(2), z4 = fp.jac.col(3);
    CHECK(numjet::inner(fp.structure.phi * z3, z4, fp.metric()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tangency::slant_angle(fp, z3) == doctest::Approx(std::acos(1 / std::sqrt(10.0))).epsilon(1e-13));
    const auto pz = tangency::P_of(fp, z3), fz = tangency::F_of(fp, z3);
    CHECK(numjet::inner(pz, pz, fp.metric()) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(numjet::inner(fz, fz, fp.metric()) == doctest::Approx(4.5).epsilon(1e-13));
  }

  TEST_CASE("slant function matches the closed form") {
    for (auto [w, t] : {std::pair{1.0, 2.0}, {0.6, 2.4}, {1.4, 1.6}}) {
      const auto fp = example_frame(w, t);
      const auto rep = tangency::slant_function(fp, {fp.jac.col(2), fp.jac.col(3)});
      CHECK(std::abs(rep.theta - closed_form_theta(w, t)) < 1e-12);
      CHECK(rep.max_deviation < 1e-9);
      CHECK(rep.p_squared_residual < 1e-9);
      CHECK(rep.verdict == "pointwise-slant");
      CHECK(rep.per_vector.size() == 32);
    }
    const auto fp = example_frame(1, 2);
    CHECK(tangency::slant_function(fp, {fp.jac.col(0), fp.jac.col(1)}).verdict == "invariant");
    CHECK(tangency::slant_function(fp, {fp.jac.col(0), fp.jac.col(1), fp.jac.col(2), fp.jac.col(3)}).verdict ==
          "not-slant");
  }

  TEST_CASE("slant angle preconditions") {
    const auto fp = example_frame(1, 2);
    CHECK_THROWS_AS(tangency::slant_angle(fp, fp.jac.col(4)), GeometryError);
    CHECK_THROWS_AS(tangency::slant_function(fp, {}), GeometryError);
  }

  TEST_CASE("reconstruction and adjointness") {
    const auto fp = example_frame(0.8, 1.9);
    const auto pf = tangency::pf_decompose(fp);
    const auto tf = tangency::tf_decompose(fp);
    for (int i = 0; i < fp.k(); ++i) {
      const Eigen::VectorXd phix = fp.structure.phi * fp.tan_frame[i];
      CHECK((phix - fp.tan_matrix() * pf.P.col(i) - fp.nor_matrix() * pf.F.col(i)).norm() < 1e-10);
    }
    for (int a = 0; a < fp.codim(); ++a) {
      const Eigen::VectorXd phin = fp.structure.phi * fp.nor_frame[a];
      CHECK((phin - fp.tan_matrix() * tf.t.col(a) - fp.nor_matrix() * tf.fOp.col(a)).norm() < 1e-10);
    }
    CHECK((pf.F + tf.t.transpose()).cwiseAbs().maxCoeff() < 1e-9);
    // fFX = -FPX on the slant part.
    for (int c : {2, 3}) {
      const Eigen::VectorXd x = fp.jac.col(c);
      CHECK((tangency::f_of(fp, tangency::F_of(fp, x)) + tangency::F_of(fp, tangency::P_of(fp, x))).norm() < 1e-9);
    }
  }

  TEST_CASE("identity residuals on the slant distribution") {
    const auto fp = example_frame(1.2, 2.2);
    const double theta = closed_form_theta(1.2, 2.2);
    const Eigen::VectorXd x = fp.jac.col(2) + 0.3 * fp.jac.col(4), y = fp.jac.col(3) - fp.jac.col(2);
    const auto r = tangency::identity_residuals(fp, x, y, theta);
    CHECK(std::abs(r.antisymmetry) < 1e-10);
    CHECK(std::abs(r.p_norm) < 1e-10);
    CHECK(std::abs(r.f_norm) < 1e-10);
    CHECK(std::abs(r.tf) < 1e-10);
  }

  TEST_CASE("signed slant cosine changes sign across w = t") {
    const auto a = example_frame(1.0, 2.0), b = example_frame(2.0, 1.0);
    const double ca = tangency::signed_slant_cosine(a, {a.jac.col(2), a.jac.col(3)});
    const double cb = tangency::signed_slant_cosine(b, {b.jac.col(2), b.jac.col(3)});
    CHECK(std::abs(std::abs(ca) - std::cos(closed_form_theta(1, 2))) < 1e-12);
    CHECK(ca * cb < 0);
  }

  TEST_CASE("X(theta) against differences of the closed form") {
    const auto e = immersion::catalog("example1");
    const double w = 1.1, t = 2.1;
    const auto fp = example_frame(w, t);
    const Eigen::VectorXd z = Eigen::VectorXd::Unit(5, 2);
    const double h = 1e-5;
    const double dw = (closed_form_theta(w + h, t) - closed_form_theta(w - h, t)) / (2 * h);
    const double dt = (closed_form_theta(w, t + h) - closed_form_theta(w, t - h)) / (2 * h);
    const auto sw = tangency::slant_derivative(e.immersion, e.ambient, fp, z, Eigen::VectorXd::Unit(5, 2));
    const auto st = tangency::slant_derivative(e.immersion, e.ambient, fp, z, Eigen::VectorXd::Unit(5, 3));
    const auto su = tangency::slant_derivative(e.immersion, e.ambient, fp, z, Eigen::VectorXd::Unit(5, 0));
    CHECK(std::abs(sw.exact - dw) < 1e-8);
    CHECK(std::abs(st.exact - dt) < 1e-8);
    CHECK(std::abs(su.exact) < 1e-12);
    CHECK_FALSE(sw.flagged);
  }
}

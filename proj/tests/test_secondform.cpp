#include <doctest.h>

#include "contactlab/catalog.hpp"
#include "contactlab/error.hpp"
#include "contactlab/secondform.hpp"
#include "contactlab/semislant.hpp"
#include "oracles.hpp"

using namespace contactlab;
using immersion::Immersion;

TEST_SUITE("secondform") {
  TEST_CASE("affine subspace of flat space is totally geodesic") {
    const auto im = Immersion::from_strings({"u", "v"}, {"u + v", "2*u", "3", "v", "0"}, {{-1, 1}, {-1, 1}});
    const auto fp = immersion::frame_at(im, ambient::make_euclidean_acm(2), Eigen::Vector2d(0.4, 0.1));
    const auto sf = secondform::second_form(fp);
    for (const auto& h : sf.h_coord) CHECK(h.norm() < 1e-15);
  }

  TEST_CASE("unit circle has curvature one") {
    const auto im = Immersion::from_strings({"u"}, {"cos(u)", "sin(u)", "0", "0", "0", "0", "0"}, {{-3, 3}});
    for (double u : {-2.0, 0.3, 1.7}) {
      const auto fp = immersion::frame_at(im, ambient::make_euclidean_acm(3), Eigen::VectorXd::Constant(1, u));
      const auto sf = secondform::second_form(fp);
      const Eigen::VectorXd e = fp.tan_frame[0];
      CHECK(secondform::h_of(sf, fp, e, e).norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(sf.h[0].norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("Gauss decomposition and symmetry on the catalog") {
    for (const auto& info : immersion::catalog_list()) {
      const auto e = immersion::catalog(info.name);
      for (const auto& p : immersion::sample_points(e.immersion, 5, 8)) {
        const auto fp = immersion::frame_at(e.immersion, e.ambient, p);
        const auto sf = secondform::second_form(fp);
        CHECK(sf.gauss_defect < 1e-10);
        CHECK(sf.symmetry_defect() < 1e-12);
      }
    }
  }

  TEST_CASE("shape operator against a finite-difference normal extension") {
    for (const char* name : {"cr_warped_r7", "example1", "invariant_r5"}) {
      const auto e = immersion::catalog(name);
      const auto p = immersion::sample_points(e.immersion, 1, 21)[0];
      const auto fp = immersion::frame_at(e.immersion, e.ambient, p);
      const auto sf = secondform::second_form(fp);
      for (const auto& N : fp.nor_frame) {
        const auto s = secondform::shape_operator(sf, fp, N);
        CHECK(s.self_adjoint < 1e-12);
        CHECK(s.weingarten < 1e-10);
        for (int i = 0; i < fp.k(); ++i) {
          const Eigen::VectorXd a = fp.domain_coords(fp.tan_frame[i]);
          const Eigen::VectorXd full = oracle::fd_normal_derivative(e.immersion, e.ambient, p, a, N);
          const Eigen::VectorXd ref = -fp.tangent_part(full);
          CHECK(numjet::norm(ref - s.apply(fp, fp.tan_frame[i]), fp.metric()) < 1e-6);
          CHECK(secondform::weingarten_residual(sf, fp, fp.tan_frame[i], N) < 1e-10);
        }
      }
    }
  }

  TEST_CASE("duality between h and A") {
    const auto e = immersion::catalog("cr_warped_r7");
    const auto fp = immersion::frame_at(e.immersion, e.ambient, immersion::sample_points(e.immersion, 1, 4)[0]);
    const auto sf = secondform::second_form(fp);
    const Eigen::VectorXd N = fp.nor_frame[1];
    const auto s = secondform::shape_operator(sf, fp, N);
    const Eigen::VectorXd x = fp.jac.col(0) + fp.jac.col(3), y = fp.jac.col(4) - 2 * fp.jac.col(1);
    const double lhs = numjet::inner(secondform::h_of(sf, fp, x, y), N, fp.metric());
    const double rhs = numjet::inner(s.apply(fp, x), y, fp.metric());
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }

  TEST_CASE("non-normal vectors are rejected") {
    const auto e = immersion::catalog("example1");
    const auto fp = immersion::frame_at(e.immersion, e.ambient, immersion::sample_points(e.immersion, 1, 4)[0]);
    const auto sf = secondform::second_form(fp);
    CHECK_THROWS_AS(secondform::shape_operator(sf, fp, fp.tan_frame[0]), GeometryError);
  }

  TEST_CASE("mixed totally geodesic test") {
    const auto prod = immersion::catalog("cr_product_r7");
    const auto fp = immersion::frame_at(prod.immersion, prod.ambient, immersion::sample_points(prod.immersion, 1, 2)[0]);
    const auto sf = secondform::second_form(fp);
    const auto sp = semislant::resolve_split(fp, *prod.split);
    CHECK(secondform::mixed_tg_test(sf, fp, sp.D, sp.Dtheta) < 1e-12);
    // Raw coordinate fields carry a xi component, and h(xi, Z) does not vanish.
    CHECK(secondform::mixed_tg_test(sf, fp, {fp.jac.col(0), fp.jac.col(1)}, {fp.jac.col(3), fp.jac.col(4)}) > 0.1);
    CHECK_THROWS_AS(secondform::mixed_tg_test(sf, fp, {fp.jac.col(0)}, {fp.jac.col(0) + fp.jac.col(1)}), GeometryError);
  }
}

#include <doctest.h>

#include <cmath>

#include "contactlab/catalog.hpp"
#include "contactlab/error.hpp"
#include "contactlab/warped.hpp"

using namespace contactlab;
using immersion::Immersion;

namespace {

warped::WarpedCandidate candidate(const immersion::CatalogEntry& e) { return {e.immersion, e.ambient, *e.warp}; }

}  // namespace

TEST_SUITE("warped") {
  TEST_CASE("product is trivial") {
    const auto e = immersion::catalog("cr_product_r7");
    const auto rep = warped::detect_warp(candidate(e), immersion::sample_points(e.immersion, 10, 1));
    CHECK(rep.trivial);
    CHECK(rep.max_grad < 1e-12);
  }

  TEST_CASE("planted warping function is recovered") {
    const auto e = immersion::catalog("warp_surface_r5");
    const auto c = candidate(e);
    const auto pts = immersion::sample_points(e.immersion, 20, 2);
    const auto rep = warped::detect_warp(c, pts);
    CHECK_FALSE(rep.trivial);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& s = rep.samples[i];
      CHECK(std::abs(s.lnf_grad(0) - 1.0) < 1e-10);
      CHECK(std::abs(s.lnf_grad(2)) < 1e-12);
      CHECK(std::abs(s.f - std::exp(pts[i](0))) < 1e-10 * s.f);
    }
  }

  TEST_CASE("off-block metric is rejected") {
    const auto im = Immersion::from_strings({"u", "v"}, {"u", "v + 0.3*u", "0"}, {{-1, 1}, {-1, 1}});
    const warped::WarpedCandidate c{im, ambient::make_euclidean_acm(1), {{0}, {1}, Eigen::VectorXd::Zero(1)}};
    CHECK_THROWS_WITH_AS(warped::detect_warp(c, immersion::sample_points(im, 5, 1)),
                         doctest::Contains("block structure"), WarpError);
  }

  TEST_CASE("fiber block that does not factor is rejected") {
    const auto im = Immersion::from_strings({"u", "v", "w"}, {"exp(u)*cos(v)", "exp(u)*sin(v)", "w", "0", "0"},
                                            {{-1, 1}, {-1, 1}, {-1, 1}});
    const warped::WarpedCandidate c{im, ambient::make_euclidean_acm(2), {{0}, {1, 2}, Eigen::VectorXd::Zero(1)}};
    CHECK_THROWS_WITH_AS(warped::detect_warp(c, immersion::sample_points(im, 5, 1)),
                         doctest::Contains("inconsistent factorization"), WarpError);
  }

  TEST_CASE("declaration must partition the variables") {
    const auto e = immersion::catalog("warp_surface_r5");
    CHECK_THROWS_AS(warped::validate_declaration({e.immersion, e.ambient, {{0, 1}, {1}, Eigen::VectorXd::Zero(2)}}),
                    WarpError);
    CHECK_THROWS_AS(warped::validate_declaration({e.immersion, e.ambient, {{0}, {1}, Eigen::VectorXd::Zero(1)}}),
                    WarpError);
  }

  TEST_CASE("Bishop-O'Neill structure") {
    for (const char* name : {"warp_surface_r5", "cr_warped_r7", "cr_product_r7"}) {
      const auto e = immersion::catalog(name);
      const auto c = candidate(e);
      for (const auto& p : immersion::sample_points(e.immersion, 5, 6)) {
        const auto wp = warped::prepare_point(c, *e.split, p);
        const auto bo = warped::bishop_oneill_check(c, wp);
        CHECK(bo.connection < 1e-9);
        CHECK(bo.base_geodesic < 1e-9);
        CHECK(bo.fiber_umbilical < 1e-9);
      }
    }
  }

  TEST_CASE("identities on the contact CR warped entry") {
    const auto e = immersion::catalog("cr_warped_r7");
    const auto c = candidate(e);
    for (const auto& p : immersion::sample_points(e.immersion, 10, 9)) {
      const auto wp = warped::prepare_point(c, *e.split, p);
      const auto rep = warped::lemma_suite(c, wp);
      CHECK(rep.values.size() == warped::lemma_keys().size());
      for (const char* k : {"L3i", "L3ii", "L3iii", "L4", "L5", "L6", "L10", "T5", "C2"}) {
        REQUIRE(rep.values.at(k).ok());
        CHECK(rep.values.at(k).value < 1e-10);
      }
      for (const char* k : {"L2", "L7", "L8", "T4"}) CHECK(rep.values.at(k).refused == "degenerate θ");
      CHECK(rep.values.at("chain_L7").value < 1e-12);
      CHECK(rep.values.at("chain_L8").value < 1e-12);
      CHECK(std::abs(rep.xi_lnf) < 1e-12);
      // The literal sign misses by 2|eta(X)| on X = xi.
      CHECK(rep.values.at("C2_literal").value == doctest::Approx(2.0).epsilon(1e-9));
      CHECK(warped::theorem4_check(c, wp, wp.base_frame[0]).refused == "degenerate θ");
      const auto xi = wp.base_frame.back();
      CHECK(warped::corollary2_check(wp, xi, wp.fiber_frame[0]).value < 1e-10);
    }
  }

  TEST_CASE("selectors limit the evaluated keys") {
    const auto e = immersion::catalog("cr_warped_r7");
    const auto c = candidate(e);
    const auto wp = warped::prepare_point(c, *e.split, immersion::sample_points(e.immersion, 1, 9)[0]);
    const auto rep = warped::lemma_suite(c, wp, {"L4", "L6", "chain_L7"});
    CHECK(rep.values.size() == 3);
  }

  TEST_CASE("non-Sasakian candidates still report the chains") {
    const auto e = immersion::catalog("warp_surface_r5");
    const auto c = candidate(e);
    const auto wp = warped::prepare_point(c, *e.split, immersion::sample_points(e.immersion, 1, 9)[0]);
    const auto rep = warped::lemma_suite(c, wp);
    CHECK(rep.values.at("L4").refused == "non-Sasakian ambient");
    CHECK(rep.values.at("chain_L7").ok());
    CHECK(rep.values.at("chain_L7").value < 1e-10);
    CHECK(rep.values.at("chain_L8").value < 1e-10);
  }

  TEST_CASE("instance forms of the nonexistence results") {
    // Nontrivial contact CR warped product: not mixed totally geodesic.
    const auto w = immersion::catalog("cr_warped_r7");
    const auto wp = warped::prepare_point(candidate(w), *w.split, immersion::sample_points(w.immersion, 1, 4)[0]);
    CHECK(secondform::mixed_tg_test(wp.sf, wp.fp, wp.split.D, wp.split.Dtheta) > 1e-3);
    // Mixed totally geodesic product: f is constant.
    const auto p = immersion::catalog("cr_product_r7");
    const auto pp = warped::prepare_point(candidate(p), *p.split, immersion::sample_points(p.immersion, 1, 4)[0]);
    CHECK(secondform::mixed_tg_test(pp.sf, pp.fp, pp.split.D, pp.split.Dtheta) < 1e-10);
    CHECK(pp.grad_lnf().norm() < 1e-10);
  }
}

#include <doctest.h>

#include "contactlab/catalog.hpp"
#include "contactlab/error.hpp"
#include "oracles.hpp"

using namespace contactlab;
using immersion::Immersion;

TEST_SUITE("immersion") {
  TEST_CASE("isometric linear graph") {
    const auto im = Immersion::from_strings({"u", "v"}, {"u", "v", "0", "0", "0"}, {{-1, 1}, {-1, 1}});
    const auto fp = immersion::frame_at(im, ambient::make_euclidean_acm(2), Eigen::Vector2d(0.3, -0.2));
    CHECK((fp.induced_metric - Eigen::Matrix2d::Identity()).norm() < 1e-15);
    CHECK(fp.codim() == 3);
  }

  TEST_CASE("frames are orthonormal and complementary") {
    for (const auto& info : immersion::catalog_list()) {
      const auto e = immersion::catalog(info.name);
      for (const auto& p : immersion::sample_points(e.immersion, 5, 3)) {
        const auto fp = immersion::frame_at(e.immersion, e.ambient, p);
        numjet::VectorList all = fp.tan_frame;
        all.insert(all.end(), fp.nor_frame.begin(), fp.nor_frame.end());
        CHECK(numjet::orthonormality_defect(all, fp.metric()) < 1e-12);
        CHECK(static_cast<int>(all.size()) == e.ambient.dim());
        // Jacobian against finite differences of the position.
        for (int i = 0; i < fp.k(); ++i) {
          const oracle::Vec col = oracle::fd_vector([&](const oracle::Vec& q) { return e.immersion.position(q); }, p,
                                                    oracle::Vec::Unit(fp.k(), i));
          CHECK((col - fp.jac.col(i)).norm() < 1e-8 * std::max(1.0, col.norm()));
        }
      }
    }
  }

  TEST_CASE("excluded points and rank deficiency are refused") {
    const auto e = immersion::catalog("example1");
    Eigen::VectorXd p(5);
    p << 0, 0, 1.5, 1.5, 0;
    CHECK_THROWS_AS(immersion::frame_at(e.immersion, e.ambient, p), GeometryError);
    const auto cone = Immersion::from_strings({"r", "s"}, {"r*cos(s)", "r*sin(s)", "0"}, {{-1, 1}, {0, 1}});
    CHECK_THROWS_AS(immersion::frame_at(cone, ambient::make_euclidean_acm(1), Eigen::Vector2d(0, 0.5)), GeometryError);
  }

  TEST_CASE("sampling is seeded and keeps away from exclusions") {
    const auto e = immersion::catalog("example1");
    const auto a = immersion::sample_points(e.immersion, 50, 42);
    const auto b = immersion::sample_points(e.immersion, 50, 42);
    const auto c = immersion::sample_points(e.immersion, 50, 43);
    REQUIRE(a.size() == 50);
    bool same = true, differ = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      same = same && a[i] == b[i];
      differ = differ || a[i] != c[i];
      CHECK(e.immersion.in_domain(a[i]));
      CHECK(e.immersion.exclusion_distance(a[i]) >= immersion::kExclusionMargin);
    }
    CHECK(same);
    CHECK(differ);
  }

  TEST_CASE("fully excluded box") {
    const auto im = Immersion::from_strings({"u"}, {"u", "0", "0"}, {{0, 1e-4}}, {"u"});
    CHECK_THROWS_AS(immersion::sample_points(im, 3, 1), GeometryError);
  }

  TEST_CASE("structure vector position relative to the submanifold") {
    const auto amb = ambient::make_euclidean_acm(3);
    const auto flat = Immersion::from_strings({"u", "v"}, {"u", "v", "0", "0", "0", "0", "1"}, {{-1, 1}, {-1, 1}});
    CHECK(immersion::xi_tangency(immersion::frame_at(flat, amb, Eigen::Vector2d(0.1, 0.2))).verdict == "normal");
    const auto e = immersion::catalog("example1");
    const auto fp = immersion::frame_at(e.immersion, e.ambient, immersion::sample_points(e.immersion, 1, 1)[0]);
    CHECK(immersion::xi_tangency(fp).verdict == "tangent");
  }

  TEST_CASE("induced metric derivative against finite differences") {
    const auto e = immersion::catalog("cr_warped_r7");
    const auto p = immersion::sample_points(e.immersion, 1, 5)[0];
    const auto fp = immersion::frame_at(e.immersion, e.ambient, p);
    for (int a = 0; a < fp.k(); ++a) {
      const oracle::Vec dir = oracle::Vec::Unit(fp.k(), a);
      auto G = [&](const oracle::Vec& q) { return immersion::frame_at(e.immersion, e.ambient, q).induced_metric; };
      const oracle::Mat fd = (G(p + oracle::kStep * dir) - G(p - oracle::kStep * dir)) / (2 * oracle::kStep);
      CHECK((immersion::induced_metric_derivative(fp, dir) - fd).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

#include <cmath>

#include "doctest.h"
#include "linkmod/fiber.hpp"

using namespace linkmod;

TEST_CASE("distance_of_angle") {
  double gamma = std::acos(51.0 / 99.0);
  CHECK(distance_of_angle(1.1, 0.9, gamma) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(distance_of_angle(1.1, 0.9, kPi) == doctest::Approx(2.0));
  CHECK(distance_of_angle(1.1, 0.9, 0.0) == doctest::Approx(0.2));
}

TEST_CASE("degenerate_angles") {
  auto degs = degenerate_angles(1.1, 0.9, FreeLinkageSpec({1, 1, 1}),
                                FreeLinkageSpec({1, 1}));
  REQUIRE(degs.size() == 3);
  double gamma_star = std::acos(51.0 / 99.0);
  CHECK(degs[0] == doctest::Approx(gamma_star).epsilon(1e-12));
  CHECK(degs[1] == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(degs[2] == doctest::Approx(kTwoPi - gamma_star).epsilon(1e-12));
  // Symmetry under reflection.
  CHECK(degs[0] + degs[2] == doctest::Approx(kTwoPi));

  // Product-certified spec: no degenerate angles.
  CHECK(degenerate_angles(0.4, 0.3, FreeLinkageSpec({1, 1, 1}),
                          FreeLinkageSpec({1, 1}))
            .empty());

  // a = b hits both d = 0 and d = 2.
  auto d2 = degenerate_angles(1.0, 1.0, FreeLinkageSpec({1, 1}),
                              FreeLinkageSpec({1, 1}));
  REQUIRE(d2.size() == 2);
  CHECK(d2[0] == doctest::Approx(0.0));
  CHECK(d2[1] == doctest::Approx(kPi));
}

TEST_CASE("fiber_descriptor table") {
  FreeLinkageSpec tri({1, 1, 1});
  auto f1 = fiber_descriptor(1.0, tri);
  CHECK(f1.kind == FiberKind::CirclesGlued);
  CHECK(f1.count == 3);
  CHECK(f1.chi == -3);
  CHECK(f1.label == "three circles pairwise glued");

  auto f2 = fiber_descriptor(0.5, tri);
  CHECK(f2.kind == FiberKind::KCircles);
  CHECK(f2.count == 2);
  CHECK(f2.chi == 0);

  CHECK(fiber_descriptor(1.5, tri).kind == FiberKind::Circle);
  CHECK(fiber_descriptor(3.0, tri).kind == FiberKind::Point);
  CHECK(fiber_descriptor(3.5, tri).kind == FiberKind::Empty);

  FreeLinkageSpec pair({1, 1});
  CHECK(fiber_descriptor(2.0, pair).kind == FiberKind::Point);
  CHECK(fiber_descriptor(1.0, pair).kind == FiberKind::TwoPoints);
  CHECK(fiber_descriptor(2.5, pair).kind == FiberKind::Empty);
  CHECK(fiber_descriptor(0.0, pair).kind == FiberKind::Circle);

  // Figure-8 style wall: quadrilateral (2, 1, 1, 2) has straight
  // configurations 2 = -1+1+2 and 2 = 1-1+2.
  auto f8 = fiber_descriptor(2.0, FreeLinkageSpec({1, 1, 2}));
  CHECK(f8.kind == FiberKind::CirclesGlued);
  CHECK(f8.chi == -2);

  // Equilateral pentagon via the 4-edge fallback: genus-4 surface.
  auto pent = fiber_descriptor(1.0, FreeLinkageSpec({1, 1, 1, 1}));
  CHECK(pent.kind == FiberKind::Surface);
  CHECK(pent.chi == -6);

  CHECK_THROWS_AS(fiber_descriptor(1.0, FreeLinkageSpec({1, 1, 1, 1, 1})),
                  std::invalid_argument);
}

TEST_CASE("euler_characteristic worked example") {
  MultipolygonSpec spec({FreeLinkageSpec({1.1, 0.9}),
                         FreeLinkageSpec({1, 1, 1}), FreeLinkageSpec({1, 1})});
  auto dec = euler_characteristic(spec);
  REQUIRE(dec.degenerate_angles.size() == 3);
  REQUIRE(dec.degenerate_fibers.size() == 3);
  REQUIRE(dec.interval_fibers.size() == 3);
  CHECK(dec.degenerate_fibers[0].fiber.chi == -6);
  CHECK(dec.degenerate_fibers[1].fiber.chi == 0);
  CHECK(dec.degenerate_fibers[2].fiber.chi == -6);
  // Interval fibers: two circles, two circles, four circles (by angle).
  CHECK(dec.interval_fibers[0].fiber.components() == 2);
  CHECK(dec.interval_fibers[1].fiber.components() == 2);
  CHECK(dec.interval_fibers[2].fiber.components() == 4);
  for (const auto& f : dec.interval_fibers) CHECK(f.fiber.chi == 0);
  CHECK(dec.total_chi == -12);
}

TEST_CASE("euler_characteristic product case") {
  MultipolygonSpec spec({FreeLinkageSpec({0.4, 0.3}),
                         FreeLinkageSpec({1, 1, 1}), FreeLinkageSpec({1, 1})});
  auto dec = euler_characteristic(spec);
  CHECK(dec.degenerate_angles.empty());
  CHECK(dec.total_chi == 0);
  REQUIRE(dec.interval_fibers.size() == 1);
  CHECK(dec.interval_fibers[0].fiber.components() == 4);
}

TEST_CASE("product_structure") {
  MultipolygonSpec good({FreeLinkageSpec({0.4, 0.3}),
                         FreeLinkageSpec({1, 1, 1}), FreeLinkageSpec({1, 1})});
  auto cert = product_structure(good);
  REQUIRE(cert.has_value());
  CHECK(cert->chi == 0);
  CHECK(cert->components == 4);

  MultipolygonSpec bad({FreeLinkageSpec({1.1, 0.9}),
                        FreeLinkageSpec({1, 1, 1}), FreeLinkageSpec({1, 1})});
  CHECK_FALSE(product_structure(bad).has_value());

  // a = b puts 0 in the interval; 0 lies in the even signed-sum set.
  MultipolygonSpec ab({FreeLinkageSpec({0.5, 0.5}), FreeLinkageSpec({1, 1, 1}),
                       FreeLinkageSpec({1, 1})});
  CHECK_FALSE(product_structure(ab).has_value());
}

TEST_CASE("fibered_product_components") {
  ComponentSummary empty, two{{0, 0}}, twob{{0, 0}};
  CHECK(fibered_product_components(empty, two) == 0);
  CHECK(fibered_product_components(two, twob) == 4);
  ComponentSummary split{{0, 1}}, twoc{{0, 0}};
  CHECK(fibered_product_components(split, twoc) == 2);
}

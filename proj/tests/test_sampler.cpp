#include <cmath>

#include "doctest.h"
#include "linkmod/multiquad.hpp"
#include "linkmod/sampler.hpp"

using namespace linkmod;

TEST_CASE("sample_variety empty and zero-dimensional") {
  MultipolygonSpec empty({FreeLinkageSpec({1}), FreeLinkageSpec({5, 1})});
  auto c = sample_variety(empty, 500, 7);
  CHECK(c.empty_variety);
  CHECK(component_count(c) == 0);

  // Rigid triangle: two mirror-image configurations.
  MultipolygonSpec tri({FreeLinkageSpec({3}), FreeLinkageSpec({4, 5})});
  auto t = sample_variety(tri, 500, 7);
  CHECK_FALSE(t.empty_variety);
  CHECK(component_count(t) == 2);
}

TEST_CASE("graph_chi on a glued-circles variety") {
  // Closure variety of ((1), (1,1,1)) is the equilateral quadrilateral
  // moduli space: three circles pairwise glued, chi = -3.
  MultipolygonSpec spec({FreeLinkageSpec({1}), FreeLinkageSpec({1, 1, 1})});
  auto c = sample_variety(spec, 20000, 11);
  CHECK_FALSE(c.empty_variety);
  CHECK(component_count(c) == 1);
  CHECK(graph_chi(spec, c, true) == -3);
  CHECK_THROWS_AS(graph_chi(spec, c, false), std::invalid_argument);
}

TEST_CASE("sampler agrees with symbolic classification") {
  // Four disjoint circles: components 4, chi 0.
  MultipolygonSpec four =
      MultiquadSpec::from_lengths(2, 1, 3, 2.5, 2.0, 1.6).to_spec();
  auto c4 = sample_variety(four, 24000, 5);
  CHECK(c4.component_labels.size() == c4.points.size());
  CHECK(component_count(c4) == 4);
  CHECK(graph_chi(four, c4, true) == 0);

  // Two figure-8s: components 2, chi -2.
  MultipolygonSpec eights =
      MultiquadSpec::from_lengths(1.5, 0.5, 1.9, 0.1, 1.2, 0.9).to_spec();
  auto c8 = sample_variety(eights, 24000, 5);
  CHECK(component_count(c8) == 2);
  CHECK(graph_chi(eights, c8, true) == -2);
}

TEST_CASE("fiber_clusters counts slice points") {
  // Case with v = (0,0,1,0): four points over gamma = 0, two over pi.
  MultipolygonSpec spec =
      MultiquadSpec::from_lengths(2, 1, 3, 2.5, 1.8, 1.2).to_spec();
  auto c = sample_variety(spec, 24000, 3);
  CHECK(fiber_clusters(spec, c, 0.0, 0.2) == 4);
  CHECK(fiber_clusters(spec, c, kPi, 0.2) == 2);

  // Interval image [theta_min, 2pi - theta_min]: nothing over gamma = 0.3.
  MultipolygonSpec band =
      MultiquadSpec::from_lengths(1, 1, 2.5, 1, 1.5, 1.5).to_spec();
  auto cb = sample_variety(band, 24000, 3);
  CHECK(fiber_clusters(band, cb, 0.3, 0.1) == 0);
}

TEST_CASE("sampler determinism") {
  MultipolygonSpec spec({FreeLinkageSpec({1}), FreeLinkageSpec({1, 1, 1})});
  auto a = sample_variety(spec, 3000, 42);
  auto b = sample_variety(spec, 3000, 42);
  CHECK(complex_to_json(a) == complex_to_json(b));
  auto d = sample_variety(spec, 3000, 43);
  CHECK(complex_to_json(a) != complex_to_json(d));
}

TEST_CASE("near_wall flag") {
  MultipolygonSpec wall({FreeLinkageSpec({1.0, 1.0 + 5e-7}),
                         FreeLinkageSpec({1, 1, 1}), FreeLinkageSpec({1, 1})});
  auto c = sample_variety(wall, 200, 1);
  CHECK(c.near_wall);
  MultipolygonSpec fine({FreeLinkageSpec({1.1, 0.9}),
                         FreeLinkageSpec({1, 1, 1}), FreeLinkageSpec({1, 1})});
  CHECK_FALSE(sample_variety(fine, 200, 1).near_wall);
}

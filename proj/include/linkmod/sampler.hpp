#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "linkmod/linkage.hpp"

namespace linkmod {

/// Cluster radius for 0-dimensional fiber point clusters. Newton-refined
/// points scatter at sqrt(closure tolerance), so this sits well above that
/// and well below the spacing of distinct fiber points.
inline constexpr double kFiberClusterRadius = 1e-3;

/// Point cloud on the closure variety with a radius graph in the flat-torus
/// angle metric. Deterministic for fixed (spec, n, seed).
struct SampledComplex {
  std::vector<std::vector<double>> points;  // free-angle coordinates
  std::vector<std::pair<int, int>> edges;
  std::vector<int> component_labels;
  std::uint64_t seed = 0;
  int requested_samples = 0;
  double rho_connect = 0.0;
  bool empty_variety = false;
  /// Some length equality holds within 1e-6 but not 1e-9: topology sits
  /// next to a wall and sampled counts are unreliable.
  bool near_wall = false;
};

SampledComplex sample_variety(const MultipolygonSpec& spec, int n_samples,
                              std::uint64_t seed);

int component_count(const SampledComplex& complex);

/// V - E of the curve skeleton extracted from the sample. Only valid when
/// the caller asserts the space is at most 1-dimensional; refuses otherwise.
int graph_chi(const MultipolygonSpec& spec, const SampledComplex& complex,
              bool dimension_at_most_one);

/// Number of fiber point clusters over the vertex angle theta1 (|gamma -
/// theta1| <= width window, refined onto the exact slice). The first chain
/// must have two edges.
int fiber_clusters(const MultipolygonSpec& spec, const SampledComplex& complex,
                   double theta1, double width);

std::string complex_to_json(const SampledComplex& complex);

}  // namespace linkmod

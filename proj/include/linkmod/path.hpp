#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "linkmod/linkage.hpp"

namespace linkmod {

struct PathResult {
  /// Edge-direction angles of the open chain at each waypoint.
  std::vector<std::vector<double>> waypoints;
  double target_distance = 0.0;
  bool achieved = false;
  int stages = 0;
  std::string diagnostic;
};

struct ConnectednessReport {
  bool certified_connected = false;
  bool applicable = true;
  std::string reason;
  std::optional<std::array<std::size_t, 3>> long_edge_triple;
};

/// Kapovich-Millson disconnection criterion for the closed polygon with the
/// given edges plus an optional virtual first edge of length d >= 0: true
/// iff three distinct edges have all pairwise sums above half the perimeter.
/// Requires at least 3 edges in total.
bool km_disconnected(const FreeLinkageSpec& polygon,
                     std::optional<double> virtual_edge = std::nullopt,
                     std::array<std::size_t, 3>* witness = nullptr);

/// Sufficient connectedness certificate for a three-chain multipolygon whose
/// first chain has two edges and whose outer chains' length ranges contain
/// [|a-b|, a+b].
ConnectednessReport connected_multipolygon(const MultipolygonSpec& spec);

struct SlideOptions {
  double step = kPi / 180.0;  // max angle change between waypoints
  double tol = kClosureTol;
};

/// Deforms an open chain to the target end-to-end distance by rotating one
/// edge per stage with the suffix kept rigid. At most n stages; every
/// waypoint preserves the edge lengths exactly.
PathResult slide_path(const FreeLinkageSpec& chain,
                      const std::vector<double>& start_angles,
                      double target_distance, const SlideOptions& opts = {});

std::string path_result_to_json(const PathResult& r);
std::string connectedness_to_json(const ConnectednessReport& r);

}  // namespace linkmod

#include "linkmod/path.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace linkmod {

bool km_disconnected(const FreeLinkageSpec& polygon,
                     std::optional<double> virtual_edge,
                     std::array<std::size_t, 3>* witness) {
  std::vector<double> edges = polygon.lengths();
  if (virtual_edge) {
    if (*virtual_edge < 0.0)
      throw std::invalid_argument("virtual edge length must be >= 0");
    edges.insert(edges.begin(), *virtual_edge);
  }
  if (edges.size() < 3)
    throw std::invalid_argument("polygon needs at least 3 edges");
  double half = 0.5 * std::accumulate(edges.begin(), edges.end(), 0.0);

  // If any triple works, the three longest edges work: a triple's binding
  // sum is that of its two smallest members.
  std::vector<std::size_t> idx(edges.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + 3, idx.end(),
                    [&](std::size_t i, std::size_t j) {
                      return edges[i] > edges[j];
                    });
  auto i = idx[0], j = idx[1], k = idx[2];
  bool disconnected = edges[i] + edges[j] > half &&
                      edges[i] + edges[k] > half && edges[j] + edges[k] > half;
  if (disconnected && witness) *witness = {i, j, k};
  return disconnected;
}

ConnectednessReport connected_multipolygon(const MultipolygonSpec& spec) {
  ConnectednessReport r;
  if (spec.chain_count() != 3 || spec.chain(0).edge_count() != 2) {
    r.applicable = false;
    r.reason = "not applicable: needs three chains with a two-edge first chain";
    return r;
  }
  double a = spec.chain(0).lengths()[0];
  double b = spec.chain(0).lengths()[1];
  double lo = std::abs(a - b), hi = a + b;
  for (int i : {1, 2}) {
    auto range = length_range(spec.chain(i));
    if (!(range.lo <= lo + kClosureTol && range.hi >= hi - kClosureTol)) {
      r.applicable = false;
      r.reason = "not applicable: chain length range does not cover "
                 "[|a-b|, a+b]";
      return r;
    }
  }

  auto two_longest_ok = [&](const FreeLinkageSpec& chain) {
    std::vector<double> s = chain.lengths();
    std::partial_sort(s.begin(), s.begin() + std::min<std::size_t>(2, s.size()),
                      s.end(), std::greater<>());
    double pair = s.size() >= 2 ? s[0] + s[1] : s[0];
    double perimeter = lo + chain.total_length();
    return pair <= 0.5 * perimeter + kClosureTol;
  };
  if (two_longest_ok(spec.chain(1)) && two_longest_ok(spec.chain(2))) {
    r.certified_connected = true;
    r.reason = "two longest edges of each outer chain within half the "
               "folded-diagonal perimeter";
  } else {
    r.reason = "criterion not met - not certified";
  }
  return r;
}

namespace {

struct Planar {
  double x = 0.0, y = 0.0;
};

std::vector<Planar> vertices(const FreeLinkageSpec& chain,
                             const std::vector<double>& angles) {
  std::vector<Planar> v(chain.edge_count() + 1);
  for (std::size_t j = 0; j < chain.edge_count(); ++j) {
    v[j + 1].x = v[j].x + chain.lengths()[j] * std::cos(angles[j]);
    v[j + 1].y = v[j].y + chain.lengths()[j] * std::sin(angles[j]);
  }
  return v;
}

}  // namespace

PathResult slide_path(const FreeLinkageSpec& chain,
                      const std::vector<double>& start_angles,
                      double target_distance, const SlideOptions& opts) {
  const std::size_t n = chain.edge_count();
  if (start_angles.size() != n)
    throw std::invalid_argument("angle count mismatch");
  auto range = length_range(chain);
  if (!range.contains(target_distance, opts.tol))
    throw std::invalid_argument("target distance outside the length range");

  PathResult result;
  result.target_distance = target_distance;
  std::vector<double> angles = start_angles;
  result.waypoints.push_back(angles);

  // Suffix length ranges: range_from[i] covers edges i..n-1.
  std::vector<LengthRange> range_from(n + 1);
  range_from[n] = {0.0, 0.0};
  {
    double sum = 0.0, mx = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      sum += chain.lengths()[i];
      mx = std::max(mx, chain.lengths()[i]);
      range_from[i] = {std::max(0.0, 2.0 * mx - sum), sum};
    }
  }

  // Target point at the requested distance from the pinned initial vertex,
  // in the direction of the current terminal vertex.
  auto v = vertices(chain, angles);
  double endn = std::hypot(v[n].x, v[n].y);
  Planar goal;
  if (endn > opts.tol) {
    goal = {target_distance * v[n].x / endn, target_distance * v[n].y / endn};
  } else {
    goal = {target_distance, 0.0};
  }

  auto rotate_suffix = [&](std::size_t i, double delta) {
    // Rotate edges i..n-1 about vertex i, in waypoint-sized increments.
    int steps = std::max(1, static_cast<int>(std::ceil(std::abs(delta) /
                                                       opts.step)));
    // Interpolate from a fixed base so the final waypoint hits base + delta
    // exactly instead of accumulating per-step roundoff.
    std::vector<double> base(angles.begin() + i, angles.end());
    for (int s = 1; s <= steps; ++s) {
      double inc = delta * s / steps;
      for (std::size_t j = i; j < n; ++j)
        angles[j] = wrap_angle(base[j - i] + inc);
      result.waypoints.push_back(angles);
    }
  };

  // Stage i chooses the direction of edge i by rotating the rigid suffix
  // about vertex i. The invariant keeps |vertex_{i+1} - goal| inside the
  // length range of the remaining edges, so the chain always closes.
  for (std::size_t i = 0; i < n; ++i) {
    v = vertices(chain, angles);
    double ux = goal.x - v[i].x, uy = goal.y - v[i].y;
    double t_prev = std::hypot(ux, uy);
    double d = chain.lengths()[i];
    double t_cur = std::hypot(goal.x - v[i + 1].x, goal.y - v[i + 1].y);

    double lo_t = std::max(range_from[i + 1].lo, std::abs(t_prev - d));
    double hi_t = std::min(range_from[i + 1].hi, t_prev + d);
    if (lo_t > hi_t + 1e-9) {
      result.diagnostic = "infeasible stage: empty sub-range intersection";
      return result;
    }
    double t_new = std::clamp(t_cur, lo_t, std::max(lo_t, hi_t));
    if (std::abs(t_new - t_cur) <= opts.tol && i + 1 < n) continue;

    if (t_prev <= opts.tol) {
      // Pivot already at the goal: any direction keeps the invariant.
      continue;
    }
    // Angle at the pivot in the triangle (d, t_prev, t_new), via the
    // half-angle form: stable where acos of a near-unit cosine loses half
    // the significant digits (near-straight configurations).
    double num = std::max(0.0, (t_new - (d - t_prev)) * (t_new + (d - t_prev)));
    double den = std::max(0.0, ((d + t_prev) - t_new) * ((d + t_prev) + t_new));
    double beta = 2.0 * std::atan2(std::sqrt(num), std::sqrt(den));
    double base = std::atan2(uy, ux);
    double cur = angles[i];
    double opt1 = angle_diff(base + beta, cur);
    double opt2 = angle_diff(base - beta, cur);
    double delta = std::abs(opt1) <= std::abs(opt2) ? opt1 : opt2;
    rotate_suffix(i, delta);
    ++result.stages;
  }

  v = vertices(chain, angles);
  double achieved_d = std::hypot(v[n].x, v[n].y);
  result.achieved = std::abs(achieved_d - target_distance) <= opts.tol;
  if (!result.achieved)
    result.diagnostic = "final distance off target by " +
                        std::to_string(achieved_d - target_distance);
  return result;
}

std::string path_result_to_json(const PathResult& r) {
  nlohmann::json j;
  j["target_distance"] = r.target_distance;
  j["achieved"] = r.achieved;
  j["stages"] = r.stages;
  j["waypoints"] = r.waypoints;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j.dump();
}

std::string connectedness_to_json(const ConnectednessReport& r) {
  nlohmann::json j;
  j["certified_connected"] = r.certified_connected;
  j["applicable"] = r.applicable;
  j["reason"] = r.reason;
  if (r.long_edge_triple)
    j["long_edge_triple"] = {(*r.long_edge_triple)[0],
                             (*r.long_edge_triple)[1],
                             (*r.long_edge_triple)[2]};
  return j.dump();
}

}  // namespace linkmod

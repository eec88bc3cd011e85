#include "linkmod/sampler.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "json.hpp"
#include "linkmod/smoothness.hpp"

namespace linkmod {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic uniform angle for (seed, sample index, coordinate index).
double seeded_angle(std::uint64_t seed, std::uint64_t k, std::uint64_t j) {
  std::uint64_t h = splitmix64(splitmix64(seed ^ (k * 0xd1342543de82ef95ULL)) ^
                               (j * 0xaf251af3b0f025b5ULL));
  return kTwoPi * (static_cast<double>(h >> 11) * 0x1.0p-53);
}

double torus_dist2(const std::vector<double>& a, const std::vector<double>& b) {
  // Coordinates are already in [0, 2pi), so the wrap needs no fmod.
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    if (d > kPi) d -= kTwoPi;
    if (d < -kPi) d += kTwoPi;
    s += d * d;
  }
  return s;
}

// Uniform grid over the flat torus [0, 2pi)^D for radius queries.
class TorusGrid {
 public:
  TorusGrid(std::size_t dims, double radius) : dims_(dims) {
    m_ = std::max<long>(1, static_cast<long>(std::floor(kTwoPi / radius)));
    // Cells are hashed, not enumerated, so a fine grid costs nothing; only
    // guard against degenerate radii.
    m_ = std::min<long>(m_, 1L << 20);
    cell_ = kTwoPi / static_cast<double>(m_);
  }

  void insert(int id, const std::vector<double>& p) {
    cells_[key_of(p)].push_back(id);
  }

  // Candidate ids for a ball of the given radius around p (may include
  // false positives; callers re-check distances). Per dimension, only the
  // neighbor cells the ball actually reaches are probed.
  void candidates(const std::vector<double>& p, double radius,
                  std::vector<int>& out) const {
    out.clear();
    std::vector<long> base(dims_);
    std::vector<std::array<int, 3>> offs(dims_);
    std::vector<std::size_t> n_offs(dims_);
    for (std::size_t i = 0; i < dims_; ++i) {
      double cells = p[i] / cell_;
      long cell_idx = static_cast<long>(std::floor(cells));
      base[i] = cell_idx % m_;
      double frac = (cells - static_cast<double>(cell_idx)) * cell_;
      std::size_t k = 0;
      offs[i][k++] = 0;
      // With two cells per dimension -1 and +1 alias, so one probe covers
      // both boundaries.
      if (m_ == 2 && (frac <= radius || cell_ - frac <= radius))
        offs[i][k++] = -1;
      if (m_ >= 3 && frac <= radius) offs[i][k++] = -1;
      if (m_ >= 3 && cell_ - frac <= radius) offs[i][k++] = 1;
      n_offs[i] = k;
    }
    std::vector<long> idx(dims_);
    std::size_t total = 1;
    for (std::size_t i = 0; i < dims_; ++i) total *= n_offs[i];
    for (std::size_t t = 0; t < total; ++t) {
      std::size_t rem = t;
      for (std::size_t i = 0; i < dims_; ++i) {
        long off = offs[i][rem % n_offs[i]];
        rem /= n_offs[i];
        idx[i] = ((base[i] + off) % m_ + m_) % m_;
      }
      auto it = cells_.find(hash_idx(idx));
      if (it == cells_.end()) continue;
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }

 private:
  std::uint64_t key_of(const std::vector<double>& p) const {
    std::vector<long> idx(dims_);
    for (std::size_t i = 0; i < dims_; ++i)
      idx[i] = static_cast<long>(std::floor(p[i] / cell_)) % m_;
    return hash_idx(idx);
  }

  std::uint64_t hash_idx(const std::vector<long>& idx) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (long v : idx) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::size_t dims_;
  long m_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool detect_near_wall(const MultipolygonSpec& spec) {
  for (std::size_t i = 0; i < spec.chain_count(); ++i) {
    for (std::size_t j = i + 1; j < spec.chain_count(); ++j) {
      std::vector<double> combined = spec.chain(i).lengths();
      const auto& lj = spec.chain(j).lengths();
      combined.insert(combined.end(), lj.begin(), lj.end());
      if (combined.size() > 20) continue;
      double best = std::numeric_limits<double>::infinity();
      std::size_t count = std::size_t{1} << combined.size();
      for (std::size_t mask = 0; mask < count; ++mask) {
        double s = 0.0;
        for (std::size_t e = 0; e < combined.size(); ++e)
          s += (mask >> e & 1) ? -combined[e] : combined[e];
        best = std::min(best, std::abs(s));
      }
      if (best > 1e-9 && best <= 1e-6) return true;
    }
  }
  return false;
}

}  // namespace

SampledComplex sample_variety(const MultipolygonSpec& spec, int n_samples,
                              std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  SampledComplex cx;
  cx.seed = seed;
  cx.requested_samples = n_samples;
  cx.near_wall = detect_near_wall(spec);

  const std::size_t dims = spec.free_angle_count();
  const double dedupe_r = 10.0 * kClosureTol;
  TorusGrid dedupe(dims, std::max(dedupe_r, 1e-4));
  std::vector<int> cand;

  for (int k = 0; k < n_samples; ++k) {
    std::vector<double> flat(dims);
    for (std::size_t j = 0; j < dims; ++j)
      flat[j] = seeded_angle(seed, static_cast<std::uint64_t>(k), j);
    auto proj =
        project_to_variety(spec, Configuration::from_free_angles(spec, flat));
    if (!proj) continue;
    std::vector<double> p = proj->free_angles();
    dedupe.candidates(p, dedupe_r, cand);
    bool dup = false;
    for (int id : cand)
      if (torus_dist2(cx.points[id], p) <= dedupe_r * dedupe_r) {
        dup = true;
        break;
      }
    if (dup) continue;
    dedupe.insert(static_cast<int>(cx.points.size()), p);
    cx.points.push_back(std::move(p));
  }

  const int n = static_cast<int>(cx.points.size());
  if (n == 0) {
    cx.empty_variety = true;
    return cx;
  }

  // Adaptive connection radius: 6x a high quantile of the
  // 3rd-nearest-neighbor distance over a deterministic subsample.
  if (n >= 8) {
    std::vector<double> third;
    std::vector<double> d2;
    int stride = std::max(1, n / 128);
    for (int i = 0; i < n; i += stride) {
      d2.clear();
      for (int j = 0; j < n; ++j)
        if (j != i) d2.push_back(torus_dist2(cx.points[i], cx.points[j]));
      std::nth_element(d2.begin(), d2.begin() + 2, d2.end());
      third.push_back(std::sqrt(d2[2]));
    }
    // High quantile, not the median: projection density along the variety is
    // uneven and the sparse stretches must still connect.
    std::size_t q = std::min(third.size() - 1, (95 * third.size()) / 100);
    std::nth_element(third.begin(), third.begin() + q, third.end());
    cx.rho_connect = 6.0 * third[q];
  } else {
    cx.rho_connect = 1e-6;
  }

  // Cells at 2.5x the connection radius keep the expected probe count per
  // query low (boundary cells are probed only when the ball reaches them).
  TorusGrid grid(dims, 2.5 * std::max(cx.rho_connect, 1e-4));
  for (int i = 0; i < n; ++i) grid.insert(i, cx.points[i]);
  UnionFind uf(n);
  double rho2 = cx.rho_connect * cx.rho_connect;
  for (int i = 0; i < n; ++i) {
    grid.candidates(cx.points[i], cx.rho_connect, cand);
    for (int j : cand) {
      if (j <= i) continue;
      if (torus_dist2(cx.points[i], cx.points[j]) <= rho2) {
        cx.edges.push_back({i, j});
        uf.unite(i, j);
      }
    }
  }

  // Second scan out to 2 * rho for cross-component near misses only (the
  // component filter runs before any distance work, so this pass stays
  // cheap). Two situations get repaired here:
  //  - satellite fragments: the Newton projection thins out around singular
  //    (pinch) points, leaving tiny clusters stranded just outside rho. A
  //    real component carries far more than n/256 of the points, so small
  //    clusters attach directly;
  //  - narrow gaps between two large branches meeting at a pinch. There the
  //    variety genuinely continues across the gap, so the torus midpoint of
  //    a close cross-component pair projects onto a variety point within
  //    rho of both sides, certifying a path with steps <= rho. Honestly
  //    separate components fail that test and stay separate.
  {
    std::vector<int> size_of_root(n, 0);
    for (int i = 0; i < n; ++i) ++size_of_root[uf.find(i)];
    const int frag_max = std::max(8, n / 256);
    const double near2 = 4.0 * rho2;
    std::vector<std::tuple<double, int, int>> bridge_cand;
    for (int i = 0; i < n; ++i) {
      grid.candidates(cx.points[i], 2.0 * cx.rho_connect, cand);
      for (int j : cand) {
        if (j <= i || uf.find(j) == uf.find(i)) continue;
        double d2 = torus_dist2(cx.points[i], cx.points[j]);
        if (d2 > near2) continue;
        if (size_of_root[uf.find(i)] < frag_max ||
            size_of_root[uf.find(j)] < frag_max) {
          cx.edges.push_back({i, j});
          uf.unite(i, j);
        } else {
          bridge_cand.emplace_back(d2, i, j);
        }
      }
    }
    std::sort(bridge_cand.begin(), bridge_cand.end());
    std::map<std::pair<int, int>, int> attempts;
    for (const auto& [d2, i, j] : bridge_cand) {
      int ri = uf.find(i), rj = uf.find(j);
      if (ri == rj) continue;
      auto key = std::minmax(ri, rj);
      int& tried = attempts[{key.first, key.second}];
      if (tried >= 40) continue;
      ++tried;
      std::vector<double> mid(dims);
      for (std::size_t k = 0; k < dims; ++k)
        mid[k] = wrap_angle(
            cx.points[i][k] +
            0.5 * angle_diff(cx.points[j][k], cx.points[i][k]));
      auto proj = project_to_variety(
          spec, Configuration::from_free_angles(spec, mid));
      if (!proj) continue;
      std::vector<double> m = proj->free_angles();
      if (torus_dist2(m, cx.points[i]) <= rho2 &&
          torus_dist2(m, cx.points[j]) <= rho2) {
        cx.edges.push_back({i, j});
        uf.unite(i, j);
      }
    }
  }

  cx.component_labels.resize(n);
  std::unordered_map<int, int> relabel;
  for (int i = 0; i < n; ++i) {
    int root = uf.find(i);
    auto it = relabel.find(root);
    if (it == relabel.end())
      it = relabel.emplace(root, static_cast<int>(relabel.size())).first;
    cx.component_labels[i] = it->second;
  }
  return cx;
}

int component_count(const SampledComplex& complex) {
  if (complex.points.empty()) return 0;
  return 1 + *std::max_element(complex.component_labels.begin(),
                               complex.component_labels.end());
}

int graph_chi(const MultipolygonSpec& spec, const SampledComplex& complex,
              bool dimension_at_most_one) {
  (void)spec;
  if (!dimension_at_most_one)
    throw std::invalid_argument(
        "graph_chi needs the symbolic assertion that the space is at most "
        "1-dimensional");
  const int n = static_cast<int>(complex.points.size());
  if (n == 0) return 0;
  const std::size_t dims = complex.points[0].size();
  const int n_comps = component_count(complex);

  std::vector<std::vector<int>> comp_points(n_comps);
  for (int i = 0; i < n; ++i)
    comp_points[complex.component_labels[i]].push_back(i);

  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : complex.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }

  double r_dir = 4.0 * complex.rho_connect;
  double rr = 2.0 * r_dir;  // removal-ball radius, the largest query radius
  TorusGrid grid(dims, std::max(rr, 1e-4));
  for (int i = 0; i < n; ++i) grid.insert(i, complex.points[i]);

  int chi = 0;
  std::vector<int> cand;
  for (int c = 0; c < n_comps; ++c) {
    const auto& pts = comp_points[c];
    if (pts.size() < 8) {
      chi += 1;  // isolated point cluster
      continue;
    }

    // Singular candidates: points whose neighbor directions form >= 3
    // clusters (a smooth arc shows exactly two, antipodal).
    std::vector<int> singular;
    for (int i : pts) {
      grid.candidates(complex.points[i], r_dir, cand);
      std::vector<std::vector<double>> reps;
      for (int j : cand) {
        if (j == i || complex.component_labels[j] != c) continue;
        std::vector<double> off(dims);
        double norm = 0.0;
        for (std::size_t k = 0; k < dims; ++k) {
          off[k] = angle_diff(complex.points[j][k], complex.points[i][k]);
          norm += off[k] * off[k];
        }
        norm = std::sqrt(norm);
        if (norm < 1e-12 || norm > r_dir) continue;
        for (auto& v : off) v /= norm;
        bool assigned = false;
        for (const auto& rep : reps) {
          double dot = 0.0;
          for (std::size_t k = 0; k < dims; ++k) dot += rep[k] * off[k];
          if (dot > 0.766) {  // within 40 degrees
            assigned = true;
            break;
          }
        }
        if (!assigned) reps.push_back(off);
      }
      if (reps.size() >= 3) singular.push_back(i);
    }

    if (singular.empty()) {
      chi += 0;  // smooth circle(s)
      continue;
    }

    // Group candidates into vertices.
    UnionFind vf(static_cast<int>(singular.size()));
    double r2 = r_dir * r_dir;
    for (std::size_t a = 0; a < singular.size(); ++a)
      for (std::size_t b = a + 1; b < singular.size(); ++b)
        if (torus_dist2(complex.points[singular[a]],
                        complex.points[singular[b]]) <= r2)
          vf.unite(static_cast<int>(a), static_cast<int>(b));
    int vertices = 0;
    for (std::size_t a = 0; a < singular.size(); ++a)
      if (vf.find(static_cast<int>(a)) == static_cast<int>(a)) ++vertices;

    // Remove a ball around every candidate; the remainder splits into arcs.
    std::vector<char> removed(n, 0);
    double rr = 2.0 * r_dir;
    for (int s : singular) {
      grid.candidates(complex.points[s], rr, cand);
      for (int j : cand)
        if (complex.component_labels[j] == c &&
            torus_dist2(complex.points[s], complex.points[j]) <= rr * rr)
          removed[j] = 1;
    }

    UnionFind pf(n);
    for (auto [i, j] : complex.edges)
      if (complex.component_labels[i] == c && !removed[i] && !removed[j])
        pf.unite(i, j);
    std::vector<int> piece_root;
    std::vector<char> touches;
    for (int i : pts) {
      if (removed[i]) continue;
      int root = pf.find(i);
      auto it = std::find(piece_root.begin(), piece_root.end(), root);
      std::size_t pi;
      if (it == piece_root.end()) {
        piece_root.push_back(root);
        touches.push_back(0);
        pi = piece_root.size() - 1;
      } else {
        pi = static_cast<std::size_t>(it - piece_root.begin());
      }
      for (int j : adj[i])
        if (removed[j]) touches[pi] = 1;
    }
    int arcs = 0;
    for (char t : touches) arcs += t;  // non-touching pieces are loops
    chi += vertices - arcs;
  }
  return chi;
}

namespace {

// Newton-solve a single chain's angles so its end lands on target.
std::optional<std::vector<double>> solve_chain_to_point(
    const FreeLinkageSpec& chain, std::vector<double> angles, double tx,
    double ty) {
  const std::size_t m = chain.edge_count();
  auto residual = [&](const std::vector<double>& a, double& rx, double& ry) {
    rx = -tx;
    ry = -ty;
    for (std::size_t j = 0; j < m; ++j) {
      rx += chain.lengths()[j] * std::cos(a[j]);
      ry += chain.lengths()[j] * std::sin(a[j]);
    }
  };
  double rx, ry;
  residual(angles, rx, ry);
  double norm = std::hypot(rx, ry);
  for (int iter = 0; iter < 50; ++iter) {
    if (norm <= kClosureTol) return angles;
    Eigen::MatrixXd J(2, m);
    for (std::size_t j = 0; j < m; ++j) {
      J(0, j) = -chain.lengths()[j] * std::sin(angles[j]);
      J(1, j) = chain.lengths()[j] * std::cos(angles[j]);
    }
    Eigen::Vector2d r(rx, ry);
    Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      std::vector<double> trial = angles;
      for (std::size_t j = 0; j < m; ++j)
        trial[j] = wrap_angle(trial[j] + scale * step(j));
      double trx, try_, tn;
      residual(trial, trx, try_);
      tn = std::hypot(trx, try_);
      if (tn < norm) {
        angles = std::move(trial);
        rx = trx;
        ry = try_;
        norm = tn;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  return norm <= kClosureTol ? std::optional(angles) : std::nullopt;
}

}  // namespace

int fiber_clusters(const MultipolygonSpec& spec, const SampledComplex& complex,
                   double theta1, double width) {
  if (spec.chain(0).edge_count() != 2)
    throw std::invalid_argument("fiber clusters need a two-edge first chain");
  double a = spec.chain(0).lengths()[0];
  double b = spec.chain(0).lengths()[1];
  double theta21 = wrap_angle(kPi - theta1);
  double tx = a + b * std::cos(theta21);
  double ty = b * std::sin(theta21);

  std::vector<std::vector<double>> refined;
  auto refine_from = [&](const std::vector<std::vector<double>>& chain_angles) {
    std::vector<double> flat;
    for (std::size_t i = 1; i < spec.chain_count(); ++i) {
      auto sol =
          solve_chain_to_point(spec.chain(i), chain_angles[i], tx, ty);
      if (!sol) return;
      flat.insert(flat.end(), sol->begin(), sol->end());
    }
    refined.push_back(std::move(flat));
  };

  for (const auto& p : complex.points) {
    if (std::abs(angle_diff(p[0], theta21)) > width) continue;
    auto cfg = Configuration::from_free_angles(spec, p);
    refine_from(cfg.angles());
  }
  if (refined.empty()) {
    // Local deterministic resampling on the exact slice.
    for (int k = 0; k < 400; ++k) {
      std::vector<std::vector<double>> angles(spec.chain_count());
      angles[0] = {0.0, theta21};
      for (std::size_t i = 1; i < spec.chain_count(); ++i)
        for (std::size_t j = 0; j < spec.chain(i).edge_count(); ++j)
          angles[i].push_back(seeded_angle(complex.seed ^ 0x5eedULL,
                                           static_cast<std::uint64_t>(k),
                                           i * 31 + j));
      refine_from(angles);
    }
  }

  std::vector<std::vector<double>> reps;
  for (const auto& p : refined) {
    bool found = false;
    for (const auto& rep : reps)
      if (torus_dist2(rep, p) <= kFiberClusterRadius * kFiberClusterRadius) {
        found = true;
        break;
      }
    if (!found) reps.push_back(p);
  }
  return static_cast<int>(reps.size());
}

std::string complex_to_json(const SampledComplex& complex) {
  nlohmann::json j;
  j["seed"] = complex.seed;
  j["requested_samples"] = complex.requested_samples;
  j["rho_connect"] = complex.rho_connect;
  j["empty_variety"] = complex.empty_variety;
  j["near_wall"] = complex.near_wall;
  j["points"] = complex.points;
  j["edges"] = nlohmann::json::array();
  for (auto [a, b] : complex.edges) j["edges"].push_back({a, b});
  j["component_labels"] = complex.component_labels;
  return j.dump();
}

}  // namespace linkmod

#include "linkmod/linkage.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace linkmod {

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double angle_diff(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  if (d > kPi) d -= kTwoPi;
  return d;
}

FreeLinkageSpec::FreeLinkageSpec(std::vector<double> lengths)
    : lengths_(std::move(lengths)) {
  if (lengths_.empty())
    throw std::invalid_argument("free linkage needs at least one edge");
  for (double d : lengths_)
    if (!(d > 0.0))
      throw std::invalid_argument("edge lengths must be strictly positive");
}

double FreeLinkageSpec::total_length() const {
  return std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
}

double FreeLinkageSpec::max_length() const {
  return *std::max_element(lengths_.begin(), lengths_.end());
}

FreeLinkageSpec FreeLinkageSpec::reversed() const {
  std::vector<double> rev(lengths_.rbegin(), lengths_.rend());
  return FreeLinkageSpec(std::move(rev));
}

MultipolygonSpec::MultipolygonSpec(std::vector<FreeLinkageSpec> chains)
    : chains_(std::move(chains)) {
  if (chains_.size() < 2 || chains_.size() > 3)
    throw std::invalid_argument("multipolygon needs 2 or 3 chains");
}

std::size_t MultipolygonSpec::free_angle_count() const {
  std::size_t n = chains_[0].edge_count() - 1;
  for (std::size_t i = 1; i < chains_.size(); ++i)
    n += chains_[i].edge_count();
  return n;
}

Configuration::Configuration(const MultipolygonSpec& spec,
                             std::vector<std::vector<double>> angles)
    : angles_(std::move(angles)) {
  if (angles_.size() != spec.chain_count())
    throw std::invalid_argument("configuration chain count mismatch");
  for (std::size_t i = 0; i < angles_.size(); ++i)
    if (angles_[i].size() != spec.chain(i).edge_count())
      throw std::invalid_argument("configuration edge count mismatch");
  if (std::abs(angles_[0][0]) > kAngleTol &&
      std::abs(angles_[0][0] - kTwoPi) > kAngleTol)
    throw std::invalid_argument("first edge of chain 1 must be pinned at 0");
  angles_[0][0] = 0.0;
  for (auto& chain : angles_)
    for (auto& a : chain) a = wrap_angle(a);
}

void Configuration::set_angle(std::size_t chain, std::size_t edge,
                              double value) {
  if (chain == 0 && edge == 0)
    throw std::invalid_argument("first edge of chain 1 is pinned");
  angles_.at(chain).at(edge) = wrap_angle(value);
}

std::vector<double> Configuration::free_angles() const {
  std::vector<double> flat;
  for (std::size_t j = 1; j < angles_[0].size(); ++j)
    flat.push_back(angles_[0][j]);
  for (std::size_t i = 1; i < angles_.size(); ++i)
    for (double a : angles_[i]) flat.push_back(a);
  return flat;
}

Configuration Configuration::from_free_angles(const MultipolygonSpec& spec,
                                              const std::vector<double>& flat) {
  if (flat.size() != spec.free_angle_count())
    throw std::invalid_argument("free angle count mismatch");
  std::vector<std::vector<double>> angles(spec.chain_count());
  std::size_t k = 0;
  angles[0].push_back(0.0);
  for (std::size_t j = 1; j < spec.chain(0).edge_count(); ++j)
    angles[0].push_back(flat[k++]);
  for (std::size_t i = 1; i < spec.chain_count(); ++i)
    for (std::size_t j = 0; j < spec.chain(i).edge_count(); ++j)
      angles[i].push_back(flat[k++]);
  return Configuration(spec, std::move(angles));
}

namespace {

std::pair<double, double> end_vector(const FreeLinkageSpec& chain,
                                     const std::vector<double>& angles) {
  double x = 0.0, y = 0.0;
  for (std::size_t j = 0; j < chain.edge_count(); ++j) {
    x += chain.lengths()[j] * std::cos(angles[j]);
    y += chain.lengths()[j] * std::sin(angles[j]);
  }
  return {x, y};
}

}  // namespace

double end_to_end_distance(const MultipolygonSpec& spec,
                           const Configuration& config,
                           std::size_t chain_index) {
  if (chain_index >= spec.chain_count())
    throw std::out_of_range("chain index out of range");
  auto [x, y] = end_vector(spec.chain(chain_index),
                           config.angles()[chain_index]);
  return std::hypot(x, y);
}

double end_to_end_distance(const FreeLinkageSpec& chain,
                           const std::vector<double>& angles) {
  auto [x, y] = end_vector(chain, angles);
  return std::hypot(x, y);
}

LengthRange length_range(const FreeLinkageSpec& spec) {
  double hi = spec.total_length();
  double lo = std::max(0.0, 2.0 * spec.max_length() - hi);
  return {lo, hi};
}

std::vector<double> residuals(const MultipolygonSpec& spec,
                              const Configuration& config) {
  auto [x0, y0] = end_vector(spec.chain(0), config.angles()[0]);
  std::vector<double> r;
  for (std::size_t i = 1; i < spec.chain_count(); ++i) {
    auto [xi, yi] = end_vector(spec.chain(i), config.angles()[i]);
    r.push_back(x0 - xi);
    r.push_back(y0 - yi);
  }
  return r;
}

double residual_norm(const MultipolygonSpec& spec,
                     const Configuration& config) {
  double s = 0.0;
  for (double v : residuals(spec, config)) s += v * v;
  return std::sqrt(s);
}

namespace {

// Jacobian of the residuals with respect to the free angles, in the
// coordinate order of Configuration::free_angles.
Eigen::MatrixXd residual_jacobian(const MultipolygonSpec& spec,
                                  const Configuration& config) {
  const std::size_t m = spec.free_angle_count();
  const std::size_t rows = spec.constraint_count();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows, m);
  std::size_t col = 0;
  // Chain-0 angles appear with a + sign in every residual pair.
  for (std::size_t j = 1; j < spec.chain(0).edge_count(); ++j, ++col) {
    double d = spec.chain(0).lengths()[j];
    double th = config.angle(0, j);
    for (std::size_t i = 1; i < spec.chain_count(); ++i) {
      J(2 * (i - 1), col) = -d * std::sin(th);
      J(2 * (i - 1) + 1, col) = d * std::cos(th);
    }
  }
  for (std::size_t i = 1; i < spec.chain_count(); ++i) {
    for (std::size_t j = 0; j < spec.chain(i).edge_count(); ++j, ++col) {
      double d = spec.chain(i).lengths()[j];
      double th = config.angle(i, j);
      J(2 * (i - 1), col) = d * std::sin(th);
      J(2 * (i - 1) + 1, col) = -d * std::cos(th);
    }
  }
  return J;
}

}  // namespace

std::optional<Configuration> project_to_variety(const MultipolygonSpec& spec,
                                                const Configuration& seed,
                                                const ProjectionOptions& opts) {
  std::vector<double> x = seed.free_angles();
  auto make_config = [&](const std::vector<double>& v) {
    return Configuration::from_free_angles(spec, v);
  };
  Configuration cur = make_config(x);
  auto res = residuals(spec, cur);
  double norm = 0.0;
  for (double v : res) norm += v * v;
  norm = std::sqrt(norm);

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    if (norm <= opts.tol) return cur;
    Eigen::MatrixXd J = residual_jacobian(spec, cur);
    Eigen::VectorXd r(res.size());
    for (std::size_t k = 0; k < res.size(); ++k) r(k) = res[k];
    Eigen::VectorXd step =
        J.completeOrthogonalDecomposition().solve(-r);
    // Halve the step until the residual norm decreases.
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      std::vector<double> trial = x;
      for (std::size_t k = 0; k < trial.size(); ++k)
        trial[k] = wrap_angle(trial[k] + scale * step(k));
      Configuration tc = make_config(trial);
      auto tr = residuals(spec, tc);
      double tn = 0.0;
      for (double v : tr) tn += v * v;
      tn = std::sqrt(tn);
      if (tn < norm) {
        x = std::move(trial);
        cur = std::move(tc);
        res = std::move(tr);
        norm = tn;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  if (norm <= opts.tol) return cur;
  return std::nullopt;
}

MultipolygonSpec spec_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("chains") || !j["chains"].is_array())
    throw std::invalid_argument("spec JSON needs a \"chains\" array");
  std::vector<FreeLinkageSpec> chains;
  for (const auto& c : j["chains"])
    chains.emplace_back(c.get<std::vector<double>>());
  return MultipolygonSpec(std::move(chains));
}

std::string spec_to_json(const MultipolygonSpec& spec) {
  nlohmann::json j;
  j["chains"] = nlohmann::json::array();
  for (const auto& c : spec.chains()) j["chains"].push_back(c.lengths());
  return j.dump();
}

Configuration config_from_json(const MultipolygonSpec& spec,
                               const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("angles") || !j["angles"].is_array())
    throw std::invalid_argument("config JSON needs an \"angles\" array");
  std::vector<std::vector<double>> angles;
  for (const auto& c : j["angles"])
    angles.push_back(c.get<std::vector<double>>());
  return Configuration(spec, std::move(angles));
}

std::string config_to_json(const Configuration& config) {
  nlohmann::json j;
  j["angles"] = config.angles();
  return j.dump();
}

}  // namespace linkmod

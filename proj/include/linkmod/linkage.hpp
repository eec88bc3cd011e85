#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace linkmod {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.1415926535897932384626433832795;

// Closure tolerance on the residual 2-norm, in the length unit of the spec.
inline constexpr double kClosureTol = 1e-9;
// Wrap-around comparison tolerance for angles.
inline constexpr double kAngleTol = 1e-12;

/// Angle normalized into [0, 2*pi).
double wrap_angle(double theta);

/// Shortest signed angular difference a - b, in (-pi, pi].
double angle_diff(double a, double b);

/// One open chain of rigid bars, described by its edge lengths.
class FreeLinkageSpec {
 public:
  explicit FreeLinkageSpec(std::vector<double> lengths);

  const std::vector<double>& lengths() const { return lengths_; }
  std::size_t edge_count() const { return lengths_.size(); }
  double total_length() const;
  double max_length() const;

  /// Same chain with edge order reversed.
  FreeLinkageSpec reversed() const;

 private:
  std::vector<double> lengths_;
};

/// Two or three open chains sharing their initial and terminal vertices.
class MultipolygonSpec {
 public:
  explicit MultipolygonSpec(std::vector<FreeLinkageSpec> chains);

  const std::vector<FreeLinkageSpec>& chains() const { return chains_; }
  const FreeLinkageSpec& chain(std::size_t i) const { return chains_.at(i); }
  std::size_t chain_count() const { return chains_.size(); }

  /// Number of free angle coordinates once the first edge of chain 0 is
  /// pinned to the positive x-axis.
  std::size_t free_angle_count() const;

  /// Number of closure equations: two per chain beyond the first.
  std::size_t constraint_count() const { return 2 * (chains_.size() - 1); }

 private:
  std::vector<FreeLinkageSpec> chains_;
};

/// Edge directions for every chain, in radians from the positive x-axis.
/// The first edge of chain 0 is pinned at angle 0.
class Configuration {
 public:
  Configuration(const MultipolygonSpec& spec,
                std::vector<std::vector<double>> angles);

  const std::vector<std::vector<double>>& angles() const { return angles_; }
  double angle(std::size_t chain, std::size_t edge) const {
    return angles_.at(chain).at(edge);
  }
  void set_angle(std::size_t chain, std::size_t edge, double value);

  /// Flat vector of the free angles (chain 0 edges 1.., then chains 1.. in
  /// full), the coordinate order used by Jacobians and the sampler.
  std::vector<double> free_angles() const;
  static Configuration from_free_angles(const MultipolygonSpec& spec,
                                        const std::vector<double>& flat);

 private:
  std::vector<std::vector<double>> angles_;
};

/// Closed interval of achievable end-to-end distances of an open chain.
struct LengthRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double d, double tol = 0.0) const {
    return d >= lo - tol && d <= hi + tol;
  }
};

/// |terminal - initial| of the indexed chain, by summing edge vectors.
double end_to_end_distance(const MultipolygonSpec& spec,
                           const Configuration& config,
                           std::size_t chain_index);

/// Same for a standalone chain with explicit edge angles.
double end_to_end_distance(const FreeLinkageSpec& chain,
                           const std::vector<double>& angles);

/// [max(0, 2*max_j d_j - sum d_j), sum d_j] for a planar open chain.
LengthRange length_range(const FreeLinkageSpec& spec);

/// Closure residuals: for each chain i >= 1, the x and y components of
/// (chain-0 end vector) - (chain-i end vector). All zero on the variety.
std::vector<double> residuals(const MultipolygonSpec& spec,
                              const Configuration& config);

double residual_norm(const MultipolygonSpec& spec, const Configuration& config);

struct ProjectionOptions {
  double tol = kClosureTol;
  int max_iter = 50;
};

/// Damped Newton projection onto the closure variety. Preserves the pin on
/// the first edge of chain 0. Empty on non-convergence.
std::optional<Configuration> project_to_variety(
    const MultipolygonSpec& spec, const Configuration& seed,
    const ProjectionOptions& opts = {});

// JSON I/O for the file formats shared with the CLI.
MultipolygonSpec spec_from_json(const std::string& text);
std::string spec_to_json(const MultipolygonSpec& spec);
Configuration config_from_json(const MultipolygonSpec& spec,
                               const std::string& text);
std::string config_to_json(const Configuration& config);

}  // namespace linkmod

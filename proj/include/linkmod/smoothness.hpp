#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "linkmod/linkage.hpp"
#include "linkmod/rational.hpp"

namespace linkmod {

/// The set {±d_1 ± d_2 ± ... ± d_n} of a chain. Values are kept sorted and
/// deduplicated; all membership tests take an absolute tolerance.
class SignedSumSet {
 public:
  /// Enumerates all 2^n signed sums. Throws std::invalid_argument when the
  /// chain has more than 24 edges.
  static SignedSumSet of_chain(const FreeLinkageSpec& chain,
                               double tol = kClosureTol);

  const std::vector<double>& values() const { return values_; }

  bool contains(double x, double tol = kClosureTol) const;
  bool intersects(const SignedSumSet& other, double tol = kClosureTol) const;
  /// True when some set value lies in the closed interval [lo, hi].
  bool hits_interval(double lo, double hi, double tol = kClosureTol) const;

 private:
  std::vector<double> values_;
};

/// Exact counterpart on rational lengths; returned sorted and deduplicated.
std::vector<Rational> signed_sum_set_exact(const std::vector<Rational>& d);

/// Jacobian of the closure equations at a configuration of a three-chain
/// multipolygon, in the block layout [[A B1 0], [0 B2 C]]. Columns of A and
/// C are length-weighted (sin, -cos) of the chain-2/chain-3 edge angles;
/// B columns are negated, from the free angles of chain 1.
struct JacobianMatrix {
  Eigen::MatrixXd A;   // 2 x n2
  Eigen::MatrixXd B1;  // 2 x (n1 - 1)
  Eigen::MatrixXd B2;  // 2 x (n1 - 1)
  Eigen::MatrixXd C;   // 2 x n3
  Eigen::MatrixXd assembled;  // 4 x (n2 + n1 - 1 + n3)
};

struct SmoothnessReport {
  bool is_smooth_manifold = false;
  int dimension = 0;
  std::string witnessed_condition;
  std::optional<Configuration> counterexample_config;
};

/// Smoothness of M(a, 1^{n1-1}; 1^{n2}; 1^{n3}): certified when n2, n3 have
/// opposite parity and a lies in (0, min(n2, n3)) off the integers.
SmoothnessReport check_gensmooth(double a, int n1, int n2, int n3);

/// Smoothness of M(a, b; d2; d3) via the two signed-sum-set conditions.
/// Requires a+b < min of the chain total lengths; otherwise the report is
/// marked not applicable. For equilateral chains the parity shortcut is
/// named in witnessed_condition.
SmoothnessReport check_nointsmooth(double a, double b,
                                   const FreeLinkageSpec& d2,
                                   const FreeLinkageSpec& d3);

/// Exact variant on rational inputs.
SmoothnessReport check_nointsmooth_exact(const Rational& a, const Rational& b,
                                         const std::vector<Rational>& d2,
                                         const std::vector<Rational>& d3);

/// Block Jacobian at an on-variety configuration (r = 3 only). Throws when
/// the residual norm exceeds 1000 * closure tolerance.
JacobianMatrix jacobian(const MultipolygonSpec& spec,
                        const Configuration& config);

/// Number of singular values above tol * sigma_max.
int numeric_rank(const Eigen::MatrixXd& m, double tol = 1e-8);

std::string smoothness_report_to_json(const SmoothnessReport& r);

}  // namespace linkmod

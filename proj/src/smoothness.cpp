#include "linkmod/smoothness.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace linkmod {

SignedSumSet SignedSumSet::of_chain(const FreeLinkageSpec& chain, double tol) {
  if (chain.edge_count() > 24)
    throw std::invalid_argument(
        "signed-sum set enumeration limited to 24 edges");
  std::vector<double> sums = {0.0};
  for (double d : chain.lengths()) {
    std::vector<double> next;
    next.reserve(2 * sums.size());
    for (double s : sums) {
      next.push_back(s + d);
      next.push_back(s - d);
    }
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());
  SignedSumSet out;
  for (double s : sums)
    if (out.values_.empty() || s - out.values_.back() > tol)
      out.values_.push_back(s);
  return out;
}

bool SignedSumSet::contains(double x, double tol) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x - tol);
  return it != values_.end() && *it <= x + tol;
}

bool SignedSumSet::intersects(const SignedSumSet& other, double tol) const {
  std::size_t i = 0, j = 0;
  while (i < values_.size() && j < other.values_.size()) {
    double d = values_[i] - other.values_[j];
    if (std::abs(d) <= tol) return true;
    if (d < 0)
      ++i;
    else
      ++j;
  }
  return false;
}

bool SignedSumSet::hits_interval(double lo, double hi, double tol) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), lo - tol);
  return it != values_.end() && *it <= hi + tol;
}

std::vector<Rational> signed_sum_set_exact(const std::vector<Rational>& d) {
  if (d.size() > 24)
    throw std::invalid_argument(
        "signed-sum set enumeration limited to 24 edges");
  std::vector<Rational> sums = {Rational(0)};
  for (const Rational& r : d) {
    std::vector<Rational> next;
    next.reserve(2 * sums.size());
    for (const Rational& s : sums) {
      next.push_back(s + r);
      next.push_back(s - r);
    }
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  return sums;
}

SmoothnessReport check_gensmooth(double a, int n1, int n2, int n3) {
  SmoothnessReport r;
  r.dimension = n1 + n2 + n3 - 5;
  bool parity_ok = (n2 % 2) != (n3 % 2);
  double bound = static_cast<double>(std::min(n2, n3));
  bool in_range = a > 0.0 && a < bound;
  bool non_integer = std::abs(a - std::round(a)) > kClosureTol;
  if (parity_ok && in_range && non_integer) {
    r.is_smooth_manifold = true;
    r.witnessed_condition =
        "opposite parity of n2, n3 and a in (0, min(n2, n3)) \\ Z";
  } else if (!parity_ok) {
    r.witnessed_condition = "not certified: n2 and n3 have the same parity";
  } else if (!in_range) {
    r.witnessed_condition = "not certified: a outside (0, min(n2, n3))";
  } else {
    r.witnessed_condition = "not certified: a is an integer";
  }
  return r;
}

namespace {

bool all_unit(const FreeLinkageSpec& chain, double tol) {
  for (double d : chain.lengths())
    if (std::abs(d - 1.0) > tol) return false;
  return true;
}

bool near_integer(double x, double tol) {
  return std::abs(x - std::round(x)) <= tol;
}

// Does [lo, hi] contain an integer of the given parity (0 even, 1 odd)?
bool interval_hits_parity(double lo, double hi, int parity, double tol) {
  for (double k = std::ceil(lo - tol); k <= hi + tol; k += 1.0)
    if ((static_cast<long long>(std::llround(k)) % 2 + 2) % 2 == parity)
      return true;
  return false;
}

std::string corollary_branch(double a, double b, const FreeLinkageSpec& d2,
                             const FreeLinkageSpec& d3, double tol) {
  if (!all_unit(d2, tol) || !all_unit(d3, tol)) return "";
  int n2 = static_cast<int>(d2.edge_count());
  int n3 = static_cast<int>(d3.edge_count());
  double lo = std::abs(a - b), hi = a + b;
  if (n2 % 2 != n3 % 2 && !near_integer(hi, tol) && !near_integer(lo, tol))
    return "; equilateral corollary branch 1 (opposite parity)";
  if (n2 % 2 == 1 && n3 % 2 == 1 && !interval_hits_parity(lo, hi, 1, tol))
    return "; equilateral corollary branch 2 (both odd)";
  if (n2 % 2 == 0 && n3 % 2 == 0 && !interval_hits_parity(lo, hi, 0, tol))
    return "; equilateral corollary branch 3 (both even)";
  return "";
}

}  // namespace

SmoothnessReport check_nointsmooth(double a, double b,
                                   const FreeLinkageSpec& d2,
                                   const FreeLinkageSpec& d3) {
  SmoothnessReport r;
  r.dimension =
      static_cast<int>(d2.edge_count() + d3.edge_count()) - 3;
  double sum2 = d2.total_length(), sum3 = d3.total_length();
  double tol = kClosureTol * (a + b + sum2 + sum3);
  if (!(a + b < std::min(sum2, sum3) - tol)) {
    r.witnessed_condition = "not applicable: a+b >= min chain length";
    return r;
  }
  auto D2 = SignedSumSet::of_chain(d2, tol);
  auto D3 = SignedSumSet::of_chain(d3, tol);
  double lo = std::abs(a - b), hi = a + b;
  bool d_meets_2 = D2.contains(lo, tol) || D2.contains(hi, tol);
  bool d_meets_3 = D3.contains(lo, tol) || D3.contains(hi, tol);
  bool sets_23_meet = D2.intersects(D3, tol);

  if (!sets_23_meet && !d_meets_2 && !d_meets_3) {
    r.is_smooth_manifold = true;
    r.witnessed_condition = "condition 1: D, D2, D3 pairwise disjoint";
  } else if (sets_23_meet && !d_meets_2 && !d_meets_3) {
    // Condition 2 needs [|a-b|, a+b] to miss the common values of D2, D3.
    bool interval_hits_common = false;
    for (double v : D2.values())
      if (D3.contains(v, tol) && v >= lo - tol && v <= hi + tol) {
        interval_hits_common = true;
        break;
      }
    if (!interval_hits_common) {
      r.is_smooth_manifold = true;
      r.witnessed_condition =
          "condition 2: [|a-b|, a+b] misses D2 n D3 and D misses D2 u D3";
    } else {
      r.witnessed_condition = "not certified: neither condition holds";
    }
  } else {
    r.witnessed_condition = "not certified: neither condition holds";
  }
  if (r.is_smooth_manifold)
    r.witnessed_condition += corollary_branch(a, b, d2, d3, tol);
  return r;
}

SmoothnessReport check_nointsmooth_exact(const Rational& a, const Rational& b,
                                         const std::vector<Rational>& d2,
                                         const std::vector<Rational>& d3) {
  SmoothnessReport r;
  r.dimension = static_cast<int>(d2.size() + d3.size()) - 3;
  Rational sum2(0), sum3(0);
  for (const auto& v : d2) sum2 = sum2 + v;
  for (const auto& v : d3) sum3 = sum3 + v;
  Rational hi = a + b;
  if (!(hi < sum2 && hi < sum3)) {
    r.witnessed_condition = "not applicable: a+b >= min chain length";
    return r;
  }
  auto D2 = signed_sum_set_exact(d2);
  auto D3 = signed_sum_set_exact(d3);
  Rational lo = (a - b).abs();
  auto in_set = [](const std::vector<Rational>& s, const Rational& x) {
    return std::binary_search(s.begin(), s.end(), x);
  };
  bool d_meets = in_set(D2, lo) || in_set(D2, hi) || in_set(D3, lo) ||
                 in_set(D3, hi);
  std::vector<Rational> common;
  std::set_intersection(D2.begin(), D2.end(), D3.begin(), D3.end(),
                        std::back_inserter(common));
  if (common.empty() && !d_meets) {
    r.is_smooth_manifold = true;
    r.witnessed_condition = "condition 1: D, D2, D3 pairwise disjoint";
  } else if (!common.empty() && !d_meets) {
    bool interval_hits_common = false;
    for (const auto& v : common)
      if (lo <= v && v <= hi) {
        interval_hits_common = true;
        break;
      }
    if (!interval_hits_common) {
      r.is_smooth_manifold = true;
      r.witnessed_condition =
          "condition 2: [|a-b|, a+b] misses D2 n D3 and D misses D2 u D3";
    } else {
      r.witnessed_condition = "not certified: neither condition holds";
    }
  } else {
    r.witnessed_condition = "not certified: neither condition holds";
  }
  return r;
}

JacobianMatrix jacobian(const MultipolygonSpec& spec,
                        const Configuration& config) {
  if (spec.chain_count() != 3)
    throw std::invalid_argument("jacobian requires three chains");
  if (residual_norm(spec, config) > 1000.0 * kClosureTol)
    throw std::invalid_argument("configuration is off the variety");

  auto col = [](double d, double th) {
    Eigen::Vector2d v;
    v << d * std::sin(th), -d * std::cos(th);
    return v;
  };
  const auto& a = config.angles();
  std::size_t n1 = spec.chain(0).edge_count();
  std::size_t n2 = spec.chain(1).edge_count();
  std::size_t n3 = spec.chain(2).edge_count();

  JacobianMatrix J;
  J.A.resize(2, n2);
  for (std::size_t j = 0; j < n2; ++j)
    J.A.col(j) = col(spec.chain(1).lengths()[j], a[1][j]);
  J.C.resize(2, n3);
  for (std::size_t j = 0; j < n3; ++j)
    J.C.col(j) = col(spec.chain(2).lengths()[j], a[2][j]);
  J.B1.resize(2, n1 - 1);
  for (std::size_t j = 1; j < n1; ++j)
    J.B1.col(j - 1) = -col(spec.chain(0).lengths()[j], a[0][j]);
  J.B2 = J.B1;

  J.assembled = Eigen::MatrixXd::Zero(4, n2 + (n1 - 1) + n3);
  J.assembled.block(0, 0, 2, n2) = J.A;
  J.assembled.block(0, n2, 2, n1 - 1) = J.B1;
  J.assembled.block(2, n2, 2, n1 - 1) = J.B2;
  J.assembled.block(2, n2 + n1 - 1, 2, n3) = J.C;
  return J;
}

int numeric_rank(const Eigen::MatrixXd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++rank;
  return rank;
}

std::string smoothness_report_to_json(const SmoothnessReport& r) {
  nlohmann::json j;
  j["is_smooth_manifold"] = r.is_smooth_manifold;
  j["dimension"] = r.dimension;
  j["witnessed_condition"] = r.witnessed_condition;
  if (r.counterexample_config)
    j["counterexample"] =
        nlohmann::json::parse(config_to_json(*r.counterexample_config));
  return j.dump();
}

}  // namespace linkmod

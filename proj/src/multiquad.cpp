#include "linkmod/multiquad.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json.hpp"

namespace linkmod {

MultiquadSpec MultiquadSpec::from_spec(const MultipolygonSpec& spec) {
  if (spec.chain_count() != 3)
    throw std::invalid_argument("multiquadrilateral needs exactly 3 chains");
  for (const auto& c : spec.chains())
    if (c.edge_count() != 2)
      throw std::invalid_argument(
          "multiquadrilateral chains must have exactly 2 edges");
  std::array<int, 3> order = {0, 1, 2};
  double best = spec.chain(0).total_length();
  int best_i = 0;
  for (int i = 1; i < 3; ++i) {
    double s = spec.chain(i).total_length();
    if (s < best) {
      best = s;
      best_i = i;
    }
  }
  std::rotate(order.begin(), order.begin() + best_i, order.end());
  // Rotation keeps the relative order of the other two chains.
  MultiquadSpec q;
  q.perm_ = order;
  const auto& l0 = spec.chain(order[0]).lengths();
  const auto& l1 = spec.chain(order[1]).lengths();
  const auto& l2 = spec.chain(order[2]).lengths();
  q.a_ = l0[0];
  q.b_ = l0[1];
  q.c_ = l1[0];
  q.d_ = l1[1];
  q.e_ = l2[0];
  q.f_ = l2[1];
  return q;
}

MultiquadSpec MultiquadSpec::from_lengths(double a, double b, double c,
                                          double d, double e, double f) {
  return from_spec(MultipolygonSpec({FreeLinkageSpec({a, b}),
                                     FreeLinkageSpec({c, d}),
                                     FreeLinkageSpec({e, f})}));
}

MultipolygonSpec MultiquadSpec::to_spec() const {
  return MultipolygonSpec({FreeLinkageSpec({a_, b_}), FreeLinkageSpec({c_, d_}),
                           FreeLinkageSpec({e_, f_})});
}

namespace {

// The whole case analysis depends only on the three sums and the three
// absolute gaps of the chain lengths. Comparisons go through eq/lt so the
// same logic serves the tolerance-based and the exact path.
struct QuadPredicates {
  std::function<bool(int, int)> sum_eq_sum;   // sums[i] == sums[j]
  std::function<bool(int, int)> sum_lt_gap;   // sums[i] <  gaps[j]
  std::function<bool(int, int)> sum_eq_gap;   // sums[i] == gaps[j]
  std::function<bool(int, int)> gap_ge_gap;   // gaps[i] >= gaps[j]
  std::function<bool(int)> gap_zero;          // gaps[i] == 0
};

ClassificationResult classify_core(const QuadPredicates& p,
                                   double cos_fold2, double cos_fold3) {
  if (p.gap_zero(0) && p.gap_zero(1) && p.gap_zero(2))
    throw std::invalid_argument(
        "non-generic multiquadrilateral (a=b, c=d, e=f)");

  ClassificationResult r;
  r.v.v1 = p.sum_eq_sum(0, 1);
  r.v.v3 = p.sum_eq_sum(0, 2);

  // im(p) case 1: empty moduli space.
  if (p.sum_lt_gap(0, 1) || p.sum_lt_gap(0, 2)) {
    r.case_label = MultiquadCase::Empty;
    r.image.kind = AngleImageKind::Empty;
    r.components = 0;
    r.chi = 0;
    r.homeo_description = "empty";
    return r;
  }

  // im(p) case 2: only the angle pi is possible.
  bool pin2 = p.sum_eq_gap(0, 1);
  bool pin3 = p.sum_eq_gap(0, 2);
  if (pin2 || pin3) {
    r.image.kind = AngleImageKind::SinglePoint;
    r.image.theta_min = r.image.theta_max = kPi;
    if (pin2 && pin3) {
      r.case_label = MultiquadCase::OnePoint;
      r.components = 1;
      r.chi = 1;
      r.homeo_description = "one point";
    } else {
      r.case_label = MultiquadCase::TwoPoints;
      r.components = 2;
      r.chi = 2;
      r.homeo_description = "two points";
    }
    return r;
  }

  bool full_circle = p.gap_ge_gap(0, 1) && p.gap_ge_gap(0, 2);
  if (full_circle) {
    // Case A: 0 and pi are both possible angles.
    r.case_label = MultiquadCase::CaseA;
    r.image.kind = AngleImageKind::FullCircle;
    r.v.v2 = p.gap_ge_gap(1, 0) && p.gap_ge_gap(1, 2);
    r.v.v4 = p.gap_ge_gap(2, 0) && p.gap_ge_gap(2, 1);
    r.components = 1 << r.v.zero_zero_pairs();
    r.fiber_at_0 = 1 << (2 - r.v.ones_even());
    r.fiber_at_pi = 1 << (2 - r.v.ones_odd());
    // Four circles traced over the angle circle, identified at the fibers
    // over 0 and pi: V = |p^-1(0)| + |p^-1(pi)|, E = 8 strands.
    r.chi = r.fiber_at_0 + r.fiber_at_pi - 8;
    r.homeo_description = (r.fiber_at_0 == 4 && r.fiber_at_pi == 4)
                              ? "four disjoint circles"
                              : "four circles with identifications";
    return r;
  }

  // Case B: the image is [theta_min, theta_max] around pi, excluding 0.
  r.case_label = MultiquadCase::CaseB;
  r.image.kind = AngleImageKind::ClosedInterval;
  double cos_min = 1.0;
  if (!p.gap_ge_gap(0, 1)) cos_min = std::min(cos_min, cos_fold2);
  if (!p.gap_ge_gap(0, 2)) cos_min = std::min(cos_min, cos_fold3);
  r.image.theta_min = std::acos(std::clamp(cos_min, -1.0, 1.0));
  r.image.theta_max = kTwoPi - r.image.theta_min;
  // Foldable at the extreme angles: the chain whose fold is the binding
  // restriction (ties bind both).
  r.v.v2 = !p.gap_ge_gap(0, 1) && p.gap_ge_gap(1, 2);
  r.v.v4 = !p.gap_ge_gap(0, 2) && p.gap_ge_gap(2, 1);
  r.components = 1 << r.v.zero_zero_pairs();
  r.fiber_at_extremes = 1 << (2 - r.v.ones_even());
  r.fiber_at_pi = 1 << (2 - r.v.ones_odd());
  // V = both extreme fibers plus the fiber over pi; E = 4 strands on each
  // of the two open intervals.
  r.chi = 2 * r.fiber_at_extremes + r.fiber_at_pi - 8;
  if (r.v.one_one_pairs() >= 1 && r.components == 2 && r.chi == -2)
    r.homeo_description = "two figure-8s";
  else if (r.v.one_one_pairs() == 0 && r.components == 2 && r.chi == 0)
    r.homeo_description = "two circles";
  else
    r.homeo_description = "two circles with identifications";
  return r;
}

double cos_fold(double a, double b, double gap) {
  return (a * a + b * b - gap * gap) / (2.0 * a * b);
}

QuadPredicates tolerance_predicates(const MultiquadSpec& q) {
  auto sums = std::array<double, 3>{q.a() + q.b(), q.c() + q.d(),
                                    q.e() + q.f()};
  auto gaps = std::array<double, 3>{std::abs(q.a() - q.b()),
                                    std::abs(q.c() - q.d()),
                                    std::abs(q.e() - q.f())};
  double scale = sums[0] + sums[1] + sums[2];
  double tol = kLenTol * scale;
  QuadPredicates p;
  p.sum_eq_sum = [=](int i, int j) { return std::abs(sums[i] - sums[j]) <= tol; };
  p.sum_lt_gap = [=](int i, int j) { return sums[i] < gaps[j] - tol; };
  p.sum_eq_gap = [=](int i, int j) { return std::abs(sums[i] - gaps[j]) <= tol; };
  p.gap_ge_gap = [=](int i, int j) { return gaps[i] >= gaps[j] - tol; };
  p.gap_zero = [=](int i) { return gaps[i] <= tol; };
  return p;
}

}  // namespace

bool collapsible(const MultiquadSpec& spec, int chain) {
  if (chain != 2 && chain != 3)
    throw std::invalid_argument("chain must be 2 or 3");
  auto p = tolerance_predicates(spec);
  return p.sum_eq_sum(0, chain - 1);
}

bool foldable(const MultiquadSpec& spec, int chain) {
  if (chain != 2 && chain != 3)
    throw std::invalid_argument("chain must be 2 or 3");
  auto p = tolerance_predicates(spec);
  int i = chain - 1;
  int other = (chain == 2) ? 2 : 1;
  return p.gap_ge_gap(i, 0) && p.gap_ge_gap(i, other);
}

AngleImage angle_image(const MultiquadSpec& spec) {
  return classify(spec).image;
}

ClassificationResult classify(const MultiquadSpec& spec) {
  auto p = tolerance_predicates(spec);
  double g2 = std::abs(spec.c() - spec.d());
  double g3 = std::abs(spec.e() - spec.f());
  return classify_core(p, cos_fold(spec.a(), spec.b(), g2),
                       cos_fold(spec.a(), spec.b(), g3));
}

ClassificationResult classify_exact(const Rational& a, const Rational& b,
                                    const Rational& c, const Rational& d,
                                    const Rational& e, const Rational& f) {
  std::array<Rational, 3> sums = {a + b, c + d, e + f};
  std::array<Rational, 3> gaps = {(a - b).abs(), (c - d).abs(), (e - f).abs()};
  // Apply the min-sum normalization.
  int min_i = 0;
  for (int i = 1; i < 3; ++i)
    if (sums[i] < sums[min_i]) min_i = i;
  std::rotate(sums.begin(), sums.begin() + min_i, sums.end());
  std::rotate(gaps.begin(), gaps.begin() + min_i, gaps.end());
  std::array<Rational, 3> pairs_a = {a, c, e};
  std::array<Rational, 3> pairs_b = {b, d, f};
  std::rotate(pairs_a.begin(), pairs_a.begin() + min_i, pairs_a.end());
  std::rotate(pairs_b.begin(), pairs_b.begin() + min_i, pairs_b.end());

  QuadPredicates p;
  p.sum_eq_sum = [=](int i, int j) { return sums[i] == sums[j]; };
  p.sum_lt_gap = [=](int i, int j) { return sums[i] < gaps[j]; };
  p.sum_eq_gap = [=](int i, int j) { return sums[i] == gaps[j]; };
  p.gap_ge_gap = [=](int i, int j) { return gaps[i] >= gaps[j]; };
  p.gap_zero = [=](int i) { return gaps[i] == Rational(0); };
  double aa = pairs_a[0].to_double(), bb = pairs_b[0].to_double();
  return classify_core(p, cos_fold(aa, bb, gaps[1].to_double()),
                       cos_fold(aa, bb, gaps[2].to_double()));
}

namespace {

const char* case_name(MultiquadCase c) {
  switch (c) {
    case MultiquadCase::Empty: return "empty";
    case MultiquadCase::OnePoint: return "one-point";
    case MultiquadCase::TwoPoints: return "two-points";
    case MultiquadCase::CaseA: return "case-A";
    case MultiquadCase::CaseB: return "case-B";
  }
  return "?";
}

const char* image_name(AngleImageKind k) {
  switch (k) {
    case AngleImageKind::Empty: return "empty";
    case AngleImageKind::SinglePoint: return "single-point";
    case AngleImageKind::FullCircle: return "full-circle";
    case AngleImageKind::ClosedInterval: return "closed-interval";
  }
  return "?";
}

}  // namespace

std::string classification_to_json(const ClassificationResult& r) {
  nlohmann::json j;
  j["case"] = case_name(r.case_label);
  j["components"] = r.components;
  j["chi"] = r.chi;
  j["homeo"] = r.homeo_description;
  j["v"] = {r.v.v1 ? 1 : 0, r.v.v2 ? 1 : 0, r.v.v3 ? 1 : 0, r.v.v4 ? 1 : 0};
  j["image"]["kind"] = image_name(r.image.kind);
  if (r.image.kind == AngleImageKind::ClosedInterval) {
    j["image"]["theta_min"] = r.image.theta_min;
    j["image"]["theta_max"] = r.image.theta_max;
  }
  if (r.case_label == MultiquadCase::CaseA) {
    j["fiber_at_0"] = r.fiber_at_0;
    j["fiber_at_pi"] = r.fiber_at_pi;
  }
  if (r.case_label == MultiquadCase::CaseB) {
    j["fiber_at_extremes"] = r.fiber_at_extremes;
    j["fiber_at_pi"] = r.fiber_at_pi;
  }
  return j.dump();
}

std::string classification_summary(const ClassificationResult& r) {
  std::string s = std::string(case_name(r.case_label)) + ": " +
                  r.homeo_description + ", " +
                  std::to_string(r.components) + " component(s), chi=" +
                  std::to_string(r.chi);
  return s;
}

}  // namespace linkmod

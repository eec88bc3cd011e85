#pragma once

#include <array>
#include <optional>
#include <string>

#include "linkmod/linkage.hpp"
#include "linkmod/rational.hpp"

namespace linkmod {

// Relative tolerance for the length equalities behind collapsible,
// foldable and the boundary cases of the angle image.
inline constexpr double kLenTol = 1e-9;

/// A multiquadrilateral (three 2-edge chains), reordered so the first
/// chain has the minimal length sum: min{a+b, c+d, e+f} = a+b.
class MultiquadSpec {
 public:
  static MultiquadSpec from_spec(const MultipolygonSpec& spec);
  static MultiquadSpec from_lengths(double a, double b, double c, double d,
                                    double e, double f);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double e() const { return e_; }
  double f() const { return f_; }

  /// Original position of the chain now at slot i.
  const std::array<int, 3>& permutation() const { return perm_; }

  /// The reordered spec as a generic multipolygon.
  MultipolygonSpec to_spec() const;

 private:
  MultiquadSpec() = default;
  double a_ = 0, b_ = 0, c_ = 0, d_ = 0, e_ = 0, f_ = 0;
  std::array<int, 3> perm_ = {0, 1, 2};
};

/// (F2 collapsible, F2 foldable, F3 collapsible, F3 foldable). The pairs
/// are (v1,v2) and (v3,v4); in case B the even slots use the
/// foldable-at-the-extreme-angles variant.
struct VVector {
  bool v1 = false, v2 = false, v3 = false, v4 = false;

  int zero_zero_pairs() const {
    return (!v1 && !v2 ? 1 : 0) + (!v3 && !v4 ? 1 : 0);
  }
  int one_one_pairs() const { return (v1 && v2 ? 1 : 0) + (v3 && v4 ? 1 : 0); }
  int ones_even() const { return (v2 ? 1 : 0) + (v4 ? 1 : 0); }
  int ones_odd() const { return (v1 ? 1 : 0) + (v3 ? 1 : 0); }
};

enum class AngleImageKind { Empty, SinglePoint, FullCircle, ClosedInterval };

/// Image of the projection sending a configuration to the angle between
/// the two edges of the first chain.
struct AngleImage {
  AngleImageKind kind = AngleImageKind::Empty;
  double theta_min = 0.0;  // present for ClosedInterval
  double theta_max = 0.0;
};

enum class MultiquadCase { Empty, OnePoint, TwoPoints, CaseA, CaseB };

struct ClassificationResult {
  MultiquadCase case_label = MultiquadCase::Empty;
  int components = 0;
  int fiber_at_0 = 0;        // case A only
  int fiber_at_pi = 0;       // cases A and B
  int fiber_at_extremes = 0; // case B only
  std::string homeo_description;
  VVector v;
  AngleImage image;
  /// Euler characteristic of the classified space, from the symbolic
  /// gluing description (vertices minus arcs).
  int chi = 0;
};

bool collapsible(const MultiquadSpec& spec, int chain);
bool foldable(const MultiquadSpec& spec, int chain);

AngleImage angle_image(const MultiquadSpec& spec);

/// Symbolic classification per the case analysis on the angle image.
/// Throws std::invalid_argument for non-generic input (a=b, c=d, e=f all
/// holding at once).
ClassificationResult classify(const MultiquadSpec& spec);

/// Exact-arithmetic classification; lengths are taken as given (the
/// min-sum normalization is applied internally).
ClassificationResult classify_exact(const Rational& a, const Rational& b,
                                    const Rational& c, const Rational& d,
                                    const Rational& e, const Rational& f);

std::string classification_to_json(const ClassificationResult& r);
std::string classification_summary(const ClassificationResult& r);

}  // namespace linkmod

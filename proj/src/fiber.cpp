#include "linkmod/fiber.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "linkmod/path.hpp"
#include "linkmod/smoothness.hpp"

namespace linkmod {

namespace {

constexpr double kTol = 1e-9;

std::string count_word(int k) {
  static const char* words[] = {"zero", "one",   "two", "three", "four",
                                "five", "six",   "seven", "eight"};
  if (k >= 0 && k <= 8) return words[k];
  return std::to_string(k);
}

FiberDescriptor make_simple(FiberKind kind, int count, int chi,
                            std::string label) {
  FiberDescriptor f;
  f.kind = kind;
  f.count = count;
  f.chi = chi;
  f.label = std::move(label);
  return f;
}

}  // namespace

int FiberDescriptor::components() const {
  switch (kind) {
    case FiberKind::Empty:
      return 0;
    case FiberKind::Point:
    case FiberKind::Circle:
      return 1;
    case FiberKind::TwoPoints:
      return 2;
    case FiberKind::KCircles:
      return count;
    case FiberKind::CirclesGlued:
      // Every glued arrangement in the lookup table is connected.
      return 1;
    case FiberKind::Surface:
      return count;
    case FiberKind::Product: {
      int c = 1;
      for (const auto& f : factors) c *= f.components();
      return c;
    }
  }
  return 0;
}

double distance_of_angle(double a, double b, double gamma) {
  double d2 = a * a + b * b - 2.0 * a * b * std::cos(gamma);
  return std::sqrt(std::max(0.0, d2));
}

std::vector<double> degenerate_angles(double a, double b,
                                      const FreeLinkageSpec& d2,
                                      const FreeLinkageSpec& d3) {
  double lo = std::abs(a - b), hi = a + b;
  double scale = hi + d2.total_length() + d3.total_length();
  double tol = kTol * scale;

  std::vector<double> hits;
  for (const auto* chain : {&d2, &d3}) {
    auto set = SignedSumSet::of_chain(*chain, tol);
    for (double s : set.values()) {
      if (s < lo - tol || s > hi + tol) continue;
      double c = (a * a + b * b - s * s) / (2.0 * a * b);
      // Snap roundoff at the endpoints so gamma = 0 / pi come out exact and
      // dedupe against their mirror images.
      if (c <= -1.0 + 1e-13) c = -1.0;
      if (c >= 1.0 - 1e-13) c = 1.0;
      double gamma = std::acos(std::clamp(c, -1.0, 1.0));
      hits.push_back(gamma);
      hits.push_back(wrap_angle(kTwoPi - gamma));
    }
  }
  std::sort(hits.begin(), hits.end());
  std::vector<double> out;
  for (double g : hits)
    if (out.empty() || g - out.back() > 1e-9) out.push_back(g);
  // 2*pi - 0 wraps onto 0.
  while (out.size() > 1 && kTwoPi - out.back() <= 1e-9 &&
         out.front() <= 1e-9)
    out.pop_back();
  return out;
}

FiberDescriptor fiber_descriptor(double d, const FreeLinkageSpec& chain) {
  const auto& len = chain.lengths();
  const std::size_t n = len.size();
  double sum = chain.total_length();
  double tol = kTol * (sum + d + 1.0);

  // A vanishing virtual edge closes the chain onto itself; the closed
  // polygon still spins freely in the pinned frame, contributing a circle
  // factor.
  if (d <= tol && n >= 2) {
    std::vector<double> rest(len.begin() + 1, len.end());
    FiberDescriptor md = fiber_descriptor(len[0], FreeLinkageSpec(rest));
    switch (md.kind) {
      case FiberKind::Empty:
        return md;
      case FiberKind::Point:
        return make_simple(FiberKind::Circle, 1, 0, "one circle");
      case FiberKind::TwoPoints:
        return make_simple(FiberKind::KCircles, 2, 0, "two circles");
      default:
        return make_simple(FiberKind::Surface, md.components(), 0,
                           "closed polygon times a circle");
    }
  }

  if (n == 1) {
    if (std::abs(d - len[0]) <= tol)
      return make_simple(FiberKind::Point, 1, 1, "one point");
    return make_simple(FiberKind::Empty, 0, 0, "empty");
  }

  if (n == 2) {
    double hi = len[0] + len[1], lo = std::abs(len[0] - len[1]);
    if (d > hi + tol || d < lo - tol)
      return make_simple(FiberKind::Empty, 0, 0, "empty");
    if (std::abs(d - hi) <= tol || std::abs(d - lo) <= tol)
      return make_simple(FiberKind::Point, 1, 1, "one point");
    return make_simple(FiberKind::TwoPoints, 2, 2, "two points");
  }

  if (n == 3) {
    // The closed quadrilateral (d, c1, c2, c3).
    std::array<double, 4> all = {d, len[0], len[1], len[2]};
    double total = d + sum;
    double longest = *std::max_element(all.begin(), all.end());
    if (longest > total - longest + tol)
      return make_simple(FiberKind::Empty, 0, 0, "empty");
    if (std::abs(longest - (total - longest)) <= tol)
      return make_simple(FiberKind::Point, 1, 1, "one point");

    // Straight-line configurations: sign patterns with sum(eps*c) = d.
    int straight = 0;
    for (int mask = 0; mask < 8; ++mask) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j) s += (mask >> j & 1) ? -len[j] : len[j];
      if (std::abs(s - d) <= tol) ++straight;
    }
    if (straight > 0) {
      bool equilateral_triple = std::abs(len[0] - len[1]) <= tol &&
                                std::abs(len[1] - len[2]) <= tol &&
                                std::abs(d - len[0]) <= tol;
      std::string label =
          equilateral_triple
              ? "three circles pairwise glued"
              : "circles glued at " + count_word(straight) + " point(s)";
      return make_simple(FiberKind::CirclesGlued, straight, -straight,
                         std::move(label));
    }
    FreeLinkageSpec quad({d, len[0], len[1], len[2]});
    if (km_disconnected(quad))
      return make_simple(FiberKind::KCircles, 2, 0, "two circles");
    return make_simple(FiberKind::Circle, 1, 0, "one circle");
  }

  if (n == 4) {
    std::array<double, 5> all = {d, len[0], len[1], len[2], len[3]};
    double total = d + sum;
    double longest = *std::max_element(all.begin(), all.end());
    if (longest > total - longest + tol)
      return make_simple(FiberKind::Empty, 0, 0, "empty");
    if (std::abs(longest - (total - longest)) <= tol)
      return make_simple(FiberKind::Point, 1, 1, "one point");
    // Split the pentagon (d, c1..c4) into two 2-and-3-edge chains sharing
    // endpoints and reuse the interval decomposition for chi.
    MultipolygonSpec split({FreeLinkageSpec({len[0], len[1]}),
                            FreeLinkageSpec({d, len[3], len[2]})});
    auto dec = euler_characteristic(split);
    FreeLinkageSpec pent({d, len[0], len[1], len[2], len[3]});
    int comps = km_disconnected(pent) ? 2 : 1;
    auto f = make_simple(FiberKind::Surface, comps, dec.total_chi,
                         "surface with chi " + std::to_string(dec.total_chi));
    return f;
  }

  throw std::invalid_argument(
      "fiber lookup table limited to chains of at most 4 edges");
}

int fibered_product_components(const ComponentSummary& m12,
                               const ComponentSummary& m13) {
  int n = 0;
  for (int l2 : m12.base_label)
    for (int l3 : m13.base_label)
      if (l2 == l3) ++n;
  return n;
}

FiberDescriptor fiber_over_angle(const MultipolygonSpec& spec, double gamma) {
  if (spec.chain(0).edge_count() != 2)
    throw std::invalid_argument(
        "angle fibers require a two-edge first chain");
  double a = spec.chain(0).lengths()[0];
  double b = spec.chain(0).lengths()[1];
  double d = distance_of_angle(a, b, gamma);
  if (spec.chain_count() == 2) return fiber_descriptor(d, spec.chain(1));
  FiberDescriptor f;
  f.kind = FiberKind::Product;
  f.factors = {fiber_descriptor(d, spec.chain(1)),
               fiber_descriptor(d, spec.chain(2))};
  f.chi = f.factors[0].chi * f.factors[1].chi;
  f.count = f.components();
  if (f.factors[0].kind == FiberKind::Empty ||
      f.factors[1].kind == FiberKind::Empty) {
    f.kind = FiberKind::Empty;
    f.factors.clear();
    f.label = "empty";
    f.chi = 0;
    f.count = 0;
  } else {
    f.label = f.factors[0].label + " x " + f.factors[1].label;
  }
  return f;
}

FiberDecomposition euler_characteristic(const MultipolygonSpec& spec) {
  if (spec.chain(0).edge_count() != 2)
    throw std::invalid_argument(
        "interval decomposition requires a two-edge first chain");
  double a = spec.chain(0).lengths()[0];
  double b = spec.chain(0).lengths()[1];

  FiberDecomposition dec;
  if (spec.chain_count() == 3) {
    dec.degenerate_angles =
        degenerate_angles(a, b, spec.chain(1), spec.chain(2));
  } else {
    dec.degenerate_angles =
        degenerate_angles(a, b, spec.chain(1), spec.chain(1));
  }

  for (double g : dec.degenerate_angles)
    dec.degenerate_fibers.push_back({g, fiber_over_angle(spec, g)});

  auto sample_interval = [&](double lo, double hi) {
    double w = hi - lo;
    FiberDescriptor mid = fiber_over_angle(spec, wrap_angle(lo + 0.5 * w));
    // Fibers are constant on an interval between degenerate angles; sample
    // two more points as a runtime self-check.
    for (double frac : {0.25, 0.75}) {
      FiberDescriptor alt = fiber_over_angle(spec, wrap_angle(lo + frac * w));
      if (alt.chi != mid.chi || alt.components() != mid.components())
        throw std::runtime_error("fiber not constant on an open interval");
    }
    dec.interval_fibers.push_back({wrap_angle(lo), wrap_angle(hi), mid});
  };

  const auto& degs = dec.degenerate_angles;
  if (degs.empty()) {
    sample_interval(0.0, kTwoPi);
  } else {
    for (std::size_t k = 0; k + 1 < degs.size(); ++k)
      sample_interval(degs[k], degs[k + 1]);
    sample_interval(degs.back(), degs.front() + kTwoPi);
  }

  if (degs.empty()) {
    // Fibration over the whole angle circle: chi(S^1) x chi(F) = 0.
    dec.total_chi = 0;
  } else {
    // Degenerate angles are the 0-cells of the base circle; each open
    // interval contributes -chi of its constant fiber.
    int chi = 0;
    for (const auto& f : dec.degenerate_fibers) chi += f.fiber.chi;
    for (const auto& f : dec.interval_fibers) chi -= f.fiber.chi;
    dec.total_chi = chi;
  }
  return dec;
}

std::optional<ProductCertificate> product_structure(
    const MultipolygonSpec& spec) {
  if (spec.chain_count() != 3 || spec.chain(0).edge_count() != 2)
    return std::nullopt;
  double a = spec.chain(0).lengths()[0];
  double b = spec.chain(0).lengths()[1];
  double lo = std::abs(a - b), hi = a + b;
  double scale =
      hi + spec.chain(1).total_length() + spec.chain(2).total_length();
  double tol = kTol * scale;
  auto D2 = SignedSumSet::of_chain(spec.chain(1), tol);
  auto D3 = SignedSumSet::of_chain(spec.chain(2), tol);
  if (D2.hits_interval(lo, hi, tol) || D3.hits_interval(lo, hi, tol))
    return std::nullopt;

  auto pair_components = [&](const FreeLinkageSpec& chain) {
    std::vector<double> edges = {a, b};
    edges.insert(edges.end(), chain.lengths().begin(), chain.lengths().end());
    return km_disconnected(FreeLinkageSpec(edges)) ? 2 : 1;
  };
  ProductCertificate cert;
  int c2 = pair_components(spec.chain(1));
  int c3 = pair_components(spec.chain(2));
  cert.components = c2 * c3;
  cert.chi = 0;
  cert.description =
      "locally trivial fibration over the full angle circle: M = "
      "M(F1,F2) x_{M(F1)} M(F1,F3) with constant fiber; chi = 0, "
      "components = " +
      std::to_string(c2) + " x " + std::to_string(c3);
  return cert;
}

namespace {

const char* kind_name(FiberKind k) {
  switch (k) {
    case FiberKind::Empty: return "empty";
    case FiberKind::Point: return "point";
    case FiberKind::TwoPoints: return "two-points";
    case FiberKind::Circle: return "circle";
    case FiberKind::KCircles: return "k-circles";
    case FiberKind::CirclesGlued: return "circles-glued";
    case FiberKind::Product: return "product";
    case FiberKind::Surface: return "surface";
  }
  return "?";
}

nlohmann::json descriptor_json(const FiberDescriptor& f) {
  nlohmann::json j;
  j["kind"] = kind_name(f.kind);
  j["count"] = f.count;
  j["chi"] = f.chi;
  j["components"] = f.components();
  j["label"] = f.label;
  if (!f.factors.empty()) {
    j["factors"] = nlohmann::json::array();
    for (const auto& g : f.factors) j["factors"].push_back(descriptor_json(g));
  }
  return j;
}

}  // namespace

std::string fiber_descriptor_to_json(const FiberDescriptor& f) {
  return descriptor_json(f).dump();
}

std::string decomposition_to_json(const FiberDecomposition& d) {
  nlohmann::json j;
  j["degenerate_angles"] = d.degenerate_angles;
  j["degenerate_fibers"] = nlohmann::json::array();
  for (const auto& f : d.degenerate_fibers)
    j["degenerate_fibers"].push_back(
        {{"angle", f.angle}, {"fiber", descriptor_json(f.fiber)}});
  j["interval_fibers"] = nlohmann::json::array();
  for (const auto& f : d.interval_fibers)
    j["interval_fibers"].push_back({{"lo", f.lo},
                                    {"hi", f.hi},
                                    {"fiber", descriptor_json(f.fiber)}});
  j["total_chi"] = d.total_chi;
  return j.dump();
}

}  // namespace linkmod

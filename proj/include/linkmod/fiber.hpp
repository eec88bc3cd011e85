#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linkmod/linkage.hpp"

namespace linkmod {

enum class FiberKind {
  Empty,
  Point,
  TwoPoints,
  Circle,
  KCircles,
  CirclesGlued,  // circles with single-point gluings, chi = -gluings
  Product,
  Surface,  // 2-dimensional fiber, only chi is reported
};

/// Symbolic type of one fiber of the angle projection. For KCircles, count
/// is the number of circles; for CirclesGlued it is the number of gluing
/// (straight-line) points.
struct FiberDescriptor {
  FiberKind kind = FiberKind::Empty;
  int count = 0;
  int chi = 0;
  std::vector<FiberDescriptor> factors;  // Product only
  std::string label;

  /// Number of connected components (products and glued shapes included).
  int components() const;
};

struct IntervalFiber {
  double lo = 0.0, hi = 0.0;  // open interval of the vertex angle
  FiberDescriptor fiber;
};

struct DegenerateFiber {
  double angle = 0.0;
  FiberDescriptor fiber;
};

struct FiberDecomposition {
  std::vector<double> degenerate_angles;
  std::vector<IntervalFiber> interval_fibers;
  std::vector<DegenerateFiber> degenerate_fibers;
  int total_chi = 0;
};

/// Diagonal length of the triangle with sides a, b and vertex angle gamma.
double distance_of_angle(double a, double b, double gamma);

/// Vertex angles (in [0, 2pi), sorted) where the diagonal length hits a
/// signed-sum value of either attached chain within [|a-b|, a+b].
std::vector<double> degenerate_angles(double a, double b,
                                      const FreeLinkageSpec& d2,
                                      const FreeLinkageSpec& d3);

/// Symbolic moduli type of the polygon formed by the virtual edge d and the
/// chain. Closed form for chains of up to 3 edges; 4-edge chains report only
/// the Euler characteristic (Surface) via the interval decomposition; longer
/// chains throw std::invalid_argument.
FiberDescriptor fiber_descriptor(double d, const FreeLinkageSpec& chain);

/// Component-level summary of a moduli space fibered over a base:
/// base_label[i] is the base component the i-th component projects into.
struct ComponentSummary {
  std::vector<int> base_label;

  int components() const { return static_cast<int>(base_label.size()); }
};

/// Components of the fibered product from component-level incidence: pairs
/// of components over the same base component. Over a single-point base this
/// is the plain product count; an empty factor gives 0.
int fibered_product_components(const ComponentSummary& m12,
                               const ComponentSummary& m13);

/// Fiber of the vertex-angle projection over one angle: the moduli type of
/// the outer chain(s) against the diagonal at that angle, as a product for
/// three-chain specs. The first chain must have exactly two edges.
FiberDescriptor fiber_over_angle(const MultipolygonSpec& spec, double gamma);

/// Interval decomposition of the vertex-angle projection and the alternating
/// Euler-characteristic sum. The first chain must have exactly two edges;
/// two- and three-chain specs are supported.
FiberDecomposition euler_characteristic(const MultipolygonSpec& spec);

struct ProductCertificate {
  std::string description;
  int components = 0;
  int chi = 0;  // always 0: circle times constant fiber
};

/// Product certificate when [|a-b|, a+b] misses both signed-sum sets: the
/// space fibers trivially over the full angle circle.
std::optional<ProductCertificate> product_structure(
    const MultipolygonSpec& spec);

std::string fiber_descriptor_to_json(const FiberDescriptor& f);
std::string decomposition_to_json(const FiberDecomposition& d);

}  // namespace linkmod

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "dppalm/errors.hpp"
#include "dppalm/numerics/linalg.hpp"
#include "dppalm/numerics/special.hpp"

namespace dppalm {

// The three ground spaces supported, each with its implied reference
// measure: counting, Lebesgue, surface.
class GroundSpace {
 public:
  enum class Kind { finite, euclidean, sphere };

  static GroundSpace finite(std::size_t n) {
    if (n < 1) throw domain_error("finite space needs at least one site");
    return GroundSpace(Kind::finite, n);
  }
  static GroundSpace euclidean(int d) {
    if (d < 1) throw domain_error("euclidean dimension must be at least 1");
    return GroundSpace(Kind::euclidean, static_cast<std::size_t>(d));
  }
  // The unit sphere S^d in R^{d+1}.
  static GroundSpace sphere(int d) {
    if (d < 1) throw domain_error("sphere dimension must be at least 1");
    return GroundSpace(Kind::sphere, static_cast<std::size_t>(d));
  }

  Kind kind() const { return kind_; }
  std::size_t sites() const { return size_; }
  int dimension() const { return static_cast<int>(size_); }
  // Length of coordinate vectors for points of this space.
  std::size_t ambient_dimension() const { return kind_ == Kind::sphere ? size_ + 1 : size_; }
  // Total measure, infinite for Euclidean space.
  double total_measure() const {
    switch (kind_) {
      case Kind::finite: return static_cast<double>(size_);
      case Kind::euclidean: return std::numeric_limits<double>::infinity();
      case Kind::sphere: return sphere_area(dimension());
    }
    return 0.0;
  }

  bool operator==(const GroundSpace&) const = default;

 private:
  GroundSpace(Kind kind, std::size_t size) : kind_(kind), size_(size) {}
  Kind kind_;
  std::size_t size_;
};

// A site index (1-based) on a finite space, or a coordinate vector.
class Point {
 public:
  static Point site(std::size_t index) { return Point(index); }
  static Point coords(RVector x) { return Point(std::move(x)); }
  static Point coords(std::initializer_list<double> x) {
    RVector v(static_cast<Eigen::Index>(x.size()));
    Eigen::Index i = 0;
    for (double c : x) v(i++) = c;
    return Point(std::move(v));
  }
  // Complex-plane identification z = x + iy for R^2.
  static Point plane(Complex z) { return coords({z.real(), z.imag()}); }

  bool is_site() const { return std::holds_alternative<std::size_t>(value_); }
  std::size_t index() const { return std::get<std::size_t>(value_); }
  const RVector& x() const { return std::get<RVector>(value_); }
  Complex as_complex() const { return {x()(0), x()(1)}; }

 private:
  explicit Point(std::size_t index) : value_(index) {}
  explicit Point(RVector x) : value_(std::move(x)) {}
  std::variant<std::size_t, RVector> value_;
};

inline void check_point(const GroundSpace& space, const Point& p) {
  if (space.kind() == GroundSpace::Kind::finite) {
    if (!p.is_site() || p.index() < 1 || p.index() > space.sites()) {
      throw domain_error("point is not a site index in [1, " + std::to_string(space.sites()) + "]");
    }
    return;
  }
  if (p.is_site() || static_cast<std::size_t>(p.x().size()) != space.ambient_dimension()) {
    throw domain_error("point has wrong dimension for this space");
  }
  if (space.kind() == GroundSpace::Kind::sphere && std::abs(p.x().norm() - 1.0) > 1e-12) {
    throw domain_error("sphere point is not a unit vector");
  }
}

// Which structure lets repulsiveness integrals collapse to one dimension.
enum class Symmetry {
  none,
  finite,              // exact sums over sites
  stationary_modulus,  // Euclidean: |K(v,w)| depends on |v - w| only, K(v,v) constant
  sphere_isotropic,    // K(v,w) = K0(v . w)
};

struct KernelDescriptor {
  std::string family;
  std::map<std::string, double> params;
  Symmetry symmetry = Symmetry::none;
  std::optional<double> intensity;  // constant intensity when known
  // Natural length unit of the model; sets default truncation radii and
  // profile grids.
  double length_scale = 1.0;
  // Suggested truncation radius for improper radial integrals.
  std::optional<double> truncation_radius;
  std::optional<double> expected_p;  // closed form when the model has one
};

// Hermitian kernel on a ground space. Immutable; cheap to copy.
class Kernel {
 public:
  using Eval = std::function<Complex(const Point&, const Point&)>;

  Kernel(GroundSpace space, Eval eval, KernelDescriptor descriptor)
      : space_(space), eval_(std::move(eval)), descriptor_(std::move(descriptor)) {}

  Complex operator()(const Point& v, const Point& w) const { return eval_(v, w); }
  double intensity_at(const Point& v) const { return eval_(v, v).real(); }

  const GroundSpace& space() const { return space_; }
  const KernelDescriptor& descriptor() const { return descriptor_; }

 private:
  GroundSpace space_;
  Eval eval_;
  KernelDescriptor descriptor_;
};

inline Kernel matrix_kernel(const CMatrix& matrix, std::string family = "finite") {
  if (matrix.rows() != matrix.cols()) throw domain_error("kernel matrix must be square");
  auto m = std::make_shared<const CMatrix>(matrix);
  KernelDescriptor desc;
  desc.family = std::move(family);
  desc.symmetry = Symmetry::finite;
  return Kernel(
      GroundSpace::finite(static_cast<std::size_t>(matrix.rows())),
      [m](const Point& v, const Point& w) {
        return (*m)(static_cast<Eigen::Index>(v.index() - 1), static_cast<Eigen::Index>(w.index() - 1));
      },
      std::move(desc));
}

}  // namespace dppalm

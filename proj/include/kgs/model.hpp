#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include "kgs/errors.hpp"
#include "kgs/util.hpp"

namespace kgs {

/// Constants of the scaled equation -(a + b∫|∇v|²)Δv + Vv = P|v|^{p-2}v + Q|v|⁴v.
struct KirchhoffParams {
  double a = 1.0;
  double b = 1.0;
  double p = 5.0;
  void validate() const;
};

/// Uniform radial grid on [0, R]: nodes r_i = i·h for i = 1..n, h·n = R.
/// The value at r = 0 is handled through the regularity condition v'(0) = 0.
struct RadialGrid {
  double r_dom = 0.0;
  int n = 0;
  RadialGrid() = default;
  RadialGrid(double R, int n);
  double spacing() const { return r_dom / n; }
};

/// Uniform box [-L, L]³ with m nodes per axis, spacing h = 2L/(m-1).
/// Solver iterates carry homogeneous Dirichlet values on the boundary layer.
struct CartesianGrid {
  double half_width = 0.0;
  int m = 0;
  CartesianGrid() = default;
  CartesianGrid(double L, int m);
  double spacing() const { return 2.0 * half_width / (m - 1); }
};

enum class GridKind { Radial, Cartesian };

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Immutable runtime grid: node coordinates, quadrature weights, topology.
class Grid {
 public:
  static GridPtr make(const RadialGrid& g);
  static GridPtr make(const CartesianGrid& g);

  GridKind kind() const { return kind_; }
  std::size_t size() const { return theta_.size(); }
  double spacing() const { return h_; }

  // radial accessors
  int radial_n() const { return n_; }
  double r_dom() const { return n_ * h_; }
  double radius(std::size_t i) const { return (double(i) + 1.0) * h_; }

  // cartesian accessors
  int cart_m() const { return m_; }
  double half_width() const { return 0.5 * (m_ - 1) * h_; }
  std::size_t index3(int i, int j, int k) const {
    return (std::size_t(i) * m_ + j) * m_ + k;
  }
  double axis_coord(int i) const { return (i - 0.5 * (m_ - 1)) * h_; }

  Vec3 coord(std::size_t idx) const;
  bool is_boundary(std::size_t idx) const;
  double quad_weight(std::size_t idx) const { return theta_[idx]; }
  std::span<const double> quad_weights() const { return theta_; }
  bool same_as(const Grid& other) const;

 private:
  Grid() = default;
  GridKind kind_ = GridKind::Radial;
  int n_ = 0;  // radial node count
  int m_ = 0;  // cartesian nodes per axis
  double h_ = 0.0;
  std::vector<double> theta_;
};

/// Discrete function: one value per grid node.
/// Radial order: increasing r. Cartesian order: row-major x,y,z (z fastest).
struct Field {
  GridPtr grid;
  std::vector<double> values;

  Field() = default;
  Field(GridPtr g, std::vector<double> v);
  static Field zeros(GridPtr g);
  static Field constant(GridPtr g, double c);
  std::size_t size() const { return values.size(); }
  void check() const;
};

/// Composite quadrature over the truncated domain (weight 4πr² radial, h³
/// cartesian with trapezoid end factors).
double integrate(const Field& f);

/// ∫ f·g with the same quadrature.
double inner(const Field& f, const Field& g);

/// Discrete Dirichlet energy ∫|∇v|² from second-order midpoint differences.
double grad_norm_sq(const Field& v);

/// a·∫|∇v|² + ∫ V v².  Vfield must be strictly positive.
double weighted_norm_sq(const Field& v, const KirchhoffParams& params,
                        const Field& Vfield);

/// Riesz representative w of the Dirichlet form: ⟨w, φ⟩ = Σ ω (Dv)(Dφ)
/// for every grid vector φ, with ⟨·,·⟩ the integrate() inner product.
/// Interior rows coincide with -(1/r²)(r²v')' (radial) and the 7-point
/// -Δ (cartesian).
void neg_weak_laplacian(const Field& v, Field& out);
Field neg_weak_laplacian(const Field& v);

/// Zero the Dirichlet layer (r = R node, or the box boundary shell).
void zero_boundary(Field& v);
double min_interior(const Field& v);
double max_abs_boundary_layer(const Field& v);

/// exp(-|x-center|²/(2 width²)) scaled by amplitude; radial grids use |x| = r
/// and the center's first component as a radial offset.
Field gaussian_field(GridPtr g, const Vec3& center, double width,
                     double amplitude = 1.0);

/// Field dump, text format KGS1 (17 significant digits, one value per line).
void dump_field(const Field& f, std::ostream& os);
Field load_field(std::istream& is);
void dump_field_file(const Field& f, const std::string& path);
Field load_field_file(const std::string& path);

}  // namespace kgs

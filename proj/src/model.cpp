#include "kgs/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace kgs {

namespace {
constexpr double kPi = std::numbers::pi;

void require(bool cond, const char* msg) {
  if (!cond) throw DomainError(msg);
}
}  // namespace

void KirchhoffParams::validate() const {
  require(a > 0.0, "KirchhoffParams: a must be positive");
  require(b > 0.0, "KirchhoffParams: b must be positive");
  require(p > 4.0 && p < 6.0, "KirchhoffParams: p must lie in (4,6)");
}

RadialGrid::RadialGrid(double R, int n_) : n(n_) {
  require(R > 0.0, "RadialGrid: R must be positive");
  require(n_ >= 8, "RadialGrid: need at least 8 nodes");
  // normalize so that h*n reproduces r_dom exactly
  double h = R / n_;
  r_dom = h * n_;
}

CartesianGrid::CartesianGrid(double L, int m_) : m(m_) {
  require(L > 0.0, "CartesianGrid: L must be positive");
  require(m_ >= 5, "CartesianGrid: need at least 5 nodes per axis");
  double h = 2.0 * L / (m_ - 1);
  half_width = 0.5 * (m_ - 1) * h;
}

GridPtr Grid::make(const RadialGrid& g) {
  require(g.n >= 8 && g.r_dom > 0.0, "Grid: invalid radial grid");
  auto grid = std::shared_ptr<Grid>(new Grid());
  grid->kind_ = GridKind::Radial;
  grid->n_ = g.n;
  grid->h_ = g.r_dom / g.n;
  const double h = grid->h_;
  grid->theta_.resize(g.n);
  // trapezoid against the measure 4πr²dr; the r = 0 node carries zero weight
  for (int i = 1; i < g.n; ++i) {
    double r = i * h;
    grid->theta_[i - 1] = 4.0 * kPi * r * r * h;
  }
  double R = g.n * h;
  grid->theta_[g.n - 1] = 2.0 * kPi * R * R * h;
  return grid;
}

GridPtr Grid::make(const CartesianGrid& g) {
  require(g.m >= 5 && g.half_width > 0.0, "Grid: invalid cartesian grid");
  auto grid = std::shared_ptr<Grid>(new Grid());
  grid->kind_ = GridKind::Cartesian;
  grid->m_ = g.m;
  grid->h_ = 2.0 * g.half_width / (g.m - 1);
  const int m = g.m;
  const double h3 = grid->h_ * grid->h_ * grid->h_;
  auto c = [m](int i) { return (i == 0 || i == m - 1) ? 0.5 : 1.0; };
  grid->theta_.resize(std::size_t(m) * m * m);
  std::size_t idx = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) grid->theta_[idx++] = h3 * c(i) * c(j) * c(k);
  return grid;
}

Vec3 Grid::coord(std::size_t idx) const {
  if (kind_ == GridKind::Radial) return {radius(idx), 0.0, 0.0};
  int k = int(idx % m_);
  int j = int((idx / m_) % m_);
  int i = int(idx / (std::size_t(m_) * m_));
  return {axis_coord(i), axis_coord(j), axis_coord(k)};
}

bool Grid::is_boundary(std::size_t idx) const {
  if (kind_ == GridKind::Radial) return idx + 1 == std::size_t(n_);
  int k = int(idx % m_);
  int j = int((idx / m_) % m_);
  int i = int(idx / (std::size_t(m_) * m_));
  return i == 0 || i == m_ - 1 || j == 0 || j == m_ - 1 || k == 0 ||
         k == m_ - 1;
}

bool Grid::same_as(const Grid& other) const {
  return kind_ == other.kind_ && n_ == other.n_ && m_ == other.m_ &&
         h_ == other.h_;
}

Field::Field(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  check();
}

Field Field::zeros(GridPtr g) {
  std::vector<double> v(g->size(), 0.0);
  return Field(std::move(g), std::move(v));
}

Field Field::constant(GridPtr g, double c) {
  std::vector<double> v(g->size(), c);
  return Field(std::move(g), std::move(v));
}

void Field::check() const {
  if (!grid) throw StructuralError("Field: missing grid");
  if (values.size() != grid->size())
    throw StructuralError("Field: value count does not match grid node count");
}

namespace {

void check_finite(const Field& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) throw StructuralError("Field: non-finite value");
}

void check_same_grid(const Field& a, const Field& b) {
  if (!a.grid->same_as(*b.grid))
    throw StructuralError("Fields live on different grids");
}

}  // namespace

double integrate(const Field& f) {
  f.check();
  auto w = f.grid->quad_weights();
  std::vector<double> tmp(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) tmp[i] = w[i] * f.values[i];
  return pairwise_sum(tmp);
}

double inner(const Field& f, const Field& g) {
  f.check();
  g.check();
  check_same_grid(f, g);
  auto w = f.grid->quad_weights();
  std::vector<double> tmp(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    tmp[i] = w[i] * f.values[i] * g.values[i];
  return pairwise_sum(tmp);
}

namespace {

// Midpoint-difference Dirichlet form. Radial segment k (k = 0..n-1) sits
// between r_k and r_{k+1}; the first segment uses the r = 0 ghost value
// (4v₁ - v₂)/3 from the regularity condition, which collapses to the
// difference (v₂ - v₁)/(3h).
double radial_grad_sq(const Grid& g, std::span<const double> v) {
  const int n = g.radial_n();
  const double h = g.spacing();
  Kahan acc;
  {
    double s0 = (v[1] - v[0]) / (3.0 * h);
    double w0 = 4.0 * kPi * (0.5 * h) * (0.5 * h) * h;
    acc.add(w0 * s0 * s0);
  }
  for (int k = 1; k < n; ++k) {
    double rm = (k + 0.5) * h;
    double w = 4.0 * kPi * rm * rm * h;
    double s = (v[k] - v[k - 1]) / h;
    acc.add(w * s * s);
  }
  return acc.value();
}

void radial_weak_laplacian(const Grid& g, std::span<const double> v,
                           std::span<double> out) {
  const int n = g.radial_n();
  const double h = g.spacing();
  std::fill(out.begin(), out.end(), 0.0);
  {
    double s0 = (v[1] - v[0]) / (3.0 * h);
    double w0 = 4.0 * kPi * (0.5 * h) * (0.5 * h) * h;
    double z = w0 * s0 / (3.0 * h);
    out[0] -= z;
    out[1] += z;
  }
  for (int k = 1; k < n; ++k) {
    double rm = (k + 0.5) * h;
    double w = 4.0 * kPi * rm * rm * h;
    double z = w * (v[k] - v[k - 1]) / (h * h);
    out[k] += z;
    out[k - 1] -= z;
  }
  auto theta = g.quad_weights();
  for (int i = 0; i < n; ++i) out[i] /= theta[i];
}

double cartesian_grad_sq(const Grid& g, std::span<const double> v) {
  const int m = g.cart_m();
  const double h = g.spacing();
  const double inv_h2 = 1.0 / (h * h);
  auto c = [m](int i) { return (i == 0 || i == m - 1) ? 0.5 : 1.0; };
  const double h3 = h * h * h;
  Kahan acc;
  const std::size_t mm = std::size_t(m) * m;
  // x faces
  for (int i = 0; i + 1 < m; ++i)
    for (int j = 0; j < m; ++j) {
      double wjk = h3 * c(j);
      const double* a = v.data() + i * mm + std::size_t(j) * m;
      const double* b = a + mm;
      for (int k = 0; k < m; ++k) {
        double d = b[k] - a[k];
        acc.add(wjk * c(k) * d * d * inv_h2);
      }
    }
  // y faces
  for (int i = 0; i < m; ++i)
    for (int j = 0; j + 1 < m; ++j) {
      double wik = h3 * c(i);
      const double* a = v.data() + i * mm + std::size_t(j) * m;
      const double* b = a + m;
      for (int k = 0; k < m; ++k) {
        double d = b[k] - a[k];
        acc.add(wik * c(k) * d * d * inv_h2);
      }
    }
  // z faces
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double wij = h3 * c(i) * c(j);
      const double* a = v.data() + i * mm + std::size_t(j) * m;
      for (int k = 0; k + 1 < m; ++k) {
        double d = a[k + 1] - a[k];
        acc.add(wij * d * d * inv_h2);
      }
    }
  return acc.value();
}

void cartesian_weak_laplacian(const Grid& g, std::span<const double> v,
                              std::span<double> out) {
  const int m = g.cart_m();
  const double h = g.spacing();
  auto c = [m](int i) { return (i == 0 || i == m - 1) ? 0.5 : 1.0; };
  const double h3 = h * h * h;
  const double inv_h2 = 1.0 / (h * h);
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t mm = std::size_t(m) * m;
  for (int i = 0; i + 1 < m; ++i)
    for (int j = 0; j < m; ++j) {
      double wjk = h3 * c(j) * inv_h2;
      std::size_t base = i * mm + std::size_t(j) * m;
      for (int k = 0; k < m; ++k) {
        double z = wjk * c(k) * (v[base + mm + k] - v[base + k]);
        out[base + mm + k] += z;
        out[base + k] -= z;
      }
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j + 1 < m; ++j) {
      double wik = h3 * c(i) * inv_h2;
      std::size_t base = i * mm + std::size_t(j) * m;
      for (int k = 0; k < m; ++k) {
        double z = wik * c(k) * (v[base + m + k] - v[base + k]);
        out[base + m + k] += z;
        out[base + k] -= z;
      }
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double wij = h3 * c(i) * c(j) * inv_h2;
      std::size_t base = i * mm + std::size_t(j) * m;
      for (int k = 0; k + 1 < m; ++k) {
        double z = wij * (v[base + k + 1] - v[base + k]);
        out[base + k + 1] += z;
        out[base + k] -= z;
      }
    }
  auto theta = g.quad_weights();
  for (std::size_t i = 0; i < theta.size(); ++i) out[i] /= theta[i];
}

}  // namespace

double grad_norm_sq(const Field& v) {
  v.check();
  check_finite(v);
  if (v.grid->kind() == GridKind::Radial)
    return radial_grad_sq(*v.grid, v.values);
  return cartesian_grad_sq(*v.grid, v.values);
}

double weighted_norm_sq(const Field& v, const KirchhoffParams& params,
                        const Field& Vfield) {
  params.validate();
  v.check();
  Vfield.check();
  check_same_grid(v, Vfield);
  for (double x : Vfield.values)
    if (!(x > 0.0)) throw DomainError("weighted_norm_sq: Vfield must be strictly positive");
  auto w = v.grid->quad_weights();
  Kahan acc;
  for (std::size_t i = 0; i < v.size(); ++i)
    acc.add(w[i] * Vfield.values[i] * v.values[i] * v.values[i]);
  return params.a * grad_norm_sq(v) + acc.value();
}

void neg_weak_laplacian(const Field& v, Field& out) {
  v.check();
  if (!out.grid || !out.grid->same_as(*v.grid)) out = Field::zeros(v.grid);
  if (v.grid->kind() == GridKind::Radial)
    radial_weak_laplacian(*v.grid, v.values, out.values);
  else
    cartesian_weak_laplacian(*v.grid, v.values, out.values);
}

Field neg_weak_laplacian(const Field& v) {
  Field out;
  neg_weak_laplacian(v, out);
  return out;
}

void zero_boundary(Field& v) {
  v.check();
  const Grid& g = *v.grid;
  if (g.kind() == GridKind::Radial) {
    v.values.back() = 0.0;
    return;
  }
  const int m = g.cart_m();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        if (i == 0 || i == m - 1 || j == 0 || j == m - 1 || k == 0 ||
            k == m - 1)
          v.values[g.index3(i, j, k)] = 0.0;
}

double min_interior(const Field& v) {
  v.check();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v.grid->is_boundary(i)) lo = std::min(lo, v.values[i]);
  return lo;
}

double max_abs_boundary_layer(const Field& v) {
  // the widest value in the shell just inside the Dirichlet boundary
  v.check();
  const Grid& g = *v.grid;
  double hi = 0.0;
  if (g.kind() == GridKind::Radial) {
    if (g.radial_n() >= 2) hi = std::fabs(v.values[g.radial_n() - 2]);
    return hi;
  }
  const int m = g.cart_m();
  for (int i = 1; i < m - 1; ++i)
    for (int j = 1; j < m - 1; ++j)
      for (int k = 1; k < m - 1; ++k)
        if (i == 1 || i == m - 2 || j == 1 || j == m - 2 || k == 1 ||
            k == m - 2)
          hi = std::max(hi, std::fabs(v.values[g.index3(i, j, k)]));
  return hi;
}

Field gaussian_field(GridPtr g, const Vec3& center, double width,
                     double amplitude) {
  require(width > 0.0, "gaussian_field: width must be positive");
  Field f = Field::zeros(g);
  const double inv = 1.0 / (2.0 * width * width);
  if (g->kind() == GridKind::Radial) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      double d = g->radius(i) - center[0];
      f.values[i] = amplitude * std::exp(-d * d * inv);
    }
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) {
      Vec3 x = g->coord(i);
      Vec3 d = sub(x, center);
      f.values[i] = amplitude * std::exp(-dot(d, d) * inv);
    }
  }
  return f;
}

void dump_field(const Field& f, std::ostream& os) {
  f.check();
  os << "KGS1\n";
  if (f.grid->kind() == GridKind::Radial)
    os << "grid radial n=" << f.grid->radial_n()
       << " R=" << format_double(f.grid->r_dom()) << "\n";
  else
    os << "grid cartesian m=" << f.grid->cart_m()
       << " L=" << format_double(f.grid->half_width()) << "\n";
  for (double v : f.values) os << format_sci17(v) << "\n";
}

Field load_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "KGS1")
    throw StructuralError("field dump: missing KGS1 magic");
  if (!std::getline(is, line))
    throw StructuralError("field dump: missing grid line");
  std::istringstream hdr(line);
  std::string word, kind;
  hdr >> word >> kind;
  if (word != "grid") throw StructuralError("field dump: malformed grid line");
  GridPtr grid;
  if (kind == "radial") {
    int n = 0;
    double R = 0.0;
    std::string tok;
    while (hdr >> tok) {
      if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
      else if (tok.rfind("R=", 0) == 0) R = std::stod(tok.substr(2));
    }
    grid = Grid::make(RadialGrid(R, n));
  } else if (kind == "cartesian") {
    int m = 0;
    double L = 0.0;
    std::string tok;
    while (hdr >> tok) {
      if (tok.rfind("m=", 0) == 0) m = std::stoi(tok.substr(2));
      else if (tok.rfind("L=", 0) == 0) L = std::stod(tok.substr(2));
    }
    grid = Grid::make(CartesianGrid(L, m));
  } else {
    throw StructuralError("field dump: unknown grid kind '" + kind + "'");
  }
  std::vector<double> vals;
  vals.reserve(grid->size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    vals.push_back(std::stod(line));
  }
  if (vals.size() != grid->size())
    throw StructuralError("field dump: value count does not match grid");
  return Field(grid, std::move(vals));
}

void dump_field_file(const Field& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw StructuralError("cannot open '" + path + "' for writing");
  dump_field(f, os);
}

Field load_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw StructuralError("cannot open '" + path + "'");
  return load_field(is);
}

}  // namespace kgs

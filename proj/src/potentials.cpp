#include "kgs/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kgs {

double Shape::operator()(const Vec3& x) const {
  Vec3 d = sub(x, center);
  double r = norm(d);
  switch (kind) {
    case ShapeKind::Constant:
      return value;
    case ShapeKind::Bump:
      return base + height * std::exp(-r * r / (2.0 * width * width));
    case ShapeKind::Well:
      return base - depth * std::exp(-r * r / (2.0 * width * width));
    case ShapeKind::RationalRise: {
      double s = r / width;
      double s2 = s * s;
      return low + (high - low) * s2 / (1.0 + s2);
    }
    case ShapeKind::TanhPeak:
      return far + (peak - far) * (1.0 - std::tanh(r / width));
  }
  return 0.0;
}

double Shape::min_value() const {
  switch (kind) {
    case ShapeKind::Constant: return value;
    case ShapeKind::Bump: return base;
    case ShapeKind::Well: return base - depth;
    case ShapeKind::RationalRise: return low;
    case ShapeKind::TanhPeak: return std::min(far, peak);
  }
  return 0.0;
}

double Shape::max_value() const {
  switch (kind) {
    case ShapeKind::Constant: return value;
    case ShapeKind::Bump: return base + height;
    case ShapeKind::Well: return base;
    case ShapeKind::RationalRise: return high;
    case ShapeKind::TanhPeak: return std::max(far, peak);
  }
  return 0.0;
}

double Shape::limit_infinity() const {
  switch (kind) {
    case ShapeKind::Constant: return value;
    case ShapeKind::Bump: return base;
    case ShapeKind::Well: return base;
    case ShapeKind::RationalRise: return high;
    case ShapeKind::TanhPeak: return far;
  }
  return 0.0;
}

void Shape::validate() const {
  if (!(width > 0.0)) throw DomainError("shape: width must be positive");
  if (!(min_value() > 0.0))
    throw DomainError("shape: values must stay strictly positive");
}

std::string Shape::describe() const {
  std::ostringstream os;
  auto c = [&]() {
    return format_double(center[0]) + " " + format_double(center[1]) + " " +
           format_double(center[2]);
  };
  switch (kind) {
    case ShapeKind::Constant:
      os << "const(value=" << format_double(value) << ")";
      break;
    case ShapeKind::Bump:
      os << "bump(center=" << c() << ", base=" << format_double(base)
         << ", height=" << format_double(height)
         << ", width=" << format_double(width) << ")";
      break;
    case ShapeKind::Well:
      os << "well(center=" << c() << ", base=" << format_double(base)
         << ", depth=" << format_double(depth)
         << ", width=" << format_double(width) << ")";
      break;
    case ShapeKind::RationalRise:
      os << "rational_rise(center=" << c() << ", low=" << format_double(low)
         << ", high=" << format_double(high)
         << ", width=" << format_double(width) << ")";
      break;
    case ShapeKind::TanhPeak:
      os << "tanh_peak(center=" << c() << ", far=" << format_double(far)
         << ", peak=" << format_double(peak)
         << ", width=" << format_double(width) << ")";
      break;
  }
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

Vec3 parse_vec3(const std::string& s) {
  std::istringstream is(s);
  Vec3 v{0, 0, 0};
  if (!(is >> v[0] >> v[1] >> v[2]))
    throw ParseError("shape: cannot parse center '" + s + "'");
  return v;
}

}  // namespace

Shape parse_shape(const std::string& text) {
  std::string t = trim(text);
  auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')')
    throw ParseError("shape: expected name(args) in '" + text + "'");
  std::string name = trim(t.substr(0, open));
  std::string args = t.substr(open + 1, t.size() - open - 2);
  Shape s;
  if (name == "const") s.kind = ShapeKind::Constant;
  else if (name == "bump") s.kind = ShapeKind::Bump;
  else if (name == "well") s.kind = ShapeKind::Well;
  else if (name == "rational_rise") s.kind = ShapeKind::RationalRise;
  else if (name == "tanh_peak") s.kind = ShapeKind::TanhPeak;
  else throw ParseError("shape: unknown catalog shape '" + name + "'");

  std::stringstream as(args);
  std::string item;
  while (std::getline(as, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ParseError("shape: malformed argument '" + item + "'");
    std::string key = trim(item.substr(0, eq));
    std::string val = trim(item.substr(eq + 1));
    if (key == "center") s.center = parse_vec3(val);
    else if (key == "value") s.value = std::stod(val);
    else if (key == "base") s.base = std::stod(val);
    else if (key == "height") s.height = std::stod(val);
    else if (key == "depth") s.depth = std::stod(val);
    else if (key == "width") s.width = std::stod(val);
    else if (key == "low") s.low = std::stod(val);
    else if (key == "high") s.high = std::stod(val);
    else if (key == "far") s.far = std::stod(val);
    else if (key == "peak") s.peak = std::stod(val);
    else throw ParseError("shape: unknown argument '" + key + "'");
  }
  s.validate();
  return s;
}

PotentialTripleSpec PotentialTripleSpec::from_shapes(Shape V, Shape P, Shape Q,
                                                     Vec3 x_star,
                                                     double R_cond) {
  PotentialTripleSpec spec;
  spec.V = V;
  spec.P = P;
  spec.Q = Q;
  spec.x_star = x_star;
  spec.R_cond = R_cond;
  spec.V_min = V.min_value();
  spec.V_max = V.max_value();
  spec.V_inf = V.limit_infinity();
  spec.P_min = P.min_value();
  spec.P_max = P.max_value();
  spec.P_inf = P.limit_infinity();
  spec.Q_min = Q.min_value();
  spec.Q_max = Q.max_value();
  spec.Q_inf = Q.limit_infinity();
  spec.validate();
  return spec;
}

void PotentialTripleSpec::validate() const {
  V.validate();
  P.validate();
  Q.validate();
  if (!(R_cond > 0.0)) throw DomainError("potential spec: R must be positive");
}

PotentialTripleSpec PotentialTripleSpec::preset(const std::string& name) {
  if (name == "aligned") {
    // V rises away from the origin, P and Q peak there: all three extremes
    // coincide at x* = 0.
    Shape V = parse_shape("rational_rise(center=0 0 0, low=1, high=2, width=1)");
    Shape P = parse_shape("tanh_peak(center=0 0 0, far=1, peak=2, width=1)");
    Shape Q = parse_shape("tanh_peak(center=0 0 0, far=1, peak=2, width=1)");
    return from_shapes(V, P, Q, {0.0, 0.0, 0.0}, 2.0);
  }
  if (name == "competing") {
    // P, Q peak at the origin while the V-well sits off to the side.
    Shape V = parse_shape("well(center=1.5 0 0, base=1, depth=0.4, width=0.6)");
    Shape P = parse_shape("bump(center=0 0 0, base=1, height=1, width=1)");
    Shape Q = parse_shape("bump(center=0 0 0, base=1, height=0.5, width=1)");
    return from_shapes(V, P, Q, {0.0, 0.0, 0.0}, 3.5);
  }
  if (name == "constant") {
    Shape one = parse_shape("const(value=1)");
    return from_shapes(one, one, one, {0.0, 0.0, 0.0}, 2.0);
  }
  throw ParseError("unknown potential preset '" + name + "'");
}

Field sample_scaled(const Shape& s, GridPtr g, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("sample_scaled: epsilon must be positive");
  Field f = Field::zeros(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec3 x = g->coord(i);
    f.values[i] = s({epsilon * x[0], epsilon * x[1], epsilon * x[2]});
  }
  return f;
}

const ConditionEntry& ConditionReport::get(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw StructuralError("condition report: no entry '" + name + "'");
}

namespace {

std::vector<std::size_t> near_level_set(const Field& f, double level,
                                        double tol, bool from_below) {
  // from_below: nodes with f >= level - tol (max sets); otherwise min sets
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double v = f.values[i];
    if (from_below ? (v >= level - tol) : (v <= level + tol)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> intersect_sorted(const std::vector<std::size_t>& a,
                                          const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace

ConditionReport check_conditions(const PotentialTripleSpec& spec, GridPtr grid,
                                 double tol_set) {
  spec.validate();
  if (grid->kind() != GridKind::Cartesian)
    throw StructuralError("check_conditions: cartesian grid required");
  if (grid->half_width() < 2.0 * spec.R_cond)
    throw DomainError("check_conditions: grid must cover a ball of radius 2R");

  Field Vf = sample_scaled(spec.V, grid, 1.0);
  Field Pf = sample_scaled(spec.P, grid, 1.0);
  Field Qf = sample_scaled(spec.Q, grid, 1.0);

  auto Pset = near_level_set(Pf, spec.P_max, tol_set, true);
  auto Qset = near_level_set(Qf, spec.Q_max, tol_set, true);
  auto Vset = near_level_set(Vf, spec.V_min, tol_set, false);
  auto PQ = intersect_sorted(Pset, Qset);
  auto VQ = intersect_sorted(Vset, Qset);

  ConditionReport rep;
  {
    ConditionEntry e;
    e.name = "PQ1";
    e.witness_count = PQ.size();
    e.pass = !PQ.empty();
    e.note = "discrete P-max/Q-max intersection";
    rep.entries.push_back(e);
  }
  {
    ConditionEntry e;
    e.name = "PQ2";
    e.gap = spec.P_max - spec.P_inf;
    double vstar = spec.V(spec.x_star);
    for (std::size_t i = 0; i < grid->size(); ++i) {
      Vec3 x = grid->coord(i);
      if (norm(x) < spec.R_cond) continue;
      if (Vf.values[i] < vstar - tol_set) {
        if (e.violations == 0) e.worst = x;
        ++e.violations;
      }
    }
    e.pass = (e.gap > tol_set) && e.violations == 0;
    e.note = "P_max-P_inf gap and exterior V(x*)<=V comparison";
    rep.entries.push_back(e);
  }
  {
    ConditionEntry e;
    e.name = "VQ1";
    e.witness_count = VQ.size();
    e.pass = !VQ.empty();
    e.note = "discrete V-min/Q-max intersection";
    rep.entries.push_back(e);
  }
  {
    ConditionEntry e;
    e.name = "VQ2";
    e.gap = spec.V_inf - spec.V_min;
    double pstar = spec.P(spec.x_star);
    for (std::size_t i = 0; i < grid->size(); ++i) {
      Vec3 x = grid->coord(i);
      if (norm(x) < spec.R_cond) continue;
      if (Pf.values[i] > pstar + tol_set) {
        if (e.violations == 0) e.worst = x;
        ++e.violations;
      }
    }
    e.pass = (e.gap > tol_set) && e.violations == 0;
    e.note = "V_inf-V_min gap and exterior P(x*)>=P comparison";
    rep.entries.push_back(e);
  }
  return rep;
}

double ConcentrationSets::dist_to(const std::vector<std::size_t>& set,
                                  const Vec3& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t idx : set) best = std::min(best, dist(grid->coord(idx), x));
  return best;
}

ConcentrationSets admissible_sets(const PotentialTripleSpec& spec, GridPtr grid,
                                  double tol_set) {
  ConditionReport rep = check_conditions(spec, grid, tol_set);
  Field Vf = sample_scaled(spec.V, grid, 1.0);
  Field Pf = sample_scaled(spec.P, grid, 1.0);
  Field Qf = sample_scaled(spec.Q, grid, 1.0);

  ConcentrationSets sets;
  sets.grid = grid;
  sets.tol_set = tol_set;
  sets.Pset = near_level_set(Pf, spec.P_max, tol_set, true);
  sets.Qset = near_level_set(Qf, spec.Q_max, tol_set, true);
  sets.Vset = near_level_set(Vf, spec.V_min, tol_set, false);
  auto PQ = intersect_sorted(sets.Pset, sets.Qset);
  auto VQ = intersect_sorted(sets.Vset, sets.Qset);

  std::vector<bool> in_pq(grid->size(), false);
  for (auto i : PQ) in_pq[i] = true;
  std::vector<bool> in_vq(grid->size(), false);
  for (auto i : VQ) in_vq[i] = true;

  if (rep.pq_ok()) {
    if (PQ.empty())
      throw StructuralError("admissible_sets: empty discrete P∩Q under PQ1");
    double vstar = std::numeric_limits<double>::infinity();
    for (auto i : PQ) vstar = std::min(vstar, Vf.values[i]);
    sets.V_xstar = vstar;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      if (in_pq[i]) {
        if (std::fabs(Vf.values[i] - vstar) <= tol_set) sets.A_V.push_back(i);
      } else if (Vf.values[i] < vstar) {
        sets.A_V.push_back(i);
      }
    }
  }
  if (rep.vq_ok()) {
    if (VQ.empty())
      throw StructuralError("admissible_sets: empty discrete V∩Q under VQ1");
    double pstar = -std::numeric_limits<double>::infinity();
    for (auto i : VQ) pstar = std::max(pstar, Pf.values[i]);
    sets.P_xstar = pstar;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      if (in_vq[i]) {
        if (std::fabs(Pf.values[i] - pstar) <= tol_set) sets.A_P.push_back(i);
      } else if (Pf.values[i] > pstar) {
        sets.A_P.push_back(i);
      }
    }
  }
  if (!rep.pq_ok() && !rep.vq_ok())
    throw DomainError("admissible_sets: neither (PQ1)+(PQ2) nor (VQ1)+(VQ2) hold");
  return sets;
}

}  // namespace kgs

// Certified topology of a real plane curve P = 0 on RP^2.
//
// The sphere is covered by the six faces of a cube composed with a fixed
// invertible linear map L (dyadic entries, so chart points are exact). On a
// face, g(u, v) = P(L(c + u e1 + v e2)) has the same sign as P on the ray
// through that point. Each face is subdivided until every cell is
//   - sign-constant: the Taylor form of g on the cell excludes 0, or
//   - transversal: one partial derivative excludes 0 on the cell and g is
//     constant-sign or monotone along the two edges crossing that direction.
// In a transversal cell the positive and negative parts are each connected
// and, when both exist, meet along a single arc. Gluing the per-cell sign
// pieces across shared edges yields the sign regions of S^2 \ Z(P); regions
// and arcs form a tree (one edge per curve component). The antipodal map acts
// on this tree; its fixed vertex (even degree) or fixed edge (odd degree)
// roots the nest forest of the ovals on RP^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/topology.hpp"

namespace rlab {

namespace {

using Vec3 = std::array<double, 3>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Rotation-like map with entries on a 2^-20 grid.
constexpr double q20(double v) { return static_cast<double>(static_cast<long long>(v * 1048576.0)) / 1048576.0; }
const std::array<Vec3, 3> kChartMap = {{
    {q20(0.8231591), q20(-0.3764212), q20(0.4252981)},
    {q20(0.4672118), q20(0.8701345), q20(-0.1567234)},
    {q20(-0.3108123), q20(0.3180871), q20(0.8918772)},
}};

Vec3 apply_map(const Vec3& p) {
  Vec3 x{};
  for (int i = 0; i < 3; ++i) x[i] = kChartMap[i][0] * p[0] + kChartMap[i][1] * p[1] + kChartMap[i][2] * p[2];
  return x;
}

struct FaceFrame {
  Vec3 c, e1, e2;
  Vec3 point(double u, double v) const {
    return {c[0] + u * e1[0] + v * e2[0], c[1] + u * e1[1] + v * e2[1], c[2] + u * e1[2] + v * e2[2]};
  }
};

// Faces 3..5 are the antipodes of faces 0..2 with identical (u, v) parameters.
const std::array<FaceFrame, 6> kFaces = {{
    {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
    {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},
    {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},
    {{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}},
    {{0, -1, 0}, {0, 0, -1}, {-1, 0, 0}},
    {{0, 0, -1}, {-1, 0, 0}, {0, -1, 0}},
}};

// Dense bivariate polynomial sum c[i][j] u^i v^j, i + j <= d.
class Bivariate {
 public:
  explicit Bivariate(int d) : d_(d), c_(static_cast<std::size_t>((d + 1) * (d + 1)), 0.0) {}
  int degree() const { return d_; }
  double& at(int i, int j) { return c_[static_cast<std::size_t>(i * (d_ + 1) + j)]; }
  double at(int i, int j) const { return c_[static_cast<std::size_t>(i * (d_ + 1) + j)]; }

  Bivariate times(const Bivariate& o, int cap) const {
    Bivariate r(cap);
    for (int i = 0; i <= d_; ++i)
      for (int j = 0; i + j <= d_; ++j) {
        const double a = at(i, j);
        if (a == 0.0) continue;
        for (int k = 0; k <= o.d_; ++k)
          for (int l = 0; k + l <= o.d_; ++l) {
            if (i + j + k + l > cap) continue;
            r.at(i + k, j + l) += a * o.at(k, l);
          }
      }
    return r;
  }

 private:
  int d_;
  std::vector<double> c_;
};

struct FacePolynomial {
  Bivariate value;   // coefficients of g
  Bivariate bound;   // coefficientwise bound from the absolute-value expansion
};

FacePolynomial expand_face(const HomogeneousPolynomial& s, const FaceFrame& face) {
  const int d = s.degree();
  const Vec3 p = apply_map(face.c), q = apply_map(face.e1), r = apply_map(face.e2);
  // Powers of the three linear forms p_k + q_k u + r_k v and their absolute versions.
  std::array<std::vector<Bivariate>, 3> pw, pw_abs;
  for (int k = 0; k < 3; ++k) {
    Bivariate lin(1), lin_abs(1);
    lin.at(0, 0) = p[k];
    lin.at(1, 0) = q[k];
    lin.at(0, 1) = r[k];
    lin_abs.at(0, 0) = std::abs(p[k]);
    lin_abs.at(1, 0) = std::abs(q[k]);
    lin_abs.at(0, 1) = std::abs(r[k]);
    Bivariate one(0);
    one.at(0, 0) = 1.0;
    pw[k].push_back(one);
    pw_abs[k].push_back(one);
    for (int m = 1; m <= d; ++m) {
      pw[k].push_back(pw[k].back().times(lin, m));
      pw_abs[k].push_back(pw_abs[k].back().times(lin_abs, m));
    }
  }
  FacePolynomial out{Bivariate(d), Bivariate(d)};
  const auto mono = s.monomial_coefficients();
  for (std::size_t idx = 0; idx < mono.size(); ++idx) {
    const auto a = s.basis().exponent(idx);
    const double c = mono[idx];
    if (c == 0.0) continue;
    const Bivariate t = pw[0][a[0]].times(pw[1][a[1]], d).times(pw[2][a[2]], d);
    const Bivariate ta = pw_abs[0][a[0]].times(pw_abs[1][a[1]], d).times(pw_abs[2][a[2]], d);
    for (int i = 0; i <= d; ++i)
      for (int j = 0; i + j <= d; ++j) {
        out.value.at(i, j) += c * t.at(i, j);
        out.bound.at(i, j) += std::abs(c) * ta.at(i, j);
      }
  }
  return out;
}

std::vector<std::vector<double>> binomials(int d) {
  std::vector<std::vector<double>> b(static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) {
    b[i].assign(static_cast<std::size_t>(i + 1), 1.0);
    for (int k = 1; k < i; ++k) b[i][k] = b[i - 1][k - 1] + b[i - 1][k];
  }
  return b;
}

// Taylor coefficients of g on a cell in scaled coordinates s, t in [-1, 1]
// together with a rigorous bound on their floating-point error.
struct CellForm {
  int d = 0;
  std::vector<double> t;    // t[k*(d+1)+l]
  std::vector<double> err;  // error bound per coefficient
  double coef(int k, int l) const { return t[static_cast<std::size_t>(k * (d + 1) + l)]; }
  double error(int k, int l) const { return err[static_cast<std::size_t>(k * (d + 1) + l)]; }
};

CellForm cell_form(const FacePolynomial& g, const std::vector<std::vector<double>>& binom,
                   double cu, double cv, double h) {
  const int d = g.value.degree();
  const std::size_t w = static_cast<std::size_t>(d + 1);
  std::vector<double> tmp(w * w, 0.0), tmp_abs(w * w, 0.0);
  // Shift in u: tmp[k][j] = sum_{i>=k} b[i][j] C(i,k) cu^{i-k}.
  for (int j = 0; j <= d; ++j)
    for (int k = 0; k + j <= d; ++k) {
      double acc = 0.0, acc_abs = 0.0, pu = 1.0;
      for (int i = k; i + j <= d; ++i) {
        acc += g.value.at(i, j) * binom[i][k] * pu;
        acc_abs += g.bound.at(i, j) * binom[i][k] * std::abs(pu);
        pu *= cu;
      }
      tmp[k * w + j] = acc;
      tmp_abs[k * w + j] = acc_abs;
    }
  CellForm out;
  out.d = d;
  out.t.assign(w * w, 0.0);
  out.err.assign(w * w, 0.0);
  // Covers the face expansion, both shifts and the scaling, with margin.
  const double gamma = 4.0 * (8.0 * d + 16.0) * kEps;
  std::vector<double> hp(w, 1.0);
  for (int m = 1; m <= d; ++m) hp[m] = hp[m - 1] * h;
  for (int k = 0; k <= d; ++k)
    for (int l = 0; k + l <= d; ++l) {
      double acc = 0.0, acc_abs = 0.0, pv = 1.0;
      for (int j = l; k + j <= d; ++j) {
        acc += tmp[k * w + j] * binom[j][l] * pv;
        acc_abs += tmp_abs[k * w + j] * binom[j][l] * std::abs(pv);
        pv *= cv;
      }
      const double scale = hp[k + l];
      out.t[k * w + l] = acc * scale;
      out.err[k * w + l] = gamma * acc_abs * scale;
    }
  return out;
}

enum class CellKind { Unresolved, SignConstant, Transversal };

struct CellVerdict {
  CellKind kind = CellKind::Unresolved;
  int sign = 0;
};

struct EdgeInfo {
  bool constant = false;
  bool monotone = false;
};

// Edge s = sigma (axis 0) or t = sigma (axis 1) of the scaled cell.
EdgeInfo edge_info(const CellForm& f, int axis, int sigma) {
  const int d = f.d;
  std::vector<double> e(static_cast<std::size_t>(d + 1), 0.0);
  double err = 0.0;
  std::vector<double> err_l(static_cast<std::size_t>(d + 1), 0.0);
  for (int k = 0; k <= d; ++k)
    for (int l = 0; k + l <= d; ++l) {
      const int along = axis == 0 ? l : k;    // power of the free variable
      const int across = axis == 0 ? k : l;   // power of the fixed variable
      const double sgn = (across % 2 == 1 && sigma < 0) ? -1.0 : 1.0;
      e[along] += sgn * f.coef(k, l);
      err_l[along] += f.error(k, l);
      err += f.error(k, l);
    }
  EdgeInfo info;
  double rest = err;
  for (int m = 1; m <= d; ++m) rest += std::abs(e[m]);
  info.constant = std::abs(e[0]) > rest;
  if (d >= 1) {
    double rest_d = 0.0;
    for (int m = 1; m <= d; ++m) rest_d += m * err_l[m];
    for (int m = 2; m <= d; ++m) rest_d += m * std::abs(e[m]);
    info.monotone = std::abs(e[1]) > rest_d;
  }
  return info;
}

bool partial_definite(const CellForm& f, int axis) {
  const int d = f.d;
  double center = 0.0, rest = 0.0;
  for (int k = 0; k <= d; ++k)
    for (int l = 0; k + l <= d; ++l) {
      const int m = axis == 0 ? k : l;
      if (m == 0) continue;
      rest += m * f.error(k, l);
      const bool is_center = (axis == 0) ? (k == 1 && l == 0) : (k == 0 && l == 1);
      if (is_center) {
        center = f.coef(k, l);
      } else {
        rest += m * std::abs(f.coef(k, l));
      }
    }
  return std::abs(center) > rest;
}

CellVerdict classify(const CellForm& f) {
  CellVerdict v;
  double rest = 0.0;
  for (int k = 0; k <= f.d; ++k)
    for (int l = 0; k + l <= f.d; ++l) {
      rest += f.error(k, l);
      if (k + l > 0) rest += std::abs(f.coef(k, l));
    }
  if (std::abs(f.coef(0, 0)) > rest) {
    v.kind = CellKind::SignConstant;
    v.sign = f.coef(0, 0) > 0 ? 1 : -1;
    return v;
  }
  for (int axis = 0; axis < 2; ++axis) {
    if (!partial_definite(f, axis)) continue;
    bool ok = true;
    for (int sigma : {-1, 1}) {
      const EdgeInfo e = edge_info(f, axis, sigma);
      ok = ok && (e.constant || e.monotone);
    }
    if (ok) {
      v.kind = CellKind::Transversal;
      return v;
    }
  }
  return v;
}

struct Leaf {
  int face = 0;
  double cu = 0.0, cv = 0.0, h = 0.0;
  int level = 0;
  CellKind kind = CellKind::Unresolved;
  int sign = 0;  // sign-constant cells
  std::array<int, 4> corner_sign{};      // (u0,v0), (u1,v0), (u1,v1), (u0,v1)
  std::array<double, 4> corner_value{};
  int piece_pos = -1;
  int piece_neg = -1;

  int piece(int s) const { return s > 0 ? piece_pos : piece_neg; }
  std::array<Vec3, 4> corners() const {
    const auto& f = kFaces[static_cast<std::size_t>(face)];
    return {f.point(cu - h, cv - h), f.point(cu + h, cv - h), f.point(cu + h, cv + h),
            f.point(cu - h, cv + h)};
  }
};

struct VecHash {
  std::size_t operator()(const Vec3& v) const {
    std::size_t h = 0;
    for (double c : v) h = h * 1000003u ^ std::hash<double>{}(c);
    return h;
  }
};

class SignOracle {
 public:
  explicit SignOracle(const HomogeneousPolynomial& s)
      : d_(s.degree()), mono_(s.monomial_coefficients()), basis_(s.basis_ptr()) {}

  // Certified sign of P at L(p), 0 when the rounding bound does not exclude 0.
  std::pair<int, double> operator()(const Vec3& p) {
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;
    const Vec3 x = apply_map(p);
    double value = 0.0, bound = 0.0;
    for (std::size_t i = 0; i < mono_.size(); ++i) {
      const auto a = basis_->exponent(i);
      double t = mono_[i];
      for (int v = 0; v < 3; ++v)
        for (int k = 0; k < a[v]; ++k) t *= x[v];
      value += t;
      bound += std::abs(t);
    }
    const double err = 4.0 * (2.0 * d_ + 8.0) * kEps * bound + std::numeric_limits<double>::denorm_min();
    const int sign = value > err ? 1 : (value < -err ? -1 : 0);
    return cache_[p] = {sign, value};
  }

 private:
  int d_;
  std::vector<double> mono_;
  BasisPtr basis_;
  std::unordered_map<Vec3, std::pair<int, double>, VecHash> cache_;
};

class UnionFind {
 public:
  int add() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
};

CurveTopology fail(CurveTopology t, std::string reason) {
  t.certified = false;
  t.failure = std::move(reason);
  t.b0 = t.ovals = t.pseudolines = t.max_nest_depth = t.sphere_components = 0;
  t.nest_parent.clear();
  t.oval_depth.clear();
  t.maximal = false;
  return t;
}

Vec3 normalized(const Vec3& p) {
  const Vec3 x = apply_map(p);
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  return {x[0] / r, x[1] / r, x[2] / r};
}

}  // namespace

int harnack_bound(int d) { return (d - 1) * (d - 2) / 2 + 1; }

CurveTopology curve_topology(const HomogeneousPolynomial& s, int resolution) {
  TopologyOptions options;
  options.max_depth = resolution;
  return curve_topology(s, options);
}

CurveTopology curve_topology(const HomogeneousPolynomial& s, const TopologyOptions& options) {
  if (s.n() != 2) throw InvalidArgument("curve_topology requires a ternary form (n = 2)");
  if (options.max_depth < 1 || options.max_depth > 30) {
    throw InvalidArgument("subdivision depth cap must lie in [1, 30]");
  }
  const int d = s.degree();
  CurveTopology topo;
  topo.degree = d;
  topo.harnack_bound = harnack_bound(d);
  if (d < 1) throw InvalidArgument("curve_topology requires d >= 1");
  if (s.norm() == 0.0) return fail(topo, "zero polynomial");

  const auto binom = binomials(d);
  SignOracle sign_at(s);
  std::vector<Leaf> leaves;
  bool exhausted = false;

  // Subdivide faces 0..2; faces 3..5 are their antipodal images.
  for (int face = 0; face < 3; ++face) {
    const FacePolynomial g = expand_face(s, kFaces[static_cast<std::size_t>(face)]);
    struct Cell {
      double cu, cv, h;
      int level;
    };
    std::vector<Cell> stack;
    const int init = std::min(options.initial_depth, options.max_depth);
    const int per_side = 1 << init;
    const double h0 = 1.0 / per_side;
    for (int i = per_side - 1; i >= 0; --i)
      for (int j = per_side - 1; j >= 0; --j)
        stack.push_back({-1.0 + (2 * i + 1) * h0, -1.0 + (2 * j + 1) * h0, h0, init});
    while (!stack.empty()) {
      const Cell cell = stack.back();
      stack.pop_back();
      const CellForm form = cell_form(g, binom, cell.cu, cell.cv, cell.h);
      const CellVerdict verdict = classify(form);
      Leaf leaf;
      leaf.face = face;
      leaf.cu = cell.cu;
      leaf.cv = cell.cv;
      leaf.h = cell.h;
      leaf.level = cell.level;
      leaf.kind = verdict.kind;
      leaf.sign = verdict.sign;
      if (leaf.kind == CellKind::Transversal) {
        const auto corners = leaf.corners();
        for (int k = 0; k < 4; ++k) {
          const auto [sg, val] = sign_at(corners[k]);
          leaf.corner_sign[k] = sg;
          leaf.corner_value[k] = val;
          if (sg == 0) leaf.kind = CellKind::Unresolved;
        }
      }
      if (leaf.kind == CellKind::Unresolved) {
        if (cell.level >= options.max_depth) {
          exhausted = true;
          continue;
        }
        const double hh = cell.h / 2;
        for (int di : {1, -1})
          for (int dj : {1, -1}) stack.push_back({cell.cu + di * hh, cell.cv + dj * hh, hh, cell.level + 1});
        continue;
      }
      topo.deepest_level = std::max(topo.deepest_level, cell.level);
      leaves.push_back(leaf);
    }
    if (exhausted) break;
  }
  if (exhausted) return fail(topo, "subdivision depth cap reached (near-singular curve)");

  const std::size_t half = leaves.size();
  const int parity = (d % 2 == 0) ? 1 : -1;
  for (std::size_t i = 0; i < half; ++i) {
    Leaf m = leaves[i];
    m.face += 3;
    m.sign *= parity;
    for (int k = 0; k < 4; ++k) {
      m.corner_sign[k] *= parity;
      m.corner_value[k] *= parity;
    }
    leaves.push_back(m);
  }
  topo.leaves = leaves.size();

  // Sign pieces.
  UnionFind uf;
  for (auto& leaf : leaves) {
    if (leaf.kind == CellKind::SignConstant) {
      (leaf.sign > 0 ? leaf.piece_pos : leaf.piece_neg) = uf.add();
    } else {
      const bool pos = std::ranges::any_of(leaf.corner_sign, [](int v) { return v > 0; });
      const bool neg = std::ranges::any_of(leaf.corner_sign, [](int v) { return v < 0; });
      if (pos) leaf.piece_pos = uf.add();
      if (neg) leaf.piece_neg = uf.add();
    }
  }

  // Shared edges: leaf edges are axis-aligned segments of the cube surface
  // with exact coordinates; neighbours have collinear, overlapping edges.
  struct EdgeRec {
    int axis;
    double fixed_a, fixed_b;
    double lo, hi;
    std::size_t leaf;
    Vec3 p_lo, p_hi;
  };
  std::vector<EdgeRec> edges;
  edges.reserve(leaves.size() * 4);
  for (std::size_t li = 0; li < leaves.size(); ++li) {
    const auto c = leaves[li].corners();
    for (int k = 0; k < 4; ++k) {
      const Vec3& a = c[k];
      const Vec3& b = c[(k + 1) % 4];
      int axis = 0;
      while (a[axis] == b[axis]) ++axis;
      const int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
      const bool forward = a[axis] < b[axis];
      edges.push_back({axis, a[o1], a[o2], std::min(a[axis], b[axis]), std::max(a[axis], b[axis]), li,
                       forward ? a : b, forward ? b : a});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeRec& x, const EdgeRec& y) {
    return std::tie(x.axis, x.fixed_a, x.fixed_b, x.lo, x.hi) <
           std::tie(y.axis, y.fixed_a, y.fixed_b, y.lo, y.hi);
  });

  std::string inconsistency;
  auto glue = [&](std::size_t ia, std::size_t ib, const Vec3& q0, const Vec3& q1) {
    const Leaf& A = leaves[ia];
    const Leaf& B = leaves[ib];
    std::set<int> present;
    if (A.kind == CellKind::SignConstant && B.kind == CellKind::SignConstant && A.sign != B.sign) {
      inconsistency = "adjacent sign-constant cells disagree";
      return;
    }
    if (A.kind == CellKind::SignConstant) {
      present.insert(A.sign);
    } else if (B.kind == CellKind::SignConstant) {
      present.insert(B.sign);
    } else {
      // Both transversal: g is monotone or constant along the shared segment.
      for (const Vec3& q : {q0, q1}) {
        const int sg = sign_at(q).first;
        if (sg == 0) {
          inconsistency = "ambiguous sign at a shared vertex";
          return;
        }
        present.insert(sg);
      }
    }
    for (int sg : present) {
      const int pa = A.piece(sg), pb = B.piece(sg);
      if (pa < 0 || pb < 0) {
        inconsistency = "sign piece missing across a shared edge";
        return;
      }
      uf.unite(pa, pb);
    }
  };

  for (std::size_t i = 0; i < edges.size() && inconsistency.empty(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const EdgeRec& a = edges[i];
      const EdgeRec& b = edges[j];
      if (b.axis != a.axis || b.fixed_a != a.fixed_a || b.fixed_b != a.fixed_b || b.lo >= a.hi) break;
      if (a.leaf == b.leaf) continue;
      const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
      if (hi <= lo) continue;
      // The overlap is the shorter edge.
      const EdgeRec& shorter = (a.hi - a.lo <= b.hi - b.lo) ? a : b;
      glue(a.leaf, b.leaf, shorter.p_lo, shorter.p_hi);
    }
  }
  if (!inconsistency.empty()) return fail(topo, inconsistency);

  // Regions and their adjacency across curve arcs.
  std::map<int, int> region_id;
  for (int p = 0; p < uf.size(); ++p) {
    const int r = uf.find(p);
    if (!region_id.count(r)) {
      const int next = static_cast<int>(region_id.size());
      region_id[r] = next;
    }
  }
  const int R = static_cast<int>(region_id.size());
  auto region_of = [&](int piece) { return region_id.at(uf.find(piece)); };

  std::set<std::pair<int, int>> arcs;
  for (const auto& leaf : leaves) {
    if (leaf.kind == CellKind::Transversal && leaf.piece_pos >= 0 && leaf.piece_neg >= 0) {
      const int a = region_of(leaf.piece_pos), b = region_of(leaf.piece_neg);
      if (a == b) return fail(topo, "a transversal arc separates a region from itself");
      arcs.insert({std::min(a, b), std::max(a, b)});
    }
  }
  const int E = static_cast<int>(arcs.size());
  if (E != R - 1) return fail(topo, "sign regions do not form a tree");

  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(R));
  std::vector<std::pair<int, int>> edge_list(arcs.begin(), arcs.end());
  for (int e = 0; e < E; ++e) {
    adj[edge_list[e].first].push_back({edge_list[e].second, e});
    adj[edge_list[e].second].push_back({edge_list[e].first, e});
  }

  // Antipodal involution on regions.
  std::vector<int> iota_region(static_cast<std::size_t>(R), -1);
  for (std::size_t i = 0; i < half; ++i) {
    const Leaf& a = leaves[i];
    const Leaf& b = leaves[i + half];
    for (int sg : {1, -1}) {
      if (a.piece(sg) < 0) continue;
      const int ra = region_of(a.piece(sg));
      const int rb = region_of(b.piece(sg * parity));
      for (auto [x, y] : {std::pair{ra, rb}, std::pair{rb, ra}}) {
        if (iota_region[x] == -1) iota_region[x] = y;
        if (iota_region[x] != y) return fail(topo, "antipodal map is inconsistent on regions");
      }
    }
  }
  for (int r = 0; r < R; ++r) {
    if (iota_region[r] < 0 || iota_region[iota_region[r]] != r) {
      return fail(topo, "antipodal map is not an involution on regions");
    }
  }
  auto edge_index = [&](int a, int b) {
    auto it = arcs.find({std::min(a, b), std::max(a, b)});
    if (it == arcs.end()) return -1;
    return static_cast<int>(std::distance(arcs.begin(), it));
  };
  std::vector<int> iota_edge(static_cast<std::size_t>(E));
  for (int e = 0; e < E; ++e) {
    iota_edge[e] = edge_index(iota_region[edge_list[e].first], iota_region[edge_list[e].second]);
    if (iota_edge[e] < 0) return fail(topo, "antipodal map does not preserve arcs");
  }

  // Root the tree: fixed region (even degree) or fixed arc (odd degree).
  std::vector<int> roots;
  int pseudoline_edge = -1;
  if (d % 2 == 0) {
    for (int r = 0; r < R; ++r)
      if (iota_region[r] == r) roots.push_back(r);
    if (roots.size() != 1) return fail(topo, "even degree without a unique antipodally fixed region");
  } else {
    for (int r = 0; r < R; ++r)
      if (iota_region[r] == r) return fail(topo, "odd degree with an antipodally fixed region");
    for (int e = 0; e < E; ++e) {
      if (iota_edge[e] == e) {
        if (pseudoline_edge >= 0) return fail(topo, "more than one one-sided component");
        pseudoline_edge = e;
      }
    }
    if (pseudoline_edge < 0) return fail(topo, "odd degree without a one-sided component");
    roots = {edge_list[pseudoline_edge].first, edge_list[pseudoline_edge].second};
  }

  std::vector<int> parent_edge(static_cast<std::size_t>(R), -1);
  std::vector<int> parent_region(static_cast<std::size_t>(R), -1);
  std::vector<int> edge_child(static_cast<std::size_t>(E), -1);
  std::vector<bool> seen(static_cast<std::size_t>(R), false);
  std::queue<int> bfs;
  for (int r : roots) {
    seen[r] = true;
    bfs.push(r);
  }
  while (!bfs.empty()) {
    const int v = bfs.front();
    bfs.pop();
    for (auto [w, e] : adj[v]) {
      if (seen[w] || e == pseudoline_edge) continue;
      seen[w] = true;
      parent_edge[w] = e;
      parent_region[w] = v;
      edge_child[e] = w;
      bfs.push(w);
    }
  }
  if (std::ranges::any_of(seen, [](bool b) { return !b; })) return fail(topo, "region tree is disconnected");

  // Ovals are antipodal pairs of arcs.
  std::vector<int> oval_of_edge(static_cast<std::size_t>(E), -1);
  int ovals = 0;
  for (int e = 0; e < E; ++e) {
    if (e == pseudoline_edge || oval_of_edge[e] >= 0) continue;
    if (iota_edge[e] == e) return fail(topo, "unexpected antipodally fixed arc");
    oval_of_edge[e] = oval_of_edge[iota_edge[e]] = ovals++;
  }
  topo.nest_parent.assign(static_cast<std::size_t>(ovals), -1);
  topo.oval_depth.assign(static_cast<std::size_t>(ovals), 0);
  for (int e = 0; e < E; ++e) {
    if (e == pseudoline_edge) continue;
    const int o = oval_of_edge[e];
    if (topo.oval_depth[o] != 0) continue;
    int depth = 1;
    int enclosing = -1;
    for (int v = parent_region[edge_child[e]]; parent_edge[v] >= 0; v = parent_region[v]) {
      if (enclosing < 0) enclosing = oval_of_edge[parent_edge[v]];
      ++depth;
    }
    topo.nest_parent[o] = enclosing;
    topo.oval_depth[o] = depth;
  }

  topo.sphere_components = E;
  topo.ovals = ovals;
  topo.pseudolines = d % 2;
  topo.b0 = ovals + topo.pseudolines;
  topo.max_nest_depth = ovals > 0 ? *std::ranges::max_element(topo.oval_depth) : 0;
  topo.certified = true;
  topo.maximal = topo.b0 == topo.harnack_bound;

  if (options.keep_trace) {
    for (const auto& leaf : leaves) {
      if (leaf.kind != CellKind::Transversal || leaf.piece_pos < 0 || leaf.piece_neg < 0) continue;
      const auto c = leaf.corners();
      std::vector<Vec3> crossings;
      for (int k = 0; k < 4; ++k) {
        const int k2 = (k + 1) % 4;
        if (leaf.corner_sign[k] == leaf.corner_sign[k2]) continue;
        const double t = leaf.corner_value[k] / (leaf.corner_value[k] - leaf.corner_value[k2]);
        Vec3 p{};
        for (int i = 0; i < 3; ++i) p[i] = c[k][i] + t * (c[k2][i] - c[k][i]);
        crossings.push_back(normalized(p));
      }
      if (crossings.size() == 2) {
        topo.trace.push_back({crossings[0][0], crossings[0][1], crossings[0][2], crossings[1][0],
                              crossings[1][1], crossings[1][2]});
      }
    }
  }
  return topo;
}

long long complex_total_betti(int n, int d) {
  if (d < 1) throw InvalidArgument("complex_total_betti requires d >= 1");
  if (n == 1) return d;
  if (n == 2) return static_cast<long long>(d) * d - 3LL * d + 4;
  throw InvalidArgument("complex_total_betti supports n in {1,2}");
}

bool maximality_verdict(const CurveTopology& topology) {
  if (!topology.certified) throw UncertifiedError("maximality verdict on an uncertified curve topology");
  return topology.b0 == harnack_bound(topology.degree);
}

bool maximality_verdict(const RootCount& roots) {
  if (!roots.certified) throw UncertifiedError("maximality verdict on an uncertified root count");
  return roots.real_roots == roots.degree;
}

std::string curve_svg(const CurveTopology& topology) {
  constexpr double kSize = 300.0;
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kSize + 30 << "\" height=\""
      << kSize + 40 << "\" viewBox=\"0 0 " << 2 * kSize + 30 << ' ' << kSize + 40 << "\">\n";
  for (int hemi = 0; hemi < 2; ++hemi) {
    const double ox = 10 + hemi * (kSize + 10) + kSize / 2, oy = 30 + kSize / 2;
    out << "<circle cx=\"" << ox << "\" cy=\"" << oy << "\" r=\"" << kSize / 2
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    out << "<text x=\"" << ox - 30 << "\" y=\"20\" font-size=\"12\">" << (hemi == 0 ? "z &gt;= 0" : "z &lt; 0")
        << "</text>\n";
    for (const auto& seg : topology.trace) {
      const double z = 0.5 * (seg[2] + seg[5]);
      if ((z >= 0) != (hemi == 0)) continue;
      const double mirror = hemi == 0 ? 1.0 : -1.0;
      out << "<line x1=\"" << ox + mirror * seg[0] * kSize / 2 << "\" y1=\"" << oy - seg[1] * kSize / 2
          << "\" x2=\"" << ox + mirror * seg[3] * kSize / 2 << "\" y2=\"" << oy - seg[4] * kSize / 2
          << "\" stroke=\"#c33\" stroke-width=\"1\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace rlab

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "inflectus/error.hpp"
#include "inflectus/geometry.hpp"
#include "inflectus/inflection.hpp"
#include "inflectus/rational.hpp"

namespace inflectus {

struct Window {
  cplx center{0.0, 0.0};
  double halfWidth = 2.0;
  double halfHeight = 2.0;
  int resolution = 512; // cells per axis

  double dx() const noexcept { return 2.0 * halfWidth / resolution; }
  double dy() const noexcept { return 2.0 * halfHeight / resolution; }
  double cell() const noexcept { return std::max(dx(), dy()); }
  double xmin() const noexcept { return center.real() - halfWidth; }
  double ymin() const noexcept { return center.imag() - halfHeight; }
  cplx node(int i, int j) const noexcept { return {xmin() + i * dx(), ymin() + j * dy()}; }
  bool contains(cplx z) const noexcept {
    return std::abs(z.real() - center.real()) <= halfWidth && std::abs(z.imag() - center.imag()) <= halfHeight;
  }
  Window grown(double factor) const {
    Window w = *this;
    w.halfWidth *= factor;
    w.halfHeight *= factor;
    return w;
  }
  Window refined() const {
    Window w = *this;
    w.resolution *= 2;
    return w;
  }
  void validate() const {
    if (resolution < 16) throw DomainError("window resolution must be at least 16");
    if (!(halfWidth > 0.0) || !(halfHeight > 0.0)) throw DomainError("window half sizes must be positive");
  }
};

/// Poles, zeros of R and zeros of R'.
inline std::vector<cplx> featurePoints(const RationalFunction& r) {
  std::vector<cplx> pts;
  for (const auto& p : poleFactorization(r)) pts.push_back(p.value);
  if (r.numerator().degree() >= 1)
    for (const auto& z : roots(r.numerator())) pts.push_back(z.value);
  const auto d = derivative(r);
  if (d.numerator().degree() >= 1)
    for (const auto& z : roots(d.numerator())) pts.push_back(z.value);
  return pts;
}

/// Square window around the feature bounding box padded by 50%, half size >= 1.
inline Window autoWindow(const RationalFunction& r, int resolution = 512) {
  const auto pts = featurePoints(r);
  Window w;
  w.resolution = resolution;
  if (pts.empty()) {
    w.halfWidth = w.halfHeight = 1.0;
    return w;
  }
  double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  w.center = {(x0 + x1) / 2.0, (y0 + y1) / 2.0};
  const double half = std::max(1.0, 1.5 * std::max(x1 - x0, y1 - y0) / 2.0);
  w.halfWidth = w.halfHeight = half;
  return w;
}

enum class VertexKind { Junction, Pole, BoundaryExit };

inline const char* toString(VertexKind k) {
  switch (k) {
  case VertexKind::Junction: return "junction";
  case VertexKind::Pole: return "pole";
  default: return "boundary-exit";
  }
}

struct CurveVertex {
  cplx position;
  int valency = 0;
  VertexKind kind = VertexKind::Junction;
  int poleId = -1;
};

struct CurveEdge {
  std::vector<cplx> points;
  int from = -1; // vertex ids; -1 for closed edges
  int to = -1;
  bool closed = false;
};

struct CurveComponent {
  std::vector<int> edges;
  std::vector<int> vertices;
  bool bounded = true;
  std::vector<int> poles;
};

struct CurveGraph {
  Window window;
  std::vector<CurveVertex> vertices;
  std::vector<CurveEdge> edges;
  std::vector<CurveComponent> components;
  std::vector<PoleData> poles;

  int boundaryExits() const {
    int n = 0;
    for (const auto& v : vertices) n += v.kind == VertexKind::BoundaryExit;
    return n;
  }

  /// Arguments of the boundary-exit points, measured from `origin`.
  std::vector<double> exitAngles(cplx origin = {}) const {
    std::vector<double> out;
    for (const auto& v : vertices)
      if (v.kind == VertexKind::BoundaryExit) out.push_back(normalizeAngle(std::arg(v.position - origin)));
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Vertex snapped to the given pole, or -1.
  int poleVertex(int poleId) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].kind == VertexKind::Pole && vertices[i].poleId == poleId) return static_cast<int>(i);
    return -1;
  }
};

namespace detail {

/// F_R up to a positive factor, evaluated from the factored form.
struct FieldSampler {
  Poly w, p;
  double scale = 1.0;

  explicit FieldSampler(const RationalFunction& r) {
    p = r.denominator();
    w = wronskian(r.numerator(), p);
    if (w.isZero()) throw DegenerateInput("R is constant; its inflection curve is undefined");
    const auto f = definingPolynomial(r);
    scale = f.maxAbsCoeff();
    const double natural = w.scale() * p.scale() * p.scale();
    if (scale <= 1e-12 * natural)
      throw DegenerateInput("F_R vanishes identically (R' is a real constant)");
  }

  double operator()(cplx z) const { return definingValue(w, p, z) / scale; }
};

inline bool positive(double v) { return v >= 0.0; }

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

struct RawChain {
  std::vector<cplx> points;
  bool closed = false;
};

/// Whether the same-sign diagonal corners c0 = (x0, y0) and c2 = (x0 + dx,
/// y0 + dy) are joined inside the cell, judged on refined sub-grids.
inline bool saddleJoinsC0C2(const FieldSampler& f, cplx c0, double dx, double dy) {
  const bool s0 = positive(f(c0));
  for (int n = 2; n <= 64; n *= 2) {
    const int m = n + 1;
    std::vector<char> sign(static_cast<std::size_t>(m * m));
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        sign[static_cast<std::size_t>(j * m + i)] = positive(f(c0 + cplx(i * dx / n, j * dy / n)));
    auto joined = [&](int si, int sj, int ti, int tj) {
      const char want = sign[static_cast<std::size_t>(sj * m + si)];
      std::vector<char> seen(sign.size(), 0);
      std::vector<int> stack{sj * m + si};
      seen[static_cast<std::size_t>(sj * m + si)] = 1;
      while (!stack.empty()) {
        const int k = stack.back();
        stack.pop_back();
        if (k == tj * m + ti) return true;
        const int i = k % m, j = k / m;
        const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
        for (const auto& q : nb) {
          if (q[0] < 0 || q[1] < 0 || q[0] >= m || q[1] >= m) continue;
          const int kk = q[1] * m + q[0];
          if (seen[static_cast<std::size_t>(kk)] || sign[static_cast<std::size_t>(kk)] != want) continue;
          seen[static_cast<std::size_t>(kk)] = 1;
          stack.push_back(kk);
        }
      }
      return false;
    };
    if (joined(0, 0, n, n)) return true;
    if (joined(n, 0, 0, n)) return false;
  }
  return positive(f(c0 + cplx(dx / 2, dy / 2))) == s0;
}

/// Marching squares over the window: polylines of the zero set.
inline std::vector<RawChain> marchingSquares(const FieldSampler& f, const Window& w) {
  const int n = w.resolution;
  const int m = n + 1;
  std::vector<double> v(static_cast<std::size_t>(m * m));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(j * m + i)] = f(w.node(i, j));
  auto val = [&](int i, int j) { return v[static_cast<std::size_t>(j * m + i)]; };

  // Crossing points keyed by grid edge: 2 * node + (0 horizontal, 1 vertical).
  std::unordered_map<long long, int> keyToPoint;
  std::vector<cplx> pts;
  std::vector<std::array<int, 2>> adj;
  auto crossing = [&](int i, int j, bool vertical) {
    const long long key = 2LL * (static_cast<long long>(j) * m + i) + (vertical ? 1 : 0);
    auto it = keyToPoint.find(key);
    if (it != keyToPoint.end()) return it->second;
    const int i2 = vertical ? i : i + 1, j2 = vertical ? j + 1 : j;
    const double a = val(i, j), b = val(i2, j2);
    const double t = a / (a - b);
    const cplx za = w.node(i, j), zb = w.node(i2, j2);
    const int id = static_cast<int>(pts.size());
    pts.push_back(za + t * (zb - za));
    adj.push_back({-1, -1});
    keyToPoint.emplace(key, id);
    return id;
  };
  auto link = [&](int a, int b) {
    for (int x : {a, b}) {
      const int y = x == a ? b : a;
      auto& s = adj[static_cast<std::size_t>(x)];
      if (s[0] < 0) s[0] = y;
      else s[1] = y;
    }
  };

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const bool s0 = positive(val(i, j)), s1 = positive(val(i + 1, j));
      const bool s2 = positive(val(i + 1, j + 1)), s3 = positive(val(i, j + 1));
      // Edge ids: 0 bottom, 1 right, 2 top, 3 left.
      std::array<int, 4> e{-1, -1, -1, -1};
      if (s0 != s1) e[0] = crossing(i, j, false);
      if (s1 != s2) e[1] = crossing(i + 1, j, true);
      if (s3 != s2) e[2] = crossing(i, j + 1, false);
      if (s0 != s3) e[3] = crossing(i, j, true);
      std::vector<int> used;
      for (int k = 0; k < 4; ++k)
        if (e[static_cast<std::size_t>(k)] >= 0) used.push_back(k);
      if (used.size() == 2) {
        link(e[static_cast<std::size_t>(used[0])], e[static_cast<std::size_t>(used[1])]);
      } else if (used.size() == 4) {
        if (saddleJoinsC0C2(f, w.node(i, j), w.dx(), w.dy())) {
          link(e[0], e[1]); // around c1
          link(e[2], e[3]); // around c3
        } else {
          link(e[3], e[0]); // around c0
          link(e[1], e[2]); // around c2
        }
      }
    }
  }

  std::vector<RawChain> chains;
  std::vector<char> seen(pts.size(), 0);
  auto walk = [&](int start, bool closed) {
    RawChain c;
    c.closed = closed;
    int prev = -1, cur = start;
    while (cur >= 0 && !seen[static_cast<std::size_t>(cur)]) {
      seen[static_cast<std::size_t>(cur)] = 1;
      c.points.push_back(pts[static_cast<std::size_t>(cur)]);
      const auto& s = adj[static_cast<std::size_t>(cur)];
      const int next = (s[0] != prev) ? s[0] : s[1];
      prev = cur;
      cur = next;
    }
    if (closed) c.points.push_back(c.points.front());
    chains.push_back(std::move(c));
  };
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (!seen[k] && adj[k][1] < 0) walk(static_cast<int>(k), false);
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (!seen[k]) walk(static_cast<int>(k), true);
  return chains;
}

struct Disk {
  cplx center;
  double radius;
  VertexKind kind;
  int poleId;
};

/// Point where the segment a -> b meets the circle, for a outside, b inside.
inline cplx circleCut(cplx a, cplx b, const Disk& d) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = (lo + hi) / 2;
    if (std::abs(a + mid * (b - a) - d.center) > d.radius) lo = mid;
    else hi = mid;
  }
  return a + lo * (b - a);
}

} // namespace detail

/// Singular candidates in R'' = 0 that are treated as vertices.
inline constexpr double kSingularTolerance = 1e-8;

/// Zero set of F_R in the window as a graph: pole vertices, junctions at
/// singular points, boundary exits, and polyline edges.
inline CurveGraph traceCurve(const RationalFunction& r, const Window& w) {
  w.validate();
  if (r.isConstant()) throw DegenerateInput("R is constant; its inflection curve is undefined");
  const detail::FieldSampler field(r);
  CurveGraph g;
  g.window = w;
  g.poles = poles(r);
  const double cell = w.cell();

  std::vector<detail::Disk> disks;
  for (std::size_t i = 0; i < g.poles.size(); ++i) {
    const auto& p = g.poles[i];
    if (!w.grown(1.0 + 4.0 * cell / std::min(w.halfWidth, w.halfHeight)).contains(p.location)) continue;
    disks.push_back({p.location, std::max(2.0, p.order + 1.0) * cell, VertexKind::Pole, static_cast<int>(i)});
  }
  for (const auto& c : singularCandidates(r, kSingularTolerance)) {
    if (!w.contains(c)) continue;
    bool merged = false;
    for (const auto& d : disks)
      if (std::abs(d.center - c) <= d.radius + 1.5 * cell) merged = true;
    if (!merged) disks.push_back({c, 2.0 * cell, VertexKind::Junction, -1});
  }
  auto diskOf = [&](cplx z) {
    for (std::size_t k = 0; k < disks.size(); ++k)
      if (std::abs(z - disks[k].center) <= disks[k].radius) return static_cast<int>(k);
    return -1;
  };

  // Vertex ids: disks first, boundary exits appended.
  for (const auto& d : disks) g.vertices.push_back({d.center, 0, d.kind, d.poleId});
  auto addExit = [&](cplx z) {
    g.vertices.push_back({z, 1, VertexKind::BoundaryExit, -1});
    return static_cast<int>(g.vertices.size()) - 1;
  };

  auto emit = [&](std::vector<cplx> pts, int from, int to, bool closed) {
    if (!closed && from >= 0 && from == to && from < static_cast<int>(disks.size())) {
      // Grazing pieces that leave a disk and immediately return.
      const auto& d = disks[static_cast<std::size_t>(from)];
      double far = 0.0;
      for (const auto& p : pts) far = std::max(far, std::abs(p - d.center));
      if (far <= 1.5 * d.radius) return;
    }
    g.edges.push_back({std::move(pts), from, to, closed});
  };

  for (auto chain : detail::marchingSquares(field, w)) {
    auto& pts = chain.points;
    if (pts.size() < 2) continue;
    if (chain.closed) {
      std::size_t first = pts.size();
      for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        if (diskOf(pts[k]) >= 0) {
          first = k;
          break;
        }
      if (first == pts.size()) {
        emit(pts, -1, -1, true);
        continue;
      }
      // Rotate so the chain starts and ends inside a disk.
      std::vector<cplx> rot(pts.begin() + static_cast<long>(first), pts.end() - 1);
      rot.insert(rot.end(), pts.begin(), pts.begin() + static_cast<long>(first) + 1);
      pts = std::move(rot);
    }

    int curDisk = diskOf(pts.front());
    std::vector<cplx> piece;
    int pieceFrom = -1;
    if (curDisk >= 0) {
      pieceFrom = curDisk;
    } else {
      pieceFrom = chain.closed ? -1 : addExit(pts.front());
      piece.push_back(pts.front());
    }
    if (curDisk >= 0) piece.push_back(disks[static_cast<std::size_t>(curDisk)].center);

    for (std::size_t k = 1; k < pts.size(); ++k) {
      const int d = diskOf(pts[k]);
      if (curDisk < 0 && d < 0) {
        piece.push_back(pts[k]);
      } else if (curDisk < 0 && d >= 0) {
        const auto& disk = disks[static_cast<std::size_t>(d)];
        piece.push_back(detail::circleCut(pts[k - 1], pts[k], disk));
        piece.push_back(disk.center);
        emit(std::move(piece), pieceFrom, d, false);
        piece.clear();
        curDisk = d;
      } else if (curDisk >= 0 && d < 0) {
        const auto& disk = disks[static_cast<std::size_t>(curDisk)];
        piece = {disk.center, detail::circleCut(pts[k], pts[k - 1], disk), pts[k]};
        pieceFrom = curDisk;
        curDisk = -1;
      } else if (d != curDisk) {
        emit({disks[static_cast<std::size_t>(curDisk)].center, disks[static_cast<std::size_t>(d)].center},
             curDisk, d, false);
        curDisk = d;
      }
    }
    if (curDisk < 0 && !piece.empty()) emit(std::move(piece), pieceFrom, addExit(pts.back()), false);
  }

  for (const auto& e : g.edges) {
    if (e.closed) continue;
    for (int v : {e.from, e.to})
      if (v >= 0 && g.vertices[static_cast<std::size_t>(v)].kind != VertexKind::BoundaryExit)
        ++g.vertices[static_cast<std::size_t>(v)].valency;
  }

  // Drop candidate junctions the curve does not pass through; renumber.
  {
    std::vector<int> remap(g.vertices.size(), -1);
    std::vector<CurveVertex> kept;
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      const auto& v = g.vertices[i];
      if (v.kind == VertexKind::Junction && v.valency == 0) continue;
      remap[i] = static_cast<int>(kept.size());
      kept.push_back(v);
    }
    g.vertices = std::move(kept);
    for (auto& e : g.edges) {
      if (e.from >= 0) e.from = remap[static_cast<std::size_t>(e.from)];
      if (e.to >= 0) e.to = remap[static_cast<std::size_t>(e.to)];
    }
  }

  // Components: union-find over vertices, closed loops on their own.
  const std::size_t nv = g.vertices.size();
  detail::UnionFind uf(nv + g.edges.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    const int self = static_cast<int>(nv + k);
    if (e.from >= 0) uf.unite(self, e.from);
    if (e.to >= 0) uf.unite(self, e.to);
  }
  std::unordered_map<int, int> compOf;
  auto component = [&](int node) {
    const int root = uf.find(node);
    auto it = compOf.find(root);
    if (it != compOf.end()) return it->second;
    const int id = static_cast<int>(g.components.size());
    g.components.emplace_back();
    compOf.emplace(root, id);
    return id;
  };
  for (std::size_t i = 0; i < nv; ++i) {
    auto& c = g.components[static_cast<std::size_t>(component(static_cast<int>(i)))];
    c.vertices.push_back(static_cast<int>(i));
    const auto& v = g.vertices[i];
    if (v.kind == VertexKind::BoundaryExit) c.bounded = false;
    if (v.kind == VertexKind::Pole) c.poles.push_back(v.poleId);
  }
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    g.components[static_cast<std::size_t>(component(static_cast<int>(nv + k)))].edges.push_back(static_cast<int>(k));
  return g;
}

struct ComponentStatus {
  int component = 0;
  bool bounded = false;
  std::vector<int> poles;
  bool violation = false; // bounded without a pole
};

inline std::vector<ComponentStatus> componentReport(const CurveGraph& g) {
  std::vector<ComponentStatus> out;
  for (std::size_t i = 0; i < g.components.size(); ++i) {
    const auto& c = g.components[i];
    out.push_back({static_cast<int>(i), c.bounded, c.poles, c.bounded && c.poles.empty()});
  }
  return out;
}

inline int violationCount(const CurveGraph& g) {
  int n = 0;
  for (const auto& s : componentReport(g)) n += s.violation;
  return n;
}

struct TraceResult {
  CurveGraph graph;
  BoundednessResult boundedness;
  int growths = 0;     // window doublings to reconcile exits with a bounded verdict
  int refinements = 0; // resolution doublings to clear violations
  int violations = 0;  // remaining after refinement
};

/// Traces on the auto-sized (or given) window, growing it once when the
/// global verdict is bounded but the curve leaves the window, and refining
/// while some bounded component contains no pole.
inline TraceResult traceAuto(const RationalFunction& r, std::optional<Window> window = std::nullopt,
                             int resolution = 512) {
  TraceResult out;
  out.boundedness = boundednessAnalysis(r);
  Window w = window ? *window : autoWindow(r, resolution);
  out.graph = traceCurve(r, w);
  if (!window && out.boundedness.verdict == Boundedness::Bounded && out.graph.boundaryExits() > 0) {
    w = w.grown(2.0);
    out.graph = traceCurve(r, w);
    out.growths = 1;
  }
  out.violations = violationCount(out.graph);
  while (out.violations > 0 && out.refinements < 2) {
    w = w.refined();
    out.graph = traceCurve(r, w);
    ++out.refinements;
    out.violations = violationCount(out.graph);
  }
  return out;
}

/// Largest distance of any feature point from the origin (at least 1).
inline double featureRadius(const RationalFunction& r) {
  double rad = 1.0;
  for (const auto& p : featurePoints(r)) rad = std::max(rad, std::abs(p));
  return rad;
}

struct EndsResult {
  CurveGraph graph;
  int exits = 0;
  std::vector<double> exitAngles; // measured from the origin
  int growths = 0;
};

/// Far-field trace: square windows centred at the origin, grown by 4x until
/// two consecutive exit counts agree beyond 256 feature radii. Ends are
/// asymptotic to offset lines, so exit arguments seen from the origin carry
/// an O(feature radius / window) error; 256 keeps it near 0.2 degrees.
inline EndsResult traceEnds(const RationalFunction& r, int resolution = 512, int maxGrowths = 10) {
  EndsResult out;
  const double base = featureRadius(r);
  Window w;
  w.resolution = resolution;
  w.halfWidth = w.halfHeight = 4.0 * base;
  int previous = -1;
  for (int g = 0; g <= maxGrowths; ++g) {
    out.graph = traceCurve(r, w);
    out.exits = out.graph.boundaryExits();
    out.growths = g;
    if (out.exits == previous && w.halfWidth >= 256.0 * base) break;
    previous = out.exits;
    w = w.grown(4.0);
  }
  out.exitAngles = out.graph.exitAngles();
  return out;
}

/// Tangent directions of the branches at a vertex: the angle of each incident
/// edge, extrapolated to radius 0 by a linear fit over [rMin, rMax].
inline std::vector<double> branchAngles(const CurveGraph& g, int vertex, double rMin, double rMax) {
  std::vector<double> out;
  const cplx c = g.vertices[static_cast<std::size_t>(vertex)].position;
  auto measure = [&](std::vector<cplx> pts) {
    std::vector<double> rs, ths;
    double prev = 0.0;
    for (const auto& p : pts) {
      const double r = std::abs(p - c);
      if (r > rMax) break;
      if (r < rMin) continue;
      double th = std::arg(p - c);
      if (!ths.empty()) th = prev + std::remainder(th - prev, kTwoPi);
      prev = th;
      rs.push_back(r);
      ths.push_back(th);
    }
    if (rs.empty()) return;
    if (rs.size() < 3) {
      out.push_back(normalizeAngle(ths.front()));
      return;
    }
    double sr = 0, st = 0, srr = 0, srt = 0;
    const double n = static_cast<double>(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) {
      sr += rs[k];
      st += ths[k];
      srr += rs[k] * rs[k];
      srt += rs[k] * ths[k];
    }
    const double den = n * srr - sr * sr;
    const double slope = den != 0.0 ? (n * srt - sr * st) / den : 0.0;
    out.push_back(normalizeAngle((st - slope * sr) / n));
  };
  for (const auto& e : g.edges) {
    if (e.closed) continue;
    if (e.from == vertex) measure(e.points);
    if (e.to == vertex) measure(std::vector<cplx>(e.points.rbegin(), e.points.rend()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Trajectories of the real flow z' = -R(z).

struct TrajectoryOptions {
  double relTol = 1e-8;
  double absTol = 1e-12;
  double stopRadius = 1e-3;  // around zeros and poles of R
  double maxArcLength = 0.0; // 0: 20 window diagonals
  double maxStep = 0.0;      // 0: window diagonal / 256
  int maxSteps = 200000;
};

struct Trajectory {
  std::vector<cplx> points; // backward part reversed, then forward
  std::size_t seedIndex = 0;
  std::string backwardStop, forwardStop;
  bool truncated = false; // stopped by the step or arc-length cap
};

namespace detail {

/// Unit-speed direction field; same oriented trajectories as -R.
inline std::optional<cplx> unitField(const RationalFunction& r, cplx z, double sign) {
  const auto v = r(z);
  if (!v || !std::isfinite(v->real()) || !std::isfinite(v->imag())) return std::nullopt;
  const double n = std::abs(*v);
  if (n == 0.0) return std::nullopt;
  return -sign * *v / n;
}

inline std::vector<cplx> integrateOneWay(const RationalFunction& r, const Window& w, cplx seed, double sign,
                                         const std::vector<cplx>& stops, const TrajectoryOptions& o,
                                         std::string& reason) {
  // Dormand-Prince 5(4).
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;

  const double diag = 2.0 * std::hypot(w.halfWidth, w.halfHeight);
  const double maxStep = o.maxStep > 0 ? o.maxStep : diag / 256.0;
  const double maxArc = o.maxArcLength > 0 ? o.maxArcLength : 20.0 * diag;
  std::vector<cplx> pts{seed};
  cplx z = seed;
  double h = maxStep / 8.0, arc = 0.0;
  auto nearStop = [&](cplx p) {
    for (const auto& s : stops)
      if (std::abs(p - s) <= o.stopRadius) return true;
    return false;
  };
  auto k1 = unitField(r, z, sign);
  if (!k1) {
    reason = "singular";
    return pts;
  }
  for (int step = 0; step < o.maxSteps; ++step) {
    if (!w.contains(z)) {
      reason = "exit";
      return pts;
    }
    if (nearStop(z)) {
      reason = "stop-radius";
      return pts;
    }
    if (arc >= maxArc) {
      reason = "arc-length";
      return pts;
    }
    h = std::min(h, maxStep);
    const auto k2 = unitField(r, z + h * (a21 * *k1), sign);
    const auto k3 = k2 ? unitField(r, z + h * (a31 * *k1 + a32 * *k2), sign) : std::nullopt;
    const auto k4 = k3 ? unitField(r, z + h * (a41 * *k1 + a42 * *k2 + a43 * *k3), sign) : std::nullopt;
    const auto k5 = k4 ? unitField(r, z + h * (a51 * *k1 + a52 * *k2 + a53 * *k3 + a54 * *k4), sign) : std::nullopt;
    const auto k6 =
        k5 ? unitField(r, z + h * (a61 * *k1 + a62 * *k2 + a63 * *k3 + a64 * *k4 + a65 * *k5), sign) : std::nullopt;
    std::optional<cplx> k7;
    cplx next;
    if (k6) {
      next = z + h * (b1 * *k1 + b3 * *k3 + b4 * *k4 + b5 * *k5 + b6 * *k6);
      k7 = unitField(r, next, sign);
    }
    if (!k7) {
      h *= 0.25;
      if (h < 1e-14 * std::max(1.0, std::abs(z))) {
        reason = "singular";
        return pts;
      }
      continue;
    }
    const cplx err = h * (e1 * *k1 + e3 * *k3 + e4 * *k4 + e5 * *k5 + e6 * *k6 + e7 * *k7);
    const double tol = o.absTol + o.relTol * std::max({1.0, std::abs(z), std::abs(next)}) * 1e-0;
    const double ratio = std::abs(err) / tol;
    if (ratio <= 1.0) {
      z = next;
      k1 = k7;
      arc += h;
      pts.push_back(z);
    }
    const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    h *= factor;
    if (h < 1e-14 * std::max(1.0, std::abs(z))) {
      reason = "stall";
      return pts;
    }
  }
  reason = "step-cap";
  return pts;
}

} // namespace detail

/// Integrates z' = -R(z) forward and backward from each seed.
inline std::vector<Trajectory> integrateTrajectories(const RationalFunction& r, const Window& w,
                                                     const std::vector<cplx>& seeds,
                                                     const TrajectoryOptions& o = {}) {
  std::vector<cplx> stops;
  for (const auto& p : poleFactorization(r)) stops.push_back(p.value);
  if (r.numerator().degree() >= 1)
    for (const auto& z : roots(r.numerator())) stops.push_back(z.value);
  std::vector<Trajectory> out;
  for (const auto& seed : seeds) {
    bool skip = false;
    for (const auto& s : stops)
      if (std::abs(seed - s) <= o.stopRadius) skip = true;
    if (skip || r.isZero()) continue;
    Trajectory t;
    auto back = detail::integrateOneWay(r, w, seed, -1.0, stops, o, t.backwardStop);
    auto fwd = detail::integrateOneWay(r, w, seed, 1.0, stops, o, t.forwardStop);
    t.points.assign(back.rbegin(), back.rend());
    t.seedIndex = t.points.size() - 1;
    t.points.insert(t.points.end(), fwd.begin() + 1, fwd.end());
    auto capped = [](const std::string& s) { return s == "step-cap" || s == "arc-length" || s == "stall"; };
    t.truncated = capped(t.backwardStop) || capped(t.forwardStop);
    out.push_back(std::move(t));
  }
  return out;
}

/// Evenly spaced seeds over the window interior.
inline std::vector<cplx> gridSeeds(const Window& w, int perAxis) {
  std::vector<cplx> out;
  for (int j = 0; j < perAxis; ++j)
    for (int i = 0; i < perAxis; ++i)
      out.push_back({w.xmin() + (i + 0.5) * 2.0 * w.halfWidth / perAxis,
                     w.ymin() + (j + 0.5) * 2.0 * w.halfHeight / perAxis});
  return out;
}

struct CrossCheckReport {
  std::vector<std::size_t> curvatureChanges; // polyline indices
  std::vector<std::size_t> fieldChanges;
  std::vector<cplx> crossings;               // interpolated zeros of F_R
  int unmatchedCurvature = 0;
  int unmatchedField = 0;
  bool ok() const noexcept { return unmatchedCurvature == 0 && unmatchedField == 0; }
};

/// Discrete-curvature sign changes along a polyline matched against sign
/// changes of F_R, within `matchSteps` vertices.
inline CrossCheckReport inflectionCrossCheck(const RationalFunction& r, const std::vector<cplx>& pts,
                                             std::size_t matchSteps = 2) {
  CrossCheckReport rep;
  const Poly& p = r.denominator();
  const Poly w = wronskian(r.numerator(), p);
  int last = 0;
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    const cplx a = pts[k] - pts[k - 1], b = pts[k + 1] - pts[k];
    const double cross = (std::conj(a) * b).imag();
    const int s = std::abs(cross) <= 1e-9 * std::abs(a) * std::abs(b) ? 0 : (cross > 0 ? 1 : -1);
    if (s == 0) continue;
    if (last != 0 && s != last) rep.curvatureChanges.push_back(k);
    last = s;
  }
  last = 0;
  double lastVal = 0.0;
  std::size_t lastIdx = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double v = definingValue(w, p, pts[k]);
    const int s = v == 0.0 ? 0 : (v > 0 ? 1 : -1);
    if (s == 0) continue;
    if (last != 0 && s != last) {
      rep.fieldChanges.push_back(k);
      const double t = lastVal / (lastVal - v);
      rep.crossings.push_back(pts[lastIdx] + t * (pts[k] - pts[lastIdx]));
    }
    last = s;
    lastVal = v;
    lastIdx = k;
  }
  auto near = [&](std::size_t a, const std::vector<std::size_t>& others) {
    for (auto b : others)
      if ((a > b ? a - b : b - a) <= matchSteps) return true;
    return false;
  };
  for (auto c : rep.curvatureChanges) rep.unmatchedCurvature += !near(c, rep.fieldChanges);
  for (auto f : rep.fieldChanges) rep.unmatchedField += !near(f, rep.curvatureChanges);
  return rep;
}

} // namespace inflectus

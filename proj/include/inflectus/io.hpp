#pragma once

// JSON and SVG output. Numbers are rounded to 12 significant digits.

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "inflectus/error.hpp"
#include "inflectus/geometry.hpp"
#include "inflectus/inflection.hpp"
#include "inflectus/rational.hpp"
#include "inflectus/tracer.hpp"

namespace inflectus {

using Json = nlohmann::json;

inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline Json toJson(cplx z) { return Json::array({round12(z.real()), round12(z.imag())}); }

inline Json toJson(const Poly& p) {
  Json a = Json::array();
  for (int i = 0; i <= std::max(p.degree(), -1); ++i) a.push_back(toJson(p[i]));
  return a;
}

inline Json toJson(const RationalFunction& r) {
  return {{"numerator", toJson(r.numerator())}, {"denominator", toJson(r.denominator())}};
}

inline Json toJson(const DirectionSet& d) {
  Json a = Json::array();
  for (double x : d.angles()) a.push_back(round12(x));
  return a;
}

inline Json toJson(const RealBivariatePoly& f) {
  Json coeffs = Json::array();
  const double scale = f.maxAbsCoeff();
  for (int i = 0; i <= f.maxDegree(); ++i)
    for (int j = 0; i + j <= f.maxDegree(); ++j) {
      const double c = f.coeff(i, j);
      if (std::abs(c) > kDefaultTrimTolerance * scale) coeffs.push_back({i, j, round12(c)});
    }
  return {{"coeffs", coeffs}, {"degree", f.totalDegree()}};
}

/// Reads {"numerator": [[re, im], ...], "denominator": [...]}; the
/// denominator defaults to 1.
inline RationalFunction rationalFromJson(const Json& j) {
  auto readPoly = [](const Json& a, const char* what) {
    if (!a.is_array()) throw ParseError(std::string(what) + " must be an array of [re, im] pairs", 0);
    std::vector<cplx> c;
    for (const auto& x : a) {
      if (x.is_number()) c.emplace_back(x.get<double>(), 0.0);
      else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number())
        c.emplace_back(x[0].get<double>(), x[1].get<double>());
      else throw ParseError(std::string(what) + " entries must be [re, im] pairs", 0);
    }
    return Poly(std::move(c));
  };
  if (!j.is_object() || !j.contains("numerator")) throw ParseError("coefficient JSON needs a \"numerator\" array", 0);
  const Poly q = readPoly(j.at("numerator"), "numerator");
  const Poly p = j.contains("denominator") ? readPoly(j.at("denominator"), "denominator") : Poly{1.0};
  if (p.isZero()) throw DegenerateInput("zero denominator");
  return RationalFunction(q, p);
}

inline Json toJson(const CurveGraph& g) {
  Json vs = Json::array(), es = Json::array(), cs = Json::array();
  for (const auto& v : g.vertices) {
    Json o{{"position", toJson(v.position)}, {"valency", v.valency}, {"kind", toString(v.kind)}};
    if (v.poleId >= 0) o["pole"] = v.poleId;
    vs.push_back(o);
  }
  for (const auto& e : g.edges) {
    Json pts = Json::array();
    for (const auto& p : e.points) pts.push_back(toJson(p));
    Json o{{"closed", e.closed}, {"points", pts}};
    o["from"] = e.from >= 0 ? Json(e.from) : Json(nullptr);
    o["to"] = e.to >= 0 ? Json(e.to) : Json(nullptr);
    es.push_back(o);
  }
  for (const auto& c : g.components) cs.push_back({{"edges", c.edges}, {"bounded", c.bounded}, {"poles", c.poles}});
  const auto& w = g.window;
  return {{"window",
           {{"center", toJson(w.center)}, {"halfWidth", round12(w.halfWidth)}, {"halfHeight", round12(w.halfHeight)},
            {"resolution", w.resolution}}},
          {"vertices", vs},
          {"edges", es},
          {"components", cs}};
}

/// Topological summary used for structural comparisons: counts, pole
/// valencies, and per-component boundedness with contained poles.
inline Json graphSummary(const CurveGraph& g) {
  Json poles = Json::array();
  for (std::size_t i = 0; i < g.poles.size(); ++i) {
    const int v = g.poleVertex(static_cast<int>(i));
    poles.push_back({{"location", toJson(g.poles[i].location)},
                     {"order", g.poles[i].order},
                     {"valency", v >= 0 ? g.vertices[static_cast<std::size_t>(v)].valency : 0}});
  }
  std::vector<std::pair<bool, std::vector<int>>> comps;
  int bounded = 0;
  for (const auto& c : g.components) {
    auto ps = c.poles;
    std::sort(ps.begin(), ps.end());
    comps.emplace_back(c.bounded, ps);
    bounded += c.bounded;
  }
  std::sort(comps.begin(), comps.end());
  Json cj = Json::array();
  for (const auto& [b, ps] : comps) cj.push_back({{"bounded", b}, {"poles", ps}});
  int junctions = 0;
  for (const auto& v : g.vertices) junctions += v.kind == VertexKind::Junction;
  return {{"components", g.components.size()},
          {"boundedComponents", bounded},
          {"boundaryExits", g.boundaryExits()},
          {"junctions", junctions},
          {"poles", poles},
          {"componentDetails", cj}};
}

struct SvgLayers {
  std::vector<Trajectory> trajectories;
  std::vector<cplx> zeros; // zeros of R (equilibria)
};

/// Window mapped to a 1024-wide viewBox with the y axis flipped.
inline std::string renderSvg(const CurveGraph& g, const SvgLayers& layers = {}) {
  const auto& w = g.window;
  const double width = 1024.0;
  const double height = width * w.halfHeight / w.halfWidth;
  auto X = [&](cplx z) { return (z.real() - w.xmin()) / (2 * w.halfWidth) * width; };
  auto Y = [&](cplx z) { return (w.center.imag() + w.halfHeight - z.imag()) / (2 * w.halfHeight) * height; };
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height << "\" width=\""
     << width << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  auto polyline = [&](const std::vector<cplx>& pts, const char* cls, const char* stroke, double sw) {
    if (pts.size() < 2) return;
    os << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << sw
       << "\" points=\"";
    for (const auto& p : pts) os << X(p) << ',' << Y(p) << ' ';
    os << "\"/>\n";
  };
  os << "<g id=\"trajectories\">\n";
  for (const auto& t : layers.trajectories) polyline(t.points, "trajectory", "gray", 0.6);
  os << "</g>\n<g id=\"curve\">\n";
  for (const auto& e : g.edges) polyline(e.points, "curve", "red", 2.0);
  os << "</g>\n<g id=\"poles\">\n";
  for (const auto& p : g.poles)
    if (w.contains(p.location))
      os << "<circle class=\"pole\" cx=\"" << X(p.location) << "\" cy=\"" << Y(p.location)
         << "\" r=\"6\" fill=\"black\"/>\n";
  os << "</g>\n<g id=\"zeros\">\n";
  for (const auto& z : layers.zeros)
    if (w.contains(z))
      os << "<circle class=\"zero\" cx=\"" << X(z) << "\" cy=\"" << Y(z)
         << "\" r=\"6\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

} // namespace inflectus

#pragma once

// Command-line front end: job description, dispatch to the library modules,
// JSON/SVG artifacts, error reporting with exit codes.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "inflectus/classify.hpp"
#include "inflectus/error.hpp"
#include "inflectus/exactness.hpp"
#include "inflectus/expr.hpp"
#include "inflectus/geometry.hpp"
#include "inflectus/inflection.hpp"
#include "inflectus/io.hpp"
#include "inflectus/monodromy.hpp"
#include "inflectus/tracer.hpp"

namespace inflectus {

inline constexpr const char* kFigure1 =
    "(0.75+0.90i)*z + (1+0.35i)/(z-(-1.25+0.05i)) + (-0.75+0.95i)/(z-(0.85+0.75i)) + (0.85-0.65i)/(z-(0.55-0.95i))";
inline constexpr const char* kFigure2 =
    "(1/3)*z^3 + (0.28+0.35i)*z^2 + (0.40-0.60i)*z + (0.80-0.60i)/(z-(-1.25+0.70i)) + (-0.90+0.70i)/(z-(1.10-0.55i))";

inline const char* figureExpression(int n) {
  if (n == 1) return kFigure1;
  if (n == 2) return kFigure2;
  throw DomainError("unknown figure preset " + std::to_string(n) + " (expected 1 or 2)");
}

enum class LogLevel { Quiet, Info, Debug };

inline LogLevel logLevelFromEnv() {
  const char* v = std::getenv("INFLECTUS_LOG");
  if (!v) return LogLevel::Quiet;
  const std::string s(v);
  if (s == "debug") return LogLevel::Debug;
  if (s == "info") return LogLevel::Info;
  return LogLevel::Quiet;
}

class Log {
public:
  Log(LogLevel level, std::ostream& os) : level_(level), os_(os) {}
  void info(const std::string& m) const {
    if (level_ != LogLevel::Quiet) os_ << "[info] " << m << '\n';
  }
  void debug(const std::string& m) const {
    if (level_ == LogLevel::Debug) os_ << "[debug] " << m << '\n';
  }

private:
  LogLevel level_;
  std::ostream& os_;
};

enum class Command { Analyze, Trace, Plot, Exactness, Classify, Irreducibility };

struct JobSpec {
  Command command = Command::Analyze;
  std::optional<std::string> expression;
  std::optional<std::string> jsonPath;
  std::optional<int> figure;
  bool derivative = false; // operate on R' instead of the input
  std::optional<Window> window;
  int resolution = 512;
  double tol = kResidueTolerance;
  std::optional<std::string> output;
  std::uint64_t seed = 0;
};

/// "cx,cy,hw,hh".
inline Window parseWindow(const std::string& s, int resolution) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("window must be \"cx,cy,hw,hh\"", 0, {"number"});
    }
  }
  if (v.size() != 4) throw ParseError("window must be \"cx,cy,hw,hh\"", 0, {"four numbers"});
  Window w;
  w.center = {v[0], v[1]};
  w.halfWidth = v[2];
  w.halfHeight = v[3];
  w.resolution = resolution;
  w.validate();
  return w;
}

inline RationalFunction loadSource(const JobSpec& spec) {
  const int sources = spec.expression.has_value() + spec.jsonPath.has_value() + spec.figure.has_value();
  if (sources != 1) throw DomainError("exactly one of --expr, --json, --figure is required");
  RationalFunction r;
  if (spec.expression) {
    r = compileExpression(*spec.expression);
  } else if (spec.figure) {
    r = compileExpression(figureExpression(*spec.figure));
  } else {
    std::ifstream in(*spec.jsonPath);
    if (!in) throw DomainError("cannot open " + *spec.jsonPath);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0, {"JSON"});
    }
    r = rationalFromJson(j);
  }
  return spec.derivative ? derivative(r) : r;
}

namespace detail {

inline Json analyzeJson(const RationalFunction& r) {
  Json out;
  out["input"] = toJson(r);
  out["k"] = r.numeratorDegree();
  out["l"] = r.denominatorDegree();
  Json ps = Json::array();
  for (const auto& p : poles(r))
    ps.push_back({{"location", toJson(p.location)},
                  {"order", p.order},
                  {"leadingCoefficient", toJson(p.leadingCoefficient)},
                  {"branchCount", p.branchCount()},
                  {"tangentRays", toJson(p.tangentRays)}});
  out["poles"] = ps;
  const auto bd = boundednessAnalysis(r);
  out["boundedness"] = {{"verdict", bd.verdict == Boundedness::Bounded ? "bounded" : "unbounded"},
                        {"endCount", bd.endCount},
                        {"asymptoticRays", toJson(bd.rays)},
                        {"leading", {{"c", toJson(bd.leading.c)}, {"m", bd.leading.m}}},
                        {"heuristic", bd.heuristic}};
  const auto dr = degreeReport(r);
  out["degreeReport"] = {{"n", dr.n},
                         {"bound", dr.bound},
                         {"actual", dr.actual},
                         {"generic", dr.generic},
                         {"genericFormulaMatches", dr.genericFormulaMatches},
                         {"cancellationDetected", dr.cancellationDetected}};
  Json sc = Json::array();
  for (const auto& c : singularCandidates(r)) sc.push_back(toJson(c));
  out["singularCandidates"] = sc;
  out["definingPolynomial"] = toJson(definingPolynomial(r).normalized());
  return out;
}

inline Json exactnessJson(const RationalFunction& f, double tol) {
  const auto rep = isExact(f, tol);
  Json res = Json::array();
  for (const auto& x : rep.residues) res.push_back({{"pole", toJson(x.pole)}, {"residue", toJson(x.residue)}});
  Json out{{"exact", rep.exact}, {"residues", res}};
  if (rep.exact && !f.isZero()) {
    out["primitive"] = toJson(primitive(f, tol));
    Json dp = Json::array();
    for (const auto& d : dessinPoleCheck(f, tol))
      dp.push_back({{"pole", toJson(d.pole)}, {"order", d.order}, {"rayCount", d.rayCount}});
    out["dessinPoles"] = dp;
  }
  return out;
}

inline Json classifyJson(const RationalFunction& f, double tol) {
  const auto d = classifyExact(f, tol);
  Json params;
  switch (d.degree) {
  case 1: params = {{"a", toJson(d.a)}, {"b", toJson(d.b)}}; break;
  case 2: params = {{"alpha", toJson(d.alpha)}, {"beta", toJson(d.beta)}, {"p", toJson(d.p)}}; break;
  default: params = {{"a", toJson(d.a)}, {"b", toJson(d.b)}, {"c", toJson(d.c)}, {"p", toJson(d.p)}}; break;
  }
  Json out{{"degree", d.degree}, {"class", toString(d.cls)}, {"parameters", params}};
  out["curveVerdict"] = nullptr;
  out["criticalFlags"] = nullptr;
  if (d.degree == 2) {
    const auto v = degreeTwoCurveVerdict(d);
    out["curveVerdict"] = {{"form", v.form},
                           {"imBeta", round12(v.imBeta)},
                           {"reducible", v.reducible},
                           {"nearDegenerate", v.nearDegenerate},
                           {"geometry", v.geometry},
                           {"coordinate", v.mapDescriptor},
                           {"scale", toJson(v.scale)},
                           {"shift", toJson(v.shift)}};
  } else if (d.degree == 3) {
    Json flags = Json::array();
    for (const auto& fl : cubicSingularityTrigger(f))
      flags.push_back({{"point", fl.point ? toJson(*fl.point) : Json("infinity")},
                       {"criticalValue", toJson(fl.value)},
                       {"onRP1", fl.onRP1}});
    out["criticalFlags"] = flags;
  }
  return out;
}

inline Json irreducibilityJson(const RationalFunction& f, std::uint64_t seed) {
  ContinuationOptions opts;
  opts.seed = seed;
  const auto r = fiberProductConnected(f, opts);
  Json loops = Json::array();
  for (const auto& l : r.loopLog)
    loops.push_back({{"loop", l.descriptor()},
                     {"fiber", cycleString(l.fiber)},
                     {"conjugateFiber", cycleString(l.conjFiber)}});
  return {{"degree", r.degree},
          {"verdict", toString(r.verdict)},
          {"orbitCount", r.orbitCount},
          {"relationHolds", r.relationHolds},
          {"basePoint", toJson(r.basePoint)},
          {"retries", r.retries},
          {"loops", loops},
          {"note", r.note}};
}

inline void writeFile(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write " + path);
  f << content;
}

inline Json traceSummary(const TraceResult& tr) {
  const auto& g = tr.graph;
  Json out = graphSummary(g);
  out["verdict"] = tr.boundedness.verdict == Boundedness::Bounded ? "bounded" : "unbounded";
  out["endCount"] = tr.boundedness.endCount;
  out["windowGrowths"] = tr.growths;
  out["refinements"] = tr.refinements;
  out["violations"] = tr.violations;
  return out;
}

} // namespace detail

/// Exit codes: 0 success, 2 parse error, 3 numeric failure, 4 degenerate or
/// out-of-domain input.
inline int exitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return 2;
  if (dynamic_cast<const NumericFailure*>(&e)) return 3;
  if (dynamic_cast<const DegenerateInput*>(&e) || dynamic_cast<const DomainError*>(&e)) return 4;
  return 3;
}

inline Json errorJson(const std::exception& e) {
  std::string type = "numeric";
  Json err;
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    type = "parse";
    err["offset"] = p->offset();
    err["expected"] = p->expected();
  } else if (dynamic_cast<const DegenerateInput*>(&e)) {
    type = "degenerate";
  } else if (dynamic_cast<const DomainError*>(&e)) {
    type = "domain";
  }
  err["type"] = type;
  err["message"] = e.what();
  return {{"error", err}};
}

/// Runs one job; the JSON result (or error) goes to `out`.
inline int runJob(const JobSpec& spec, std::ostream& out, const Log& log) {
  try {
    const RationalFunction r = loadSource(spec);
    log.debug("input " + toJson(r).dump());
    Json result;
    switch (spec.command) {
    case Command::Analyze: result = detail::analyzeJson(r); break;
    case Command::Exactness: result = detail::exactnessJson(r, spec.tol); break;
    case Command::Classify: result = detail::classifyJson(r, spec.tol); break;
    case Command::Irreducibility: result = detail::irreducibilityJson(r, spec.seed); break;
    case Command::Trace:
    case Command::Plot: {
      std::optional<Window> w = spec.window;
      if (w) w->resolution = spec.resolution;
      const auto tr = traceAuto(r, w, spec.resolution);
      log.info("traced " + std::to_string(tr.graph.components.size()) + " components at resolution " +
               std::to_string(tr.graph.window.resolution));
      result = detail::traceSummary(tr);
      if (spec.command == Command::Trace) {
        if (spec.output) {
          detail::writeFile(*spec.output, toJson(tr.graph).dump(1) + "\n");
          result["graph"] = *spec.output;
        } else {
          result["graph"] = toJson(tr.graph);
        }
      } else {
        SvgLayers layers;
        layers.trajectories = integrateTrajectories(r, tr.graph.window, gridSeeds(tr.graph.window, 14));
        if (r.numerator().degree() >= 1)
          for (const auto& z : roots(r.numerator())) layers.zeros.push_back(z.value);
        const std::string path = spec.output.value_or("inflectus.svg");
        detail::writeFile(path, renderSvg(tr.graph, layers));
        result["svg"] = path;
        log.info("wrote " + path);
      }
      break;
    }
    }
    out << result.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    out << errorJson(e).dump(2) << '\n';
    return exitCodeFor(e);
  } catch (const std::bad_alloc&) {
    throw;
  } catch (const std::exception& e) {
    // Anything unexpected surfaces as a numeric failure.
    out << errorJson(NumericFailure(e.what())).dump(2) << '\n';
    return 3;
  }
}

/// Full command line: argument parsing plus runJob.
inline int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inflection curves of rational vector fields"};
  app.require_subcommand(1);
  JobSpec spec;
  std::string window;
  std::string expr, json;
  int figure = 0;
  std::string output;

  const std::pair<const char*, Command> commands[] = {
      {"analyze", Command::Analyze},     {"trace", Command::Trace},
      {"plot", Command::Plot},           {"exactness", Command::Exactness},
      {"classify", Command::Classify},   {"irreducibility", Command::Irreducibility}};
  const char* help[] = {"poles, tangent rays, ends, degree report, singular candidates",
                        "trace the inflection curve; JSON graph",
                        "trace and render SVG with trajectories",
                        "residues, exactness, primitive",
                        "normal form of an exact map of degree <= 3",
                        "connectivity of the fiber product with the conjugate map"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* s = app.add_subcommand(commands[i].first, help[i]);
    s->add_option("--expr", expr, "rational expression in z");
    s->add_option("--json", json, "coefficient JSON file");
    s->add_option("--figure", figure, "preset 1 or 2")->check(CLI::Range(1, 2));
    s->add_flag("--derivative", spec.derivative, "use R' instead of R");
    s->add_option("--window", window, "cx,cy,hw,hh");
    s->add_option("--resolution", spec.resolution, "grid cells per axis")->check(CLI::Range(16, 1 << 14));
    s->add_option("--tol", spec.tol, "residue tolerance")->check(CLI::PositiveNumber);
    s->add_option("-o,--output", output, "output path");
    s->add_option("--seed", spec.seed, "continuation seed");
    subs.push_back(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    Json j{{"error", {{"type", "usage"}, {"message", e.what()}}}};
    out << j.dump(2) << '\n';
    return 2;
  }
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) spec.command = commands[i].second;
  for (auto* s : subs) {
    if (!s->parsed()) continue;
    if (s->count("--expr")) spec.expression = expr;
    if (s->count("--json")) spec.jsonPath = json;
    if (s->count("--figure")) spec.figure = figure;
    if (s->count("--output")) spec.output = output;
  }
  const Log log(logLevelFromEnv(), err);
  if (!window.empty()) {
    try {
      spec.window = parseWindow(window, spec.resolution);
    } catch (const Error& e) {
      out << errorJson(e).dump(2) << '\n';
      return exitCodeFor(e);
    }
  }
  return runJob(spec, out, log);
}

} // namespace inflectus

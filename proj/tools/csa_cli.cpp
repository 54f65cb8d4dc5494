// csa: command-line front end.
//
//   csa [--json] [--seed N] [--tol T] <command> ...
//
// Exit codes: 0 positive verdict, 1 negative verdict, 2 input error.

#include "csa/canon.hpp"
#include "csa/csa.hpp"
#include "csa/symmetry.hpp"
#include "csa/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace csa;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kPositive = 0, kNegative = 1, kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json{false};
  std::uint64_t seed{0x5eed};
  double tol{1e-8};
};

struct Problem {
  VarContext ctx = VarContext::standard();
  std::optional<OdeSystem2> system;
  std::optional<PointTransformation> transformation;
  std::optional<Expr> beta;
  std::optional<std::pair<double, double>> interval;
  std::vector<VectorField> generators;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing key \"" + key + "\"");
  return j.at(key);
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

Expr parse_in(const Json& j, const VarContext& ctx, const std::string& where) {
  try {
    return parse(as_string(j, where), ctx);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

std::pair<double, double> parse_interval(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError("interval: expected [lo, hi]");
  }
  double lo = j[0].get<double>(), hi = j[1].get<double>();
  if (!(lo < hi)) throw InputError("interval: need lo < hi");
  return {lo, hi};
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw InputError(path + ": top level must be an object");
  static const std::set<std::string> known{"variables", "system",   "parameters", "transformation",
                                           "beta",      "interval", "generators"};
  for (const auto& [k, v] : doc.items()) {
    if (!known.count(k)) throw InputError(path + ": unknown key \"" + k + "\"");
  }

  Problem p;
  std::vector<std::string> params;
  if (doc.contains("parameters")) {
    const Json& ps = doc["parameters"];
    if (!ps.is_array()) throw InputError("parameters: expected a list of names");
    for (const auto& n : ps) params.push_back(as_string(n, "parameters"));
  }
  try {
    if (doc.contains("variables")) {
      const Json& v = doc["variables"];
      std::string x = as_string(require(v, "independent", "variables"), "variables.independent");
      const Json& d = require(v, "dependent", "variables");
      if (!d.is_array() || d.size() != 2) throw InputError("variables.dependent: expected two names");
      p.ctx = VarContext(x, {as_string(d[0], "variables.dependent"), as_string(d[1], "variables.dependent")}, params);
    } else {
      p.ctx = VarContext::standard(params);
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("variables: ") + e.what());
  }

  if (doc.contains("system")) {
    const Json& s = doc["system"];
    p.system = OdeSystem2(p.ctx, parse_in(require(s, "omega1", "system"), p.ctx, "system.omega1"),
                          parse_in(require(s, "omega2", "system"), p.ctx, "system.omega2"));
  }
  if (doc.contains("transformation")) {
    const Json& t = doc["transformation"];
    p.transformation = PointTransformation{parse_in(require(t, "X", "transformation"), p.ctx, "transformation.X"),
                                           parse_in(require(t, "Y", "transformation"), p.ctx, "transformation.Y"),
                                           parse_in(require(t, "Z", "transformation"), p.ctx, "transformation.Z")};
  }
  if (doc.contains("beta")) p.beta = parse_in(doc["beta"], p.ctx, "beta");
  if (doc.contains("interval")) p.interval = parse_interval(doc["interval"]);
  if (doc.contains("generators")) {
    const Json& g = doc["generators"];
    if (!g.is_array()) throw InputError("generators: expected a list");
    for (const auto& f : g) {
      if (!f.is_object()) throw InputError("generators: expected objects with xi, eta1, eta2");
      for (const auto& [k, v] : f.items()) {
        if (k != "xi" && k != "eta1" && k != "eta2") throw InputError("generators: unknown key \"" + k + "\"");
      }
      VectorField v{constant(0), constant(0), constant(0)};
      if (f.contains("xi")) v.xi = parse_in(f["xi"], p.ctx, "generators.xi");
      if (f.contains("eta1")) v.eta1 = parse_in(f["eta1"], p.ctx, "generators.eta1");
      if (f.contains("eta2")) v.eta2 = parse_in(f["eta2"], p.ctx, "generators.eta2");
      try {
        v = VectorField::parse(v.to_string(), p.ctx);  // same validation as text input
      } catch (const std::exception& e) {
        throw InputError(std::string("generators: ") + e.what());
      }
      p.generators.push_back(v);
    }
  }
  return p;
}

const OdeSystem2& need_system(const Problem& p) {
  if (!p.system) throw InputError("problem file has no \"system\"");
  return *p.system;
}

std::string method_name(ZeroMethod m) { return m == ZeroMethod::Symbolic ? "symbolic" : "numeric"; }

Json conditions_json(const ConditionReport& r) {
  Json out = Json::object();
  out["holds"] = r.holds;
  Json list = Json::array();
  for (const auto& c : r.conditions) {
    Json j;
    j["name"] = c.name;
    j["holds"] = c.holds;
    j["method"] = method_name(c.method);
    j["dropped_samples"] = c.dropped_samples;
    list.push_back(j);
  }
  out["conditions"] = list;
  const Condition* f = r.first_failure();
  out["first_failure"] = f ? Json(f->name) : Json(nullptr);
  return out;
}

void conditions_text(std::ostream& os, const std::string& title, const Json& r) {
  os << title << "\n";
  for (const auto& c : r["conditions"]) {
    os << "  [" << (c["holds"].get<bool>() ? "holds" : "FAILS") << "] " << c["name"].get<std::string>() << "  ("
       << c["method"].get<std::string>();
    if (c["dropped_samples"].get<int>() > 0) os << ", " << c["dropped_samples"].get<int>() << " samples dropped";
    os << ")\n";
  }
}

Json form_json(const LinearForm& f) {
  static const std::map<FormKind, std::vector<std::string>> slots{
      {FormKind::General, {"A11", "A12", "A21", "A22", "B11", "B12", "B21", "B22", "c1", "c2"}},
      {FormKind::Optimal, {"d11", "d12", "d21"}},
      {FormKind::FirstOrder, {"a1", "a2"}},
      {FormKind::ZeroOrder, {"a3", "a4"}},
      {FormKind::Reduced, {"beta"}}};
  Json j;
  j["kind"] = to_string(f.kind);
  j["interval"] = {f.lo, f.hi};
  Json c = Json::object();
  const auto& names = slots.at(f.kind);
  for (std::size_t i = 0; i < f.coefficients.size() && i < names.size(); ++i) {
    const CoefficientFn& fn = f.coefficients[i];
    if (fn.is_symbolic()) {
      c[names[i]] = fn.describe();
    } else {
      Json t;
      t["tabulated"] = fn.table().source;
      t["step"] = fn.table().step;
      t["error_estimate"] = fn.table().error_estimate;
      t["samples"] = fn.table().xs().size();
      c[names[i]] = t;
    }
  }
  j["coefficients"] = c;
  return j;
}

void form_text(std::ostream& os, const Json& f) {
  os << "  " << f["kind"].get<std::string>() << " on [" << num(f["interval"][0].get<double>()) << ", "
     << num(f["interval"][1].get<double>()) << "]\n";
  for (const auto& [k, v] : f["coefficients"].items()) {
    if (v.is_string()) {
      os << "    " << k << " = " << v.get<std::string>() << "\n";
    } else {
      os << "    " << k << " = tabulated (" << v["tabulated"].get<std::string>() << ", step " << num(v["step"].get<double>())
         << ", error " << num(v["error_estimate"].get<double>()) << ")\n";
    }
  }
}

Json header(const std::string& command) {
  Json j;
  j["schema_version"] = 1;
  j["command"] = command;
  return j;
}

// ---- commands: each fills a report and returns the exit code

int cmd_check(const Problem& p, Json& rep) {
  const OdeSystem2& sys = need_system(p);
  rep["omega1"] = print(sys.omega1);
  rep["omega2"] = print(sys.omega2);
  rep["cauchy_riemann"] = conditions_json(check_cr(sys));
  bool cubic_ok = false;
  try {
    auto t2 = check_cubic_correspondence(extract_cubic(sys));
    rep["cubic_correspondence"] = conditions_json(t2.report);
    cubic_ok = t2.report.holds;
    if (t2.coefficients) {
      Json e = Json::object();
      for (int k = 0; k < 4; ++k) {
        e["E" + std::to_string(k)] = {{"re", print((*t2.coefficients)[static_cast<std::size_t>(k)].first)},
                                      {"im", print((*t2.coefficients)[static_cast<std::size_t>(k)].second)}};
      }
      rep["complex_coefficients"] = e;
    }
  } catch (const std::exception& e) {
    rep["cubic_correspondence"] = {{"holds", false}, {"conditions", Json::array()}, {"first_failure", e.what()}};
  }
  bool ok = rep["cauchy_riemann"]["holds"].get<bool>() && cubic_ok;
  rep["correspondent"] = ok;
  return ok ? kPositive : kNegative;
}

void check_text(std::ostream& os, const Json& r) {
  os << "system: y'' = " << r["omega1"].get<std::string>() << ", z'' = " << r["omega2"].get<std::string>() << "\n";
  conditions_text(os, "Cauchy-Riemann conditions", r["cauchy_riemann"]);
  conditions_text(os, "cubic coefficient correspondence", r["cubic_correspondence"]);
  for (const char* k : {"cauchy_riemann", "cubic_correspondence"}) {
    if (!r[k]["first_failure"].is_null()) os << "first failing condition: " << r[k]["first_failure"].get<std::string>() << "\n";
  }
  if (r.contains("complex_coefficients")) {
    os << "complex equation u'' + E3 u'^3 + E2 u'^2 + E1 u' + E0 = 0\n";
    for (const auto& [k, v] : r["complex_coefficients"].items()) {
      os << "  " << k << " = (" << v["re"].get<std::string>() << ") + i (" << v["im"].get<std::string>() << ")\n";
    }
  }
  os << "CSA-correspondent: " << (r["correspondent"].get<bool>() ? "yes" : "no") << "\n";
}

int cmd_classify(const Expr& beta, std::pair<double, double> iv, const VarContext& ctx, const Options& o, Json& rep) {
  ClassifyOptions co;
  co.rel_tol = o.tol;
  Classification c;
  try {
    c = classify_beta(beta, iv.first, iv.second, co, ctx);
  } catch (const PoleInInterval& e) {
    throw InputError(e.what());
  } catch (const IntervalTooSmall& e) {
    throw InputError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  rep["beta"] = print(beta);
  rep["interval"] = {iv.first, iv.second};
  rep["dimension"] = c.dimension ? Json(*c.dimension) : Json(nullptr);
  rep["case"] = c.case_label;
  rep["method"] = c.method;
  rep["translations"] = c.translations;
  Json w = Json::array();
  for (const auto& f : c.witnesses) w.push_back(f.to_string());
  rep["witnesses"] = w;
  if (c.method == "numeric") {
    rep["rank"] = {{"rank", c.rank_report.rank},
                   {"cutoff", c.rank_report.cutoff},
                   {"parameters", c.parameters},
                   {"collocation_points", c.collocation_points},
                   {"singular_values", c.rank_report.singular_values}};
  }
  return c.dimension ? kPositive : kNegative;
}

void classify_text(std::ostream& os, const Json& r) {
  os << "beta = " << r["beta"].get<std::string>() << " on [" << num(r["interval"][0].get<double>()) << ", "
     << num(r["interval"][1].get<double>()) << "]\n";
  if (r["dimension"].is_null()) os << "dimension unknown";
  else os << "dimension " << r["dimension"].get<int>();
  os << " (" << r["case"].get<std::string>() << ")\n";
  os << "method " << r["method"].get<std::string>() << "; " << r["witnesses"].size() << " closed-form witnesses";
  if (r["translations"].get<int>() > 0) os << "; " << r["translations"].get<int>() << " solution translations";
  os << "\n";
  if (r.contains("rank")) {
    const Json& k = r["rank"];
    os << "collocation: " << k["collocation_points"].get<int>() << " points, " << k["parameters"].get<int>()
       << " parameters, rank " << k["rank"].get<int>() << ", cutoff " << num(k["cutoff"].get<double>()) << "\n";
    os << "singular values:";
    for (const auto& s : k["singular_values"]) os << " " << num(s.get<double>());
    os << "\n";
  }
  for (const auto& w : r["witnesses"]) os << "  " << w.get<std::string>() << "\n";
}

int cmd_canonicalize(const Problem& p, Json& rep) {
  const OdeSystem2& sys = need_system(p);
  if (!p.ctx.parameters().empty()) throw InputError("canonicalize needs numeric coefficients (declared parameters are unbound)");
  auto iv = p.interval.value_or(std::pair<double, double>{0.0, 1.0});
  Json steps = Json::array();
  auto form = identify_linear_form(sys, iv.first, iv.second);
  if (!form) {
    rep["steps"] = steps;
    rep["canonical"] = false;
    rep["reason"] = "not one of the linear normal forms";
    return kNegative;
  }
  LinearForm f = *form;
  steps.push_back(form_json(f));
  std::string reason;
  try {
    if (f.kind == FormKind::General) {
      f = reduce_optimal(f).optimal;
      steps.push_back(form_json(f));
    }
    if (f.kind == FormKind::FirstOrder) {
      f = reduce_first_order(f).zero_order;
      steps.push_back(form_json(f));
    }
    if (f.kind == FormKind::ZeroOrder) {
      f = reduce_zero_order(f).reduced;
      steps.push_back(form_json(f));
    }
  } catch (const std::invalid_argument& e) {
    reason = e.what();
  } catch (const RhoVanishes& e) {
    reason = std::string(e.what()) + " (at " + num(e.where) + ")";
  } catch (const MDegenerate& e) {
    reason = std::string(e.what()) + " (at " + num(e.where) + ")";
  }
  rep["steps"] = steps;
  const bool ok = reason.empty() && (f.kind == FormKind::Reduced || f.kind == FormKind::Optimal);
  rep["canonical"] = ok;
  if (ok && f.kind == FormKind::Optimal) reason = "optimal form: no constant linear change of dependents reaches the reduced family";
  rep["reason"] = reason;
  return ok ? kPositive : kNegative;
}

void canonicalize_text(std::ostream& os, const Json& r) {
  int i = 0;
  for (const auto& s : r["steps"]) {
    os << (i++ == 0 ? "input" : "->") << "\n";
    form_text(os, s);
  }
  if (!r["reason"].get<std::string>().empty()) os << "note: " << r["reason"].get<std::string>() << "\n";
  os << "canonical form reached: " << (r["canonical"].get<bool>() ? "yes" : "no") << "\n";
}

VarContext target_context(const VarContext& src) {
  auto up = [](std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
  };
  std::string X = up(src.independent()), Y = up(src.dependent(0)), Z = up(src.dependent(1));
  for (const auto& n : {X, Y, Z}) {
    if (src.declares(n)) throw InputError("cannot derive target variable names: " + n + " is already declared");
  }
  return VarContext(X, {Y, Z}, src.parameters());
}

int cmd_transform(const Problem& p, Json& rep) {
  const OdeSystem2& sys = need_system(p);
  if (!p.transformation) throw InputError("problem file has no \"transformation\"");
  VarContext tc = target_context(p.ctx);
  TransformResult r = [&] {
    try {
      return transform_system(sys, *p.transformation, tc);
    } catch (const NonInvertible& e) {
      throw InputError(std::string("transformation not invertible: ") + e.what());
    } catch (const DxXZero& e) {
      throw InputError(std::string("transformation degenerate: ") + e.what());
    }
  }();
  rep["variables"] = {{"independent", tc.independent()}, {"dependent", {tc.dependent(0), tc.dependent(1)}}};
  rep["omega1"] = print(r.target.omega1);
  rep["omega2"] = print(r.target.omega2);
  rep["first_derivatives"] = {print(r.first[0]), print(r.first[1])};
  rep["warnings"] = r.warnings;
  return kPositive;
}

void transform_text(std::ostream& os, const Json& r) {
  const std::string Y = r["variables"]["dependent"][0], Z = r["variables"]["dependent"][1];
  os << Y << "'' = " << r["omega1"].get<std::string>() << "\n";
  os << Z << "'' = " << r["omega2"].get<std::string>() << "\n";
  os << Y << "' = " << r["first_derivatives"][0].get<std::string>() << "\n";
  os << Z << "' = " << r["first_derivatives"][1].get<std::string>() << "\n";
  for (const auto& w : r["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
}

int cmd_verify_symmetry(const Problem& p, Json& rep) {
  const OdeSystem2& sys = need_system(p);
  if (p.generators.empty()) throw InputError("problem file has no \"generators\"");
  Json list = Json::array();
  bool all = true;
  for (const auto& g : p.generators) {
    auto r = check_symmetry(sys, g);
    Json j;
    j["generator"] = g.to_string();
    j["holds"] = r.holds;
    j["method"] = {method_name(r.residuals[0].method), method_name(r.residuals[1].method)};
    j["residuals"] = {print(r.residuals[0].simplified), print(r.residuals[1].simplified)};
    list.push_back(j);
    all = all && r.holds;
  }
  rep["generators"] = list;
  rep["all_hold"] = all;
  return all ? kPositive : kNegative;
}

void verify_symmetry_text(std::ostream& os, const Json& r) {
  int n = 0, ok = 0;
  for (const auto& g : r["generators"]) {
    ++n;
    const bool h = g["holds"].get<bool>();
    ok += h;
    os << "[" << (h ? "holds" : "FAILS") << "] " << g["generator"].get<std::string>() << "\n";
    if (!h) {
      os << "  residual 1: " << g["residuals"][0].get<std::string>() << "\n";
      os << "  residual 2: " << g["residuals"][1].get<std::string>() << "\n";
    }
  }
  os << (r["all_hold"].get<bool>() ? "PASS" : "FAIL") << ": " << ok << "/" << n << " generators are symmetries\n";
}

Json case_json(const CaseReport& c) {
  Json j;
  j["id"] = c.id;
  j["title"] = c.title;
  Json st = Json::array();
  for (const auto& s : c.stages) st.push_back({{"stage", s.stage}, {"passed", s.passed}, {"detail", s.detail}});
  j["stages"] = st;
  j["trajectory_residual"] = c.trajectory_residual;
  j["complex_route_deviation"] = c.complex_route_deviation;
  j["dimension"] = c.dimension ? Json(*c.dimension) : Json(nullptr);
  j["expected_dimension"] = c.expected_dimension ? Json(*c.expected_dimension) : Json(nullptr);
  j["dimension_inferred"] = c.dimension_inferred;
  j["reduction_chain"] = c.reduction_chain;
  j["passed"] = c.passed();
  return j;
}

int cmd_demo(const std::vector<int>& ids, const Options& o, Json& rep) {
  Json cases = Json::array();
  bool all = true;
  for (int id : ids) {
    CaseReport c = run_example(id, o.seed);
    all = all && c.passed();
    cases.push_back(case_json(c));
  }
  rep["cases"] = cases;
  rep["passed"] = all;
  return all ? kPositive : kNegative;
}

void demo_text(std::ostream& os, const Json& r) {
  for (const auto& c : r["cases"]) {
    os << "example " << c["id"].get<int>() << ": " << c["title"].get<std::string>() << "\n";
    for (const auto& s : c["stages"]) {
      os << "  [" << (s["passed"].get<bool>() ? "pass" : "FAIL") << "] " << s["stage"].get<std::string>() << ": "
         << s["detail"].get<std::string>() << "\n";
    }
    if (!c["dimension"].is_null()) os << "  dimension " << c["dimension"].get<int>() << "\n";
    os << "  " << (c["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex-symmetry analysis of two coupled second-order ODEs"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "machine-readable report");
  app.add_option("--seed", o.seed, "seed for sampled verdicts (default 24301)");
  app.add_option("--tol", o.tol, "relative singular-value cutoff for numeric rank decisions")->check(CLI::PositiveNumber);

  std::string file;
  auto* check = app.add_subcommand("check", "test the complex-correspondence conditions of a system");
  check->add_option("file", file, "problem file")->required();
  auto* classify = app.add_subcommand("classify", "symmetry dimension of y'' = -beta z, z'' = beta y");
  std::string beta_text;
  std::vector<double> interval;
  classify->add_option("--beta", beta_text, "beta as an expression in x");
  classify->add_option("--interval", interval, "lo hi")->expected(2);
  classify->add_option("file", file, "problem file with \"beta\" (and \"interval\")");
  auto* canon = app.add_subcommand("canonicalize", "reduce a linear system to its normal form");
  canon->add_option("file", file, "problem file")->required();
  auto* transform = app.add_subcommand("transform", "push a system through a point transformation");
  transform->add_option("file", file, "problem file")->required();
  auto* vsym = app.add_subcommand("verify-symmetry", "check listed generators against a system");
  vsym->add_option("file", file, "problem file")->required();
  auto* demo = app.add_subcommand("demo", "run a worked example end to end");
  std::string which = "all";
  demo->add_option("id", which, "1, 2, 3, 4 or all");
  for (auto* s : {check, classify, canon, transform, vsym, demo}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  set_default_sample_seed(o.seed);

  std::string name = app.get_subcommands().front()->get_name();
  Json rep = header(name);
  int code = kInputError;
  try {
    if (check->parsed()) {
      rep["file"] = file;
      code = cmd_check(load_problem(file), rep);
    } else if (classify->parsed()) {
      VarContext ctx = VarContext::standard();
      std::optional<Expr> beta;
      std::optional<std::pair<double, double>> iv;
      if (!file.empty()) {
        Problem p = load_problem(file);
        ctx = p.ctx;
        beta = p.beta;
        iv = p.interval;
      }
      if (!beta_text.empty()) {
        try {
          beta = parse(beta_text, ctx);
        } catch (const std::exception& e) {
          throw InputError(std::string("--beta: ") + e.what());
        }
      }
      if (!interval.empty()) iv = parse_interval(Json(interval));
      if (!beta) throw InputError("classify needs --beta or a problem file with \"beta\"");
      code = cmd_classify(*beta, iv.value_or(std::pair<double, double>{1.0, 2.0}), ctx, o, rep);
    } else if (canon->parsed()) {
      rep["file"] = file;
      code = cmd_canonicalize(load_problem(file), rep);
    } else if (transform->parsed()) {
      rep["file"] = file;
      code = cmd_transform(load_problem(file), rep);
    } else if (vsym->parsed()) {
      rep["file"] = file;
      code = cmd_verify_symmetry(load_problem(file), rep);
    } else if (demo->parsed()) {
      std::vector<int> ids;
      if (which == "all") {
        ids = {1, 2, 3, 4};
      } else if (which.size() == 1 && which[0] >= '1' && which[0] <= '4') {
        ids = {which[0] - '0'};
      } else {
        throw InputError("demo id must be 1, 2, 3, 4 or all");
      }
      code = cmd_demo(ids, o, rep);
    }
  } catch (const InputError& e) {
    if (o.json) {
      Json err = header(name);
      err["error"] = e.what();
      std::cout << err.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kInputError;
  } catch (const std::exception& e) {
    // anything else escaping a command is rejected input the checks above did not anticipate
    if (o.json) {
      Json err = header(name);
      err["error"] = e.what();
      std::cout << err.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kInputError;
  }
  rep["exit_code"] = code;

  if (o.json) {
    std::cout << rep.dump(2) << "\n";
  } else if (name == "check") {
    check_text(std::cout, rep);
  } else if (name == "classify") {
    classify_text(std::cout, rep);
  } else if (name == "canonicalize") {
    canonicalize_text(std::cout, rep);
  } else if (name == "transform") {
    transform_text(std::cout, rep);
  } else if (name == "verify-symmetry") {
    verify_symmetry_text(std::cout, rep);
  } else {
    demo_text(std::cout, rep);
  }
  return code;
}

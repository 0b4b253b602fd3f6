#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "symmkit/ansatz.hpp"
#include "symmkit/classify.hpp"
#include "symmkit/detsys.hpp"
#include "symmkit/lie.hpp"
#include "symmkit/transform.hpp"

namespace symmkit::cli {

namespace {

using nlohmann::json;

std::string where(const std::string& path, int line) {
  std::string name = std::filesystem::path(path).filename().string();
  return line > 0 ? name + ":" + std::to_string(line) : name;
}

Report start(const RunConfig& cfg) {
  Report r;
  r.command = cfg.command + (cfg.subcommand.empty() ? "" : " " + cfg.subcommand);
  r.input = cfg.input;
  return r;
}

json strings(const std::vector<Expr>& v) {
  json j = json::array();
  for (const auto& e : v) j.push_back(e.str());
  return j;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string vec_str(const ExprVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + ")";
}

// unknown atoms shared by two expressions, used to point at the nearest generated constraint
std::size_t overlap(const Expr& a, const Expr& b, const ProblemSpec& spec) {
  std::set<Expr, ExprLess> sa;
  for (const auto& x : atoms(a))
    if (spec.is_unknown(x)) sa.insert(x);
  std::size_t n = 0;
  std::set<Expr, ExprLess> seen;
  for (const auto& x : atoms(b))
    if (spec.is_unknown(x) && sa.count(x) && seen.insert(x).second) ++n;
  return n;
}

void print_residuals(Report& rep, const std::vector<Residual>& res) {
  for (const auto& r : res) rep.line("      " + r.source + " [" + r.monomial.str() + "]: " + r.expr.str());
}

json residuals_json(const std::vector<Residual>& res) {
  json j = json::array();
  for (const auto& r : res) j.push_back({{"source", r.source}, {"monomial", r.monomial.str()}, {"expr", r.expr.str()}});
  return j;
}

void report_solution(Report& rep, const SolutionSpace& sol, const std::string& input) {
  rep.line("dimension " + std::to_string(sol.dimension()) + " at degree " + std::to_string(sol.degree) + " (" +
           std::to_string(sol.equations) + " linear equations in " + std::to_string(sol.constants.size()) + " constants)");
  json basis = json::array();
  for (std::size_t i = 0; i < sol.basis.size(); ++i) {
    rep.line("  X" + std::to_string(i + 1) + " = " + sol.basis[i].str() + (sol.verified[i] ? "" : "   (fails verification)"));
    basis.push_back(field_json(sol.basis[i]));
  }
  if (sol.probe_dimension)
    rep.line("degree " + std::to_string(sol.degree + 1) + " probe: dimension " + std::to_string(*sol.probe_dimension) +
             (sol.stable() ? " (no change)" : " (changed)"));
  if (!sol.unresolved.empty()) {
    std::string s = "constants absent from every equation:";
    for (const auto& c : sol.unresolved) s += " " + c.unknown + "[" + c.monomial.str() + "]";
    rep.line(s);
  }
  rep.results["dimension"] = sol.dimension();
  rep.results["degree"] = sol.degree;
  rep.results["basis"] = basis;
  rep.results["probe_dimension"] = sol.probe_dimension ? json(*sol.probe_dimension) : json(nullptr);
  for (const auto& w : sol.warnings) rep.finding("solver", where(input, 0), w);
}

void report_candidates(Report& rep, const ProblemSpec& spec) {
  if (spec.candidates.empty()) return;
  rep.line();
  rep.line("candidate generators:");
  json cands = json::array();
  for (const auto& c : spec.candidates) {
    auto res = verify(c.field, spec);
    rep.line("  " + pad(c.name, 4) + " " + c.field.str() + (res.empty() ? "   verified" : "   FAILS (" + std::to_string(res.size()) + " residuals)"));
    print_residuals(rep, res);
    cands.push_back({{"name", c.name}, {"field", field_json(c.field)}, {"verified", res.empty()}, {"residuals", residuals_json(res)}});
    if (!res.empty())
      rep.finding("verify", where(spec.source, 0), c.name + " = " + c.field.str() + " leaves " + std::to_string(res.size()) + " nonzero residuals");
  }
  rep.results["candidates"] = cands;
}

}  // namespace

Report run_determining(const RunConfig& cfg) {
  Report rep = start(cfg);
  ProblemSpec spec = load_problem(cfg);
  DeterminingSystem sys = determining_system(spec, cfg.split_arbitrary);
  rep.line("determining system of " + where(cfg.input, 0) + ": " + std::to_string(sys.size()) + " constraints" +
           (cfg.split_arbitrary ? " (split by the arbitrary elements, generic case)" : ""));
  json cons = json::array();
  for (std::size_t i = 0; i < sys.constraints.size(); ++i) {
    const auto& c = sys.constraints[i];
    std::string from;
    for (const auto& o : c.origins) from += (from.empty() ? "" : ", ") + o.monomial.str();
    rep.line("  " + pad(std::to_string(i + 1) + ")", 4) + c.expr.str() + " = 0" + "    [" + from + "]");
    json origins = json::array();
    for (const auto& o : c.origins) origins.push_back({{"monomial", o.monomial.str()}, {"scale", o.scale.get_str()}, {"source", o.source}});
    cons.push_back({{"expr", c.expr.str()}, {"origins", origins}});
  }
  rep.results["constraints"] = cons;
  if (spec.equivalence()) {
    auto aux = auxiliary_conditions(general_field(spec), spec);
    rep.line();
    rep.line("auxiliary conditions (frozen directions):");
    json a = json::array();
    for (const auto& [name, e] : aux) {
      rep.line("  " + name + ": " + e.str() + " = 0");
      a.push_back({{"name", name}, {"expr", e.str()}});
    }
    rep.results["auxiliary"] = a;
  }
  if (cfg.fixture) {
    auto entries = load_fixture_file(*cfg.fixture, spec);
    auto diff = diff_fixture(sys.expressions(), entries, spec);
    rep.line();
    rep.line("fixture " + where(*cfg.fixture, 0) + ":");
    json fx = json::array();
    for (const auto& f : diff.fixture) {
      rep.line("  line " + pad(std::to_string(f.line), 3) + (f.implied ? "implied     " : "NOT implied ") + f.text);
      json entry = {{"line", f.line}, {"text", f.text}, {"expr", f.expr.str()}, {"implied", f.implied}};
      if (!f.implied) {
        std::size_t best = 0, score = 0;
        for (std::size_t g = 0; g < sys.constraints.size(); ++g) {
          std::size_t o = overlap(f.expr, sys.constraints[g].expr, spec);
          if (o > score) score = o, best = g;
        }
        std::string msg = "'" + f.text + "' is not implied by the generated system";
        if (score > 0) {
          msg += "; nearest generated constraint: " + sys.constraints[best].expr.str() + " = 0";
          entry["nearest"] = sys.constraints[best].expr.str();
        }
        rep.finding("fixture-mismatch", where(*cfg.fixture, f.line), msg);
      }
      fx.push_back(entry);
    }
    json gen = json::array();
    for (std::size_t i = 0; i < diff.generated.size(); ++i) {
      gen.push_back({{"expr", diff.generated[i].expr.str()}, {"implied", diff.generated[i].implied}});
      if (!diff.generated[i].implied) {
        rep.line("  generated " + std::to_string(i + 1) + " is not implied by the fixture: " + diff.generated[i].expr.str());
        rep.finding("fixture-mismatch", where(*cfg.fixture, 0),
                    "generated constraint " + diff.generated[i].expr.str() + " = 0 is not implied by the fixture");
      }
    }
    rep.line(diff.equivalent() ? "  the two systems span the same space" : "  the two systems differ");
    rep.results["fixture"] = fx;
    rep.results["generated_vs_fixture"] = gen;
    rep.results["equivalent"] = diff.equivalent();
  }
  return rep;
}

Report run_symmetries(const RunConfig& cfg) {
  Report rep = start(cfg);
  ProblemSpec spec = load_problem(cfg);
  if (spec.equivalence()) throw UsageError("symmetries expects a base-mode problem; use 'equivalence'");
  SolutionSpace sol = cfg.unrestricted ? unrestricted_point_check(spec, cfg.degree, cfg.probe) : solve(spec, cfg.degree, cfg.probe);
  rep.line(std::string(cfg.unrestricted ? "unrestricted point symmetries" : "point symmetries") + " of " + where(cfg.input, 0));
  report_solution(rep, sol, cfg.input);
  rep.results["unrestricted"] = cfg.unrestricted;
  report_candidates(rep, spec);
  return rep;
}

Report run_equivalence(const RunConfig& cfg) {
  Report rep = start(cfg);
  ProblemSpec spec = load_problem(cfg);
  if (!spec.equivalence()) throw UsageError("equivalence expects a problem with 'mode equivalence'");
  DeterminingSystem sys = determining_system(spec, false);
  auto aux = auxiliary_conditions(general_field(spec), spec);
  rep.line("equivalence determining system of " + where(cfg.input, 0) + ": " + std::to_string(sys.size()) + " constraints, " +
           std::to_string(aux.size()) + " auxiliary conditions");
  for (const auto& [name, e] : aux) rep.line("  " + name + ": " + e.str() + " = 0");
  SolutionSpace sol = solve(spec, cfg.degree, cfg.probe);
  report_solution(rep, sol, cfg.input);
  report_candidates(rep, spec);
  return rep;
}

// canonical form of sum c_k*Y_k, for the JSON report
static std::string combination_json(const LieAlgebra& alg, const ExprVector& coeffs) {
  Expr acc(0);
  for (std::size_t k = 0; k < coeffs.size() && k < alg.dim(); ++k) acc += coeffs[k] * Expr::symbol(alg.names()[k]);
  return acc.str();
}

Report run_algebra(const RunConfig& cfg) {
  Report rep = start(cfg);
  AlgebraFile file = load_algebra(cfg.input, cfg);
  LieAlgebra alg = file.algebra();
  const auto& names = alg.names();
  std::size_t n = alg.dim();
  if (cfg.subcommand == "table" || cfg.subcommand == "adjoint") {
    bool table = cfg.subcommand == "table";
    Expr s = Expr::symbol("s");
    std::vector<std::vector<std::string>> cells(n, std::vector<std::string>(n)), canon = cells;
    std::size_t w = 4;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ExprVector v = table ? to_exprs(alg.bracket_coords(i, j)) : alg.adjoint(i, j, s);
        cells[i][j] = alg.combination(v);
        canon[i][j] = combination_json(alg, v);
        w = std::max(w, cells[i][j].size() + 2);
      }
    rep.line(table ? "commutators [row, column]:" : "Ad(exp(s*row)) column:");
    std::string head = pad(table ? "[,]" : "Ad", 6);
    for (const auto& nm : names) head += pad(nm, w);
    rep.line(head);
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      std::string line = pad(names[i], 6);
      for (std::size_t j = 0; j < n; ++j) line += pad(cells[i][j], w);
      while (!line.empty() && line.back() == ' ') line.pop_back();
      rep.line(line);
      rows.push_back(canon[i]);
    }
    rep.results[table ? "table" : "adjoint"] = rows;
    rep.results["names"] = names;
    if (table && !alg.jacobi()) rep.finding("jacobi", where(cfg.input, 0), "the generators violate the Jacobi identity");
  } else if (cfg.subcommand == "killing") {
    ExprVector a = symbolic_vector(file.coefficient_prefix, n), b = symbolic_vector(file.second_prefix, n);
    Expr K = alg.killing_form(a, b);
    rep.line("K = " + K.str());
    RationalMatrix km = alg.killing_matrix();
    json m = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      std::string line = "  ";
      json row = json::array();
      for (std::size_t j = 0; j < n; ++j) {
        line += pad(km(i, j).get_str(), 5);
        row.push_back(km(i, j).get_str());
      }
      rep.line(line);
      m.push_back(row);
    }
    bool semi = alg.is_semisimple();
    rep.line(std::string("degenerate: ") + (semi ? "no" : "yes") + ", semisimple: " + (semi ? "yes" : "no"));
    rep.results["killing_form"] = K.str();
    rep.results["matrix"] = m;
    rep.results["semisimple"] = semi;
  } else {
    auto series = alg.derived_series();
    json levels = json::array();
    for (std::size_t k = 0; k < series.size(); ++k) {
      std::vector<std::string> span, canon;
      for (const auto& v : series[k]) {
        span.push_back(alg.combination(to_exprs(v)));
        canon.push_back(combination_json(alg, to_exprs(v)));
      }
      std::string s = "g(" + std::to_string(k) + ") = span{";
      for (std::size_t i = 0; i < span.size(); ++i) s += (i ? ", " : "") + span[i];
      rep.line(s + "}" + (span.empty() ? "  (zero)" : "") + "   dim " + std::to_string(span.size()));
      levels.push_back(canon);
    }
    rep.line(std::string("solvable: ") + (alg.is_solvable() ? "yes" : "no") + ", semisimple: " + (alg.is_semisimple() ? "yes" : "no"));
    rep.results["series"] = levels;
    rep.results["solvable"] = alg.is_solvable();
    rep.results["semisimple"] = alg.is_semisimple();
  }
  return rep;
}

Report run_optimal(const RunConfig& cfg) {
  Report rep = start(cfg);
  AlgebraFile file = load_algebra(cfg.input, cfg);
  LieAlgebra alg = file.algebra();
  rep.line("representatives:");
  for (const auto& r : file.representatives) rep.line("  " + r.name + " = " + alg.combination(r.coeffs));
  rep.line();
  json cases = json::array();
  for (const auto& c : file.cases) {
    CaseReport cr = run_case(file, alg, c);
    std::string steps;
    for (const auto& st : c.steps) steps += (steps.empty() ? "" : ", ") + st.str(alg);
    rep.line("case " + c.label + ": " + vec_str(c.start) + (steps.empty() ? "" : " -> " + steps) + " -> " + vec_str(cr.result));
    json j = {{"label", c.label}, {"start", strings(c.start)}, {"result", strings(cr.result)}, {"matches", cr.matches}};
    if (cr.residual) {
      rep.line(std::string("    expected ") + vec_str(*c.expect) + ": " + (cr.matches ? "ok" : "residual " + vec_str(*cr.residual)));
      j["residual"] = strings(*cr.residual);
      if (!cr.matches)
        rep.finding("reduction-residual", where(cfg.input, c.line),
                    "case " + c.label + " leaves residual " + vec_str(*cr.residual) + " instead of " + vec_str(*c.expect));
    }
    if (cr.yields_ok) {
      rep.line("    yields " + c.yields + ": " + (*cr.yields_ok ? "ok" : "no"));
      j["yields"] = c.yields;
      j["yields_ok"] = *cr.yields_ok;
      if (!*cr.yields_ok)
        rep.finding("reduction-target", where(cfg.input, c.line), "case " + c.label + " does not produce " + c.yields);
    }
    if (cr.fixed_point) {
      rep.line("    " + c.yields + " is " + (*cr.fixed_point ? "a fixed point of these steps" : "moved: " + cr.fixed_point_note));
      j["fixed_point"] = *cr.fixed_point;
      if (!*cr.fixed_point) rep.finding("fixed-point", where(cfg.input, c.line), cr.fixed_point_note);
    } else if (!cr.fixed_point_note.empty()) {
      rep.line("    " + cr.fixed_point_note);
    }
    cases.push_back(j);
  }
  rep.results["cases"] = cases;

  json searches = json::array();
  for (const auto& sr : file.searches) {
    SearchResult res = search_reduction(alg, sr.start, sr.target, sr.nonzero, sr.depth);
    rep.line();
    rep.line("search " + sr.label + ": " + vec_str(sr.start) + " towards " + vec_str(sr.target) + ", " + std::to_string(res.tried) +
             " Ad sequences of length <= " + std::to_string(sr.depth));
    for (const auto& [seq, comp] : res.obstructions) {
      std::string s;
      for (auto g : seq) s += (s.empty() ? "" : " ") + alg.names()[g];
      if (seq.size() <= 1) rep.line("    [" + s + "] coefficient of " + alg.names()[comp] + " cannot vanish");
    }
    if (res.unreachable()) {
      rep.line("    every sequence is obstructed");
      rep.finding("unreachable", where(cfg.input, sr.line),
                  "no sequence of at most " + std::to_string(sr.depth) + " adjoint steps takes " + vec_str(sr.start) + " to " +
                      vec_str(sr.target) + ": a coefficient that must vanish stays a nonzero multiple of a nonzero parameter");
    } else {
      rep.line("    " + std::to_string(res.open.size()) + " sequences are not obstructed");
    }
    searches.push_back({{"label", sr.label}, {"tried", res.tried}, {"open", res.open.size()}, {"unreachable", res.unreachable()}});
  }
  rep.results["searches"] = searches;

  json params = json::array();
  bool header = false;
  for (const auto& p : parameter_invariance(file, alg)) {
    if (!p.parameter_changes) continue;
    if (!header) {
      rep.line();
      rep.line("parameters that adjoint maps can rescale:");
      header = true;
    }
    std::string msg = "Ad(exp(s*" + p.generator + ")) sends " + p.representative + " to " + alg.combination(p.moved) + " (same form)";
    rep.line("  " + msg);
    params.push_back({{"representative", p.representative}, {"generator", p.generator}, {"moved", strings(p.moved)}});
    const Representative* r = file.representative(p.representative);
    rep.finding("normalizable-parameter", where(cfg.input, r ? r->line : 0), msg);
  }
  rep.results["parameters"] = params;
  return rep;
}

Report run_classify(const RunConfig& cfg) {
  Report rep = start(cfg);
  ProblemSpec spec = load_problem(cfg);
  if (spec.equivalence()) throw UsageError("classify expects the base-mode problem");
  std::string alg_path = cfg.algebra ? *cfg.algebra : default_algebra_path(cfg.input);
  AlgebraFile file = load_algebra(alg_path, cfg);
  Classification cl = classify(spec, file);
  Assumptions assume;
  assume.positive.insert(cfg.assume_positive.begin(), cfg.assume_positive.end());

  if (!cl.excluded.empty()) {
    std::string s = "excluded (zero projection on";
    for (const auto& c : file.projection) s += " " + c;
    s += "):";
    for (const auto& e : cl.excluded) s += " " + e;
    rep.line(s);
  }
  rep.line();
  rep.line(pad("N", 3) + pad("Z", 48) + pad("Invariant", 12) + pad("Equation", 40) + "Additional operator");
  json rows = json::array();
  std::size_t k = 0;
  std::vector<const ClassificationRow*> feasible;
  for (const auto& row : cl.rows) {
    json j;
    j["sources"] = row.sources;
    j["Z"] = field_json(row.Z);
    j["invariants"] = strings(row.invariants);
    j["rank"] = row.rank;
    j["feasible"] = row.feasible;
    j["reason"] = row.reason;
    json adds = json::array();
    for (const auto& a : row.additional)
      adds.push_back({{"source", a.source}, {"field", field_json(a.field)}, {"verified", a.verified}, {"residuals", residuals_json(a.residuals)}});
    j["additional"] = adds;
    j["notes"] = row.notes;
    if (row.feasible) {
      feasible.push_back(&row);
      ++k;
      std::string eqn = spec.lhs.str() + " = (phi(u)*u_x)_x + " + (row.h_form->kind() == Kind::Sum ? "(" + row.h_form->str() + ")" : row.h_form->str()) + "*u";
      std::string ops;
      for (const auto& a : row.additional) ops += (ops.empty() ? "" : ", ") + a.field.str();
      std::string inv;
      for (const auto& i : row.invariants)
        if (depends_on(i, "u") && !depends_on(i, "E")) inv = i.str();
      rep.line(pad(std::to_string(k), 3) + pad(row.Z.str(), 48) + pad(inv, 12) + pad(eqn, 40) + ops);
      j["E_form"] = row.E_form->str();
      j["h_form"] = row.h_form->str();
      j["constant"] = row.constant;
    }
    rows.push_back(j);
  }
  rep.line();
  for (const auto& row : cl.rows) {
    std::string src;
    for (const auto& s : row.sources) src += (src.empty() ? "" : "/") + s;
    rep.line(src + ": Z = " + row.Z.str());
    std::string inv;
    for (const auto& i : row.invariants) inv += (inv.empty() ? "" : ", ") + i.str();
    rep.line("    invariants {" + inv + "}, gradient rank " + std::to_string(row.rank));
    if (row.feasible) {
      rep.line("    E = " + row.E_form->str() + "(u), h = " + row.h_form->str() + "   (" + row.reason + ")");
      Expr c = Expr::symbol(row.constant);
      Expr hf = *row.h_form;
      // C*x^k with -k a positive integer can also be written (c/x)^(-k)
      if (hf.kind() == Kind::Product && hf.operands().size() == 2 && hf.value() == 1) {
        const Expr& p = hf.operands()[1].kind() == Kind::Power ? hf.operands()[1] : hf.operands()[0];
        if (p.kind() == Kind::Power && p.value() < 0 && p.value().get_den() == 1) {
          Rational m = -p.value();
          Expr alt = pow(c * pow(p.operands().front(), Rational(-1)), m);
          if ((substitute(hf, c, pow(c, m)) - alt).is_zero())
            rep.line("    equivalently h = (" + row.constant + "/" + p.operands().front().str() + ")^" + m.get_str() + " after " +
                     row.constant + " -> " + row.constant + "^" + m.get_str() + " (this form covers only h*x^" + m.get_str() + " >= 0)");
        }
      }
      for (const auto& a : row.additional) {
        rep.line("    X(2) = " + a.field.str() + (a.verified ? "   verified" : "   FAILS") + " on the specialized equation");
        print_residuals(rep, a.residuals);
      }
    } else {
      rep.line("    infeasible: " + row.reason);
    }
    for (const auto& n : row.notes) rep.line("    note: " + n);
    for (const auto& text : cfg.check_invariants) {
      Expr I = file.parse_expr(text, 0, false);
      rep.line("    " + text + (invariant_check(row.Z, I, assume) ? " is" : " is not") + " an invariant" +
               (assume.empty() ? "" : " (positive branch)"));
    }
  }
  // each feasible row's operators checked on the other rows' equations too
  if (feasible.size() > 1) {
    rep.line();
    rep.line("cross-check of additional operators:");
    json cross = json::array();
    for (const auto* eqrow : feasible) {
      std::vector<std::string> params = file.parameters;
      params.push_back(eqrow->constant);
      ProblemSpec special = specialized_equation(spec, *eqrow->h_form, params);
      for (const auto* oprow : feasible)
        for (const auto& a : oprow->additional) {
          bool ok = verify(a.field, special).empty();
          rep.line("  h = " + pad(eqrow->h_form->str(), 12) + pad(a.field.str(), 26) + (ok ? "admitted" : "not admitted"));
          cross.push_back({{"h", eqrow->h_form->str()}, {"field", field_json(a.field)}, {"admitted", ok}});
        }
    }
    rep.results["cross_check"] = cross;
  }
  rep.results["rows"] = rows;
  rep.results["feasible_rows"] = cl.feasible_count();
  rep.results["excluded"] = cl.excluded;
  for (const auto& f : cl.findings) rep.finding("classification", where(alg_path, 0), f);
  return rep;
}

namespace {

Transformation named_transformation(const std::string& name, const AlgebraFile& file, std::optional<VectorField>& generator) {
  if (name == "scaling") return scaling_family(file.coordinates);
  if (name.rfind("reflect:", 0) == 0) {
    std::vector<std::string> flipped;
    std::stringstream ss(name.substr(8));
    for (std::string c; std::getline(ss, c, ',');) {
      if (std::find(file.coordinates.begin(), file.coordinates.end(), c) == file.coordinates.end())
        throw UsageError("'" + c + "' is not a coordinate");
      flipped.push_back(c);
    }
    return reflection(file.coordinates, flipped);
  }
  generator = file.named_field(name);
  if (!generator) throw UsageError("no generator, field or family named '" + name + "'");
  Transformation T = flow(*generator);
  T.name = name;
  return T;
}

void report_pushforward(Report& rep, const std::string& label, const PushforwardReport& p, json& out) {
  rep.line(label + ":");
  if (!p.transformed.empty()) rep.line("    " + p.transformed + "   (coefficients at the old point)");
  rep.line(std::string("    fin form: ") + (p.fin_form ? "yes" : "no"));
  if (p.fin_form) rep.line("    E~ = " + p.E_new.str() + ", h~ = " + p.h_new.str());
  for (const auto& r : p.reasons) rep.line("    " + r);
  out = {{"fin_form", p.fin_form}, {"E", p.E_new.str()}, {"h", p.h_new.str()}, {"transformed", p.transformed}, {"reasons", p.reasons}};
  if (p.E_consistent) out["E_consistent"] = *p.E_consistent;
  if (p.h_consistent) out["h_consistent"] = *p.h_consistent;
}

}  // namespace

Report run_transform(const RunConfig& cfg) {
  Report rep = start(cfg);
  ProblemSpec spec = load_problem(cfg);
  if (spec.equivalence()) throw UsageError("transform expects the base-mode problem");
  std::string alg_path = cfg.algebra ? *cfg.algebra : default_algebra_path(cfg.input);
  AlgebraFile file = load_algebra(alg_path, cfg);
  std::optional<VectorField> gen;
  Transformation T = named_transformation(cfg.target, file, gen);

  rep.line(cfg.target + ": " + T.str());
  for (const auto& n : T.notes) rep.line("  " + n);
  rep.results["map"] = T.str();
  json images = json::object();
  for (std::size_t i = 0; i < T.coords.size(); ++i) images[T.coords[i]] = T.images[i].str();
  rep.results["images"] = images;
  if (gen) {
    VectorField back = generator_of(T);
    bool ok = back == *gen;
    rep.line(std::string("  d/ds at s = 0 recovers ") + gen->str() + ": " + (ok ? "yes" : "no"));
    rep.results["generator"] = field_json(*gen);
    rep.results["generator_recovered"] = ok;
  }
  if (T.has_implicit()) {
    rep.line("  (implicit component: the map is defined by the integral relation above)");
  }

  json fwd;
  PushforwardReport p = pushforward_equation(T, spec);
  rep.line();
  report_pushforward(rep, "pushforward of " + spec.lhs.str() + " = ... under the map", p, fwd);
  rep.results["pushforward"] = fwd;
  if (p.E_consistent && !*p.E_consistent)
    rep.finding("transform", where(alg_path, 0), cfg.target + ": the E-component of the map disagrees with the induced conductivity");
  if (p.h_consistent && !*p.h_consistent)
    rep.finding("transform", where(alg_path, 0), cfg.target + ": the h-component of the map disagrees with the induced source term");
  if (!p.fin_form) rep.finding("transform", where(alg_path, 0), cfg.target + ": the image is not of fin form");

  if (gen && !T.parameter.empty() && !T.has_implicit()) {
    // transported solutions u(T(t), T(x)) solve the equation pulled back by the inverse flow
    Transformation inv = T;
    Expr s = Expr::symbol(T.parameter);
    for (auto& img : inv.images) img = substitute(img, s, -s);
    json back;
    PushforwardReport q = pushforward_equation(inv, spec);
    rep.line();
    report_pushforward(rep, "inverse flow (solution transport " + transport_signature(T, "f", spec) + ")", q, back);
    rep.results["transport"] = back;
    rep.results["transport_signature"] = transport_signature(T, "f", spec);
  }
  return rep;
}

}  // namespace symmkit::cli

#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "symmkit/parse.hpp"

namespace symmkit::cli {

namespace fs = std::filesystem;

void Report::finding(std::string kind, std::string location, std::string message) {
  findings.push_back({std::move(kind), std::move(location), std::move(message)});
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["input"] = input;
  j["results"] = results;
  j["findings"] = nlohmann::json::array();
  for (const auto& f : findings) j["findings"].push_back({{"kind", f.kind}, {"location", f.location}, {"message", f.message}});
  return j;
}

nlohmann::json field_json(const VectorField& v) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < v.coordinates().size(); ++i)
    if (!v.coefficients()[i].is_zero()) j[v.coordinates()[i]] = v.coefficients()[i].str();
  return j;
}

namespace {

std::vector<std::pair<Expr, Expr>> param_rules(const RunConfig& cfg) {
  std::vector<std::pair<Expr, Expr>> rules;
  for (const auto& [name, value] : cfg.params) {
    try {
      rules.emplace_back(Expr::symbol(name), parse(value));
    } catch (const ParseError& e) {
      throw UsageError("--param " + name + ": " + e.detail());
    }
  }
  return rules;
}

ExprVector with_params(const ExprVector& v, const std::vector<std::pair<Expr, Expr>>& rules) {
  ExprVector out;
  for (const auto& e : v) out.push_back(substitute_all(e, rules));
  return out;
}

VectorField with_params(const VectorField& v, const std::vector<std::pair<Expr, Expr>>& rules) {
  return v.map([&](const Expr& e) { return substitute_all(e, rules); });
}

}  // namespace

ProblemSpec load_problem(const RunConfig& cfg) {
  ProblemSpec spec = ProblemSpec::load(cfg.input);
  auto rules = param_rules(cfg);
  if (!rules.empty()) {
    spec.lhs = substitute_all(spec.lhs, rules);
    spec.rhs = substitute_all(spec.rhs, rules);
    for (auto& c : spec.candidates) c.field = with_params(c.field, rules);
  }
  return spec;
}

AlgebraFile load_algebra(const std::string& path, const RunConfig& cfg) {
  AlgebraFile file = load_algebra_file(path);
  auto rules = param_rules(cfg);
  if (rules.empty()) return file;
  for (auto& r : file.representatives) r.coeffs = with_params(r.coeffs, rules);
  for (auto& c : file.cases) {
    c.start = with_params(c.start, rules);
    if (c.expect) c.expect = with_params(*c.expect, rules);
    for (auto& s : c.steps) s.value = substitute_all(s.value, rules);
    for (auto& b : c.bind) b.second = substitute_all(b.second, rules);
  }
  for (auto& s : file.searches) {
    s.start = with_params(s.start, rules);
    s.target = with_params(s.target, rules);
  }
  for (auto& v : file.variants) v.field = with_params(v.field, rules);
  return file;
}

std::string default_algebra_path(const std::string& pde_path) {
  fs::path p(pde_path);
  fs::path candidate = p.parent_path() / "g4.alg";
  return candidate.string();
}

Report dispatch(const RunConfig& cfg) {
  if (cfg.command == "determining") return run_determining(cfg);
  if (cfg.command == "symmetries") return run_symmetries(cfg);
  if (cfg.command == "equivalence") return run_equivalence(cfg);
  if (cfg.command == "algebra") return run_algebra(cfg);
  if (cfg.command == "optimal") return run_optimal(cfg);
  if (cfg.command == "classify") return run_classify(cfg);
  if (cfg.command == "transform") return run_transform(cfg);
  throw UsageError("unknown command '" + cfg.command + "'");
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"symmkit: Lie point symmetries, equivalence algebras and preliminary group classification"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<std::string> params;
  std::string positive;

  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", cfg.json, "emit a JSON report");
    sub->add_option("--param", params, "fix a parameter, e.g. beta=1")->take_all();
    sub->add_option("--assume-positive", positive, "comma-separated symbols taken to be positive");
  };

  auto* det = app.add_subcommand("determining", "print the determining system");
  det->add_option("input", cfg.input, "problem file")->required();
  det->add_option("--fixture", cfg.fixture, "compare against a list of printed equations");
  det->add_flag("--split-arbitrary", cfg.split_arbitrary, "split again by the arbitrary elements (generic case)");
  common(det);

  auto* sym = app.add_subcommand("symmetries", "solve for the point symmetries");
  sym->add_option("input", cfg.input, "problem file")->required();
  sym->add_option("--degree", cfg.degree, "polynomial ansatz degree")->check(CLI::NonNegativeNumber);
  sym->add_flag("--unrestricted", cfg.unrestricted, "let the independents' coefficients depend on u");
  sym->add_flag("!--no-probe", cfg.probe, "skip the degree+1 stability probe");
  common(sym);

  auto* eq = app.add_subcommand("equivalence", "equivalence algebra of a class of equations");
  eq->add_option("input", cfg.input, "problem file in equivalence mode")->required();
  eq->add_option("--degree", cfg.degree, "polynomial ansatz degree")->check(CLI::NonNegativeNumber);
  eq->add_flag("!--no-probe", cfg.probe, "skip the degree+1 stability probe");
  common(eq);

  auto* alg = app.add_subcommand("algebra", "structure of a finite-dimensional algebra");
  alg->add_option("what", cfg.subcommand, "table | adjoint | killing | series")
      ->required()
      ->check(CLI::IsMember({"table", "adjoint", "killing", "series"}));
  alg->add_option("input", cfg.input, "algebra file")->required();
  common(alg);

  auto* opt = app.add_subcommand("optimal", "run the reduction script of an algebra file");
  opt->add_option("input", cfg.input, "algebra file")->required();
  common(opt);

  auto* cls = app.add_subcommand("classify", "preliminary group classification");
  cls->add_option("input", cfg.input, "problem file")->required();
  cls->add_option("--algebra", cfg.algebra, "algebra file (default: g4.alg next to the input)");
  cls->add_option("--invariant", cfg.check_invariants, "also test a candidate invariant against every projection")->take_all();
  common(cls);

  auto* tr = app.add_subcommand("transform", "apply a flow, the scaling family or a reflection");
  tr->add_option("input", cfg.input, "problem file")->required();
  tr->add_option("name", cfg.target, "generator or field name, 'scaling', or 'reflect:t,E,h'")->required();
  tr->add_option("--algebra", cfg.algebra, "algebra file (default: g4.alg next to the input)");
  common(tr);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  for (const auto& p : params) {
    auto eqpos = p.find('=');
    if (eqpos == std::string::npos || eqpos == 0) {
      err << "--param expects name=value, got '" << p << "'\n";
      return 2;
    }
    cfg.params[p.substr(0, eqpos)] = p.substr(eqpos + 1);
  }
  std::stringstream ps(positive);
  for (std::string s; std::getline(ps, s, ',');)
    if (!s.empty()) cfg.assume_positive.push_back(s);

  try {
    Report rep = dispatch(cfg);
    if (cfg.json)
      out << rep.to_json().dump(2) << "\n";
    else {
      out << rep.text;
      if (!rep.findings.empty()) {
        out << "\nfindings:\n";
        for (const auto& f : rep.findings)
          out << "  [" << f.kind << "]" << (f.location.empty() ? "" : " " + f.location) << " " << f.message << "\n";
      }
    }
    return rep.exit_code();
  } catch (const SpecError& e) {
    err << cfg.input << ": " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << cfg.input << ": " << e.detail() << "\n";
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace symmkit::cli

// lubin-tate: compute deformations and stabilizer actions, run the
// verification matrix.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lubin_tate/finite_field.hpp"
#include "lubin_tate/io.hpp"
#include "lubin_tate/verify.hpp"

namespace lt = lubin_tate;
using lt::io::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

// above this the deformation is refused without --allow-heavy
constexpr double kDeformationUnitCap = 1e7;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int p = 3;
  int h = 3;
  int x_order = 0;
  int u_order = 0;
  int xy_order = 0;
  std::string format = "text";
  std::string out;
  std::uint64_t seed = 1;
  bool allow_heavy = false;

  // deformation
  bool closed_form = false;
  // action
  std::string engine = "unfold";
  bool identity = false;
  std::string field_poly;
  std::string g_spec;
  std::string g2_spec;
  // verify
  std::vector<std::string> cases;
  bool all = false;
  int trials = 50;
  unsigned jobs = 0;
  // check
  std::string in;
  // probe
  std::string probe = "boundary";

  lt::DeformationParams params() const {
    lt::DeformationParams d;
    d.p = p;
    d.h = h;
    d.x_order = x_order;
    d.xy_order = xy_order;
    if (u_order > 0) d.u_order = u_order;
    return d;
  }

  json to_json() const {
    json j;
    j["command"] = command;
    j["p"] = p;
    j["h"] = h;
    j["x_order"] = params().effective_x_order();
    j["xy_order"] = params().effective_xy_order();
    j["u_order"] = u_order > 0 ? json(u_order) : json(nullptr);
    j["seed"] = seed;
    j["allow_heavy"] = allow_heavy;
    return j;
  }
};

std::filesystem::path output_path(const std::string& out) {
  std::filesystem::path path(out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("LT_OUTPUT_DIR"); dir && *dir) path = std::filesystem::path(dir) / path;
  }
  return path;
}

void emit(const RunConfig& cfg, const json& results, const std::string& text) {
  std::string body;
  if (cfg.format == "json") {
    json doc;
    doc["config"] = cfg.to_json();
    doc["results"] = results;
    body = doc.dump(2) + "\n";
  } else {
    body = text;
  }
  if (cfg.out.empty()) {
    std::cout << body;
    return;
  }
  const auto path = output_path(cfg.out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << body;
  std::cerr << "wrote " << path.string() << "\n";
}

void validate(const RunConfig& cfg) {
  if (cfg.format != "text" && cfg.format != "json") throw ConfigError("--format must be text or json");
  cfg.params().validate();
}

// deformation

int cmd_deformation(const RunConfig& cfg) {
  validate(cfg);
  const lt::DeformationParams params = cfg.params();
  if (cfg.closed_form && cfg.h <= 2) throw ConfigError("the closed form of F needs height h > 2");
  const double units = lt::verify::closed_form_units(cfg.p, cfg.h);
  if (!cfg.allow_heavy && units > kDeformationUnitCap) {
    throw ConfigError("truncation too large (estimated " + std::to_string(static_cast<long long>(units)) +
                      " term operations); pass --allow-heavy");
  }
  const lt::FGLData fgl = lt::universal_F(params);
  const lt::RingContext qctx = params.rational_context();
  const lt::XSeriesQ log = lt::log_series(fgl.log_coeffs, qctx, params.effective_x_order(), cfg.p);
  const lt::XSeriesFp pser = lt::p_series(fgl.F, fgl.F.order());

  json results;
  json L = json::array();
  for (const auto& c : fgl.log_coeffs) L.push_back(lt::io::to_json(c));
  results["log_coefficients"] = L;
  results["log"] = lt::io::to_json(log);
  results["exp"] = lt::io::to_json(fgl.exp);
  results["F_rational"] = lt::io::to_json(fgl.F_rational);
  results["F"] = lt::io::to_json(fgl.F);
  json support = json::array();
  for (const auto& [d, c] : fgl.F.terms()) support.push_back({d.first, d.second});
  results["F_support"] = support;
  json psupport = json::array();
  for (const auto& [n, c] : pser.terms()) psupport.push_back(n);
  results["p_series"] = lt::io::to_json(pser);
  results["p_series_support"] = psupport;

  std::ostringstream text;
  text << "deformation p=" << cfg.p << " h=" << cfg.h << " truncated at total degree " << fgl.F.order() << "\n";
  for (std::size_t i = 0; i < fgl.log_coeffs.size(); ++i) {
    text << "L_" << i << " = " << lt::to_string(fgl.log_coeffs[i]) << "\n";
  }
  text << "F mod p (" << fgl.F.terms().size() << " terms) = " << lt::to_string(fgl.F) << "\n";
  text << "[p](x) mod p = " << lt::to_string(pser) << "\n";

  int code = kExitPass;
  if (cfg.closed_form) {
    const lt::XYSeriesQ closed = lt::f_closed_form(params);
    const bool equal = closed == fgl.F_rational;
    results["closed_form"] = lt::io::to_json(closed);
    results["closed_form_matches"] = equal;
    text << "closed form " << (equal ? "matches" : "DIFFERS FROM") << " exp(log x + log y)\n";
    if (!equal) code = kExitFail;
  }
  emit(cfg, results, text.str());
  return code;
}

// action

struct ConcreteSpec {
  std::shared_ptr<const lt::FpnField> field;
  std::vector<lt::FpnElem> values;  // g_0..g_h
};

std::vector<lt::FpnElem> parse_g_list(const std::shared_ptr<const lt::FpnField>& field, const std::string& spec, int h) {
  std::vector<lt::FpnElem> v;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(lt::FpnElem::parse(field, item));
  if (v.empty() || static_cast<int>(v.size()) > h + 1) {
    throw ConfigError("--g needs between 1 and h+1 comma-separated coefficients");
  }
  while (static_cast<int>(v.size()) < h + 1) v.push_back(lt::FpnElem::constant(field, 0));
  if (!(v[0] == lt::FpnElem::constant(field, 1))) throw ConfigError("only normalized elements (g_0 = 1) are supported");
  return v;
}

std::shared_ptr<const lt::FpnField> parse_field(const RunConfig& cfg) {
  if (cfg.field_poly.empty()) throw ConfigError("concrete elements need --field-poly");
  auto coeffs = lt::FpnField::parse_poly(cfg.field_poly, cfg.p, "a");
  if (static_cast<int>(coeffs.size()) != cfg.h + 1 || coeffs.back() != 1) {
    throw ConfigError("--field-poly must be monic of degree h in the generator a");
  }
  return std::make_shared<const lt::FpnField>(cfg.p, coeffs, "a");
}

lt::ActionData truncated_to(lt::ActionData d, int u_order) {
  if (u_order <= 0) return d;
  for (std::size_t k = 0; k < d.t.size(); ++k) {
    d.t[k] = lt::truncate_u(d.t[k], u_order);
    d.accuracy[k] = std::min(d.accuracy[k], u_order);
  }
  return d;
}

std::string action_text(const std::string& title, const lt::ActionData& d) {
  std::ostringstream os;
  os << title << "\n";
  for (std::size_t k = 0; k < d.t.size(); ++k) {
    os << "  t_" << k << " mod u^" << d.accuracy[k] << " = " << lt::to_string(d.t[k]) << "\n";
  }
  return os.str();
}

json concrete_json(const lt::ActionData& d, const ConcreteSpec& c) {
  json out = json::array();
  for (std::size_t k = 0; k < d.t.size(); ++k) {
    const lt::FpnUSeries s = lt::evaluate(d.t[k], c.values, d.accuracy[k]);
    json coeffs = json::array();
    for (const auto& e : s.c) coeffs.push_back(e.str());
    out.push_back({{"index", k}, {"accuracy", d.accuracy[k]}, {"u_coefficients", coeffs}});
  }
  return out;
}

int cmd_action(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.engine != "unfold" && cfg.engine != "solve" && cfg.engine != "both") {
    throw ConfigError("--engine must be unfold, solve or both");
  }
  std::optional<ConcreteSpec> concrete;
  if (!cfg.g_spec.empty()) {
    if (cfg.identity) throw ConfigError("--identity and --g are exclusive");
    ConcreteSpec c;
    c.field = parse_field(cfg);
    c.values = parse_g_list(c.field, cfg.g_spec, cfg.h);
    concrete = std::move(c);
  }
  const bool wants_solver = cfg.engine != "unfold";
  if (wants_solver && !cfg.allow_heavy && lt::verify::solver_units(cfg.p, cfg.h) > lt::verify::kHeavyUnits) {
    throw ConfigError("the functional-equation solver is heavy at this (p, h); pass --allow-heavy");
  }

  const lt::RingContext ctx = lt::action_context(cfg.p, cfg.h);
  const lt::SymbolicElement g = cfg.identity ? lt::identity_element(ctx) : lt::symbolic_element(ctx);
  const std::string g_name = cfg.identity ? "identity" : "symbolic";

  std::optional<lt::ActionData> unfolded, solved;
  json results;
  results["g"] = concrete ? "concrete" : g_name;
  std::string text;
  if (cfg.engine != "solve") {
    const lt::UnfoldResult r = lt::unfold_action(g, ctx);
    unfolded = truncated_to(r.data, cfg.u_order);
    results["unfold_iterations"] = r.iterations;
    text += action_text("recursion engine (" + std::to_string(r.iterations) + " passes)", *unfolded);
  }
  if (wants_solver) {
    const lt::SolveResult r = lt::solve_action(g, lt::deformation_mod_p(ctx, cfg.xy_order));
    solved = truncated_to(r.data, cfg.u_order);
    results["solve_iterations"] = r.iterations;
    text += action_text("functional-equation solver (" + std::to_string(r.iterations) + " passes)", *solved);
  }
  auto put = [&](const std::string& key, const lt::ActionData& d) {
    results[key] = lt::io::to_json(d);
    if (concrete) results[key + "_concrete"] = concrete_json(d, *concrete);
  };
  if (cfg.engine == "both") {
    put("unfold", *unfolded);
    put("solve", *solved);
    json diff = json::array();
    for (int k = 0; k < cfg.h; ++k) {
      if (auto at = lt::first_difference(unfolded->t[k], solved->t[k])) {
        diff.push_back({{"index", k}, {"first_u_degree", *at}});
        text += "  t_" + std::to_string(k) + " engines differ at u^" + std::to_string(*at) + "\n";
      }
    }
    if (diff.empty()) text += "engines agree on t_0..t_" + std::to_string(cfg.h - 1) + "\n";
    results["diff"] = diff;
  } else {
    put("action", unfolded ? *unfolded : *solved);
  }
  if (concrete) {
    const auto& d = unfolded ? *unfolded : *solved;
    for (const auto& entry : concrete_json(d, *concrete)) {
      text += "  t_" + std::to_string(entry["index"].get<int>()) + " at g: " + entry["u_coefficients"].dump() + "\n";
    }
  }
  emit(cfg, results, text);
  return kExitPass;
}

// verify

int cmd_verify(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.all == !cfg.cases.empty()) throw ConfigError("give exactly one of --all or --case");
  std::vector<const lt::verify::CaseSpec*> selected;
  if (cfg.all) {
    for (const auto& c : lt::verify::case_table()) selected.push_back(&c);
  } else {
    for (const auto& tag : cfg.cases) {
      const auto* c = lt::verify::find_case(tag);
      if (!c) throw ConfigError("unknown case '" + tag + "'");
      selected.push_back(c);
    }
  }
  lt::verify::CaseConfig cc;
  cc.p = cfg.p;
  cc.h = cfg.h;
  cc.seed = cfg.seed;
  cc.trials = cfg.trials;
  cc.allow_heavy = cfg.allow_heavy;
  std::vector<std::pair<const lt::verify::CaseSpec*, lt::verify::CaseConfig>> jobs;
  for (const auto* c : selected) jobs.emplace_back(c, cc);
  const unsigned workers = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  const auto report = lt::verify::run_all(jobs, workers);

  json results = json::array();
  std::ostringstream text;
  int failures = 0;
  for (const auto& r : report) {
    if (r.status == lt::verify::Status::fail) ++failures;
    results.push_back({{"id", r.id},
                       {"tag", r.tag},
                       {"p", r.p},
                       {"h", r.h},
                       {"status", lt::verify::status_name(r.status)},
                       {"witness", r.witness.empty() ? json(nullptr) : json(r.witness)},
                       {"detail", r.detail},
                       {"seconds", r.seconds}});
    text << r.id << "  " << lt::verify::status_name(r.status);
    char secs[32];
    std::snprintf(secs, sizeof secs, "  %.3fs", r.seconds);
    text << secs;
    if (!r.witness.empty()) text << "  witness: " << r.witness;
    if (!r.detail.empty()) text << "  (" << r.detail << ")";
    text << "\n";
  }
  text << report.size() - failures << "/" << report.size() << " not failed\n";
  emit(cfg, results, text.str());
  return failures ? kExitFail : kExitPass;
}

// check

int cmd_check(const RunConfig& cfg) {
  if (cfg.in.empty()) throw ConfigError("check needs --in");
  std::ifstream f(cfg.in);
  if (!f) throw ConfigError("cannot read " + cfg.in);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw lt::ParseError(std::string("not JSON: ") + e.what());
  }
  const json& res = doc.contains("results") ? doc["results"] : doc;
  const std::string g_kind = res.value("g", std::string("symbolic"));
  if (g_kind == "concrete") throw ConfigError("check supports symbolic or identity dumps");
  std::vector<std::pair<std::string, lt::ActionData>> datasets;
  for (const char* key : {"action", "unfold", "solve"}) {
    if (res.contains(key)) datasets.emplace_back(key, lt::io::action_from_json(res[key]));
  }
  if (datasets.empty()) throw lt::ParseError("no action data in " + cfg.in);

  json results = json::array();
  std::ostringstream text;
  bool ok = true;
  for (const auto& [key, d] : datasets) {
    const lt::SymbolicElement g = g_kind == "identity" ? lt::identity_element(d.ctx) : lt::symbolic_element(d.ctx);
    lt::ResidualReport rep;
    try {
      rep = lt::residual(d, g, lt::deformation_mod_p(d.ctx, cfg.xy_order));
    } catch (const lt::DomainError& e) {
      ok = false;
      results.push_back({{"dataset", key}, {"status", "fail"}, {"reason", e.what()}});
      text << key << ": fail  " << e.what() << "\n";
      continue;
    }
    ok = ok && rep.ok();
    results.push_back({{"dataset", key},
                       {"status", rep.ok() ? "pass" : "fail"},
                       {"violations", lt::io::to_json(rep.violations, d.ctx.h)}});
    text << key << ": " << (rep.ok() ? "pass" : "fail");
    if (!rep.ok()) {
      const auto& v = rep.violations.front();
      text << "  first violation at x^" << v.x_degree << " u^" << v.u_degree;
    }
    text << "\n";
  }
  emit(cfg, results, text.str());
  return ok ? kExitPass : kExitFail;
}

// probe

std::string degree_text(std::optional<int> v) { return v ? "u^" + std::to_string(*v) : "none"; }

int cmd_probe(const RunConfig& cfg) {
  validate(cfg);
  json results;
  std::ostringstream text;
  if (cfg.probe == "boundary") {
    if (cfg.h <= 2) throw ConfigError("the boundary probe needs h > 2");
    if (!cfg.allow_heavy && lt::verify::solver_units(cfg.p, cfg.h) > lt::verify::kHeavyUnits) {
      throw ConfigError("the boundary probe solves the functional equation; pass --allow-heavy");
    }
    const lt::RingContext ctx = lt::action_context(cfg.p, cfg.h);
    const lt::XYSeriesFp F = lt::deformation_mod_p(ctx, cfg.xy_order);
    const lt::SolveResult s = lt::solve_action(lt::symbolic_element(ctx), F);
    const lt::BoundaryProbe b = lt::boundary_probe(s, F);
    const long q1 = lt::ipow(cfg.p, cfg.h - 1);
    auto opt = [](std::optional<int> v) { return v ? json(*v) : json(nullptr); };
    results = {{"x_degree", lt::ipow(cfg.p, 2 * cfg.h - 1)},
               {"u_order", b.u_order},
               {"rhs_vs_formula_first_diff", opt(b.rhs_vs_formula)},
               {"lhs_vs_t_first_diff", opt(b.lhs_vs_t)},
               {"t_vs_recursion_first_diff", opt(b.t_vs_recursion)},
               {"candidate_moduli", {q1 - 1, q1 + 1}}};
    text << "coefficient of x^" << lt::ipow(cfg.p, 2 * cfg.h - 1) << ", computed modulo u^" << b.u_order << "\n"
         << "  right side vs formula, first difference: " << degree_text(b.rhs_vs_formula) << "\n"
         << "  left side vs t_{h-1}, first difference: " << degree_text(b.lhs_vs_t) << "\n"
         << "  t_{h-1} vs recursion, first difference: " << degree_text(b.t_vs_recursion) << "\n"
         << "  candidate moduli: u^" << q1 - 1 << " and u^" << q1 + 1 << "\n";
  } else if (cfg.probe == "cocycle") {
    if (cfg.g_spec.empty() || cfg.g2_spec.empty()) throw ConfigError("the cocycle probe needs --g and --g2");
    const auto field = parse_field(cfg);
    const lt::ConcreteElement a(cfg.p, cfg.h, parse_g_list(field, cfg.g_spec, cfg.h), cfg.h + 1);
    const lt::ConcreteElement b(cfg.p, cfg.h, parse_g_list(field, cfg.g2_spec, cfg.h), cfg.h + 1);
    const lt::RingContext ctx = lt::action_context(cfg.p, cfg.h);
    const lt::PolyFp t0 = lt::unfold_action(lt::symbolic_element(ctx), ctx).data.t[0];
    const lt::CocycleProbe c = lt::cocycle_probe(a, b, t0);
    auto opt = [](std::optional<int> v) { return v ? json(*v) : json(nullptr); };
    results = {{"compared_to", c.compared_to},
               {"left_first_diff", opt(c.left_first_diff)},
               {"right_first_diff", opt(c.right_first_diff)}};
    text << "t_0 of a product compared modulo u^" << c.compared_to << "\n"
         << "  t_0(g) g_*(t_0(g')): first difference " << degree_text(c.left_first_diff) << "\n"
         << "  t_0(g') g'_*(t_0(g)): first difference " << degree_text(c.right_first_diff) << "\n";
  } else {
    throw ConfigError("--kind must be boundary or cocycle");
  }
  emit(cfg, results, text.str());
  return kExitPass;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->set_help_flag("--help", "print this help");
  sub->add_option("--p", cfg.p, "prime p")->capture_default_str();
  sub->add_option("--h", cfg.h, "height h")->capture_default_str();
  sub->add_option("--x-order", cfg.x_order, "univariate truncation (default p^{2h-1}+1)");
  sub->add_option("--u-order", cfg.u_order, "truncate u-adically");
  sub->add_option("--xy-order", cfg.xy_order, "total-degree truncation of F (default p^h+1)");
  sub->add_option("--format", cfg.format, "text or json")->capture_default_str();
  sub->add_option("--out", cfg.out, "output file (relative paths go under $LT_OUTPUT_DIR)");
  sub->add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();
  sub->add_flag("--allow-heavy", cfg.allow_heavy, "run cells the cost estimator would skip");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lubin-Tate deformations and the Morava stabilizer action"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* heavy = std::getenv("LT_ALLOW_HEAVY"); heavy && *heavy && std::string(heavy) != "0") {
    cfg.allow_heavy = true;
  }

  auto* def = app.add_subcommand("deformation", "log, exp, F and the p-series");
  add_common(def, cfg);
  def->add_flag("--closed-form", cfg.closed_form, "also build and compare the closed form of F");

  auto* act = app.add_subcommand("action", "the coefficients t_0..t_h of g_*");
  add_common(act, cfg);
  act->add_option("--engine", cfg.engine, "unfold, solve or both")->capture_default_str();
  act->add_flag("--identity", cfg.identity, "act by the identity");
  act->add_option("--field-poly", cfg.field_poly, "monic irreducible of degree h in a, e.g. a^3+2*a+1");
  act->add_option("--g", cfg.g_spec, "g_0,...,g_h as polynomials in a (g_0 = 1)");

  auto* ver = app.add_subcommand("verify", "run verification cases");
  add_common(ver, cfg);
  ver->add_option("--case", cfg.cases, "case tag (repeatable)");
  ver->add_flag("--all", cfg.all, "run every case");
  ver->add_option("--trials", cfg.trials, "random trials per property case")->capture_default_str();
  ver->add_option("--jobs", cfg.jobs, "worker threads (default: hardware)");

  auto* chk = app.add_subcommand("check", "re-verify a dumped action");
  add_common(chk, cfg);
  chk->add_option("--in", cfg.in, "JSON written by `action --format json`")->required();

  auto* prb = app.add_subcommand("probe", "exploratory measurements");
  add_common(prb, cfg);
  prb->add_option("--kind", cfg.probe, "boundary or cocycle")->capture_default_str();
  prb->add_option("--field-poly", cfg.field_poly, "monic irreducible of degree h in a");
  prb->add_option("--g", cfg.g_spec, "first element g_0,...,g_h");
  prb->add_option("--g2", cfg.g2_spec, "second element");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*def) return cfg.command = "deformation", cmd_deformation(cfg);
    if (*act) return cfg.command = "action", cmd_action(cfg);
    if (*ver) return cfg.command = "verify", cmd_verify(cfg);
    if (*chk) return cfg.command = "check", cmd_check(cfg);
    if (*prb) return cfg.command = "probe", cmd_probe(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lt::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitConfig;
}

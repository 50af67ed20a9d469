// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lubin_tate/verify.hpp"

using namespace lubin_tate;
using namespace lubin_tate::verify;

namespace {

struct Line {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      note = what;
    }
  }
};

void run_cells(Line& line, const CaseSpec& spec, const std::vector<std::pair<int, int>>& cells, std::string& notes) {
  for (auto [p, h] : cells) {
    CaseConfig cfg{p, h, 1, 50, true};
    const CaseResult r = run_case(spec, cfg);
    line.require(r.status == Status::pass, r.id + " " + status_name(r.status) + " " + r.witness);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s %.2fs", notes.empty() ? "" : ", ", r.id.c_str(), r.seconds);
    notes += buf;
  }
}

Line cells(const std::string& tag, const std::vector<std::pair<int, int>>& c) {
  Line line;
  std::string notes;
  run_cells(line, *find_case(tag), c, notes);
  if (line.pass) line.note = notes;
  return line;
}

Line criterion7() {
  Line line;
  for (int p : {3, 5, 7}) {
    const auto start = std::chrono::steady_clock::now();
    line.require(nested_t0_form(p) == t0_h3_closed_form(p), "nested and expanded t_0 differ at p = " + std::to_string(p));
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    line.require(s < 10, "polynomial identity too slow at p = " + std::to_string(p));
  }
  const RingContext c3 = action_context(3, 3);
  line.require(t0_h3_closed_form(3).in_context(c3) ==
                   solve_action(symbolic_element(c3), deformation_mod_p(c3)).data.t[0],
               "explicit t_0 differs from the solver at p = 3");
  const RingContext c5 = action_context(5, 3);
  line.require(c5.u_order == 56, "unexpected accuracy at p = 5");
  line.require(t0_h3_closed_form(5).in_context(c5) == unfold_action(symbolic_element(c5), c5).data.t[0],
               "explicit t_0 differs from the recursions at p = 5");
  if (line.pass) line.note = "p = 3, 5, 7; solver mod u^22 at p = 3; recursions mod u^56 at p = 5";
  return line;
}

Line criterion8() {
  Line line = cells("residual", {{3, 3}});
  const RingContext ctx = action_context(3, 3);
  ActionData d = closed_form_action(3);
  const XYSeriesFp F = deformation_mod_p(ctx);
  line.require(residual(d, symbolic_element(ctx), F).ok(), "explicit data leaves a residual");
  d.t[0] += PolyFp::u(ctx, 5) * PolyFp::g(ctx, 2);
  line.require(!residual(d, symbolic_element(ctx), F).ok(), "single-coefficient perturbation undetected");
  return line;
}

Line criterion9() {
  Line line;
  constexpr int kTrials = 200;
  const auto b = binomial_property(91, kTrials);
  line.require(b.failure.empty() && b.cases >= kTrials, "binomial: " + b.failure);
  const auto c = cpn_property(92, kTrials);
  line.require(c.failure.empty() && c.cases >= kTrials, "C_{p^n}: " + c.failure);
  const XYSeriesFp F = deformation_mod_p(property_context(3, 3));
  const auto d = distributor_property(F, 93, kTrials);
  line.require(d.failure.empty() && d.cases >= kTrials, "distributor: " + d.failure);
  const auto s = slayer_property(F, 94, kTrials);
  line.require(s.failure.empty() && s.cases >= kTrials, "slayer: " + s.failure);
  const RingContext& ctx = F.context();
  const PolyFp t0 = PolyFp::one(ctx) + PolyFp::u(ctx) * PolyFp::g(ctx, 1, 9) + PolyFp::u(ctx, 3) * PolyFp::g(ctx, 2);
  const auto tw = slayer_property(substitute_u(F, act_on_u(t0)), 95, kTrials);
  line.require(tw.failure.empty() && tw.cases >= kTrials, "slayer on g_*F: " + tw.failure);
  if (line.pass) {
    line.note = std::to_string(kTrials) + " cases each: binomial, C_{p^n}, distributor, slayer on F and g_*F";
  }
  return line;
}

Line criterion10() {
  Line line;
  const RingContext ctx = action_context(3, 3);
  const XYSeriesFp F = deformation_mod_p(ctx);
  const BoundaryProbe b = boundary_probe(solve_action(symbolic_element(ctx), F), F);
  line.require(b.u_order == 22, "probe did not run at the expected precision");
  line.note = "reported only: at x^243 right side vs formula " + sdeg(b.rhs_vs_formula) + ", left side vs t_2 " +
              sdeg(b.lhs_vs_t) + ", t_2 vs recursion " + sdeg(b.t_vs_recursion) +
              "; candidate moduli u^8 and u^10";
  return line;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Line()>>> criteria = {
      {"exp closed form", [] { return cells("exp-closed-form", {{3, 3}, {5, 3}, {3, 4}}); }},
      {"F closed form", [] { return cells("f-closed-form", {{3, 3}, {3, 4}, {5, 3}}); }},
      {"formal group law axioms", [] { return cells("fgl-axioms", {{3, 3}}); }},
      {"integrality", [] { return cells("integrality", {{3, 3}, {3, 4}, {5, 3}}); }},
      {"action on u", [] { return cells("action-on-u", {{3, 3}, {3, 4}}); }},
      {"recursions vs solver", [] { return cells("recursion-vs-oracle", {{3, 3}, {3, 4}}); }},
      {"explicit height-3 t_0", criterion7},
      {"functional-equation residual", criterion8},
      {"randomized properties", criterion9},
      {"boundary precision probe", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line line;
    try {
      line = criteria[i].second();
    } catch (const std::exception& e) {
      line.pass = false;
      line.note = std::string("exception: ") + e.what();
    }
    if (!line.pass) ++failures;
    std::printf("CRITERION %zu: %s  %s (%s)\n", i + 1, line.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                line.note.c_str());
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}

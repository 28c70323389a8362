#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mtt/equivalence.hpp"
#include "syntax.hpp"

using namespace mtt;

namespace {

struct Inputs {
  std::string modes, root, ctx, to, expr, sub, lhs, rhs, sexpr, rule;
  int depth = 3;
  int count = 100;
  std::uint64_t seed = 0;
};

int load_phase(const Inputs &in, ModeTheory &mt) {
  try {
    mt = load_mode_theory_file(in.modes);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int root_phase(const ModeTheory &mt, const Inputs &in, ModeId &root) {
  if (auto m = mt.find_mode(in.root)) {
    root = *m;
    return 0;
  }
  std::cerr << "error: unknown mode '" << in.root << "'\n";
  return 2;
}

template <class F>
int parse_phase(F &&body) {
  try {
    return body();
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    std::cout << "scope error: " << e.what() << "\n";
    return 1;
  }
}

int run_laws(const Inputs &in) {
  ModeTheory mt;
  if (int rc = load_phase(in, mt)) return rc;
  std::vector<LawViolation> violations = mt.validate_laws();
  if (violations.empty()) {
    std::cout << "laws: ok\n";
    return 0;
  }
  for (const LawViolation &v : violations) std::cout << "violation: " << v.law << ": " << v.witness << "\n";
  std::cout << "laws: " << violations.size() << " violation(s)\n";
  return 1;
}

int run_check(const Inputs &in, bool has_expr, bool has_sub, bool has_to) {
  ModeTheory mt;
  if (int rc = load_phase(in, mt)) return rc;
  ModeId root;
  if (int rc = root_phase(mt, in, root)) return rc;
  if (has_expr == has_sub) {
    std::cerr << "error: check needs exactly one of --expr and --sub\n";
    return 2;
  }
  if (has_sub && !has_to) {
    std::cerr << "error: --sub needs --to\n";
    return 2;
  }
  return parse_phase([&] {
    SCtx ctx = parse_ctx(mt, in.ctx, root);
    if (CheckResult c = check_sctx(mt, ctx); !c) {
      std::cout << "check: " << c.message << "\n";
      return 1;
    }
    ModeId mode = mode_of(mt, ctx);
    CheckResult result = CheckResult::pass();
    if (has_expr) {
      result = check_wexpr(mt, ctx, parse_wexpr(mt, in.expr), mode);
    } else {
      SCtx to = parse_ctx(mt, in.to, root);
      if (CheckResult c = check_sctx(mt, to); !c) {
        std::cout << "check: target context: " << c.message << "\n";
        return 1;
      }
      result = check_wsub(mt, ctx, parse_wsub(mt, in.sub), to, mode);
    }
    if (!result) {
      std::cout << "check: " << result.message << "\n";
      return 1;
    }
    std::cout << "check: ok\n";
    return 0;
  });
}

int run_normalize(const Inputs &in) {
  ModeTheory mt;
  if (int rc = load_phase(in, mt)) return rc;
  ModeId root;
  if (int rc = root_phase(mt, in, root)) return rc;
  return parse_phase([&] {
    SCtx ctx = parse_ctx(mt, in.ctx, root);
    if (CheckResult c = check_sctx(mt, ctx); !c) {
      std::cout << "scope error: " << c.message << "\n";
      return 1;
    }
    WExprPtr e = parse_wexpr(mt, in.expr);
    if (CheckResult c = check_wexpr(mt, ctx, e, mode_of(mt, ctx)); !c) {
      std::cout << "scope error: " << c.message << "\n";
      return 1;
    }
    std::cout << format_sexpr(mt, translate_expr(mt, ctx, e)) << "\n";
    return 0;
  });
}

int run_eq(const Inputs &in) {
  ModeTheory mt;
  if (int rc = load_phase(in, mt)) return rc;
  ModeId root;
  if (int rc = root_phase(mt, in, root)) return rc;
  return parse_phase([&] {
    SCtx ctx = parse_ctx(mt, in.ctx, root);
    if (CheckResult c = check_sctx(mt, ctx); !c) {
      std::cout << "scope error: " << c.message << "\n";
      return 1;
    }
    ModeId mode = mode_of(mt, ctx);
    WExprPtr lhs = parse_wexpr(mt, in.lhs), rhs = parse_wexpr(mt, in.rhs);
    if (sigma_eq_decide(mt, ctx, lhs, rhs, mode)) {
      std::cout << "EQUIV\n";
      return 0;
    }
    std::cout << "DISTINCT\n";
    std::cout << "lhs: " << format_sexpr(mt, translate_expr(mt, ctx, lhs)) << "\n";
    std::cout << "rhs: " << format_sexpr(mt, translate_expr(mt, ctx, rhs)) << "\n";
    return 1;
  });
}

int run_embed(const Inputs &in) {
  ModeTheory mt;
  if (int rc = load_phase(in, mt)) return rc;
  ModeId root;
  if (int rc = root_phase(mt, in, root)) return rc;
  return parse_phase([&] {
    SCtx ctx = parse_ctx(mt, in.ctx, root);
    if (CheckResult c = check_sctx(mt, ctx); !c) {
      std::cout << "scope error: " << c.message << "\n";
      return 1;
    }
    SExprPtr e = parse_sexpr(mt, in.sexpr);
    if (CheckResult c = check_sexpr(mt, ctx, e, mode_of(mt, ctx)); !c) {
      std::cout << "scope error: " << c.message << "\n";
      return 1;
    }
    std::cout << format_wexpr(mt, embed_expr(mt, ctx, e)) << "\n";
    return 0;
  });
}

int run_obs_eq(const Inputs &in) {
  ModeTheory mt;
  if (int rc = load_phase(in, mt)) return rc;
  ModeId root;
  if (int rc = root_phase(mt, in, root)) return rc;
  return parse_phase([&] {
    SCtx from = parse_ctx(mt, in.ctx, root);
    SCtx to = parse_ctx(mt, in.to, root);
    for (const SCtx *c : {&from, &to})
      if (CheckResult r = check_sctx(mt, *c); !r) {
        std::cout << "scope error: " << r.message << "\n";
        return 1;
      }
    WSubPtr lhs = parse_wsub(mt, in.lhs), rhs = parse_wsub(mt, in.rhs);
    if (obs_eq_bounded(mt, from, lhs, rhs, to, mode_of(mt, from), in.depth)) {
      std::cout << "OBS-EQUIV\n";
      return 0;
    }
    std::cout << "OBS-DISTINCT\n";
    return 1;
  });
}

int run_fuzz(const Inputs &in, bool has_rule) {
  ModeTheory mt;
  if (int rc = load_phase(in, mt)) return rc;
  std::vector<RuleId> rules;
  if (has_rule) {
    std::optional<RuleId> rule = rule_from_name(in.rule);
    if (!rule) {
      std::cerr << "error: unknown rule '" << in.rule << "'\n";
      return 2;
    }
    rules.push_back(*rule);
  } else {
    rules = all_rules();
  }
  int pass = 0, skip = 0;
  std::vector<std::string> failures;
  for (int i = 0; i < in.count; ++i) {
    RuleId rule = rules[size_t(i) % rules.size()];
    GenConfig cfg{in.seed + std::uint64_t(i), 6, 2, in.count};
    std::optional<RuleInstance> inst = sigma_axiom_instance(mt, rule, cfg);
    if (!inst) {
      ++skip;
      continue;
    }
    bool ok = false;
    if (const ExprPair *e = std::get_if<ExprPair>(&*inst)) {
      ok = sigma_eq_decide(mt, e->ctx, e->lhs, e->rhs, e->mode);
    } else {
      const SubPair &s = std::get<SubPair>(*inst);
      ok = sigma_eq_decide(mt, s.from, wsubapp(wtrue(), s.lhs), wsubapp(wtrue(), s.rhs), s.mode) &&
           obs_eq_bounded(mt, s.from, s.lhs, s.rhs, s.to, s.mode, 1);
    }
    if (ok)
      ++pass;
    else
      failures.push_back(std::string(rule_name(rule)) + " seed " + std::to_string(in.seed + std::uint64_t(i)));
  }
  for (const std::string &f : failures) std::cout << "fail: " << f << "\n";
  std::cout << "fuzz: " << in.count << " cases, " << pass << " passed, " << skip << " skipped\n";
  return failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"scoping-level substitution kernel for multimode type theory"};
  app.require_subcommand(1);
  Inputs in;

  auto add_modes = [&](CLI::App *cmd) { cmd->add_option("--modes", in.modes, "mode theory file")->required(); };
  auto add_root_ctx = [&](CLI::App *cmd) {
    cmd->add_option("--root", in.root, "root mode of --ctx")->required();
    cmd->add_option("--ctx", in.ctx, "context, `()` plus `. M` / `lock M` entries")->required();
  };

  CLI::App *laws = app.add_subcommand("laws", "validate the mode theory's laws");
  add_modes(laws);

  CLI::App *check = app.add_subcommand("check", "scope-check an expression or substitution");
  add_modes(check);
  add_root_ctx(check);
  CLI::Option *check_expr = check->add_option("--expr", in.expr, "expression to check");
  CLI::Option *check_sub = check->add_option("--sub", in.sub, "substitution to check");
  CLI::Option *check_to = check->add_option("--to", in.to, "target context for --sub");

  CLI::App *normalize = app.add_subcommand("normalize", "translate an expression to substitution-free form");
  add_modes(normalize);
  add_root_ctx(normalize);
  normalize->add_option("--expr", in.expr, "expression to normalize")->required();

  CLI::App *eq = app.add_subcommand("eq", "decide equivalence of two expressions");
  add_modes(eq);
  add_root_ctx(eq);
  eq->add_option("--lhs", in.lhs, "left expression")->required();
  eq->add_option("--rhs", in.rhs, "right expression")->required();

  CLI::App *embed = app.add_subcommand("embed", "read a substitution-free expression back");
  add_modes(embed);
  add_root_ctx(embed);
  embed->add_option("--sexpr", in.sexpr, "substitution-free expression")->required();

  CLI::App *obs = app.add_subcommand("obs-eq", "probe two substitutions for observational equivalence");
  add_modes(obs);
  add_root_ctx(obs);
  obs->add_option("--to", in.to, "shared target context")->required();
  obs->add_option("--lhs", in.lhs, "left substitution")->required();
  obs->add_option("--rhs", in.rhs, "right substitution")->required();
  obs->add_option("--depth", in.depth, "probe telescope depth");

  CLI::App *fuzz = app.add_subcommand("fuzz", "generate and decide rule instances");
  add_modes(fuzz);
  fuzz->add_option("--seed", in.seed, "base random seed")->required();
  fuzz->add_option("--count", in.count, "number of cases");
  CLI::Option *fuzz_rule = fuzz->add_option("--rule", in.rule, "restrict to one rule name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (laws->parsed()) return run_laws(in);
  if (check->parsed()) return run_check(in, check_expr->count() > 0, check_sub->count() > 0, check_to->count() > 0);
  if (normalize->parsed()) return run_normalize(in);
  if (eq->parsed()) return run_eq(in);
  if (embed->parsed()) return run_embed(in);
  if (obs->parsed()) return run_obs_eq(in);
  if (fuzz->parsed()) return run_fuzz(in, fuzz_rule->count() > 0);
  return 2;
}

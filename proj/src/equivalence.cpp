#include "mtt/equivalence.hpp"

#include <algorithm>
#include <random>

#include "mtt/visit.hpp"

namespace mtt {

namespace {

struct RuleRow {
  RuleId id;
  const char *name;
};

constexpr RuleRow rule_rows[] = {
    {RuleId::ExprRefl, "expr-refl"},
    {RuleId::ExprSym, "expr-sym"},
    {RuleId::ExprTrans, "expr-trans"},
    {RuleId::SubRefl, "sub-refl"},
    {RuleId::SubSym, "sub-sym"},
    {RuleId::SubTrans, "sub-trans"},
    {RuleId::SubIdLeft, "sub-id-left"},
    {RuleId::SubIdRight, "sub-id-right"},
    {RuleId::SubAssoc, "sub-assoc"},
    {RuleId::ExprSubId, "expr-sub-id"},
    {RuleId::ExprSubCompose, "expr-sub-compose"},
    {RuleId::CongSub, "cong-sub"},
    {RuleId::CongIf, "cong-if"},
    {RuleId::CongArrow, "cong-arrow"},
    {RuleId::CongLam, "cong-lam"},
    {RuleId::CongApp, "cong-app"},
    {RuleId::CongModTy, "cong-modty"},
    {RuleId::CongModTm, "cong-modtm"},
    {RuleId::CongLetMod, "cong-letmod"},
    {RuleId::CongCompose, "cong-compose"},
    {RuleId::CongLock, "cong-lock"},
    {RuleId::CongExtend, "cong-extend"},
    {RuleId::PushBool, "push-bool"},
    {RuleId::PushTrue, "push-true"},
    {RuleId::PushFalse, "push-false"},
    {RuleId::PushIf, "push-if"},
    {RuleId::PushArrow, "push-arrow"},
    {RuleId::PushLam, "push-lam"},
    {RuleId::PushApp, "push-app"},
    {RuleId::PushModTy, "push-modty"},
    {RuleId::PushModTm, "push-modtm"},
    {RuleId::PushLetMod, "push-letmod"},
    {RuleId::EmptyUnique, "empty-unique"},
    {RuleId::ExtendVar, "extend-var"},
    {RuleId::ExtendWeaken, "extend-weaken"},
    {RuleId::ExtendEta, "extend-eta"},
    {RuleId::LockId, "lock-id"},
    {RuleId::LockCompose, "lock-compose"},
    {RuleId::KeyNatural, "key-natural"},
    {RuleId::KeyUnit, "key-unit"},
    {RuleId::KeyComposeVertical, "key-compose-vertical"},
    {RuleId::KeyComposeHorizontal, "key-compose-horizontal"},
};

}  // namespace

const std::vector<RuleId> &all_rules() {
  static const std::vector<RuleId> rules = [] {
    std::vector<RuleId> out;
    for (const RuleRow &row : rule_rows) out.push_back(row.id);
    return out;
  }();
  return rules;
}

const char *rule_name(RuleId rule) {
  for (const RuleRow &row : rule_rows)
    if (row.id == rule) return row.name;
  throw Error("unknown rule identifier");
}

std::optional<RuleId> rule_from_name(const std::string &name) {
  for (const RuleRow &row : rule_rows)
    if (name == row.name) return row.id;
  return std::nullopt;
}

bool sigma_eq_decide(const ModeTheory &mt, const SCtx &ctx, const WExprPtr &lhs, const WExprPtr &rhs, ModeId mode) {
  if (CheckResult r = check_wexpr(mt, ctx, lhs, mode); !r)
    throw Error("left side does not scope: " + r.message);
  if (CheckResult r = check_wexpr(mt, ctx, rhs, mode); !r)
    throw Error("right side does not scope: " + r.message);
  return sexpr_equal(translate_expr(mt, ctx, lhs), translate_expr(mt, ctx, rhs));
}

bool obs_eq_bounded(const ModeTheory &mt, const SCtx &from, const WSubPtr &lhs, const WSubPtr &rhs, const SCtx &to, ModeId mode, int depth) {
  if (CheckResult r = check_wsub(mt, from, lhs, to, mode); !r)
    throw Error("left side does not scope: " + r.message);
  if (CheckResult r = check_wsub(mt, from, rhs, to, mode); !r)
    throw Error("right side does not scope: " + r.message);
  SubSeq ls = translate_sub(mt, from, lhs, to);
  SubSeq rs = translate_sub(mt, from, rhs, to);
  for (const LockTele &tele : enumerate_lock_teles(mt, mode, depth)) {
    SubSeq l = ls, r = rs;
    for (ModalityId mu : tele.mods) {
      l = seq_lock(mt, l, mu);
      r = seq_lock(mt, r, mu);
    }
    SCtx probe_ctx = append_lock_tele(mt, to, tele);
    for (const SVar &v : enumerate_vars(mt, probe_ctx, mode_of(mt, probe_ctx))) {
      SExprPtr probe = se_var(v);
      if (!sexpr_equal(apply_rensub_expr(mt, probe, l), apply_rensub_expr(mt, probe, r))) return false;
    }
  }
  return true;
}

namespace {

SCtx plus(const SCtx &ctx, Entry e) {
  SCtx out = ctx;
  out.entries.push_back(e);
  return out;
}

WExprPtr under_id(const WExprPtr &t) { return wsubapp(t, ws_id()); }
WSubPtr after_id(const WSubPtr &s) { return ws_comp(s, ws_id()); }

struct Gen {
  const ModeTheory &mt;
  std::mt19937_64 rng;
  int tele_depth;

  Gen(const ModeTheory &m, const GenConfig &cfg)
      : mt(m), rng(cfg.seed), tele_depth(std::max(cfg.max_tele_depth, 0)) {}

  int pick(int n) { return n <= 1 ? 0 : int(rng() % std::uint64_t(n)); }
  bool coin() { return pick(2) == 0; }

  template <class T>
  const T &choose(const std::vector<T> &xs) {
    return xs[size_t(pick(int(xs.size())))];
  }

  std::vector<ModalityId> mods_into(ModeId m) {
    std::vector<ModalityId> out;
    for (ModalityId mu = 0; mu < mt.modality_count(); ++mu)
      if (mt.modality(mu).cod == m) out.push_back(mu);
    return out;
  }

  // (outer, inner) annotations whose composite the table provides.
  std::vector<std::pair<ModalityId, ModalityId>> letmod_pairs(ModeId m) {
    std::vector<std::pair<ModalityId, ModalityId>> out;
    for (ModalityId outer = 0; outer < mt.modality_count(); ++outer) {
      if (mt.modality(outer).cod != m) continue;
      for (ModalityId inner = 0; inner < mt.modality_count(); ++inner) {
        if (mt.modality(inner).cod != mt.modality(outer).dom) continue;
        if (mt.compose_opt(outer, inner)) out.emplace_back(outer, inner);
      }
    }
    return out;
  }

  SCtx ctx(int entries) {
    SCtx out{pick(mt.mode_count()), {}};
    ModeId cur = out.root;
    for (int i = 0; i < entries; ++i) {
      std::vector<ModalityId> mods = mods_into(cur);
      ModalityId mu = choose(mods);
      if (coin()) {
        out.entries.push_back(var_entry(mu));
      } else {
        out.entries.push_back(lock_entry(mu));
        cur = mt.modality(mu).dom;
      }
    }
    return out;
  }

  WExprPtr expr(const SCtx &c, int budget) {
    ModeId m = mode_of(mt, c);
    enum { Const, Var, If, Arrow, Lam, App, ModTy, ModTm, LetMod, SubApp };
    std::vector<int> menu{Const};
    size_t s = c.entries.size();
    bool var_ok = s >= 2 && c.entries[s - 1].kind == EntryKind::Lock &&
                  c.entries[s - 2] == var_entry(c.entries[s - 1].mod);
    std::vector<ModalityId> mods = mods_into(m);
    std::vector<std::pair<ModalityId, ModalityId>> pairs;
    if (budget > 1) {
      if (var_ok) menu.insert(menu.end(), {Var, Var});
      menu.insert(menu.end(), {If, Arrow, Lam, App, ModTy, ModTm, SubApp});
      pairs = letmod_pairs(m);
      if (!pairs.empty()) menu.push_back(LetMod);
    }
    int half = std::max(1, (budget - 1) / 2);
    int quarter = std::max(1, (budget - 1) / 4);
    switch (choose(menu)) {
      case Var:
        return wvar0();
      case If:
        return wif(expr(plus(c, var_entry(mt.identity_modality(m))), quarter), expr(c, quarter),
                   expr(c, quarter), expr(c, quarter));
      case Arrow: {
        ModalityId mu = choose(mods);
        return warrow(mu, expr(plus(c, lock_entry(mu)), half), expr(plus(c, var_entry(mu)), half));
      }
      case Lam: {
        ModalityId mu = choose(mods);
        return wlam(mu, expr(plus(c, var_entry(mu)), budget - 1));
      }
      case App: {
        ModalityId mu = choose(mods);
        return wapp(mu, expr(c, half), expr(plus(c, lock_entry(mu)), half));
      }
      case ModTy: {
        ModalityId mu = choose(mods);
        return wmodty(mu, expr(plus(c, lock_entry(mu)), budget - 1));
      }
      case ModTm: {
        ModalityId mu = choose(mods);
        return wmodtm(mu, expr(plus(c, lock_entry(mu)), budget - 1));
      }
      case LetMod: {
        auto [outer, inner] = choose(pairs);
        SCtx ann_ctx = plus(plus(c, lock_entry(outer)), lock_entry(inner));
        return wletmod(outer, inner, expr(ann_ctx, quarter), expr(plus(c, var_entry(outer)), quarter),
                       expr(plus(c, lock_entry(outer)), quarter),
                       expr(plus(c, var_entry(mt.compose_modalities(outer, inner))), quarter));
      }
      case SubApp: {
        auto [sg, target] = sub(c, half);
        return wsubapp(expr(target, half), sg);
      }
      default: {
        int k = pick(3);
        return k == 0 ? wtrue() : k == 1 ? wfalse() : wbool();
      }
    }
  }

  struct KeyOption {
    SCtx base;
    LockTele to_tele, from_tele;
    CellId cell;
  };

  std::vector<KeyOption> key_options(const SCtx &from) {
    std::vector<KeyOption> out;
    int run = 0;
    while (run < int(from.entries.size()) &&
           from.entries[from.entries.size() - 1 - size_t(run)].kind == EntryKind::Lock)
      ++run;
    for (int k = 0; k <= std::min(run, tele_depth); ++k) {
      SCtx base = from;
      base.entries.resize(from.entries.size() - size_t(k));
      LockTele theta{mode_of(mt, base), {}};
      for (size_t i = base.entries.size(); i < from.entries.size(); ++i)
        theta.mods.push_back(from.entries[i].mod);
      ModalityId into = locks_of(mt, theta);
      for (const LockTele &lambda : enumerate_lock_teles(mt, theta.outer, tele_depth))
        for (CellId cell : mt.cells_between(locks_of(mt, lambda), into))
          out.push_back({base, lambda, theta, cell});
    }
    return out;
  }

  std::pair<WSubPtr, SCtx> sub(const SCtx &from, int budget) {
    ModeId m = mode_of(mt, from);
    enum { Ident, Terminal, Weaken, LockStep, KeyStep, Ext, Comp };
    std::vector<int> menu{Ident, Terminal};
    if (!from.entries.empty() && from.entries.back().kind == EntryKind::Var)
      menu.insert(menu.end(), {Weaken, Weaken});
    std::vector<KeyOption> keys = key_options(from);
    if (!keys.empty()) menu.push_back(KeyStep);
    if (budget > 1) {
      if (!from.entries.empty() && from.entries.back().kind == EntryKind::Lock) menu.push_back(LockStep);
      menu.insert(menu.end(), {Ext, Ext, Comp});
    }
    int half = std::max(1, (budget - 1) / 2);
    switch (choose(menu)) {
      case Terminal:
        return {ws_empty(), SCtx{m, {}}};
      case Weaken: {
        SCtx to = from;
        to.entries.pop_back();
        return {ws_weaken(), to};
      }
      case LockStep: {
        ModalityId mu = from.entries.back().mod;
        SCtx peeled = from;
        peeled.entries.pop_back();
        auto [inner, t] = sub(peeled, budget - 1);
        return {ws_lock(inner, mu), plus(t, lock_entry(mu))};
      }
      case KeyStep: {
        const KeyOption &o = choose(keys);
        return {ws_key(o.cell, o.to_tele, o.from_tele, o.base), append_lock_tele(mt, o.base, o.to_tele)};
      }
      case Ext: {
        auto [inner, d] = sub(from, half);
        ModalityId mu = choose(mods_into(mode_of(mt, d)));
        WExprPtr payload = expr(plus(from, lock_entry(mu)), std::max(1, half / 2));
        return {ws_ext(inner, payload), plus(d, var_entry(mu))};
      }
      case Comp: {
        auto [right, mid] = sub(from, half);
        auto [left, to] = sub(mid, half);
        return {ws_comp(left, right), to};
      }
      default:
        return {ws_id(), from};
    }
  }

  // A substitution whose target search yields exactly one context. Several
  // rule schemas share one substitution across sides with different
  // surrounding structure; a unique target keeps the translation's target
  // choices aligned between the sides.
  std::pair<WSubPtr, SCtx> sub_unique(const SCtx &from, int budget) {
    for (int i = 0; i < 50; ++i) {
      auto [s, d] = sub(from, budget);
      int count = 0;
      for_each_wsub_target(mt, from, s, [&](const SCtx &) { return ++count >= 2; });
      if (count == 1) return {s, d};
    }
    return {ws_id(), from};
  }

  std::optional<WSubPtr> sub_to_once(const SCtx &from, const SCtx &to, int budget) {
    if (budget <= 0) {
      if (to == from) return ws_id();
      if (to.entries.empty()) return ws_empty();
      return std::nullopt;
    }
    if (to == from && coin()) return ws_id();
    if (!from.entries.empty() && from.entries.back().kind == EntryKind::Var && pick(3) == 0) {
      SCtx peeled = from;
      peeled.entries.pop_back();
      auto inner = sub_to_once(peeled, to, budget - 1);
      if (!inner) return std::nullopt;
      return ws_comp(*inner, ws_weaken());
    }
    if (to.entries.empty()) {
      if (coin()) return ws_empty();
      auto [step, mid] = sub(from, std::max(1, budget / 2));
      (void)mid;
      return ws_comp(ws_empty(), step);
    }
    const Entry &e = to.entries.back();
    if (e.kind == EntryKind::Var) {
      SCtx base = to;
      base.entries.pop_back();
      auto inner = sub_to_once(from, base, budget - 1);
      if (!inner) return std::nullopt;
      return ws_ext(*inner, expr(plus(from, lock_entry(e.mod)), 2));
    }
    if (!from.entries.empty() && from.entries.back() == e) {
      SCtx f = from, t = to;
      f.entries.pop_back();
      t.entries.pop_back();
      auto inner = sub_to_once(f, t, budget - 1);
      if (!inner) return std::nullopt;
      return ws_lock(*inner, e.mod);
    }
    if (to == from) return ws_id();
    // differing lock runs over a shared base can be bridged by a key
    auto lock_run = [](const SCtx &c) {
      int run = 0;
      while (run < int(c.entries.size()) &&
             c.entries[c.entries.size() - 1 - size_t(run)].kind == EntryKind::Lock)
        ++run;
      return run;
    };
    for (int j = 0; j <= lock_run(from); ++j)
      for (int k = 0; k <= lock_run(to); ++k) {
        SCtx base_f = from, base_t = to;
        base_f.entries.resize(from.entries.size() - size_t(j));
        base_t.entries.resize(to.entries.size() - size_t(k));
        if (!(base_f == base_t)) continue;
        LockTele theta{mode_of(mt, base_f), {}}, lambda{mode_of(mt, base_f), {}};
        for (size_t i = base_f.entries.size(); i < from.entries.size(); ++i)
          theta.mods.push_back(from.entries[i].mod);
        for (size_t i = base_t.entries.size(); i < to.entries.size(); ++i)
          lambda.mods.push_back(to.entries[i].mod);
        std::vector<CellId> cells = mt.cells_between(locks_of(mt, lambda), locks_of(mt, theta));
        if (cells.empty()) continue;
        return ws_key(choose(cells), lambda, theta, base_f);
      }
    return std::nullopt;
  }

  std::optional<WSubPtr> sub_to(const SCtx &from, const SCtx &to, int budget, int tries) {
    ModeId m = mode_of(mt, from);
    for (int i = 0; i < tries; ++i) {
      if (auto got = sub_to_once(from, to, budget))
        if (check_wsub(mt, from, *got, to, m)) return got;
    }
    for (int i = 0; i < tries; ++i) {
      auto [s, t] = sub(from, budget);
      if (t == to) return s;
    }
    return std::nullopt;
  }

  std::optional<RuleInstance> instance(RuleId rule, int budget) {
    SCtx c = ctx(pick(tele_depth + 1));
    ModeId m = mode_of(mt, c);
    int b = std::max(2, budget / 2);
    int third = std::max(2, budget / 3);
    switch (rule) {
      case RuleId::ExprRefl: {
        WExprPtr t = expr(c, budget);
        return ExprPair{c, m, t, t};
      }
      case RuleId::ExprSym: {
        WExprPtr t = expr(c, budget);
        return ExprPair{c, m, t, under_id(t)};
      }
      case RuleId::ExprTrans: {
        WExprPtr t = expr(c, budget);
        return ExprPair{c, m, under_id(under_id(t)), t};
      }
      case RuleId::SubRefl: {
        auto [s, to] = sub(c, budget);
        return SubPair{c, to, m, s, s};
      }
      case RuleId::SubSym: {
        auto [s, to] = sub(c, budget);
        return SubPair{c, to, m, s, after_id(s)};
      }
      case RuleId::SubTrans: {
        auto [s, to] = sub(c, budget);
        return SubPair{c, to, m, after_id(after_id(s)), s};
      }
      case RuleId::SubIdLeft: {
        auto [s, to] = sub(c, budget);
        return SubPair{c, to, m, ws_comp(ws_id(), s), s};
      }
      case RuleId::SubIdRight: {
        auto [s, to] = sub(c, budget);
        return SubPair{c, to, m, ws_comp(s, ws_id()), s};
      }
      case RuleId::SubAssoc: {
        auto [rho, d1] = sub(c, third);
        auto [tau, d2] = sub(d1, third);
        auto [sg, d3] = sub(d2, third);
        return SubPair{c, d3, m, ws_comp(ws_comp(sg, tau), rho), ws_comp(sg, ws_comp(tau, rho))};
      }
      case RuleId::ExprSubId: {
        WExprPtr t = expr(c, budget);
        return ExprPair{c, m, wsubapp(t, ws_id()), t};
      }
      case RuleId::ExprSubCompose: {
        auto [tau, d1] = sub(c, third);
        auto [sg, d2] = sub(d1, third);
        WExprPtr t = expr(d2, third);
        return ExprPair{c, m, wsubapp(t, ws_comp(sg, tau)), wsubapp(wsubapp(t, sg), tau)};
      }
      case RuleId::CongSub: {
        auto [sg, d] = sub(c, b);
        WExprPtr t = expr(d, b);
        return ExprPair{c, m, wsubapp(t, sg), wsubapp(under_id(t), after_id(sg))};
      }
      case RuleId::CongIf: {
        WExprPtr mo = expr(plus(c, var_entry(mt.identity_modality(m))), b);
        WExprPtr cond = expr(c, b), x = expr(c, b), y = expr(c, b);
        return ExprPair{c, m, wif(mo, cond, x, y), wif(under_id(mo), under_id(cond), under_id(x), under_id(y))};
      }
      case RuleId::CongArrow: {
        ModalityId mu = choose(mods_into(m));
        WExprPtr a = expr(plus(c, lock_entry(mu)), b), r = expr(plus(c, var_entry(mu)), b);
        return ExprPair{c, m, warrow(mu, a, r), warrow(mu, under_id(a), under_id(r))};
      }
      case RuleId::CongLam: {
        ModalityId mu = choose(mods_into(m));
        WExprPtr t = expr(plus(c, var_entry(mu)), budget);
        return ExprPair{c, m, wlam(mu, t), wlam(mu, under_id(t))};
      }
      case RuleId::CongApp: {
        ModalityId mu = choose(mods_into(m));
        WExprPtr f = expr(c, b), a = expr(plus(c, lock_entry(mu)), b);
        return ExprPair{c, m, wapp(mu, f, a), wapp(mu, under_id(f), under_id(a))};
      }
      case RuleId::CongModTy: {
        ModalityId mu = choose(mods_into(m));
        WExprPtr t = expr(plus(c, lock_entry(mu)), budget);
        return ExprPair{c, m, wmodty(mu, t), wmodty(mu, under_id(t))};
      }
      case RuleId::CongModTm: {
        ModalityId mu = choose(mods_into(m));
        WExprPtr t = expr(plus(c, lock_entry(mu)), budget);
        return ExprPair{c, m, wmodtm(mu, t), wmodtm(mu, under_id(t))};
      }
      case RuleId::CongLetMod: {
        std::vector<std::pair<ModalityId, ModalityId>> pairs = letmod_pairs(m);
        if (pairs.empty()) return std::nullopt;
        auto [nu, mu] = choose(pairs);
        WExprPtr ann = expr(plus(plus(c, lock_entry(nu)), lock_entry(mu)), b);
        WExprPtr mo = expr(plus(c, var_entry(nu)), b);
        WExprPtr scrut = expr(plus(c, lock_entry(nu)), b);
        WExprPtr body = expr(plus(c, var_entry(mt.compose_modalities(nu, mu))), b);
        return ExprPair{c, m, wletmod(nu, mu, ann, mo, scrut, body),
                        wletmod(nu, mu, under_id(ann), under_id(mo), under_id(scrut), under_id(body))};
      }
      case RuleId::CongCompose: {
        auto [tau, d1] = sub(c, b);
        auto [sg, d2] = sub(d1, b);
        return SubPair{c, d2, m, ws_comp(sg, tau), ws_comp(after_id(sg), after_id(tau))};
      }
      case RuleId::CongLock: {
        ModalityId mu = choose(mods_into(m));
        auto [sg, d] = sub(c, budget);
        return SubPair{plus(c, lock_entry(mu)), plus(d, lock_entry(mu)), mt.modality(mu).dom,
                       ws_lock(sg, mu), ws_lock(after_id(sg), mu)};
      }
      case RuleId::CongExtend: {
        auto [sg, d] = sub(c, b);
        ModalityId mu = choose(mods_into(mode_of(mt, d)));
        WExprPtr t = expr(plus(c, lock_entry(mu)), b);
        return SubPair{c, plus(d, var_entry(mu)), m, ws_ext(sg, t), ws_ext(after_id(sg), under_id(t))};
      }
      case RuleId::PushBool:
      case RuleId::PushTrue:
      case RuleId::PushFalse: {
        auto [sg, d] = sub(c, budget);
        (void)d;
        WExprPtr k = rule == RuleId::PushBool ? wbool() : rule == RuleId::PushTrue ? wtrue() : wfalse();
        return ExprPair{c, m, wsubapp(k, sg), k};
      }
      case RuleId::PushIf: {
        auto [sg, d] = sub_unique(c, b);
        WExprPtr mo = expr(plus(d, var_entry(mt.identity_modality(m))), b);
        WExprPtr cond = expr(d, b), x = expr(d, b), y = expr(d, b);
        return ExprPair{c, m, wsubapp(wif(mo, cond, x, y), sg),
                        wif(wsubapp(mo, wsub_lift(sg)), wsubapp(cond, sg), wsubapp(x, sg), wsubapp(y, sg))};
      }
      case RuleId::PushArrow: {
        auto [sg, d] = sub_unique(c, b);
        ModalityId mu = choose(mods_into(m));
        WExprPtr a = expr(plus(d, lock_entry(mu)), b), r = expr(plus(d, var_entry(mu)), b);
        return ExprPair{c, m, wsubapp(warrow(mu, a, r), sg),
                        warrow(mu, wsubapp(a, ws_lock(sg, mu)), wsubapp(r, wsub_lift(sg)))};
      }
      case RuleId::PushLam: {
        auto [sg, d] = sub_unique(c, b);
        ModalityId mu = choose(mods_into(m));
        WExprPtr t = expr(plus(d, var_entry(mu)), b);
        return ExprPair{c, m, wsubapp(wlam(mu, t), sg), wlam(mu, wsubapp(t, wsub_lift(sg)))};
      }
      case RuleId::PushApp: {
        auto [sg, d] = sub_unique(c, b);
        ModalityId mu = choose(mods_into(m));
        WExprPtr f = expr(d, b), a = expr(plus(d, lock_entry(mu)), b);
        return ExprPair{c, m, wsubapp(wapp(mu, f, a), sg),
                        wapp(mu, wsubapp(f, sg), wsubapp(a, ws_lock(sg, mu)))};
      }
      case RuleId::PushModTy: {
        auto [sg, d] = sub_unique(c, b);
        ModalityId mu = choose(mods_into(m));
        WExprPtr t = expr(plus(d, lock_entry(mu)), b);
        return ExprPair{c, m, wsubapp(wmodty(mu, t), sg), wmodty(mu, wsubapp(t, ws_lock(sg, mu)))};
      }
      case RuleId::PushModTm: {
        auto [sg, d] = sub_unique(c, b);
        ModalityId mu = choose(mods_into(m));
        WExprPtr t = expr(plus(d, lock_entry(mu)), b);
        return ExprPair{c, m, wsubapp(wmodtm(mu, t), sg), wmodtm(mu, wsubapp(t, ws_lock(sg, mu)))};
      }
      case RuleId::PushLetMod: {
        auto [sg, d] = sub_unique(c, b);
        std::vector<std::pair<ModalityId, ModalityId>> pairs = letmod_pairs(m);
        if (pairs.empty()) return std::nullopt;
        auto [nu, mu] = choose(pairs);
        WExprPtr ann = expr(plus(plus(d, lock_entry(nu)), lock_entry(mu)), b);
        WExprPtr mo = expr(plus(d, var_entry(nu)), b);
        WExprPtr scrut = expr(plus(d, lock_entry(nu)), b);
        WExprPtr body = expr(plus(d, var_entry(mt.compose_modalities(nu, mu))), b);
        return ExprPair{c, m, wsubapp(wletmod(nu, mu, ann, mo, scrut, body), sg),
                        wletmod(nu, mu, wsubapp(ann, ws_lock(ws_lock(sg, nu), mu)),
                                wsubapp(mo, wsub_lift(sg)), wsubapp(scrut, ws_lock(sg, nu)),
                                wsubapp(body, wsub_lift(sg)))};
      }
      case RuleId::EmptyUnique: {
        auto [step, d] = sub(c, budget);
        (void)d;
        return SubPair{c, SCtx{m, {}}, m, ws_comp(ws_empty(), step), ws_empty()};
      }
      case RuleId::ExtendVar: {
        auto [sg, d] = sub(c, b);
        ModalityId mu = choose(mods_into(mode_of(mt, d)));
        WExprPtr t = expr(plus(c, lock_entry(mu)), b);
        return ExprPair{plus(c, lock_entry(mu)), mt.modality(mu).dom,
                        wsubapp(wvar0(), ws_lock(ws_ext(sg, t), mu)), t};
      }
      case RuleId::ExtendWeaken: {
        auto [sg, d] = sub(c, b);
        ModalityId mu = choose(mods_into(mode_of(mt, d)));
        WExprPtr t = expr(plus(c, lock_entry(mu)), b);
        return SubPair{c, d, m, ws_comp(ws_weaken(), ws_ext(sg, t)), sg};
      }
      case RuleId::ExtendEta: {
        for (int i = 0; i < 20; ++i) {
          auto [sg, d] = sub_unique(c, budget);
          if (d.entries.empty() || d.entries.back().kind != EntryKind::Var) continue;
          ModalityId mu = d.entries.back().mod;
          return SubPair{c, d, m, sg,
                         ws_ext(ws_comp(ws_weaken(), sg), wsubapp(wvar0(), ws_lock(sg, mu)))};
        }
        return std::nullopt;
      }
      case RuleId::LockId: {
        ModalityId mu = choose(mods_into(m));
        SCtx locked = plus(c, lock_entry(mu));
        return SubPair{locked, locked, mt.modality(mu).dom, ws_lock(ws_id(), mu), ws_id()};
      }
      case RuleId::LockCompose: {
        auto [tau, d1] = sub(c, b);
        auto [sg, d2] = sub(d1, b);
        ModalityId mu = choose(mods_into(m));
        return SubPair{plus(c, lock_entry(mu)), plus(d2, lock_entry(mu)), mt.modality(mu).dom,
                       ws_lock(ws_comp(sg, tau), mu), ws_comp(ws_lock(sg, mu), ws_lock(tau, mu))};
      }
      case RuleId::KeyNatural: {
        auto [sg, d] = sub_unique(c, b);
        struct Opt {
          LockTele lam, theta;
          CellId cell;
        };
        std::vector<Opt> opts;
        for (const LockTele &lam : enumerate_lock_teles(mt, m, tele_depth))
          for (const LockTele &theta : enumerate_lock_teles(mt, m, tele_depth))
            for (CellId cell : mt.cells_between(locks_of(mt, lam), locks_of(mt, theta)))
              opts.push_back({lam, theta, cell});
        if (opts.empty()) return std::nullopt;
        const Opt &o = choose(opts);
        WSubPtr lhs = ws_comp(ws_key(o.cell, o.lam, o.theta, d), wsub_lock_tele(sg, o.theta));
        WSubPtr rhs = ws_comp(wsub_lock_tele(sg, o.lam), ws_key(o.cell, o.lam, o.theta, c));
        return SubPair{append_lock_tele(mt, c, o.theta), append_lock_tele(mt, d, o.lam),
                       tele_inner_mode(mt, o.lam), lhs, rhs};
      }
      case RuleId::KeyUnit: {
        std::vector<LockTele> teles = enumerate_lock_teles(mt, m, tele_depth);
        const LockTele &lam = choose(teles);
        SCtx locked = append_lock_tele(mt, c, lam);
        return SubPair{locked, locked, tele_inner_mode(mt, lam),
                       ws_key(mt.identity_cell(locks_of(mt, lam)), lam, lam, c), ws_id()};
      }
      case RuleId::KeyComposeVertical: {
        struct Opt {
          LockTele lam, theta, psi;
          CellId first, second, composite;
        };
        std::vector<Opt> opts;
        std::vector<LockTele> teles = enumerate_lock_teles(mt, m, tele_depth);
        for (const LockTele &lam : teles)
          for (const LockTele &theta : teles)
            for (const LockTele &psi : teles)
              for (CellId a : mt.cells_between(locks_of(mt, lam), locks_of(mt, theta)))
                for (CellId bb : mt.cells_between(locks_of(mt, theta), locks_of(mt, psi)))
                  if (std::optional<CellId> vc = mt.vcomp_opt(bb, a))
                    opts.push_back({lam, theta, psi, a, bb, *vc});
        if (opts.empty()) return std::nullopt;
        const Opt &o = choose(opts);
        WSubPtr lhs = ws_key(o.composite, o.lam, o.psi, c);
        WSubPtr rhs = ws_comp(ws_key(o.first, o.lam, o.theta, c), ws_key(o.second, o.theta, o.psi, c));
        return SubPair{append_lock_tele(mt, c, o.psi), append_lock_tele(mt, c, o.lam),
                       tele_inner_mode(mt, o.lam), lhs, rhs};
      }
      case RuleId::KeyComposeHorizontal: {
        struct Opt {
          LockTele l1, l2, t1, t2;
          CellId outer, inner, composite;
        };
        std::vector<Opt> opts;
        for (const LockTele &l1 : enumerate_lock_teles(mt, m, tele_depth))
          for (const LockTele &l2 : enumerate_lock_teles(mt, m, tele_depth))
            for (CellId beta : mt.cells_between(locks_of(mt, l1), locks_of(mt, l2))) {
              ModeId n = tele_inner_mode(mt, l1);
              for (const LockTele &t1 : enumerate_lock_teles(mt, n, tele_depth))
                for (const LockTele &t2 : enumerate_lock_teles(mt, n, tele_depth))
                  for (CellId alpha : mt.cells_between(locks_of(mt, t1), locks_of(mt, t2)))
                    if (std::optional<CellId> h = mt.hcomp_opt(beta, alpha))
                      opts.push_back({l1, l2, t1, t2, beta, alpha, *h});
            }
        if (opts.empty()) return std::nullopt;
        const Opt &o = choose(opts);
        WSubPtr lhs = ws_key(o.composite, lock_tele_concat(mt, o.l1, o.t1),
                             lock_tele_concat(mt, o.l2, o.t2), c);
        WSubPtr rhs = ws_comp(wsub_lock_tele(ws_key(o.outer, o.l1, o.l2, c), o.t1),
                              ws_key(o.inner, o.t1, o.t2, append_lock_tele(mt, c, o.l2)));
        return SubPair{append_lock_tele(mt, append_lock_tele(mt, c, o.l2), o.t2),
                       append_lock_tele(mt, append_lock_tele(mt, c, o.l1), o.t1),
                       tele_inner_mode(mt, o.t1), lhs, rhs};
      }
    }
    throw Error("unknown rule identifier");
  }
};

bool instance_scopes(const ModeTheory &mt, const RuleInstance &inst) {
  if (const ExprPair *e = std::get_if<ExprPair>(&inst))
    return check_wexpr(mt, e->ctx, e->lhs, e->mode).ok && check_wexpr(mt, e->ctx, e->rhs, e->mode).ok;
  const SubPair &s = std::get<SubPair>(inst);
  return check_wsub(mt, s.from, s.lhs, s.to, s.mode).ok && check_wsub(mt, s.from, s.rhs, s.to, s.mode).ok;
}

}  // namespace

std::optional<RuleInstance> sigma_axiom_instance(const ModeTheory &mt, RuleId rule, const GenConfig &cfg) {
  if (cfg.max_size < 1 || cfg.max_tele_depth < 0) throw Error("generator bounds must be positive");
  Gen g(mt, cfg);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::optional<RuleInstance> inst;
    try {
      inst = g.instance(rule, cfg.max_size);
    } catch (const Error &) {
      continue;
    }
    if (inst && instance_scopes(mt, *inst)) return inst;
  }
  return std::nullopt;
}

SCtx gen_sctx(const ModeTheory &mt, const GenConfig &cfg) {
  Gen g(mt, cfg);
  return g.ctx(g.pick(std::max(cfg.max_tele_depth, 0) + 1));
}

WExprPtr gen_wexpr(const ModeTheory &mt, const SCtx &ctx, ModeId mode, const GenConfig &cfg) {
  CheckResult c = check_sctx(mt, ctx);
  if (!c) throw Error("generator context: " + c.message);
  if (mode_of(mt, ctx) != mode) throw Error("generator context is not at the requested mode");
  if (cfg.max_size < 1) throw Error("generator needs a positive size budget");
  Gen g(mt, cfg);
  return g.expr(ctx, cfg.max_size);
}

std::optional<std::pair<WSubPtr, SCtx>> gen_wsub(const ModeTheory &mt, const SCtx &from, const std::optional<SCtx> &to, ModeId mode, const GenConfig &cfg) {
  CheckResult c = check_sctx(mt, from);
  if (!c) throw Error("generator source context: " + c.message);
  if (mode_of(mt, from) != mode) throw Error("generator source context is not at the requested mode");
  if (cfg.max_size < 1) throw Error("generator needs a positive size budget");
  Gen g(mt, cfg);
  if (!to) return g.sub(from, cfg.max_size);
  c = check_sctx(mt, *to);
  if (!c) throw Error("generator target context: " + c.message);
  if (mode_of(mt, *to) != mode) throw Error("generator target context is not at the requested mode");
  if (std::optional<WSubPtr> got = g.sub_to(from, *to, cfg.max_size, 100)) return std::pair{*got, *to};
  return std::nullopt;
}

namespace {

void oracle_check_mod(const ModeTheory &mt, ModalityId mu) {
  if (mu < 0 || mu >= mt.modality_count() || !mt.is_identity_modality(mu))
    throw Error("oracle fragment admits only identity annotations");
}

void oracle_check(const ModeTheory &mt, const SExprPtr &e) {
  std::visit(
      overloaded{
          [&](const SEVar &x) {
            if (x.var.cell < 0 || x.var.cell >= mt.cell_count() || !mt.is_identity_cell(x.var.cell))
              throw Error("oracle fragment admits only identity cells");
          },
          [](const SEBool &) {},
          [](const SETrue &) {},
          [](const SEFalse &) {},
          [&](const SEIf &x) {
            for (const SExprPtr &part : {x.motive, x.cond, x.on_true, x.on_false}) oracle_check(mt, part);
          },
          [&](const SEArrow &x) {
            oracle_check_mod(mt, x.mod);
            oracle_check(mt, x.dom);
            oracle_check(mt, x.cod);
          },
          [&](const SELam &x) {
            oracle_check_mod(mt, x.mod);
            oracle_check(mt, x.body);
          },
          [&](const SEApp &x) {
            oracle_check_mod(mt, x.mod);
            oracle_check(mt, x.fun);
            oracle_check(mt, x.arg);
          },
          [&](const SEModTy &x) {
            oracle_check_mod(mt, x.mod);
            oracle_check(mt, x.body);
          },
          [&](const SEModTm &x) {
            oracle_check_mod(mt, x.mod);
            oracle_check(mt, x.body);
          },
          [&](const SELetMod &x) {
            oracle_check_mod(mt, x.outer);
            oracle_check_mod(mt, x.inner);
            for (const SExprPtr &part : {x.ann, x.motive, x.scrut, x.body}) oracle_check(mt, part);
          },
      },
      e->node);
}

SExprPtr oracle_shift(const SExprPtr &e, int cutoff, int delta) {
  return std::visit(
      overloaded{
          [&](const SEVar &x) {
            SVar v = x.var;
            if (v.sucs >= cutoff) v.sucs += delta;
            return se_var(v);
          },
          [&](const SEBool &) { return e; },
          [&](const SETrue &) { return e; },
          [&](const SEFalse &) { return e; },
          [&](const SEIf &x) {
            return se_if(oracle_shift(x.motive, cutoff + 1, delta), oracle_shift(x.cond, cutoff, delta),
                         oracle_shift(x.on_true, cutoff, delta), oracle_shift(x.on_false, cutoff, delta));
          },
          [&](const SEArrow &x) {
            return se_arrow(x.mod, oracle_shift(x.dom, cutoff, delta), oracle_shift(x.cod, cutoff + 1, delta));
          },
          [&](const SELam &x) { return se_lam(x.mod, oracle_shift(x.body, cutoff + 1, delta)); },
          [&](const SEApp &x) {
            return se_app(x.mod, oracle_shift(x.fun, cutoff, delta), oracle_shift(x.arg, cutoff, delta));
          },
          [&](const SEModTy &x) { return se_modty(x.mod, oracle_shift(x.body, cutoff, delta)); },
          [&](const SEModTm &x) { return se_modtm(x.mod, oracle_shift(x.body, cutoff, delta)); },
          [&](const SELetMod &x) {
            return se_letmod(x.outer, x.inner, oracle_shift(x.ann, cutoff, delta),
                             oracle_shift(x.motive, cutoff + 1, delta), oracle_shift(x.scrut, cutoff, delta),
                             oracle_shift(x.body, cutoff + 1, delta));
          },
      },
      e->node);
}

SExprPtr oracle_apply(const ModeTheory &mt, const SExprPtr &e, const std::vector<SExprPtr> &payloads) {
  auto lifted = [&] {
    std::vector<SExprPtr> out;
    out.push_back(se_var(SVar{0, mt.identity_cell(mt.identity_modality(0))}));
    for (const SExprPtr &p : payloads) out.push_back(oracle_shift(p, 0, 1));
    return out;
  };
  return std::visit(
      overloaded{
          [&](const SEVar &x) {
            if (x.var.sucs < 0 || x.var.sucs >= int(payloads.size()))
              throw Error("variable with " + std::to_string(x.var.sucs) + " sucs is out of range");
            return payloads[size_t(x.var.sucs)];
          },
          [&](const SEBool &) { return e; },
          [&](const SETrue &) { return e; },
          [&](const SEFalse &) { return e; },
          [&](const SEIf &x) {
            return se_if(oracle_apply(mt, x.motive, lifted()), oracle_apply(mt, x.cond, payloads),
                         oracle_apply(mt, x.on_true, payloads), oracle_apply(mt, x.on_false, payloads));
          },
          [&](const SEArrow &x) {
            return se_arrow(x.mod, oracle_apply(mt, x.dom, payloads), oracle_apply(mt, x.cod, lifted()));
          },
          [&](const SELam &x) { return se_lam(x.mod, oracle_apply(mt, x.body, lifted())); },
          [&](const SEApp &x) {
            return se_app(x.mod, oracle_apply(mt, x.fun, payloads), oracle_apply(mt, x.arg, payloads));
          },
          [&](const SEModTy &x) { return se_modty(x.mod, oracle_apply(mt, x.body, payloads)); },
          [&](const SEModTm &x) { return se_modtm(x.mod, oracle_apply(mt, x.body, payloads)); },
          [&](const SELetMod &x) {
            return se_letmod(x.outer, x.inner, oracle_apply(mt, x.ann, payloads),
                             oracle_apply(mt, x.motive, lifted()), oracle_apply(mt, x.scrut, payloads),
                             oracle_apply(mt, x.body, lifted()));
          },
      },
      e->node);
}

}  // namespace

SExprPtr oracle_subst_trivial(const ModeTheory &mt, const SExprPtr &expr, const std::vector<SExprPtr> &payloads) {
  if (mt.mode_count() != 1) throw Error("oracle needs a single-mode theory");
  oracle_check(mt, expr);
  for (const SExprPtr &p : payloads) oracle_check(mt, p);
  return oracle_apply(mt, expr, payloads);
}

}  // namespace mtt

#include "mtt/wsmtt.hpp"

#include "mtt/visit.hpp"

namespace mtt {

WExprPtr wvar0() { return std::make_shared<const WExpr>(WExpr{WVar0{}}); }
WExprPtr wbool() { return std::make_shared<const WExpr>(WExpr{WBool{}}); }
WExprPtr wtrue() { return std::make_shared<const WExpr>(WExpr{WTrue{}}); }
WExprPtr wfalse() { return std::make_shared<const WExpr>(WExpr{WFalse{}}); }
WExprPtr wif(WExprPtr motive, WExprPtr cond, WExprPtr on_true, WExprPtr on_false) {
  return std::make_shared<const WExpr>(WExpr{WIf{std::move(motive), std::move(cond), std::move(on_true), std::move(on_false)}});
}
WExprPtr warrow(ModalityId mod, WExprPtr dom, WExprPtr cod) {
  return std::make_shared<const WExpr>(WExpr{WArrow{mod, std::move(dom), std::move(cod)}});
}
WExprPtr wlam(ModalityId mod, WExprPtr body) {
  return std::make_shared<const WExpr>(WExpr{WLam{mod, std::move(body)}});
}
WExprPtr wapp(ModalityId mod, WExprPtr fun, WExprPtr arg) {
  return std::make_shared<const WExpr>(WExpr{WApp{mod, std::move(fun), std::move(arg)}});
}
WExprPtr wmodty(ModalityId mod, WExprPtr body) {
  return std::make_shared<const WExpr>(WExpr{WModTy{mod, std::move(body)}});
}
WExprPtr wmodtm(ModalityId mod, WExprPtr body) {
  return std::make_shared<const WExpr>(WExpr{WModTm{mod, std::move(body)}});
}
WExprPtr wletmod(ModalityId outer, ModalityId inner, WExprPtr ann, WExprPtr motive, WExprPtr scrut, WExprPtr body) {
  return std::make_shared<const WExpr>(WExpr{WLetMod{outer, inner, std::move(ann), std::move(motive), std::move(scrut), std::move(body)}});
}
WExprPtr wsubapp(WExprPtr body, WSubPtr sub) {
  return std::make_shared<const WExpr>(WExpr{WSubApp{std::move(body), std::move(sub)}});
}

WSubPtr ws_empty() { return std::make_shared<const WSub>(WSub{WEmpty{}}); }
WSubPtr ws_id() { return std::make_shared<const WSub>(WSub{WId{}}); }
WSubPtr ws_weaken() { return std::make_shared<const WSub>(WSub{WWeaken{}}); }
WSubPtr ws_comp(WSubPtr left, WSubPtr right) {
  return std::make_shared<const WSub>(WSub{WComp{std::move(left), std::move(right)}});
}
WSubPtr ws_lock(WSubPtr sub, ModalityId mod) {
  return std::make_shared<const WSub>(WSub{WLock{std::move(sub), mod}});
}
WSubPtr ws_key(CellId cell, LockTele to_tele, LockTele from_tele, SCtx base) {
  return std::make_shared<const WSub>(WSub{WKey{cell, std::move(to_tele), std::move(from_tele), std::move(base)}});
}
WSubPtr ws_ext(WSubPtr sub, WExprPtr payload) {
  return std::make_shared<const WSub>(WSub{WExt{std::move(sub), std::move(payload)}});
}

bool wexpr_equal(const WExprPtr &a, const WExprPtr &b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [](const WVar0 &) { return true; },
          [](const WBool &) { return true; },
          [](const WTrue &) { return true; },
          [](const WFalse &) { return true; },
          [&](const WIf &x) {
            const auto &y = std::get<WIf>(b->node);
            return wexpr_equal(x.motive, y.motive) && wexpr_equal(x.cond, y.cond) &&
                   wexpr_equal(x.on_true, y.on_true) && wexpr_equal(x.on_false, y.on_false);
          },
          [&](const WArrow &x) {
            const auto &y = std::get<WArrow>(b->node);
            return x.mod == y.mod && wexpr_equal(x.dom, y.dom) && wexpr_equal(x.cod, y.cod);
          },
          [&](const WLam &x) {
            const auto &y = std::get<WLam>(b->node);
            return x.mod == y.mod && wexpr_equal(x.body, y.body);
          },
          [&](const WApp &x) {
            const auto &y = std::get<WApp>(b->node);
            return x.mod == y.mod && wexpr_equal(x.fun, y.fun) && wexpr_equal(x.arg, y.arg);
          },
          [&](const WModTy &x) {
            const auto &y = std::get<WModTy>(b->node);
            return x.mod == y.mod && wexpr_equal(x.body, y.body);
          },
          [&](const WModTm &x) {
            const auto &y = std::get<WModTm>(b->node);
            return x.mod == y.mod && wexpr_equal(x.body, y.body);
          },
          [&](const WLetMod &x) {
            const auto &y = std::get<WLetMod>(b->node);
            return x.outer == y.outer && x.inner == y.inner && wexpr_equal(x.ann, y.ann) &&
                   wexpr_equal(x.motive, y.motive) && wexpr_equal(x.scrut, y.scrut) &&
                   wexpr_equal(x.body, y.body);
          },
          [&](const WSubApp &x) {
            const auto &y = std::get<WSubApp>(b->node);
            return wexpr_equal(x.body, y.body) && wsub_equal(x.sub, y.sub);
          },
      },
      a->node);
}

bool wsub_equal(const WSubPtr &a, const WSubPtr &b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [](const WEmpty &) { return true; },
          [](const WId &) { return true; },
          [](const WWeaken &) { return true; },
          [&](const WComp &x) {
            const auto &y = std::get<WComp>(b->node);
            return wsub_equal(x.left, y.left) && wsub_equal(x.right, y.right);
          },
          [&](const WLock &x) {
            const auto &y = std::get<WLock>(b->node);
            return x.mod == y.mod && wsub_equal(x.sub, y.sub);
          },
          [&](const WKey &x) {
            const auto &y = std::get<WKey>(b->node);
            return x.cell == y.cell && x.to_tele == y.to_tele && x.from_tele == y.from_tele && x.base == y.base;
          },
          [&](const WExt &x) {
            const auto &y = std::get<WExt>(b->node);
            return wsub_equal(x.sub, y.sub) && wexpr_equal(x.payload, y.payload);
          },
      },
      a->node);
}

namespace {

using Visit = std::function<bool(const SCtx &)>;

CheckResult expr_impl(const ModeTheory &mt, const SCtx &ctx, const WExprPtr &expr);
bool targets_impl(const ModeTheory &mt, const SCtx &from, const WSubPtr &sub, const Visit &visit);

// Key payload validation shared between the checker and target search.
CheckResult key_shape(const ModeTheory &mt, const WKey &k, SCtx *from, SCtx *to) {
  CheckResult base = check_sctx(mt, k.base);
  if (!base) return CheckResult::fail("key base: " + base.message);
  ModeId outer = mode_of(mt, k.base);
  if (k.to_tele.outer != outer || k.from_tele.outer != outer)
    return CheckResult::fail("key telescopes do not start at the base context's mode");
  if (!check_lock_tele(mt, k.to_tele) || !check_lock_tele(mt, k.from_tele))
    return CheckResult::fail("key telescope is ill-formed");
  if (k.cell < 0 || k.cell >= mt.cell_count()) return CheckResult::fail("key cell out of range");
  const CellInfo &cell = mt.cell(k.cell);
  if (cell.dom != locks_of(mt, k.to_tele) || cell.cod != locks_of(mt, k.from_tele))
    return CheckResult::fail("key cell " + cell.name + " does not go from locks" + format_lock_tele(mt, k.to_tele) + " to locks" + format_lock_tele(mt, k.from_tele));
  if (from) *from = append_lock_tele(mt, k.base, k.from_tele);
  if (to) *to = append_lock_tele(mt, k.base, k.to_tele);
  return CheckResult::pass();
}

bool targets_impl(const ModeTheory &mt, const SCtx &from, const WSubPtr &sub, const Visit &visit) {
  return std::visit(
      overloaded{
          [&](const WEmpty &) { return visit(SCtx{mode_of(mt, from), {}}); },
          [&](const WId &) { return visit(from); },
          [&](const WWeaken &) {
            if (from.entries.empty() || from.entries.back().kind != EntryKind::Var) return false;
            SCtx to = from;
            to.entries.pop_back();
            return visit(to);
          },
          [&](const WComp &c) {
            return targets_impl(mt, from, c.right, [&](const SCtx &mid) {
              return targets_impl(mt, mid, c.left, visit);
            });
          },
          [&](const WLock &l) {
            if (from.entries.empty() || from.entries.back() != lock_entry(l.mod)) return false;
            SCtx peeled = from;
            peeled.entries.pop_back();
            return targets_impl(mt, peeled, l.sub, [&](const SCtx &mid) {
              SCtx to = mid;
              to.entries.push_back(lock_entry(l.mod));
              return visit(to);
            });
          },
          [&](const WKey &k) {
            SCtx kf, kt;
            if (!key_shape(mt, k, &kf, &kt)) return false;
            if (!(kf == from)) return false;
            return visit(kt);
          },
          [&](const WExt &e) {
            return targets_impl(mt, from, e.sub, [&](const SCtx &mid) {
              ModeId n = mode_of(mt, mid);
              for (ModalityId mu = 0; mu < mt.modality_count(); ++mu) {
                if (mt.modality(mu).cod != n) continue;
                SCtx payload_ctx = from;
                payload_ctx.entries.push_back(lock_entry(mu));
                if (!expr_impl(mt, payload_ctx, e.payload)) continue;
                SCtx to = mid;
                to.entries.push_back(var_entry(mu));
                if (visit(to)) return true;
              }
              return false;
            });
          },
      },
      sub->node);
}

CheckResult sub_impl(const ModeTheory &mt, const SCtx &from, const WSubPtr &sub, const SCtx &to) {
  return std::visit(
      overloaded{
          [&](const WEmpty &) {
            if (to == SCtx{mode_of(mt, from), {}}) return CheckResult::pass();
            return CheckResult::fail("empty substitution targets the empty context, not " + format_ctx(mt, to));
          },
          [&](const WId &) {
            if (to == from) return CheckResult::pass();
            return CheckResult::fail("identity substitution needs equal endpoints");
          },
          [&](const WWeaken &) {
            if (from.entries.empty() || from.entries.back().kind != EntryKind::Var)
              return CheckResult::fail("weakening needs a variable at the inner end of " + format_ctx(mt, from));
            SCtx peeled = from;
            peeled.entries.pop_back();
            if (to == peeled) return CheckResult::pass();
            return CheckResult::fail("weakening from " + format_ctx(mt, from) + " targets " + format_ctx(mt, peeled));
          },
          [&](const WComp &c) {
            bool ok = targets_impl(mt, from, c.right, [&](const SCtx &mid) {
              return bool(sub_impl(mt, mid, c.left, to));
            });
            if (ok) return CheckResult::pass();
            return CheckResult::fail("no intermediate context makes the composite go from " + format_ctx(mt, from) + " to " + format_ctx(mt, to));
          },
          [&](const WLock &l) {
            if (from.entries.empty() || from.entries.back() != lock_entry(l.mod))
              return CheckResult::fail("locked substitution needs " + mt.modality(l.mod).name + " locked at the inner end of " + format_ctx(mt, from));
            if (to.entries.empty() || to.entries.back() != lock_entry(l.mod))
              return CheckResult::fail("locked substitution needs " + mt.modality(l.mod).name + " locked at the inner end of " + format_ctx(mt, to));
            SCtx f = from, t = to;
            f.entries.pop_back();
            t.entries.pop_back();
            return sub_impl(mt, f, l.sub, t);
          },
          [&](const WKey &k) {
            SCtx kf, kt;
            CheckResult shape = key_shape(mt, k, &kf, &kt);
            if (!shape) return shape;
            if (!(kf == from)) return CheckResult::fail("key source is " + format_ctx(mt, kf) + ", not " + format_ctx(mt, from));
            if (!(kt == to)) return CheckResult::fail("key target is " + format_ctx(mt, kt) + ", not " + format_ctx(mt, to));
            return CheckResult::pass();
          },
          [&](const WExt &e) {
            if (to.entries.empty() || to.entries.back().kind != EntryKind::Var)
              return CheckResult::fail("extension targets a context ending in a variable, not " + format_ctx(mt, to));
            ModalityId mu = to.entries.back().mod;
            SCtx base = to;
            base.entries.pop_back();
            CheckResult inner = sub_impl(mt, from, e.sub, base);
            if (!inner) return inner;
            SCtx payload_ctx = from;
            payload_ctx.entries.push_back(lock_entry(mu));
            CheckResult payload = expr_impl(mt, payload_ctx, e.payload);
            if (!payload) return CheckResult::fail("extension payload: " + payload.message);
            return CheckResult::pass();
          },
      },
      sub->node);
}

CheckResult expr_impl(const ModeTheory &mt, const SCtx &ctx, const WExprPtr &expr) {
  ModeId mode = mode_of(mt, ctx);
  auto into = [&](ModalityId mu) { return mu >= 0 && mu < mt.modality_count() && mt.modality(mu).cod == mode; };
  auto plus_var = [&](ModalityId mu) {
    SCtx c = ctx;
    c.entries.push_back(var_entry(mu));
    return c;
  };
  auto plus_lock = [&](ModalityId mu) {
    SCtx c = ctx;
    c.entries.push_back(lock_entry(mu));
    return c;
  };
  return std::visit(
      overloaded{
          [&](const WVar0 &) {
            size_t s = ctx.entries.size();
            if (s >= 2 && ctx.entries[s - 1].kind == EntryKind::Lock &&
                ctx.entries[s - 2] == var_entry(ctx.entries[s - 1].mod))
              return CheckResult::pass();
            return CheckResult::fail("v0 needs a context ending in a variable directly under its own lock, got " + format_ctx(mt, ctx));
          },
          [&](const WBool &) { return CheckResult::pass(); },
          [&](const WTrue &) { return CheckResult::pass(); },
          [&](const WFalse &) { return CheckResult::pass(); },
          [&](const WIf &x) {
            CheckResult r = expr_impl(mt, plus_var(mt.identity_modality(mode)), x.motive);
            if (!r) return CheckResult::fail("if motive: " + r.message);
            for (auto [part, name] : {std::pair{&x.cond, "if condition"}, {&x.on_true, "if true branch"}, {&x.on_false, "if false branch"}}) {
              r = expr_impl(mt, ctx, *part);
              if (!r) return CheckResult::fail(std::string(name) + ": " + r.message);
            }
            return CheckResult::pass();
          },
          [&](const WArrow &x) {
            if (!into(x.mod)) return CheckResult::fail("arrow annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = expr_impl(mt, plus_lock(x.mod), x.dom);
            if (!r) return CheckResult::fail("arrow domain: " + r.message);
            r = expr_impl(mt, plus_var(x.mod), x.cod);
            if (!r) return CheckResult::fail("arrow codomain: " + r.message);
            return CheckResult::pass();
          },
          [&](const WLam &x) {
            if (!into(x.mod)) return CheckResult::fail("lambda annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = expr_impl(mt, plus_var(x.mod), x.body);
            if (!r) return CheckResult::fail("lambda body: " + r.message);
            return CheckResult::pass();
          },
          [&](const WApp &x) {
            if (!into(x.mod)) return CheckResult::fail("application annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = expr_impl(mt, ctx, x.fun);
            if (!r) return CheckResult::fail("application head: " + r.message);
            r = expr_impl(mt, plus_lock(x.mod), x.arg);
            if (!r) return CheckResult::fail("application argument: " + r.message);
            return CheckResult::pass();
          },
          [&](const WModTy &x) {
            if (!into(x.mod)) return CheckResult::fail("modal type annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = expr_impl(mt, plus_lock(x.mod), x.body);
            if (!r) return CheckResult::fail("modal type body: " + r.message);
            return CheckResult::pass();
          },
          [&](const WModTm &x) {
            if (!into(x.mod)) return CheckResult::fail("modal intro annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = expr_impl(mt, plus_lock(x.mod), x.body);
            if (!r) return CheckResult::fail("modal intro body: " + r.message);
            return CheckResult::pass();
          },
          [&](const WLetMod &x) {
            if (!into(x.outer)) return CheckResult::fail("letmod outer annotation does not land in mode " + mt.mode_name(mode));
            if (x.inner < 0 || x.inner >= mt.modality_count() || mt.modality(x.inner).cod != mt.modality(x.outer).dom)
              return CheckResult::fail("letmod binder annotation does not land in the outer annotation's domain");
            auto comp = mt.compose_opt(x.outer, x.inner);
            if (!comp) return CheckResult::fail("letmod composite " + mt.modality(x.outer).name + " . " + mt.modality(x.inner).name + " is not in the table");
            SCtx ann_ctx = plus_lock(x.outer);
            ann_ctx.entries.push_back(lock_entry(x.inner));
            CheckResult r = expr_impl(mt, ann_ctx, x.ann);
            if (!r) return CheckResult::fail("letmod annotation: " + r.message);
            r = expr_impl(mt, plus_var(x.outer), x.motive);
            if (!r) return CheckResult::fail("letmod motive: " + r.message);
            r = expr_impl(mt, plus_lock(x.outer), x.scrut);
            if (!r) return CheckResult::fail("letmod scrutinee: " + r.message);
            r = expr_impl(mt, plus_var(*comp), x.body);
            if (!r) return CheckResult::fail("letmod body: " + r.message);
            return CheckResult::pass();
          },
          [&](const WSubApp &x) {
            CheckResult first_body_failure = CheckResult::pass();
            bool any_target = false;
            bool ok = targets_impl(mt, ctx, x.sub, [&](const SCtx &to) {
              any_target = true;
              CheckResult r = expr_impl(mt, to, x.body);
              if (!r && first_body_failure.ok) first_body_failure = r;
              return bool(r);
            });
            if (ok) return CheckResult::pass();
            if (!any_target)
              return CheckResult::fail("substitution has no scope-checkable target from " + format_ctx(mt, ctx));
            return CheckResult::fail("substitution body fails in every reachable target; first failure: " + first_body_failure.message);
          },
      },
      expr->node);
}

}  // namespace

bool for_each_wsub_target(const ModeTheory &mt, const SCtx &from, const WSubPtr &sub, const Visit &visit) {
  if (!check_sctx(mt, from)) return false;
  std::vector<SCtx> seen;
  Visit dedup = [&](const SCtx &to) {
    for (const SCtx &s : seen)
      if (s == to) return false;
    seen.push_back(to);
    return visit(to);
  };
  return targets_impl(mt, from, sub, dedup);
}

CheckResult check_wexpr(const ModeTheory &mt, const SCtx &ctx, const WExprPtr &expr, ModeId mode) {
  CheckResult c = check_sctx(mt, ctx);
  if (!c) return CheckResult::fail("context: " + c.message);
  if (mode_of(mt, ctx) != mode)
    return CheckResult::fail("context " + format_ctx(mt, ctx) + " is not at mode " + mt.mode_name(mode));
  return expr_impl(mt, ctx, expr);
}

CheckResult check_wsub(const ModeTheory &mt, const SCtx &from, const WSubPtr &sub, const SCtx &to, ModeId mode) {
  CheckResult c = check_sctx(mt, from);
  if (!c) return CheckResult::fail("source context: " + c.message);
  c = check_sctx(mt, to);
  if (!c) return CheckResult::fail("target context: " + c.message);
  if (mode_of(mt, from) != mode)
    return CheckResult::fail("source context is not at mode " + mt.mode_name(mode));
  if (mode_of(mt, to) != mode)
    return CheckResult::fail("target context is not at mode " + mt.mode_name(mode));
  return sub_impl(mt, from, sub, to);
}

WSubPtr wsub_lift(const WSubPtr &sub) {
  return ws_ext(ws_comp(sub, ws_weaken()), wvar0());
}

WSubPtr wsub_lock_tele(const WSubPtr &sub, const LockTele &tele) {
  WSubPtr out = sub;
  for (ModalityId mu : tele.mods) out = ws_lock(out, mu);
  return out;
}

}  // namespace mtt

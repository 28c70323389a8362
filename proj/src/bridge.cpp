#include "mtt/bridge.hpp"

#include <optional>

#include "mtt/visit.hpp"

namespace mtt {

namespace {

void require_into(const ModeTheory &mt, ModalityId mu, ModeId mode, const char *what) {
  if (mu < 0 || mu >= mt.modality_count() || mt.modality(mu).cod != mode)
    throw Error(std::string(what) + " does not land in the judgement's mode");
}

}  // namespace

SExprPtr translate_expr(const ModeTheory &mt, const SCtx &ctx, const WExprPtr &e) {
  ModeId mode = mode_of(mt, ctx);
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
          [&](const WVar0 &) -> SExprPtr {
            if (ctx.entries.size() < 2) throw Error("zero variable needs a binder under its lock");
            const Entry &lk = ctx.entries.back(), &vr = ctx.entries[ctx.entries.size() - 2];
            if (lk.kind != EntryKind::Lock || vr.kind != EntryKind::Var || lk.mod != vr.mod)
              throw Error("zero variable needs the context to end with a binder and its lock");
            return se_var(SVar{0, mt.identity_cell(vr.mod)});
          },
          [&](const WBool &) { return se_bool(); },
          [&](const WTrue &) { return se_true(); },
          [&](const WFalse &) { return se_false(); },
          [&](const WIf &x) {
            return se_if(translate_expr(mt, plus_var(mt.identity_modality(mode)), x.motive),
                         translate_expr(mt, ctx, x.cond), translate_expr(mt, ctx, x.on_true),
                         translate_expr(mt, ctx, x.on_false));
          },
          [&](const WArrow &x) {
            require_into(mt, x.mod, mode, "arrow annotation");
            return se_arrow(x.mod, translate_expr(mt, plus_lock(x.mod), x.dom),
                            translate_expr(mt, plus_var(x.mod), x.cod));
          },
          [&](const WLam &x) {
            require_into(mt, x.mod, mode, "lambda annotation");
            return se_lam(x.mod, translate_expr(mt, plus_var(x.mod), x.body));
          },
          [&](const WApp &x) {
            require_into(mt, x.mod, mode, "application annotation");
            return se_app(x.mod, translate_expr(mt, ctx, x.fun),
                          translate_expr(mt, plus_lock(x.mod), x.arg));
          },
          [&](const WModTy &x) {
            require_into(mt, x.mod, mode, "modal type annotation");
            return se_modty(x.mod, translate_expr(mt, plus_lock(x.mod), x.body));
          },
          [&](const WModTm &x) {
            require_into(mt, x.mod, mode, "modal intro annotation");
            return se_modtm(x.mod, translate_expr(mt, plus_lock(x.mod), x.body));
          },
          [&](const WLetMod &x) {
            require_into(mt, x.outer, mode, "letmod outer annotation");
            if (x.inner < 0 || x.inner >= mt.modality_count() || mt.modality(x.inner).cod != mt.modality(x.outer).dom)
              throw Error("letmod binder annotation does not land in the outer annotation's domain");
            auto comp = mt.compose_opt(x.outer, x.inner);
            if (!comp) throw Error("letmod composite is not in the table");
            SCtx ann_ctx = plus_lock(x.outer);
            ann_ctx.entries.push_back(lock_entry(x.inner));
            return se_letmod(x.outer, x.inner, translate_expr(mt, ann_ctx, x.ann),
                             translate_expr(mt, plus_var(x.outer), x.motive),
                             translate_expr(mt, plus_lock(x.outer), x.scrut),
                             translate_expr(mt, plus_var(*comp), x.body));
          },
          [&](const WSubApp &x) -> SExprPtr {
            SExprPtr out;
            std::string reason = "no target context synthesized";
            bool seen = false;
            for_each_wsub_target(mt, ctx, x.sub, [&](const SCtx &target) {
              CheckResult c = check_wexpr(mt, target, x.body, mode_of(mt, target));
              if (!c) {
                if (!seen) reason = c.message;
                seen = true;
                return false;
              }
              out = apply_rensub_expr(mt, translate_expr(mt, target, x.body),
                                      translate_sub(mt, ctx, x.sub, target));
              return true;
            });
            if (!out) throw Error("substituted body does not scope: " + reason);
            return out;
          },
      },
      e->node);
}

SubSeq translate_sub(const ModeTheory &mt, const SCtx &from, const WSubPtr &s, const SCtx &to) {
  return std::visit(
      overloaded{
          [&](const WEmpty &) -> SubSeq {
            if (!(to == SCtx{mode_of(mt, from), {}})) throw Error("terminal substitution must target the empty context");
            return seq_of(mt, a_empty<SExprPtr>(mt, from));
          },
          [&](const WId &) -> SubSeq {
            if (!(from == to)) throw Error("identity substitution needs equal contexts");
            return seq_id<SExprPtr>(mt, from);
          },
          [&](const WWeaken &) -> SubSeq {
            if (from.entries.empty() || from.entries.back().kind != EntryKind::Var)
              throw Error("projection needs a variable to drop");
            SCtx peeled = from;
            peeled.entries.pop_back();
            if (!(peeled == to)) throw Error("projection target does not match");
            return seq_of(mt, pi_atomic<SExprPtr>(mt, to, from.entries.back().mod));
          },
          [&](const WComp &c) -> SubSeq {
            std::optional<SubSeq> out;
            for_each_wsub_target(mt, from, c.right, [&](const SCtx &mid) {
              if (!check_wsub(mt, mid, c.left, to, mode_of(mt, mid))) return false;
              out = seq_concat(mt, translate_sub(mt, mid, c.left, to), translate_sub(mt, from, c.right, mid));
              return true;
            });
            if (!out) throw Error("composition has no intermediate context reaching " + format_ctx(mt, to));
            return *out;
          },
          [&](const WLock &l) -> SubSeq {
            if (from.entries.empty() || from.entries.back() != lock_entry(l.mod) ||
                to.entries.empty() || to.entries.back() != lock_entry(l.mod))
              throw Error("locked substitution needs both contexts to end with its lock");
            SCtx f = from, t = to;
            f.entries.pop_back();
            t.entries.pop_back();
            return seq_lock(mt, translate_sub(mt, f, l.sub, t), l.mod);
          },
          [&](const WKey &k) -> SubSeq {
            ASubPtr atom = a_key<SExprPtr>(mt, k.cell, k.to_tele, k.from_tele, k.base);
            if (!(atom->from == from) || !(atom->to == to)) throw Error("key endpoints do not match");
            return seq_of(mt, atom);
          },
          [&](const WExt &x) -> SubSeq {
            if (to.entries.empty() || to.entries.back().kind != EntryKind::Var)
              throw Error("extension must target a context ending in a variable");
            ModalityId mu = to.entries.back().mod;
            SCtx inner_to = to;
            inner_to.entries.pop_back();
            SubSeq inner = translate_sub(mt, from, x.sub, inner_to);
            SCtx payload_ctx = from;
            payload_ctx.entries.push_back(lock_entry(mu));
            SExprPtr payload = translate_expr(mt, payload_ctx, x.payload);
            return seq_concat(mt, seq_lift(mt, inner, mu),
                              seq_of(mt, a_extend(mt, a_id<SExprPtr>(mt, from), mu, payload)));
          },
      },
      s->node);
}

WExprPtr embed_var(const ModeTheory &mt, const SCtx &ctx, const SVar &v) {
  size_t i = ctx.entries.size();
  while (i > 0 && ctx.entries[i - 1].kind == EntryKind::Lock) --i;
  if (i == 0) throw Error("variable in a context without variables");
  SCtx base = ctx;
  base.entries.resize(i);
  LockTele suffix{mode_of(mt, base), {}};
  for (size_t j = i; j < ctx.entries.size(); ++j) suffix.mods.push_back(ctx.entries[j].mod);
  if (v.sucs == 0) {
    ModalityId mu = ctx.entries[i - 1].mod;
    return wsubapp(wvar0(), ws_key(v.cell, LockTele{suffix.outer, {mu}}, suffix, base));
  }
  SCtx peeled = base;
  peeled.entries.pop_back();
  for (size_t j = i; j < ctx.entries.size(); ++j) peeled.entries.push_back(ctx.entries[j]);
  return wsubapp(embed_var(mt, peeled, SVar{v.sucs - 1, v.cell}), wsub_lock_tele(ws_weaken(), suffix));
}

WExprPtr embed_expr(const ModeTheory &mt, const SCtx &ctx, const SExprPtr &e) {
  ModeId mode = mode_of(mt, ctx);
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
          [&](const SEVar &x) { return embed_var(mt, ctx, x.var); },
          [&](const SEBool &) { return wbool(); },
          [&](const SETrue &) { return wtrue(); },
          [&](const SEFalse &) { return wfalse(); },
          [&](const SEIf &x) {
            return wif(embed_expr(mt, plus_var(mt.identity_modality(mode)), x.motive),
                       embed_expr(mt, ctx, x.cond), embed_expr(mt, ctx, x.on_true),
                       embed_expr(mt, ctx, x.on_false));
          },
          [&](const SEArrow &x) {
            return warrow(x.mod, embed_expr(mt, plus_lock(x.mod), x.dom),
                          embed_expr(mt, plus_var(x.mod), x.cod));
          },
          [&](const SELam &x) { return wlam(x.mod, embed_expr(mt, plus_var(x.mod), x.body)); },
          [&](const SEApp &x) {
            return wapp(x.mod, embed_expr(mt, ctx, x.fun), embed_expr(mt, plus_lock(x.mod), x.arg));
          },
          [&](const SEModTy &x) { return wmodty(x.mod, embed_expr(mt, plus_lock(x.mod), x.body)); },
          [&](const SEModTm &x) { return wmodtm(x.mod, embed_expr(mt, plus_lock(x.mod), x.body)); },
          [&](const SELetMod &x) {
            auto comp = mt.compose_opt(x.outer, x.inner);
            if (!comp) throw Error("letmod composite is not in the table");
            SCtx ann_ctx = plus_lock(x.outer);
            ann_ctx.entries.push_back(lock_entry(x.inner));
            return wletmod(x.outer, x.inner, embed_expr(mt, ann_ctx, x.ann),
                           embed_expr(mt, plus_var(x.outer), x.motive),
                           embed_expr(mt, plus_lock(x.outer), x.scrut),
                           embed_expr(mt, plus_var(*comp), x.body));
          },
      },
      e->node);
}

namespace {

template <class P>
WExprPtr embed_payload(const ModeTheory &mt, const SCtx &ctx, const P &payload) {
  if constexpr (std::is_same_v<P, SVar>)
    return embed_var(mt, ctx, payload);
  else
    return embed_expr(mt, ctx, payload);
}

}  // namespace

template <class P>
WSubPtr embed_atomic(const ModeTheory &mt, const AtomicPtr<P> &s) {
  return std::visit(
      overloaded{
          [&](const ANodeEmpty &) { return ws_empty(); },
          [&](const ANodeId &) { return ws_id(); },
          [&](const ANodeWeaken<P> &w) { return ws_comp(embed_atomic(mt, w.inner), ws_weaken()); },
          [&](const ANodeLock<P> &l) { return ws_lock(embed_atomic(mt, l.inner), s->from.entries.back().mod); },
          [&](const ANodeKey &k) {
            SCtx base = s->to;
            base.entries.resize(base.entries.size() - k.to_tele.mods.size());
            return ws_key(k.cell, k.to_tele, k.from_tele, base);
          },
          [&](const ANodeExtend<P> &e) {
            ModalityId mu = s->to.entries.back().mod;
            SCtx payload_ctx = e.inner->from;
            payload_ctx.entries.push_back(lock_entry(mu));
            return ws_ext(embed_atomic(mt, e.inner), embed_payload<P>(mt, payload_ctx, e.payload));
          },
      },
      s->node);
}

template <class P>
WSubPtr embed_rensub(const ModeTheory &mt, const Seq<P> &seq) {
  WSubPtr out = ws_id();
  for (const AtomicPtr<P> &item : seq.items) out = ws_comp(out, embed_atomic(mt, item));
  return out;
}

template WSubPtr embed_atomic<SVar>(const ModeTheory &, const AtomicPtr<SVar> &);
template WSubPtr embed_atomic<SExprPtr>(const ModeTheory &, const AtomicPtr<SExprPtr> &);
template WSubPtr embed_rensub<SVar>(const ModeTheory &, const Seq<SVar> &);
template WSubPtr embed_rensub<SExprPtr>(const ModeTheory &, const Seq<SExprPtr> &);

}  // namespace mtt

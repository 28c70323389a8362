#include "mtt/sfmtt.hpp"

#include "mtt/visit.hpp"

namespace mtt {

SExprPtr se_var(SVar v) { return std::make_shared<const SExpr>(SExpr{SEVar{v}}); }
SExprPtr se_bool() { return std::make_shared<const SExpr>(SExpr{SEBool{}}); }
SExprPtr se_true() { return std::make_shared<const SExpr>(SExpr{SETrue{}}); }
SExprPtr se_false() { return std::make_shared<const SExpr>(SExpr{SEFalse{}}); }
SExprPtr se_if(SExprPtr motive, SExprPtr cond, SExprPtr on_true, SExprPtr on_false) {
  return std::make_shared<const SExpr>(SExpr{SEIf{std::move(motive), std::move(cond), std::move(on_true), std::move(on_false)}});
}
SExprPtr se_arrow(ModalityId mod, SExprPtr dom, SExprPtr cod) {
  return std::make_shared<const SExpr>(SExpr{SEArrow{mod, std::move(dom), std::move(cod)}});
}
SExprPtr se_lam(ModalityId mod, SExprPtr body) {
  return std::make_shared<const SExpr>(SExpr{SELam{mod, std::move(body)}});
}
SExprPtr se_app(ModalityId mod, SExprPtr fun, SExprPtr arg) {
  return std::make_shared<const SExpr>(SExpr{SEApp{mod, std::move(fun), std::move(arg)}});
}
SExprPtr se_modty(ModalityId mod, SExprPtr body) {
  return std::make_shared<const SExpr>(SExpr{SEModTy{mod, std::move(body)}});
}
SExprPtr se_modtm(ModalityId mod, SExprPtr body) {
  return std::make_shared<const SExpr>(SExpr{SEModTm{mod, std::move(body)}});
}
SExprPtr se_letmod(ModalityId outer, ModalityId inner, SExprPtr ann, SExprPtr motive, SExprPtr scrut, SExprPtr body) {
  return std::make_shared<const SExpr>(SExpr{SELetMod{outer, inner, std::move(ann), std::move(motive), std::move(scrut), std::move(body)}});
}

bool sexpr_equal(const SExprPtr &a, const SExprPtr &b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const SEVar &x) { return x.var == std::get<SEVar>(b->node).var; },
          [](const SEBool &) { return true; },
          [](const SETrue &) { return true; },
          [](const SEFalse &) { return true; },
          [&](const SEIf &x) {
            const auto &y = std::get<SEIf>(b->node);
            return sexpr_equal(x.motive, y.motive) && sexpr_equal(x.cond, y.cond) &&
                   sexpr_equal(x.on_true, y.on_true) && sexpr_equal(x.on_false, y.on_false);
          },
          [&](const SEArrow &x) {
            const auto &y = std::get<SEArrow>(b->node);
            return x.mod == y.mod && sexpr_equal(x.dom, y.dom) && sexpr_equal(x.cod, y.cod);
          },
          [&](const SELam &x) {
            const auto &y = std::get<SELam>(b->node);
            return x.mod == y.mod && sexpr_equal(x.body, y.body);
          },
          [&](const SEApp &x) {
            const auto &y = std::get<SEApp>(b->node);
            return x.mod == y.mod && sexpr_equal(x.fun, y.fun) && sexpr_equal(x.arg, y.arg);
          },
          [&](const SEModTy &x) {
            const auto &y = std::get<SEModTy>(b->node);
            return x.mod == y.mod && sexpr_equal(x.body, y.body);
          },
          [&](const SEModTm &x) {
            const auto &y = std::get<SEModTm>(b->node);
            return x.mod == y.mod && sexpr_equal(x.body, y.body);
          },
          [&](const SELetMod &x) {
            const auto &y = std::get<SELetMod>(b->node);
            return x.outer == y.outer && x.inner == y.inner && sexpr_equal(x.ann, y.ann) &&
                   sexpr_equal(x.motive, y.motive) && sexpr_equal(x.scrut, y.scrut) && sexpr_equal(x.body, y.body);
          },
      },
      a->node);
}

CheckResult check_svar(const ModeTheory &mt, const SCtx &ctx, const SVar &v, ModeId mode) {
  CheckResult c = check_sctx(mt, ctx);
  if (!c) return CheckResult::fail("context: " + c.message);
  if (mode_of(mt, ctx) != mode)
    return CheckResult::fail("context " + format_ctx(mt, ctx) + " is not at mode " + mt.mode_name(mode));
  if (v.sucs < 0) return CheckResult::fail("negative variable index");
  if (v.cell < 0 || v.cell >= mt.cell_count()) return CheckResult::fail("variable cell out of range");
  ModalityId lam = mt.identity_modality(mode);
  int sucs = v.sucs;
  for (auto it = ctx.entries.rbegin(); it != ctx.entries.rend(); ++it) {
    if (it->kind == EntryKind::Lock) {
      lam = mt.compose_modalities(it->mod, lam);
      continue;
    }
    if (sucs > 0) {
      --sucs;
      continue;
    }
    const CellInfo &cell = mt.cell(v.cell);
    if (cell.dom != it->mod || cell.cod != lam)
      return CheckResult::fail("variable cell " + cell.name + " does not go from " + mt.modality(it->mod).name + " to the lock composite " + mt.modality(lam).name);
    return CheckResult::pass();
  }
  return CheckResult::fail("variable index " + std::to_string(v.sucs) + " exceeds the variables of " + format_ctx(mt, ctx));
}

namespace {

CheckResult sexpr_impl(const ModeTheory &mt, const SCtx &ctx, const SExprPtr &e) {
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
          [&](const SEVar &x) { return check_svar(mt, ctx, x.var, mode); },
          [&](const SEBool &) { return CheckResult::pass(); },
          [&](const SETrue &) { return CheckResult::pass(); },
          [&](const SEFalse &) { return CheckResult::pass(); },
          [&](const SEIf &x) {
            CheckResult r = sexpr_impl(mt, plus_var(mt.identity_modality(mode)), x.motive);
            if (!r) return CheckResult::fail("if motive: " + r.message);
            for (auto [part, name] : {std::pair{&x.cond, "if condition"}, {&x.on_true, "if true branch"}, {&x.on_false, "if false branch"}}) {
              r = sexpr_impl(mt, ctx, *part);
              if (!r) return CheckResult::fail(std::string(name) + ": " + r.message);
            }
            return CheckResult::pass();
          },
          [&](const SEArrow &x) {
            if (!into(x.mod)) return CheckResult::fail("arrow annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = sexpr_impl(mt, plus_lock(x.mod), x.dom);
            if (!r) return CheckResult::fail("arrow domain: " + r.message);
            r = sexpr_impl(mt, plus_var(x.mod), x.cod);
            if (!r) return CheckResult::fail("arrow codomain: " + r.message);
            return CheckResult::pass();
          },
          [&](const SELam &x) {
            if (!into(x.mod)) return CheckResult::fail("lambda annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = sexpr_impl(mt, plus_var(x.mod), x.body);
            if (!r) return CheckResult::fail("lambda body: " + r.message);
            return CheckResult::pass();
          },
          [&](const SEApp &x) {
            if (!into(x.mod)) return CheckResult::fail("application annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = sexpr_impl(mt, ctx, x.fun);
            if (!r) return CheckResult::fail("application head: " + r.message);
            r = sexpr_impl(mt, plus_lock(x.mod), x.arg);
            if (!r) return CheckResult::fail("application argument: " + r.message);
            return CheckResult::pass();
          },
          [&](const SEModTy &x) {
            if (!into(x.mod)) return CheckResult::fail("modal type annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = sexpr_impl(mt, plus_lock(x.mod), x.body);
            if (!r) return CheckResult::fail("modal type body: " + r.message);
            return CheckResult::pass();
          },
          [&](const SEModTm &x) {
            if (!into(x.mod)) return CheckResult::fail("modal intro annotation does not land in mode " + mt.mode_name(mode));
            CheckResult r = sexpr_impl(mt, plus_lock(x.mod), x.body);
            if (!r) return CheckResult::fail("modal intro body: " + r.message);
            return CheckResult::pass();
          },
          [&](const SELetMod &x) {
            if (!into(x.outer)) return CheckResult::fail("letmod outer annotation does not land in mode " + mt.mode_name(mode));
            if (x.inner < 0 || x.inner >= mt.modality_count() || mt.modality(x.inner).cod != mt.modality(x.outer).dom)
              return CheckResult::fail("letmod binder annotation does not land in the outer annotation's domain");
            auto comp = mt.compose_opt(x.outer, x.inner);
            if (!comp) return CheckResult::fail("letmod composite is not in the table");
            SCtx ann_ctx = plus_lock(x.outer);
            ann_ctx.entries.push_back(lock_entry(x.inner));
            CheckResult r = sexpr_impl(mt, ann_ctx, x.ann);
            if (!r) return CheckResult::fail("letmod annotation: " + r.message);
            r = sexpr_impl(mt, plus_var(x.outer), x.motive);
            if (!r) return CheckResult::fail("letmod motive: " + r.message);
            r = sexpr_impl(mt, plus_lock(x.outer), x.scrut);
            if (!r) return CheckResult::fail("letmod scrutinee: " + r.message);
            r = sexpr_impl(mt, plus_var(*comp), x.body);
            if (!r) return CheckResult::fail("letmod body: " + r.message);
            return CheckResult::pass();
          },
      },
      e->node);
}

}  // namespace

CheckResult check_sexpr(const ModeTheory &mt, const SCtx &ctx, const SExprPtr &e, ModeId mode) {
  CheckResult c = check_sctx(mt, ctx);
  if (!c) return CheckResult::fail("context: " + c.message);
  if (mode_of(mt, ctx) != mode)
    return CheckResult::fail("context " + format_ctx(mt, ctx) + " is not at mode " + mt.mode_name(mode));
  return sexpr_impl(mt, ctx, e);
}

// ===== atomics =====

namespace {

void require_ctx(const ModeTheory &mt, const SCtx &ctx) {
  CheckResult c = check_sctx(mt, ctx);
  if (!c) throw Error("ill-formed context: " + c.message);
}

void require_modality(const ModeTheory &mt, ModalityId mu) {
  if (mu < 0 || mu >= mt.modality_count()) throw Error("modality out of range");
}

template <class P>
AtomicPtr<P> make_atomic(Atomic<P> a) {
  return std::make_shared<const Atomic<P>>(std::move(a));
}

template <class P>
CheckResult check_payload(const ModeTheory &mt, const SCtx &ctx, const P &payload, ModeId mode) {
  if constexpr (std::is_same_v<P, SVar>)
    return check_svar(mt, ctx, payload, mode);
  else
    return check_sexpr(mt, ctx, payload, mode);
}

template <class P>
bool payload_equal(const P &a, const P &b) {
  if constexpr (std::is_same_v<P, SVar>)
    return a == b;
  else
    return sexpr_equal(a, b);
}

}  // namespace

template <class P>
AtomicPtr<P> a_empty(const ModeTheory &mt, const SCtx &from) {
  require_ctx(mt, from);
  return make_atomic<P>({from, SCtx{mode_of(mt, from), {}}, ANodeEmpty{}});
}

template <class P>
AtomicPtr<P> a_id(const ModeTheory &mt, const SCtx &ctx) {
  require_ctx(mt, ctx);
  return make_atomic<P>({ctx, ctx, ANodeId{}});
}

template <class P>
AtomicPtr<P> a_weaken(const ModeTheory &mt, AtomicPtr<P> inner, ModalityId mu) {
  require_modality(mt, mu);
  if (mt.modality(mu).cod != mode_of(mt, inner->from))
    throw Error("weakening modality " + mt.modality(mu).name + " does not land in the judgement's mode");
  SCtx from = inner->from;
  from.entries.push_back(var_entry(mu));
  SCtx to = inner->to;
  return make_atomic<P>({std::move(from), std::move(to), ANodeWeaken<P>{std::move(inner)}});
}

template <class P>
AtomicPtr<P> a_lock(const ModeTheory &mt, AtomicPtr<P> inner, ModalityId mu) {
  require_modality(mt, mu);
  if (mt.modality(mu).cod != mode_of(mt, inner->from))
    throw Error("lock modality " + mt.modality(mu).name + " does not land in the judgement's mode");
  SCtx from = inner->from, to = inner->to;
  from.entries.push_back(lock_entry(mu));
  to.entries.push_back(lock_entry(mu));
  return make_atomic<P>({std::move(from), std::move(to), ANodeLock<P>{std::move(inner)}});
}

template <class P>
AtomicPtr<P> a_key(const ModeTheory &mt, CellId cell, const LockTele &to_tele, const LockTele &from_tele, const SCtx &base) {
  require_ctx(mt, base);
  ModeId outer = mode_of(mt, base);
  if (to_tele.outer != outer || from_tele.outer != outer)
    throw Error("key telescopes do not start at the base context's mode");
  if (!check_lock_tele(mt, to_tele) || !check_lock_tele(mt, from_tele))
    throw Error("key telescope is ill-formed");
  if (cell < 0 || cell >= mt.cell_count()) throw Error("key cell out of range");
  if (mt.cell(cell).dom != locks_of(mt, to_tele) || mt.cell(cell).cod != locks_of(mt, from_tele))
    throw Error("key cell " + mt.cell(cell).name + " does not match the telescopes");
  SCtx from = append_lock_tele(mt, base, from_tele);
  SCtx to = append_lock_tele(mt, base, to_tele);
  return make_atomic<P>({std::move(from), std::move(to), ANodeKey{cell, to_tele, from_tele}});
}

template <class P>
AtomicPtr<P> a_extend(const ModeTheory &mt, AtomicPtr<P> inner, ModalityId mu, P payload) {
  require_modality(mt, mu);
  if (mt.modality(mu).cod != mode_of(mt, inner->to))
    throw Error("extension modality " + mt.modality(mu).name + " does not land in the judgement's mode");
  SCtx payload_ctx = inner->from;
  payload_ctx.entries.push_back(lock_entry(mu));
  CheckResult p = check_payload<P>(mt, payload_ctx, payload, mt.modality(mu).dom);
  if (!p) throw Error("extension payload: " + p.message);
  SCtx from = inner->from;
  SCtx to = inner->to;
  to.entries.push_back(var_entry(mu));
  return make_atomic<P>({std::move(from), std::move(to), ANodeExtend<P>{std::move(inner), std::move(payload)}});
}

template <class P>
P payload_v0(const ModeTheory &mt, ModalityId mu) {
  if constexpr (std::is_same_v<P, SVar>)
    return SVar{0, mt.identity_cell(mu)};
  else
    return se_var(SVar{0, mt.identity_cell(mu)});
}

template <class P>
AtomicPtr<P> pi_atomic(const ModeTheory &mt, const SCtx &ctx, ModalityId mu) {
  return a_weaken(mt, a_id<P>(mt, ctx), mu);
}

template <class P>
AtomicPtr<P> a_lift(const ModeTheory &mt, const AtomicPtr<P> &s, ModalityId mu) {
  return a_extend(mt, a_weaken(mt, s, mu), mu, payload_v0<P>(mt, mu));
}

template <class P>
AtomicPtr<P> a_lock_tele(const ModeTheory &mt, const AtomicPtr<P> &s, const LockTele &tele) {
  AtomicPtr<P> out = s;
  for (ModalityId mu : tele.mods) out = a_lock(mt, out, mu);
  return out;
}

template <class P>
bool atomic_equal(const AtomicPtr<P> &a, const AtomicPtr<P> &b) {
  if (a == b) return true;
  if (!(a->from == b->from) || !(a->to == b->to)) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [](const ANodeEmpty &) { return true; },
          [](const ANodeId &) { return true; },
          [&](const ANodeWeaken<P> &x) { return atomic_equal(x.inner, std::get<ANodeWeaken<P>>(b->node).inner); },
          [&](const ANodeLock<P> &x) { return atomic_equal(x.inner, std::get<ANodeLock<P>>(b->node).inner); },
          [&](const ANodeKey &x) {
            const auto &y = std::get<ANodeKey>(b->node);
            return x.cell == y.cell && x.to_tele == y.to_tele && x.from_tele == y.from_tele;
          },
          [&](const ANodeExtend<P> &x) {
            const auto &y = std::get<ANodeExtend<P>>(b->node);
            return atomic_equal(x.inner, y.inner) && payload_equal<P>(x.payload, y.payload);
          },
      },
      a->node);
}

template <class P>
CheckResult check_atomic(const ModeTheory &mt, const AtomicPtr<P> &s) {
  CheckResult c = check_sctx(mt, s->from);
  if (!c) return CheckResult::fail("source context: " + c.message);
  c = check_sctx(mt, s->to);
  if (!c) return CheckResult::fail("target context: " + c.message);
  return std::visit(
      overloaded{
          [&](const ANodeEmpty &) {
            if (s->to == SCtx{mode_of(mt, s->from), {}}) return CheckResult::pass();
            return CheckResult::fail("empty atomic must target the empty context");
          },
          [&](const ANodeId &) {
            if (s->from == s->to) return CheckResult::pass();
            return CheckResult::fail("identity atomic needs equal endpoints");
          },
          [&](const ANodeWeaken<P> &w) {
            if (s->from.entries.empty() || s->from.entries.back().kind != EntryKind::Var)
              return CheckResult::fail("weakening source must end in a variable");
            SCtx peeled = s->from;
            peeled.entries.pop_back();
            if (!(w.inner->from == peeled) || !(w.inner->to == s->to))
              return CheckResult::fail("weakening endpoints do not match the inner atomic");
            return check_atomic(mt, w.inner);
          },
          [&](const ANodeLock<P> &l) {
            if (s->from.entries.empty() || s->from.entries.back().kind != EntryKind::Lock)
              return CheckResult::fail("locked atomic's source must end in a lock");
            if (s->to.entries.empty() || !(s->to.entries.back() == s->from.entries.back()))
              return CheckResult::fail("locked atomic's endpoints must end in the same lock");
            SCtx f = s->from, t = s->to;
            f.entries.pop_back();
            t.entries.pop_back();
            if (!(l.inner->from == f) || !(l.inner->to == t))
              return CheckResult::fail("lock endpoints do not match the inner atomic");
            return check_atomic(mt, l.inner);
          },
          [&](const ANodeKey &k) {
            size_t tlen = k.to_tele.mods.size();
            if (s->to.entries.size() < tlen) return CheckResult::fail("key target shorter than its telescope");
            SCtx base = s->to;
            base.entries.resize(base.entries.size() - tlen);
            for (size_t i = 0; i < tlen; ++i)
              if (!(s->to.entries[base.entries.size() + i] == lock_entry(k.to_tele.mods[i])))
                return CheckResult::fail("key target does not end with its telescope");
            ModeId outer = mode_of(mt, base);
            if (k.to_tele.outer != outer || k.from_tele.outer != outer)
              return CheckResult::fail("key telescopes do not start at the base context's mode");
            if (!check_lock_tele(mt, k.to_tele) || !check_lock_tele(mt, k.from_tele))
              return CheckResult::fail("key telescope is ill-formed");
            if (!(s->from == append_lock_tele(mt, base, k.from_tele)))
              return CheckResult::fail("key source does not match base and telescope");
            if (k.cell < 0 || k.cell >= mt.cell_count()) return CheckResult::fail("key cell out of range");
            if (mt.cell(k.cell).dom != locks_of(mt, k.to_tele) || mt.cell(k.cell).cod != locks_of(mt, k.from_tele))
              return CheckResult::fail("key cell does not match the telescopes");
            return CheckResult::pass();
          },
          [&](const ANodeExtend<P> &e) {
            if (s->to.entries.empty() || s->to.entries.back().kind != EntryKind::Var)
              return CheckResult::fail("extension target must end in a variable");
            ModalityId mu = s->to.entries.back().mod;
            SCtx peeled = s->to;
            peeled.entries.pop_back();
            if (!(e.inner->from == s->from) || !(e.inner->to == peeled))
              return CheckResult::fail("extension endpoints do not match the inner atomic");
            SCtx payload_ctx = s->from;
            payload_ctx.entries.push_back(lock_entry(mu));
            CheckResult p = check_payload<P>(mt, payload_ctx, e.payload, mt.modality(mu).dom);
            if (!p) return CheckResult::fail("extension payload: " + p.message);
            return check_atomic(mt, e.inner);
          },
      },
      s->node);
}

template <class P>
CheckResult check_atomic_rensub(const ModeTheory &mt, const SCtx &from, const AtomicPtr<P> &s, const SCtx &to, ModeId mode) {
  if (!(s->from == from)) return CheckResult::fail("atomic source is " + format_ctx(mt, s->from) + ", not " + format_ctx(mt, from));
  if (!(s->to == to)) return CheckResult::fail("atomic target is " + format_ctx(mt, s->to) + ", not " + format_ctx(mt, to));
  CheckResult c = check_atomic(mt, s);
  if (!c) return c;
  if (mode_of(mt, from) != mode) return CheckResult::fail("judgement is not at mode " + mt.mode_name(mode));
  return CheckResult::pass();
}

// ===== sequences =====

template <class P>
Seq<P> seq_id(const ModeTheory &mt, const SCtx &ctx) {
  require_ctx(mt, ctx);
  return {ctx, ctx, {}};
}

template <class P>
Seq<P> seq_of(const ModeTheory &mt, AtomicPtr<P> item) {
  (void)mt;
  return {item->from, item->to, {std::move(item)}};
}

template <class P>
Seq<P> seq_snoc(const ModeTheory &mt, Seq<P> seq, AtomicPtr<P> item) {
  (void)mt;
  if (!(item->to == seq.from)) throw Error("sequence and atomic do not meet");
  seq.from = item->from;
  seq.items.push_back(std::move(item));
  return seq;
}

template <class P>
Seq<P> seq_concat(const ModeTheory &mt, const Seq<P> &first, const Seq<P> &then) {
  (void)mt;
  if (!(then.to == first.from)) throw Error("sequences do not meet");
  Seq<P> out = first;
  out.from = then.from;
  out.items.insert(out.items.end(), then.items.begin(), then.items.end());
  return out;
}

template <class P>
Seq<P> seq_lift(const ModeTheory &mt, const Seq<P> &seq, ModalityId mu) {
  require_modality(mt, mu);
  if (mt.modality(mu).cod != mode_of(mt, seq.from))
    throw Error("lift modality does not land in the judgement's mode");
  Seq<P> out;
  out.from = seq.from;
  out.from.entries.push_back(var_entry(mu));
  out.to = seq.to;
  out.to.entries.push_back(var_entry(mu));
  for (const AtomicPtr<P> &item : seq.items) out.items.push_back(a_lift(mt, item, mu));
  return out;
}

template <class P>
Seq<P> seq_lock(const ModeTheory &mt, const Seq<P> &seq, ModalityId mu) {
  require_modality(mt, mu);
  if (mt.modality(mu).cod != mode_of(mt, seq.from))
    throw Error("lock modality does not land in the judgement's mode");
  Seq<P> out;
  out.from = seq.from;
  out.from.entries.push_back(lock_entry(mu));
  out.to = seq.to;
  out.to.entries.push_back(lock_entry(mu));
  for (const AtomicPtr<P> &item : seq.items) out.items.push_back(a_lock(mt, item, mu));
  return out;
}

template <class P>
Seq<P> seq_append_scope_tele(const ModeTheory &mt, const Seq<P> &seq, const ScopeTele &tele) {
  if (tele.outer != mode_of(mt, seq.from)) throw Error("telescope does not start at the judgement's mode");
  Seq<P> out = seq;
  for (const Entry &e : tele.entries)
    out = e.kind == EntryKind::Var ? seq_lift(mt, out, e.mod) : seq_lock(mt, out, e.mod);
  return out;
}

template <class P>
bool seq_equal(const Seq<P> &a, const Seq<P> &b) {
  if (!(a.from == b.from) || !(a.to == b.to) || a.items.size() != b.items.size()) return false;
  for (size_t i = 0; i < a.items.size(); ++i)
    if (!atomic_equal(a.items[i], b.items[i])) return false;
  return true;
}

template <class P>
CheckResult check_rensub(const ModeTheory &mt, const SCtx &from, const Seq<P> &seq, const SCtx &to, ModeId mode) {
  if (!(seq.from == from)) return CheckResult::fail("sequence source is " + format_ctx(mt, seq.from) + ", not " + format_ctx(mt, from));
  if (!(seq.to == to)) return CheckResult::fail("sequence target is " + format_ctx(mt, seq.to) + ", not " + format_ctx(mt, to));
  CheckResult c = check_sctx(mt, from);
  if (!c) return CheckResult::fail("source context: " + c.message);
  if (mode_of(mt, from) != mode) return CheckResult::fail("judgement is not at mode " + mt.mode_name(mode));
  if (seq.items.empty()) {
    if (!(from == to)) return CheckResult::fail("empty sequence needs equal endpoints");
    return CheckResult::pass();
  }
  const SCtx *cur = &to;
  for (size_t i = 0; i < seq.items.size(); ++i) {
    const AtomicPtr<P> &item = seq.items[i];
    if (!(item->to == *cur))
      return CheckResult::fail("item " + std::to_string(i) + " does not chain");
    CheckResult a = check_atomic(mt, item);
    if (!a) return CheckResult::fail("item " + std::to_string(i) + ": " + a.message);
    cur = &item->from;
  }
  if (!(*cur == from)) return CheckResult::fail("sequence does not end at the source context");
  return CheckResult::pass();
}

// ===== mixed sequences =====

namespace {

const SCtx &mix_item_from(const MixItem &it) {
  return std::visit([](const auto &p) -> const SCtx & { return p->from; }, it);
}
const SCtx &mix_item_to(const MixItem &it) {
  return std::visit([](const auto &p) -> const SCtx & { return p->to; }, it);
}

}  // namespace

MixSeq mix_id(const ModeTheory &mt, const SCtx &ctx) {
  require_ctx(mt, ctx);
  return {ctx, ctx, {}};
}

MixSeq mix_snoc(const ModeTheory &mt, MixSeq seq, MixItem item) {
  (void)mt;
  if (!(mix_item_to(item) == seq.from)) throw Error("sequence and atomic do not meet");
  seq.from = mix_item_from(item);
  seq.items.push_back(std::move(item));
  return seq;
}

template <class P>
MixSeq mix_of(const ModeTheory &mt, const Seq<P> &seq) {
  (void)mt;
  MixSeq out{seq.from, seq.to, {}};
  for (const AtomicPtr<P> &item : seq.items) out.items.push_back(MixItem{item});
  return out;
}

MixSeq mix_lift(const ModeTheory &mt, const MixSeq &seq, ModalityId mu) {
  require_modality(mt, mu);
  if (mt.modality(mu).cod != mode_of(mt, seq.from))
    throw Error("lift modality does not land in the judgement's mode");
  MixSeq out;
  out.from = seq.from;
  out.from.entries.push_back(var_entry(mu));
  out.to = seq.to;
  out.to.entries.push_back(var_entry(mu));
  for (const MixItem &item : seq.items)
    out.items.push_back(std::visit([&](const auto &p) { return MixItem{a_lift(mt, p, mu)}; }, item));
  return out;
}

MixSeq mix_lock(const ModeTheory &mt, const MixSeq &seq, ModalityId mu) {
  require_modality(mt, mu);
  if (mt.modality(mu).cod != mode_of(mt, seq.from))
    throw Error("lock modality does not land in the judgement's mode");
  MixSeq out;
  out.from = seq.from;
  out.from.entries.push_back(lock_entry(mu));
  out.to = seq.to;
  out.to.entries.push_back(lock_entry(mu));
  for (const MixItem &item : seq.items)
    out.items.push_back(std::visit([&](const auto &p) { return MixItem{a_lock(mt, p, mu)}; }, item));
  return out;
}

MixSeq mix_append_scope_tele(const ModeTheory &mt, const MixSeq &seq, const ScopeTele &tele) {
  if (tele.outer != mode_of(mt, seq.from)) throw Error("telescope does not start at the judgement's mode");
  MixSeq out = seq;
  for (const Entry &e : tele.entries)
    out = e.kind == EntryKind::Var ? mix_lift(mt, out, e.mod) : mix_lock(mt, out, e.mod);
  return out;
}

CheckResult check_mixseq(const ModeTheory &mt, const SCtx &from, const MixSeq &seq, const SCtx &to, ModeId mode) {
  if (!(seq.from == from)) return CheckResult::fail("sequence source does not match");
  if (!(seq.to == to)) return CheckResult::fail("sequence target does not match");
  CheckResult c = check_sctx(mt, from);
  if (!c) return CheckResult::fail("source context: " + c.message);
  if (mode_of(mt, from) != mode) return CheckResult::fail("judgement is not at mode " + mt.mode_name(mode));
  const SCtx *cur = &to;
  for (size_t i = 0; i < seq.items.size(); ++i) {
    const MixItem &item = seq.items[i];
    if (!(mix_item_to(item) == *cur)) return CheckResult::fail("item " + std::to_string(i) + " does not chain");
    CheckResult a = std::visit([&](const auto &p) { return check_atomic(mt, p); }, item);
    if (!a) return CheckResult::fail("item " + std::to_string(i) + ": " + a.message);
    cur = &mix_item_from(item);
  }
  if (!(*cur == from)) return CheckResult::fail("sequence does not end at the source context");
  return CheckResult::pass();
}

// ===== variable action =====

SVar transport_var(const ModeTheory &mt, const SCtx &ctx_at_var, const LockTele &src_tele, const LockTele &dst_tele, CellId cell, const SVar &v) {
  size_t n = ctx_at_var.entries.size(), k = src_tele.mods.size();
  if (n < k) throw Error("transport: context shorter than its telescope");
  for (size_t i = 0; i < k; ++i)
    if (!(ctx_at_var.entries[n - k + i] == lock_entry(src_tele.mods[i])))
      throw Error("transport: telescope is not a suffix of the context");
  SCtx base = ctx_at_var;
  base.entries.resize(n - k);
  ModeId base_mode = mode_of(mt, base);
  if (src_tele.outer != base_mode || dst_tele.outer != base_mode)
    throw Error("transport: telescopes do not start at the base mode");
  if (mt.cell(cell).dom != locks_of(mt, src_tele) || mt.cell(cell).cod != locks_of(mt, dst_tele))
    throw Error("transport: cell endpoints do not match the telescopes");
  ModalityId lam = mt.identity_modality(base_mode);
  int sucs = v.sucs;
  for (auto it = base.entries.rbegin(); it != base.entries.rend(); ++it) {
    if (it->kind == EntryKind::Lock) {
      lam = mt.compose_modalities(it->mod, lam);
      continue;
    }
    if (sucs > 0) {
      --sucs;
      continue;
    }
    CellId moved = mt.vertical_compose(mt.horizontal_compose(mt.identity_cell(lam), cell), v.cell);
    return SVar{v.sucs, moved};
  }
  throw Error("transport: variable index out of range");
}

namespace {

LockTele prepend_lock(const ModeTheory &mt, ModalityId mu, const LockTele &tele) {
  LockTele out{mt.modality(mu).cod, {mu}};
  out.mods.insert(out.mods.end(), tele.mods.begin(), tele.mods.end());
  return out;
}

}  // namespace

SVar aren_var(const ModeTheory &mt, const ARenPtr &s, const SVar &v, const LockTele &tele) {
  return std::visit(
      overloaded{
          [&](const ANodeEmpty &) -> SVar { throw Error("variable met the empty renaming"); },
          [&](const ANodeId &) { return v; },
          [&](const ANodeWeaken<SVar> &w) {
            SVar r = aren_var(mt, w.inner, v, tele);
            return SVar{r.sucs + 1, r.cell};
          },
          [&](const ANodeLock<SVar> &l) {
            ModalityId mu = s->from.entries.back().mod;
            return aren_var(mt, l.inner, v, prepend_lock(mt, mu, tele));
          },
          [&](const ANodeKey &k) {
            SCtx ctx_at_var = append_lock_tele(mt, s->to, tele);
            LockTele src = lock_tele_concat(mt, k.to_tele, tele);
            LockTele dst = lock_tele_concat(mt, k.from_tele, tele);
            CellId cell = mt.horizontal_compose(k.cell, mt.identity_cell(locks_of(mt, tele)));
            return transport_var(mt, ctx_at_var, src, dst, cell, v);
          },
          [&](const ANodeExtend<SVar> &e) {
            if (v.sucs > 0) return aren_var(mt, e.inner, SVar{v.sucs - 1, v.cell}, tele);
            ModalityId mu = s->to.entries.back().mod;
            SCtx ctx_at_var = s->from;
            ctx_at_var.entries.push_back(lock_entry(mu));
            LockTele src{mode_of(mt, s->from), {mu}};
            return transport_var(mt, ctx_at_var, src, tele, v.cell, e.payload);
          },
      },
      s->node);
}

SExprPtr asub_var(const ModeTheory &mt, const ASubPtr &s, const SVar &v, const LockTele &tele) {
  return std::visit(
      overloaded{
          [&](const ANodeEmpty &) -> SExprPtr { throw Error("variable met the empty substitution"); },
          [&](const ANodeId &) { return se_var(v); },
          [&](const ANodeWeaken<SExprPtr> &w) {
            SExprPtr r = asub_var(mt, w.inner, v, tele);
            ModalityId mu = s->from.entries.back().mod;
            ARenPtr pi = a_lock_tele(mt, pi_atomic<SVar>(mt, w.inner->from, mu), tele);
            return apply_aren_expr(mt, r, pi);
          },
          [&](const ANodeLock<SExprPtr> &l) {
            ModalityId mu = s->from.entries.back().mod;
            return asub_var(mt, l.inner, v, prepend_lock(mt, mu, tele));
          },
          [&](const ANodeKey &k) {
            SCtx ctx_at_var = append_lock_tele(mt, s->to, tele);
            LockTele src = lock_tele_concat(mt, k.to_tele, tele);
            LockTele dst = lock_tele_concat(mt, k.from_tele, tele);
            CellId cell = mt.horizontal_compose(k.cell, mt.identity_cell(locks_of(mt, tele)));
            return se_var(transport_var(mt, ctx_at_var, src, dst, cell, v));
          },
          [&](const ANodeExtend<SExprPtr> &e) {
            if (v.sucs > 0) return asub_var(mt, e.inner, SVar{v.sucs - 1, v.cell}, tele);
            ModalityId mu = s->to.entries.back().mod;
            LockTele single{mode_of(mt, s->from), {mu}};
            ARenPtr key = a_key<SVar>(mt, v.cell, single, tele, s->from);
            return apply_aren_expr(mt, e.payload, key);
          },
      },
      s->node);
}

// ===== application =====

namespace {

template <class P>
SExprPtr apply_atomic(const ModeTheory &mt, const SExprPtr &e, const AtomicPtr<P> &s) {
  ModeId mode = mode_of(mt, s->to);
  return std::visit(
      overloaded{
          [&](const SEVar &x) -> SExprPtr {
            LockTele none{mode, {}};
            if constexpr (std::is_same_v<P, SVar>)
              return se_var(aren_var(mt, s, x.var, none));
            else
              return asub_var(mt, s, x.var, none);
          },
          [&](const SEBool &) { return se_bool(); },
          [&](const SETrue &) { return se_true(); },
          [&](const SEFalse &) { return se_false(); },
          [&](const SEIf &x) {
            AtomicPtr<P> lifted = a_lift(mt, s, mt.identity_modality(mode));
            return se_if(apply_atomic(mt, x.motive, lifted), apply_atomic(mt, x.cond, s),
                         apply_atomic(mt, x.on_true, s), apply_atomic(mt, x.on_false, s));
          },
          [&](const SEArrow &x) {
            return se_arrow(x.mod, apply_atomic(mt, x.dom, a_lock(mt, s, x.mod)),
                            apply_atomic(mt, x.cod, a_lift(mt, s, x.mod)));
          },
          [&](const SELam &x) { return se_lam(x.mod, apply_atomic(mt, x.body, a_lift(mt, s, x.mod))); },
          [&](const SEApp &x) {
            return se_app(x.mod, apply_atomic(mt, x.fun, s), apply_atomic(mt, x.arg, a_lock(mt, s, x.mod)));
          },
          [&](const SEModTy &x) { return se_modty(x.mod, apply_atomic(mt, x.body, a_lock(mt, s, x.mod))); },
          [&](const SEModTm &x) { return se_modtm(x.mod, apply_atomic(mt, x.body, a_lock(mt, s, x.mod))); },
          [&](const SELetMod &x) {
            AtomicPtr<P> under_outer = a_lock(mt, s, x.outer);
            return se_letmod(x.outer, x.inner, apply_atomic(mt, x.ann, a_lock(mt, under_outer, x.inner)),
                             apply_atomic(mt, x.motive, a_lift(mt, s, x.outer)),
                             apply_atomic(mt, x.scrut, under_outer),
                             apply_atomic(mt, x.body, a_lift(mt, s, mt.compose_modalities(x.outer, x.inner))));
          },
      },
      e->node);
}

}  // namespace

SExprPtr apply_aren_expr(const ModeTheory &mt, const SExprPtr &e, const ARenPtr &s) {
  return apply_atomic<SVar>(mt, e, s);
}

SExprPtr apply_asub_expr(const ModeTheory &mt, const SExprPtr &e, const ASubPtr &s) {
  return apply_atomic<SExprPtr>(mt, e, s);
}

template <class P>
SExprPtr apply_rensub_expr(const ModeTheory &mt, const SExprPtr &e, const Seq<P> &seq) {
  SExprPtr out = e;
  for (const AtomicPtr<P> &item : seq.items) out = apply_atomic(mt, out, item);
  return out;
}

SExprPtr apply_mixseq_expr(const ModeTheory &mt, const SExprPtr &e, const MixSeq &seq) {
  SExprPtr out = e;
  for (const MixItem &item : seq.items)
    out = std::visit([&](const auto &p) { return apply_atomic(mt, out, p); }, item);
  return out;
}

// ===== explicit instantiations =====

template AtomicPtr<SVar> a_empty<SVar>(const ModeTheory &, const SCtx &);
template AtomicPtr<SExprPtr> a_empty<SExprPtr>(const ModeTheory &, const SCtx &);
template AtomicPtr<SVar> a_id<SVar>(const ModeTheory &, const SCtx &);
template AtomicPtr<SExprPtr> a_id<SExprPtr>(const ModeTheory &, const SCtx &);
template AtomicPtr<SVar> a_weaken<SVar>(const ModeTheory &, AtomicPtr<SVar>, ModalityId);
template AtomicPtr<SExprPtr> a_weaken<SExprPtr>(const ModeTheory &, AtomicPtr<SExprPtr>, ModalityId);
template AtomicPtr<SVar> a_lock<SVar>(const ModeTheory &, AtomicPtr<SVar>, ModalityId);
template AtomicPtr<SExprPtr> a_lock<SExprPtr>(const ModeTheory &, AtomicPtr<SExprPtr>, ModalityId);
template AtomicPtr<SVar> a_key<SVar>(const ModeTheory &, CellId, const LockTele &, const LockTele &, const SCtx &);
template AtomicPtr<SExprPtr> a_key<SExprPtr>(const ModeTheory &, CellId, const LockTele &, const LockTele &, const SCtx &);
template AtomicPtr<SVar> a_extend<SVar>(const ModeTheory &, AtomicPtr<SVar>, ModalityId, SVar);
template AtomicPtr<SExprPtr> a_extend<SExprPtr>(const ModeTheory &, AtomicPtr<SExprPtr>, ModalityId, SExprPtr);
template SVar payload_v0<SVar>(const ModeTheory &, ModalityId);
template SExprPtr payload_v0<SExprPtr>(const ModeTheory &, ModalityId);
template AtomicPtr<SVar> pi_atomic<SVar>(const ModeTheory &, const SCtx &, ModalityId);
template AtomicPtr<SExprPtr> pi_atomic<SExprPtr>(const ModeTheory &, const SCtx &, ModalityId);
template AtomicPtr<SVar> a_lift<SVar>(const ModeTheory &, const AtomicPtr<SVar> &, ModalityId);
template AtomicPtr<SExprPtr> a_lift<SExprPtr>(const ModeTheory &, const AtomicPtr<SExprPtr> &, ModalityId);
template AtomicPtr<SVar> a_lock_tele<SVar>(const ModeTheory &, const AtomicPtr<SVar> &, const LockTele &);
template AtomicPtr<SExprPtr> a_lock_tele<SExprPtr>(const ModeTheory &, const AtomicPtr<SExprPtr> &, const LockTele &);
template bool atomic_equal<SVar>(const AtomicPtr<SVar> &, const AtomicPtr<SVar> &);
template bool atomic_equal<SExprPtr>(const AtomicPtr<SExprPtr> &, const AtomicPtr<SExprPtr> &);
template CheckResult check_atomic<SVar>(const ModeTheory &, const AtomicPtr<SVar> &);
template CheckResult check_atomic<SExprPtr>(const ModeTheory &, const AtomicPtr<SExprPtr> &);
template CheckResult check_atomic_rensub<SVar>(const ModeTheory &, const SCtx &, const AtomicPtr<SVar> &, const SCtx &, ModeId);
template CheckResult check_atomic_rensub<SExprPtr>(const ModeTheory &, const SCtx &, const AtomicPtr<SExprPtr> &, const SCtx &, ModeId);
template Seq<SVar> seq_id<SVar>(const ModeTheory &, const SCtx &);
template Seq<SExprPtr> seq_id<SExprPtr>(const ModeTheory &, const SCtx &);
template Seq<SVar> seq_of<SVar>(const ModeTheory &, AtomicPtr<SVar>);
template Seq<SExprPtr> seq_of<SExprPtr>(const ModeTheory &, AtomicPtr<SExprPtr>);
template Seq<SVar> seq_snoc<SVar>(const ModeTheory &, Seq<SVar>, AtomicPtr<SVar>);
template Seq<SExprPtr> seq_snoc<SExprPtr>(const ModeTheory &, Seq<SExprPtr>, AtomicPtr<SExprPtr>);
template Seq<SVar> seq_concat<SVar>(const ModeTheory &, const Seq<SVar> &, const Seq<SVar> &);
template Seq<SExprPtr> seq_concat<SExprPtr>(const ModeTheory &, const Seq<SExprPtr> &, const Seq<SExprPtr> &);
template Seq<SVar> seq_lift<SVar>(const ModeTheory &, const Seq<SVar> &, ModalityId);
template Seq<SExprPtr> seq_lift<SExprPtr>(const ModeTheory &, const Seq<SExprPtr> &, ModalityId);
template Seq<SVar> seq_lock<SVar>(const ModeTheory &, const Seq<SVar> &, ModalityId);
template Seq<SExprPtr> seq_lock<SExprPtr>(const ModeTheory &, const Seq<SExprPtr> &, ModalityId);
template Seq<SVar> seq_append_scope_tele<SVar>(const ModeTheory &, const Seq<SVar> &, const ScopeTele &);
template Seq<SExprPtr> seq_append_scope_tele<SExprPtr>(const ModeTheory &, const Seq<SExprPtr> &, const ScopeTele &);
template bool seq_equal<SVar>(const Seq<SVar> &, const Seq<SVar> &);
template bool seq_equal<SExprPtr>(const Seq<SExprPtr> &, const Seq<SExprPtr> &);
template CheckResult check_rensub<SVar>(const ModeTheory &, const SCtx &, const Seq<SVar> &, const SCtx &, ModeId);
template CheckResult check_rensub<SExprPtr>(const ModeTheory &, const SCtx &, const Seq<SExprPtr> &, const SCtx &, ModeId);
template MixSeq mix_of<SVar>(const ModeTheory &, const Seq<SVar> &);
template MixSeq mix_of<SExprPtr>(const ModeTheory &, const Seq<SExprPtr> &);
template SExprPtr apply_rensub_expr<SVar>(const ModeTheory &, const SExprPtr &, const Seq<SVar> &);
template SExprPtr apply_rensub_expr<SExprPtr>(const ModeTheory &, const SExprPtr &, const Seq<SExprPtr> &);

}  // namespace mtt

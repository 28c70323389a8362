#pragma once

#include <memory>
#include <variant>

#include "mtt/scoping.hpp"

namespace mtt {

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct SEVar { SVar var; };
struct SEBool {};
struct SETrue {};
struct SEFalse {};
struct SEIf { SExprPtr motive, cond, on_true, on_false; };
struct SEArrow { ModalityId mod; SExprPtr dom, cod; };
struct SELam { ModalityId mod; SExprPtr body; };
struct SEApp { ModalityId mod; SExprPtr fun, arg; };
struct SEModTy { ModalityId mod; SExprPtr body; };
struct SEModTm { ModalityId mod; SExprPtr body; };
struct SELetMod { ModalityId outer, inner; SExprPtr ann, motive, scrut, body; };

struct SExpr {
  std::variant<SEVar, SEBool, SETrue, SEFalse, SEIf, SEArrow, SELam, SEApp, SEModTy, SEModTm, SELetMod> node;
};

SExprPtr se_var(SVar v);
SExprPtr se_bool();
SExprPtr se_true();
SExprPtr se_false();
SExprPtr se_if(SExprPtr motive, SExprPtr cond, SExprPtr on_true, SExprPtr on_false);
SExprPtr se_arrow(ModalityId mod, SExprPtr dom, SExprPtr cod);
SExprPtr se_lam(ModalityId mod, SExprPtr body);
SExprPtr se_app(ModalityId mod, SExprPtr fun, SExprPtr arg);
SExprPtr se_modty(ModalityId mod, SExprPtr body);
SExprPtr se_modtm(ModalityId mod, SExprPtr body);
SExprPtr se_letmod(ModalityId outer, ModalityId inner, SExprPtr ann, SExprPtr motive, SExprPtr scrut, SExprPtr body);

bool sexpr_equal(const SExprPtr &a, const SExprPtr &b);

CheckResult check_svar(const ModeTheory &mt, const SCtx &ctx, const SVar &v, ModeId mode);
CheckResult check_sexpr(const ModeTheory &mt, const SCtx &ctx, const SExprPtr &e, ModeId mode);

// ===== Atomic renamings and substitutions =====
//
// The payload P is SVar for renamings and SExprPtr for substitutions. Every
// node carries its source and target context: the variable action on an
// extension needs the source context of the atomic it meets (for the key it
// builds), and that context is not recoverable from the bare syntax, so the
// constructors compute and store both endpoints.

template <class P> struct Atomic;
template <class P> using AtomicPtr = std::shared_ptr<const Atomic<P>>;

struct ANodeEmpty {};
struct ANodeId {};
template <class P> struct ANodeWeaken { AtomicPtr<P> inner; };
template <class P> struct ANodeLock { AtomicPtr<P> inner; };
struct ANodeKey { CellId cell; LockTele to_tele, from_tele; };
template <class P> struct ANodeExtend { AtomicPtr<P> inner; P payload; };

template <class P>
struct Atomic {
  SCtx from, to;
  std::variant<ANodeEmpty, ANodeId, ANodeWeaken<P>, ANodeLock<P>, ANodeKey, ANodeExtend<P>> node;
};

using AtomicRen = Atomic<SVar>;
using AtomicSub = Atomic<SExprPtr>;
using ARenPtr = AtomicPtr<SVar>;
using ASubPtr = AtomicPtr<SExprPtr>;

// Constructors validate their premises and throw Error on violation.
template <class P> AtomicPtr<P> a_empty(const ModeTheory &mt, const SCtx &from);
template <class P> AtomicPtr<P> a_id(const ModeTheory &mt, const SCtx &ctx);
template <class P> AtomicPtr<P> a_weaken(const ModeTheory &mt, AtomicPtr<P> inner, ModalityId mu);
template <class P> AtomicPtr<P> a_lock(const ModeTheory &mt, AtomicPtr<P> inner, ModalityId mu);
template <class P> AtomicPtr<P> a_key(const ModeTheory &mt, CellId cell, const LockTele &to_tele, const LockTele &from_tele, const SCtx &base);
template <class P> AtomicPtr<P> a_extend(const ModeTheory &mt, AtomicPtr<P> inner, ModalityId mu, P payload);

// The zero variable over mu, as a payload.
template <class P> P payload_v0(const ModeTheory &mt, ModalityId mu);

// pi : ctx.mu -> ctx is the weakening of the identity.
template <class P> AtomicPtr<P> pi_atomic(const ModeTheory &mt, const SCtx &ctx, ModalityId mu);

// Lift: weaken then extend with the zero variable, sending ctx.mu under s.
template <class P> AtomicPtr<P> a_lift(const ModeTheory &mt, const AtomicPtr<P> &s, ModalityId mu);

template <class P> AtomicPtr<P> a_lock_tele(const ModeTheory &mt, const AtomicPtr<P> &s, const LockTele &tele);

template <class P> bool atomic_equal(const AtomicPtr<P> &a, const AtomicPtr<P> &b);

// Internal consistency of the annotations against the node structure.
template <class P> CheckResult check_atomic(const ModeTheory &mt, const AtomicPtr<P> &s);
template <class P> CheckResult check_atomic_rensub(const ModeTheory &mt, const SCtx &from, const AtomicPtr<P> &s, const SCtx &to, ModeId mode);

// ===== Sequences =====
//
// items[0] is applied first, so items[0]->to == to, items.back()->from ==
// from, and each item's source is the next item's target.

template <class P>
struct Seq {
  SCtx from, to;
  std::vector<AtomicPtr<P>> items;
};

using RenSeq = Seq<SVar>;
using SubSeq = Seq<SExprPtr>;

template <class P> Seq<P> seq_id(const ModeTheory &mt, const SCtx &ctx);
template <class P> Seq<P> seq_of(const ModeTheory &mt, AtomicPtr<P> item);
template <class P> Seq<P> seq_snoc(const ModeTheory &mt, Seq<P> seq, AtomicPtr<P> item);
template <class P> Seq<P> seq_concat(const ModeTheory &mt, const Seq<P> &first, const Seq<P> &then);
template <class P> Seq<P> seq_lift(const ModeTheory &mt, const Seq<P> &seq, ModalityId mu);
template <class P> Seq<P> seq_lock(const ModeTheory &mt, const Seq<P> &seq, ModalityId mu);
template <class P> Seq<P> seq_append_scope_tele(const ModeTheory &mt, const Seq<P> &seq, const ScopeTele &tele);
template <class P> bool seq_equal(const Seq<P> &a, const Seq<P> &b);
template <class P> CheckResult check_rensub(const ModeTheory &mt, const SCtx &from, const Seq<P> &seq, const SCtx &to, ModeId mode);

// ===== Mixed sequences =====

using MixItem = std::variant<ARenPtr, ASubPtr>;

struct MixSeq {
  SCtx from, to;
  std::vector<MixItem> items;
};

MixSeq mix_id(const ModeTheory &mt, const SCtx &ctx);
MixSeq mix_snoc(const ModeTheory &mt, MixSeq seq, MixItem item);
template <class P> MixSeq mix_of(const ModeTheory &mt, const Seq<P> &seq);
MixSeq mix_lift(const ModeTheory &mt, const MixSeq &seq, ModalityId mu);
MixSeq mix_lock(const ModeTheory &mt, const MixSeq &seq, ModalityId mu);
MixSeq mix_append_scope_tele(const ModeTheory &mt, const MixSeq &seq, const ScopeTele &tele);
CheckResult check_mixseq(const ModeTheory &mt, const SCtx &from, const MixSeq &seq, const SCtx &to, ModeId mode);

// ===== Variable action and application =====

// Moves a variable of ctx_at_var = base,src_tele to base,dst_tele along a
// cell locks(src_tele) => locks(dst_tele).
SVar transport_var(const ModeTheory &mt, const SCtx &ctx_at_var, const LockTele &src_tele, const LockTele &dst_tele, CellId cell, const SVar &v);

// Action of an atomic on a variable seen through the lock run `tele`
// (tele.outer must be the mode of s->to).
SVar aren_var(const ModeTheory &mt, const ARenPtr &s, const SVar &v, const LockTele &tele);
SExprPtr asub_var(const ModeTheory &mt, const ASubPtr &s, const SVar &v, const LockTele &tele);

SExprPtr apply_aren_expr(const ModeTheory &mt, const SExprPtr &e, const ARenPtr &s);
SExprPtr apply_asub_expr(const ModeTheory &mt, const SExprPtr &e, const ASubPtr &s);
template <class P> SExprPtr apply_rensub_expr(const ModeTheory &mt, const SExprPtr &e, const Seq<P> &seq);
SExprPtr apply_mixseq_expr(const ModeTheory &mt, const SExprPtr &e, const MixSeq &seq);

}  // namespace mtt

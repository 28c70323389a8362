#pragma once

#include <functional>
#include <memory>
#include <variant>

#include "mtt/scoping.hpp"

namespace mtt {

struct WExpr;
struct WSub;
using WExprPtr = std::shared_ptr<const WExpr>;
using WSubPtr = std::shared_ptr<const WSub>;

struct WVar0 {};
struct WBool {};
struct WTrue {};
struct WFalse {};
struct WIf { WExprPtr motive, cond, on_true, on_false; };
struct WArrow { ModalityId mod; WExprPtr dom, cod; };
struct WLam { ModalityId mod; WExprPtr body; };
struct WApp { ModalityId mod; WExprPtr fun, arg; };
struct WModTy { ModalityId mod; WExprPtr body; };
struct WModTm { ModalityId mod; WExprPtr body; };
// letmod with outer annotation nu and binder modality mu: ann lives under
// both locks, motive under a nu variable, scrut under the nu lock, body under
// a (nu . mu) variable.
struct WLetMod { ModalityId outer, inner; WExprPtr ann, motive, scrut, body; };
struct WSubApp { WExprPtr body; WSubPtr sub; };

struct WExpr {
  std::variant<WVar0, WBool, WTrue, WFalse, WIf, WArrow, WLam, WApp, WModTy, WModTm, WLetMod, WSubApp> node;
};

struct WEmpty {};
struct WId {};
struct WWeaken {};
struct WComp { WSubPtr left, right; };  // left . right, right acts first
struct WLock { WSubPtr sub; ModalityId mod; };
// Key from base,to_tele back to base,from_tele, carried by a cell
// locks(to_tele) => locks(from_tele).
struct WKey { CellId cell; LockTele to_tele, from_tele; SCtx base; };
struct WExt { WSubPtr sub; WExprPtr payload; };

struct WSub {
  std::variant<WEmpty, WId, WWeaken, WComp, WLock, WKey, WExt> node;
};

WExprPtr wvar0();
WExprPtr wbool();
WExprPtr wtrue();
WExprPtr wfalse();
WExprPtr wif(WExprPtr motive, WExprPtr cond, WExprPtr on_true, WExprPtr on_false);
WExprPtr warrow(ModalityId mod, WExprPtr dom, WExprPtr cod);
WExprPtr wlam(ModalityId mod, WExprPtr body);
WExprPtr wapp(ModalityId mod, WExprPtr fun, WExprPtr arg);
WExprPtr wmodty(ModalityId mod, WExprPtr body);
WExprPtr wmodtm(ModalityId mod, WExprPtr body);
WExprPtr wletmod(ModalityId outer, ModalityId inner, WExprPtr ann, WExprPtr motive, WExprPtr scrut, WExprPtr body);
WExprPtr wsubapp(WExprPtr body, WSubPtr sub);

WSubPtr ws_empty();
WSubPtr ws_id();
WSubPtr ws_weaken();
WSubPtr ws_comp(WSubPtr left, WSubPtr right);
WSubPtr ws_lock(WSubPtr sub, ModalityId mod);
WSubPtr ws_key(CellId cell, LockTele to_tele, LockTele from_tele, SCtx base);
WSubPtr ws_ext(WSubPtr sub, WExprPtr payload);

bool wexpr_equal(const WExprPtr &a, const WExprPtr &b);
bool wsub_equal(const WSubPtr &a, const WSubPtr &b);

// Targets a substitution can reach from `from`. Extension and composition
// premises are not stored in the syntax, so several targets may be derivable;
// candidates are visited depth-first, extension modalities in id order, with
// duplicates suppressed. Returns true once `visit` does.
bool for_each_wsub_target(const ModeTheory &mt, const SCtx &from, const WSubPtr &sub,
                          const std::function<bool(const SCtx &)> &visit);

CheckResult check_wexpr(const ModeTheory &mt, const SCtx &ctx, const WExprPtr &expr, ModeId mode);
CheckResult check_wsub(const ModeTheory &mt, const SCtx &from, const WSubPtr &sub, const SCtx &to, ModeId mode);

// (sub . weaken) extended with the zero variable.
WSubPtr wsub_lift(const WSubPtr &sub);

// Fold a lock run over a substitution, outermost lock first.
WSubPtr wsub_lock_tele(const WSubPtr &sub, const LockTele &tele);

}  // namespace mtt

#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "mtt/bridge.hpp"

namespace mtt {

// One identifier per equivalence rule: the equivalence-relation rules for
// both sorts, the category laws for composition, functoriality of
// substitution application, one congruence and one push rule per constructor,
// the empty/extension laws, the lock functor laws, and the key laws.
enum class RuleId {
  ExprRefl,
  ExprSym,
  ExprTrans,
  SubRefl,
  SubSym,
  SubTrans,
  SubIdLeft,
  SubIdRight,
  SubAssoc,
  ExprSubId,
  ExprSubCompose,
  CongSub,
  CongIf,
  CongArrow,
  CongLam,
  CongApp,
  CongModTy,
  CongModTm,
  CongLetMod,
  CongCompose,
  CongLock,
  CongExtend,
  PushBool,
  PushTrue,
  PushFalse,
  PushIf,
  PushArrow,
  PushLam,
  PushApp,
  PushModTy,
  PushModTm,
  PushLetMod,
  EmptyUnique,
  ExtendVar,
  ExtendWeaken,
  ExtendEta,
  LockId,
  LockCompose,
  KeyNatural,
  KeyUnit,
  KeyComposeVertical,
  KeyComposeHorizontal,
};

const std::vector<RuleId> &all_rules();
const char *rule_name(RuleId rule);
std::optional<RuleId> rule_from_name(const std::string &name);

// Bounds for the random generators. Everything downstream of a config is
// deterministic in its seed.
struct GenConfig {
  std::uint64_t seed = 0;
  int max_size = 8;
  int max_tele_depth = 2;
  int cases = 100;
};

// Equivalence of expressions, decided by comparing translations. Cells are
// already canonical because every composition goes through the theory's
// tables. Throws Error when either side fails to scope.
bool sigma_eq_decide(const ModeTheory &mt, const SCtx &ctx, const WExprPtr &lhs, const WExprPtr &rhs, ModeId mode);

// Bounded observational equivalence of substitutions: compares the images of
// every variable of `to` seen through each lock telescope of length <= depth.
// Distinguishing is conclusive at any depth; agreement is only evidence.
bool obs_eq_bounded(const ModeTheory &mt, const SCtx &from, const WSubPtr &lhs, const WSubPtr &rhs, const SCtx &to, ModeId mode, int depth);

struct ExprPair {
  SCtx ctx;
  ModeId mode = -1;
  WExprPtr lhs, rhs;
};

struct SubPair {
  SCtx from, to;
  ModeId mode = -1;
  WSubPtr lhs, rhs;
};

using RuleInstance = std::variant<ExprPair, SubPair>;

// A random instance of one rule schema, both sides re-checked against the
// shared endpoints before they are returned. nullopt when the theory cannot
// satisfy the rule's premises within the retry budget.
std::optional<RuleInstance> sigma_axiom_instance(const ModeTheory &mt, RuleId rule, const GenConfig &cfg);

SCtx gen_sctx(const ModeTheory &mt, const GenConfig &cfg);
WExprPtr gen_wexpr(const ModeTheory &mt, const SCtx &ctx, ModeId mode, const GenConfig &cfg);

// A substitution out of `from` together with the target it reaches. When `to`
// is given the generator retries until it hits that exact target and reports
// exhaustion with nullopt.
std::optional<std::pair<WSubPtr, SCtx>> gen_wsub(const ModeTheory &mt, const SCtx &from, const std::optional<SCtx> &to, ModeId mode, const GenConfig &cfg);

// Naive simultaneous de Bruijn substitution for the single-mode fragment
// where every annotation is the identity modality and every cell the
// identity cell: the variable with i sucs is replaced by payloads[i], with
// standard shifting under binders and locks ignored. Shares nothing with the
// atomic machinery on purpose. Throws on out-of-range indices or input
// outside the fragment.
SExprPtr oracle_subst_trivial(const ModeTheory &mt, const SExprPtr &expr, const std::vector<SExprPtr> &payloads);

}  // namespace mtt

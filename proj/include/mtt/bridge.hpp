#pragma once

#include "mtt/sfmtt.hpp"
#include "mtt/wsmtt.hpp"

namespace mtt {

// Translation into substitution-free form. Substitution applications are
// eliminated on the fly: the target context of each inner substitution is
// synthesized, the first candidate whose body scopes wins, and the resulting
// atomic sequence is pushed through the translated body. Throws Error when no
// candidate scopes.
SExprPtr translate_expr(const ModeTheory &mt, const SCtx &ctx, const WExprPtr &e);
SubSeq translate_sub(const ModeTheory &mt, const SCtx &from, const WSubPtr &s, const SCtx &to);

// Readback. Variables become the zero variable under an explicit key,
// weakenings become projections, sequences become right-nested compositions
// with a leading identity. No normalization is performed.
WExprPtr embed_var(const ModeTheory &mt, const SCtx &ctx, const SVar &v);
WExprPtr embed_expr(const ModeTheory &mt, const SCtx &ctx, const SExprPtr &e);
template <class P> WSubPtr embed_atomic(const ModeTheory &mt, const AtomicPtr<P> &s);
template <class P> WSubPtr embed_rensub(const ModeTheory &mt, const Seq<P> &seq);

}  // namespace mtt

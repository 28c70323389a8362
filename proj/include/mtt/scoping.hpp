#pragma once

#include "mtt/mode_theory.hpp"

namespace mtt {

enum class EntryKind { Var, Lock };

struct Entry {
  EntryKind kind = EntryKind::Var;
  ModalityId mod = -1;
  bool operator==(const Entry &) const = default;
};

inline Entry var_entry(ModalityId mu) { return {EntryKind::Var, mu}; }
inline Entry lock_entry(ModalityId mu) { return {EntryKind::Lock, mu}; }

// Scoping context: a root mode followed by variable and lock entries, written
// left to right from outermost to innermost.
struct SCtx {
  ModeId root = -1;
  std::vector<Entry> entries;
  bool operator==(const SCtx &) const = default;
};

// A run of locks. `outer` is the mode at the left end; each modality's
// codomain must match the mode reached so far, so the run's inner mode is the
// domain of the last modality.
struct LockTele {
  ModeId outer = -1;
  std::vector<ModalityId> mods;
  bool operator==(const LockTele &) const = default;
};

// A run of mixed entries, same orientation as LockTele.
struct ScopeTele {
  ModeId outer = -1;
  std::vector<Entry> entries;
  bool operator==(const ScopeTele &) const = default;
};

// A substitution-free variable: the number of variable entries skipped from
// the right, plus the cell carried at the binder.
struct SVar {
  int sucs = 0;
  CellId cell = -1;
  bool operator==(const SVar &) const = default;
};

CheckResult check_sctx(const ModeTheory &mt, const SCtx &ctx);
CheckResult check_lock_tele(const ModeTheory &mt, const LockTele &tele);
CheckResult check_scope_tele(const ModeTheory &mt, const ScopeTele &tele);

// Mode at the inner (right) end. Throws on ill-formed input.
ModeId mode_of(const ModeTheory &mt, const SCtx &ctx);
ModeId tele_inner_mode(const ModeTheory &mt, const LockTele &tele);
ModeId tele_inner_mode(const ModeTheory &mt, const ScopeTele &tele);

// Composite of a lock run: locks(empty) = identity, locks(T, lock mu) =
// locks(T) composed with mu on the inside.
ModalityId locks_of(const ModeTheory &mt, const LockTele &tele);

SCtx append_scope_tele(const ModeTheory &mt, const SCtx &ctx, const ScopeTele &tele);
SCtx append_lock_tele(const ModeTheory &mt, const SCtx &ctx, const LockTele &tele);
ScopeTele as_scope_tele(const LockTele &tele);
LockTele lock_tele_concat(const ModeTheory &mt, const LockTele &a, const LockTele &b);
ScopeTele scope_tele_concat(const ModeTheory &mt, const ScopeTele &a, const ScopeTele &b);

// All lock runs starting at `outer` with at most max_len locks, by length
// then by modality id at each position.
std::vector<LockTele> enumerate_lock_teles(const ModeTheory &mt, ModeId outer, int max_len);

// All well-scoped variables of `ctx` at `target_mode`, ordered by suc depth.
std::vector<SVar> enumerate_vars(const ModeTheory &mt, const SCtx &ctx, ModeId target_mode);

// Canonical textual forms, e.g. "(ctx n . mu lock mu)" and "[mu nu]".
std::string format_ctx(const ModeTheory &mt, const SCtx &ctx);
std::string format_lock_tele(const ModeTheory &mt, const LockTele &tele);

}  // namespace mtt

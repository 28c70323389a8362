#include "mtt/scoping.hpp"

namespace mtt {

namespace {

// Walks entries from the outside in, returning the inner mode or a message.
CheckResult walk_entries(const ModeTheory &mt, ModeId start, const std::vector<Entry> &entries, ModeId *inner) {
  ModeId cur = start;
  if (cur < 0 || cur >= mt.mode_count()) return CheckResult::fail("root mode out of range");
  for (size_t i = 0; i < entries.size(); ++i) {
    const Entry &e = entries[i];
    if (e.mod < 0 || e.mod >= mt.modality_count())
      return CheckResult::fail("entry " + std::to_string(i) + ": modality out of range");
    const ModalityInfo &info = mt.modality(e.mod);
    if (info.cod != cur)
      return CheckResult::fail("entry " + std::to_string(i) + ": modality " + info.name + " lands in mode " + mt.mode_name(info.cod) + ", context is at " + mt.mode_name(cur));
    if (e.kind == EntryKind::Lock) cur = info.dom;
  }
  if (inner) *inner = cur;
  return CheckResult::pass();
}

}  // namespace

CheckResult check_sctx(const ModeTheory &mt, const SCtx &ctx) {
  return walk_entries(mt, ctx.root, ctx.entries, nullptr);
}

CheckResult check_lock_tele(const ModeTheory &mt, const LockTele &tele) {
  std::vector<Entry> entries;
  for (ModalityId mu : tele.mods) entries.push_back(lock_entry(mu));
  return walk_entries(mt, tele.outer, entries, nullptr);
}

CheckResult check_scope_tele(const ModeTheory &mt, const ScopeTele &tele) {
  return walk_entries(mt, tele.outer, tele.entries, nullptr);
}

ModeId mode_of(const ModeTheory &mt, const SCtx &ctx) {
  ModeId inner = -1;
  CheckResult r = walk_entries(mt, ctx.root, ctx.entries, &inner);
  if (!r) throw Error("ill-formed context: " + r.message);
  return inner;
}

ModeId tele_inner_mode(const ModeTheory &mt, const LockTele &tele) {
  ModeId cur = tele.outer;
  for (ModalityId mu : tele.mods) {
    if (mt.modality(mu).cod != cur) throw Error("ill-formed lock telescope");
    cur = mt.modality(mu).dom;
  }
  return cur;
}

ModeId tele_inner_mode(const ModeTheory &mt, const ScopeTele &tele) {
  std::vector<Entry> entries = tele.entries;
  ModeId inner = -1;
  CheckResult r = walk_entries(mt, tele.outer, entries, &inner);
  if (!r) throw Error("ill-formed telescope: " + r.message);
  return inner;
}

ModalityId locks_of(const ModeTheory &mt, const LockTele &tele) {
  ModalityId acc = mt.identity_modality(tele.outer);
  for (ModalityId mu : tele.mods) acc = mt.compose_modalities(acc, mu);
  return acc;
}

SCtx append_scope_tele(const ModeTheory &mt, const SCtx &ctx, const ScopeTele &tele) {
  if (tele.outer != mode_of(mt, ctx)) throw Error("telescope does not start at the context's mode");
  SCtx out = ctx;
  out.entries.insert(out.entries.end(), tele.entries.begin(), tele.entries.end());
  ModeId inner = -1;
  CheckResult r = walk_entries(mt, out.root, out.entries, &inner);
  if (!r) throw Error("ill-formed telescope: " + r.message);
  return out;
}

SCtx append_lock_tele(const ModeTheory &mt, const SCtx &ctx, const LockTele &tele) {
  return append_scope_tele(mt, ctx, as_scope_tele(tele));
}

ScopeTele as_scope_tele(const LockTele &tele) {
  ScopeTele out;
  out.outer = tele.outer;
  for (ModalityId mu : tele.mods) out.entries.push_back(lock_entry(mu));
  return out;
}

LockTele lock_tele_concat(const ModeTheory &mt, const LockTele &a, const LockTele &b) {
  if (b.outer != tele_inner_mode(mt, a)) throw Error("lock telescopes do not meet");
  LockTele out = a;
  out.mods.insert(out.mods.end(), b.mods.begin(), b.mods.end());
  return out;
}

ScopeTele scope_tele_concat(const ModeTheory &mt, const ScopeTele &a, const ScopeTele &b) {
  if (b.outer != tele_inner_mode(mt, a)) throw Error("telescopes do not meet");
  ScopeTele out = a;
  out.entries.insert(out.entries.end(), b.entries.begin(), b.entries.end());
  return out;
}

std::vector<LockTele> enumerate_lock_teles(const ModeTheory &mt, ModeId outer, int max_len) {
  std::vector<LockTele> out{LockTele{outer, {}}};
  size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i) {
      ModeId inner = tele_inner_mode(mt, out[i]);
      for (ModalityId mu = 0; mu < mt.modality_count(); ++mu) {
        if (mt.modality(mu).cod != inner) continue;
        LockTele next = out[i];
        next.mods.push_back(mu);
        out.push_back(std::move(next));
      }
    }
    level_begin = level_end;
  }
  return out;
}

std::string format_ctx(const ModeTheory &mt, const SCtx &ctx) {
  std::string out = "(ctx " + mt.mode_name(ctx.root);
  for (const Entry &e : ctx.entries) {
    out += e.kind == EntryKind::Var ? " . " : " lock ";
    out += mt.modality(e.mod).name;
  }
  return out + ")";
}

std::string format_lock_tele(const ModeTheory &mt, const LockTele &tele) {
  std::string out = "[";
  for (size_t i = 0; i < tele.mods.size(); ++i) {
    if (i) out += " ";
    out += mt.modality(tele.mods[i]).name;
  }
  return out + "]";
}

std::vector<SVar> enumerate_vars(const ModeTheory &mt, const SCtx &ctx, ModeId target_mode) {
  std::vector<SVar> out;
  if (mode_of(mt, ctx) != target_mode) return out;
  ModalityId lam = mt.identity_modality(target_mode);
  int sucs = 0;
  for (auto it = ctx.entries.rbegin(); it != ctx.entries.rend(); ++it) {
    if (it->kind == EntryKind::Lock) {
      lam = mt.compose_modalities(it->mod, lam);
    } else {
      for (CellId a : mt.cells_between(it->mod, lam)) out.push_back({sucs, a});
      ++sucs;
    }
  }
  return out;
}

}  // namespace mtt

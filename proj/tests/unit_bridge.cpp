#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mtt/bridge.hpp"

using namespace mtt;

static ModeTheory fixture(const std::string &name) {
  return load_mode_theory_file(std::string(MTT_FIXTURE_DIR) + "/" + name);
}

// Curated well-scoped terms per theory, paired with their contexts.
static std::vector<std::pair<SCtx, WExprPtr>> sample_wexprs(const ModeTheory &mt, const std::string &name) {
  std::vector<std::pair<SCtx, WExprPtr>> out;
  if (name == "trivial.mt") {
    ModeId m = 0;
    ModalityId one = mt.identity_modality(m);
    SCtx empty{m, {}};
    SCtx at_var{m, {var_entry(one), lock_entry(one)}};
    out.emplace_back(empty, wlam(one, wbool()));
    out.emplace_back(at_var, wvar0());
    out.emplace_back(at_var, wif(wbool(), wvar0(), wtrue(), wfalse()));
    out.emplace_back(empty, wsubapp(wbool(), ws_empty()));
    out.emplace_back(empty, wsubapp(wlam(one, wbool()), ws_id()));
    SCtx one_var{m, {var_entry(one)}};
    out.emplace_back(one_var, wsubapp(wtrue(), ws_weaken()));
    out.emplace_back(empty, wsubapp(wapp(one, wlam(one, wbool()), wtrue()), ws_comp(ws_id(), ws_id())));
    out.emplace_back(one_var, warrow(one, wbool(), wbool()));
  } else if (name == "walking_arrow.mt") {
    ModeId m = *mt.find_mode("m"), n = *mt.find_mode("n");
    ModalityId mu = *mt.find_modality("mu");
    ModalityId one_n = mt.identity_modality(n);
    SCtx at_n{n, {}};
    SCtx under_mu{n, {var_entry(mu), lock_entry(mu)}};
    out.emplace_back(at_n, wlam(mu, wapp(mu, wlam(mu, wbool()), wvar0())));
    out.emplace_back(under_mu, wvar0());
    out.emplace_back(at_n, wmodty(mu, wbool()));
    out.emplace_back(at_n, wmodtm(mu, wbool()));
    out.emplace_back(at_n, warrow(mu, wbool(), wbool()));
    out.emplace_back(at_n, wletmod(one_n, mu, wbool(), wbool(), wmodtm(mu, wbool()), wbool()));
    out.emplace_back(SCtx{n, {lock_entry(mu)}},
                     wsubapp(wvar0(), ws_lock(ws_ext(ws_empty(), wtrue()), mu)));
    out.emplace_back(at_n, wsubapp(wbool(), ws_ext(ws_empty(), wtrue())));
    out.emplace_back(SCtx{n, {var_entry(mu), lock_entry(one_n), lock_entry(mu)}},
                     wsubapp(wvar0(), ws_key(mt.identity_cell(mu), LockTele{n, {mu}},
                                             LockTele{n, {one_n, mu}}, SCtx{n, {var_entry(mu)}})));
    (void)m;
  } else {
    ModeId m = *mt.find_mode("m");
    ModalityId one = mt.identity_modality(m), p = *mt.find_modality("p");
    CellId c = *mt.find_cell("c");
    SCtx empty{m, {}};
    SCtx deep{m, {var_entry(one), lock_entry(p)}};
    out.emplace_back(empty, wlam(p, wbool()));
    out.emplace_back(deep, wsubapp(wvar0(), ws_key(c, LockTele{m, {one}}, LockTele{m, {p}}, SCtx{m, {var_entry(one)}})));
    out.emplace_back(empty, wletmod(p, p, wbool(), wbool(), wmodtm(p, wbool()), wbool()));
  }
  return out;
}

static std::vector<SExprPtr> sample_sexprs(const ModeTheory &mt, const SCtx &ctx) {
  std::vector<SExprPtr> out{se_bool(), se_true()};
  ModeId mode = mode_of(mt, ctx);
  for (const SVar &v : enumerate_vars(mt, ctx, mode)) out.push_back(se_var(v));
  for (ModalityId mu = 0; mu < mt.modality_count(); ++mu) {
    if (mt.modality(mu).cod != mode) continue;
    SCtx under_var = ctx;
    under_var.entries.push_back(var_entry(mu));
    SExprPtr var_body = se_false();
    for (const SVar &v : enumerate_vars(mt, under_var, mode)) var_body = se_var(v);
    SCtx under_lock = ctx;
    under_lock.entries.push_back(lock_entry(mu));
    SExprPtr lock_body = se_bool();
    for (const SVar &v : enumerate_vars(mt, under_lock, mt.modality(mu).dom)) lock_body = se_var(v);
    out.push_back(se_lam(mu, var_body));
    out.push_back(se_modtm(mu, lock_body));
    out.push_back(se_arrow(mu, lock_body, var_body));
  }
  SCtx under_id = ctx;
  under_id.entries.push_back(var_entry(mt.identity_modality(mode)));
  SExprPtr motive = se_bool();
  for (const SVar &v : enumerate_vars(mt, under_id, mode)) motive = se_var(v);
  out.push_back(se_if(motive, se_true(), se_false(), se_true()));
  return out;
}

TEST_CASE("variables translate to annotated zero variables") {
  ModeTheory wa = fixture("walking_arrow.mt");
  ModeId n = *wa.find_mode("n");
  ModalityId mu = *wa.find_modality("mu");
  SCtx ctx{n, {var_entry(mu), lock_entry(mu)}};
  SExprPtr t = translate_expr(wa, ctx, wvar0());
  CHECK(sexpr_equal(t, se_var(SVar{0, wa.identity_cell(mu)})));
  CHECK_THROWS_AS(translate_expr(wa, SCtx{n, {var_entry(mu)}}, wvar0()), Error);
}

TEST_CASE("substitution applications are eliminated") {
  ModeTheory wa = fixture("walking_arrow.mt");
  ModeId m = *wa.find_mode("m"), n = *wa.find_mode("n");
  ModalityId mu = *wa.find_modality("mu");

  SCtx locked{n, {lock_entry(mu)}};
  WExprPtr swap_in = wsubapp(wvar0(), ws_lock(ws_ext(ws_empty(), wtrue()), mu));
  REQUIRE(check_wexpr(wa, locked, swap_in, m));
  CHECK(sexpr_equal(translate_expr(wa, locked, swap_in), se_true()));

  SCtx two{n, {var_entry(mu), var_entry(mu)}};
  WExprPtr shuffled = wsubapp(wsubapp(wbool(), ws_weaken()), ws_weaken());
  CHECK(sexpr_equal(translate_expr(wa, two, shuffled), se_bool()));

  WExprPtr bad = wsubapp(wvar0(), ws_lock(ws_id(), mu));
  CHECK_THROWS_AS(translate_expr(wa, locked, bad), Error);
}

TEST_CASE("translated substitutions act like their sources") {
  ModeTheory tr = fixture("trivial.mt");
  ModeId m = 0;
  ModalityId one = tr.identity_modality(m);
  CellId c0 = tr.identity_cell(one);
  SCtx one_var{m, {var_entry(one)}};
  SCtx two_var{m, {var_entry(one), var_entry(one)}};

  WSubPtr swap_for_true = ws_ext(ws_weaken(), wtrue());
  REQUIRE(check_wsub(tr, one_var, swap_for_true, one_var, m));
  SubSeq seq = translate_sub(tr, one_var, swap_for_true, one_var);
  CHECK(seq.from == one_var);
  CHECK(seq.to == one_var);
  CHECK(check_rensub(tr, seq.from, seq, seq.to, m));
  CHECK(sexpr_equal(apply_rensub_expr(tr, se_var(SVar{0, c0}), seq), se_true()));

  WSubPtr doubled = ws_comp(swap_for_true, ws_ext(ws_id(), wfalse()));
  REQUIRE(check_wsub(tr, one_var, doubled, two_var, m));
  SubSeq dseq = translate_sub(tr, one_var, doubled, two_var);
  CHECK(sexpr_equal(apply_rensub_expr(tr, se_var(SVar{0, c0}), dseq), se_true()));
  CHECK(sexpr_equal(apply_rensub_expr(tr, se_var(SVar{1, c0}), dseq), se_var(SVar{0, c0})));

  WSubPtr lifted = wsub_lift(swap_for_true);
  REQUIRE(check_wsub(tr, two_var, lifted, two_var, m));
  SubSeq lseq = translate_sub(tr, two_var, lifted, two_var);
  CHECK(sexpr_equal(apply_rensub_expr(tr, se_var(SVar{0, c0}), lseq), se_var(SVar{0, c0})));
  CHECK(sexpr_equal(apply_rensub_expr(tr, se_var(SVar{1, c0}), lseq), se_true()));
}

TEST_CASE("embedding a variable wraps the zero variable in a key") {
  ModeTheory wa = fixture("walking_arrow.mt");
  ModeId n = *wa.find_mode("n");
  ModalityId mu = *wa.find_modality("mu");
  CellId one_mu = wa.identity_cell(mu);
  SCtx ctx{n, {var_entry(mu), lock_entry(mu)}};

  WExprPtr expect = wsubapp(wvar0(), ws_key(one_mu, LockTele{n, {mu}}, LockTele{n, {mu}}, SCtx{n, {var_entry(mu)}}));
  CHECK(wexpr_equal(embed_var(wa, ctx, SVar{0, one_mu}), expect));
  CHECK(check_wexpr(wa, ctx, embed_var(wa, ctx, SVar{0, one_mu}), *wa.find_mode("m")));

  SCtx two{n, {var_entry(mu), var_entry(mu), lock_entry(mu)}};
  WExprPtr deep = embed_var(wa, two, SVar{1, one_mu});
  CHECK(check_wexpr(wa, two, deep, *wa.find_mode("m")));
  WExprPtr expect_deep = wsubapp(expect, wsub_lock_tele(ws_weaken(), LockTele{n, {mu}}));
  CHECK(wexpr_equal(deep, expect_deep));
}

TEST_CASE("translation is a fixpoint of embed then translate") {
  for (const char *name : {"trivial.mt", "walking_arrow.mt", "idempotent.mt"}) {
    ModeTheory mt = fixture(name);
    for (const auto &[ctx, w] : sample_wexprs(mt, name)) {
      ModeId mode = mode_of(mt, ctx);
      REQUIRE(check_wexpr(mt, ctx, w, mode));
      SExprPtr norm = translate_expr(mt, ctx, w);
      CHECK(check_sexpr(mt, ctx, norm, mode));
      WExprPtr back = embed_expr(mt, ctx, norm);
      CHECK(check_wexpr(mt, ctx, back, mode));
      CHECK(sexpr_equal(translate_expr(mt, ctx, back), norm));
    }
  }
}

TEST_CASE("embedded sequences scope and agree with their sources on variables") {
  ModeTheory wa = fixture("walking_arrow.mt");
  ModeId n = *wa.find_mode("n");
  ModalityId mu = *wa.find_modality("mu");
  SCtx empty{n, {}};
  SCtx one_var{n, {var_entry(mu)}};

  std::vector<SubSeq> seqs;
  seqs.push_back(seq_id<SExprPtr>(wa, one_var));
  seqs.push_back(seq_of(wa, pi_atomic<SExprPtr>(wa, one_var, mu)));
  seqs.push_back(seq_snoc(wa, seq_of(wa, a_extend(wa, a_id<SExprPtr>(wa, empty), mu, se_true())),
                          pi_atomic<SExprPtr>(wa, empty, mu)));
  seqs.push_back(seq_lift(wa, seqs.back(), mu));
  seqs.push_back(seq_lock(wa, seqs[2], mu));
  seqs.push_back(seq_of(wa, a_key<SExprPtr>(wa, wa.identity_cell(mu), LockTele{n, {wa.identity_modality(n), mu}},
                                            LockTele{n, {mu}}, one_var)));

  for (const SubSeq &seq : seqs) {
    ModeId mode = mode_of(wa, seq.from);
    WSubPtr w = embed_rensub(wa, seq);
    REQUIRE(check_wsub(wa, seq.from, w, seq.to, mode));
    SubSeq back = translate_sub(wa, seq.from, w, seq.to);
    for (const SExprPtr &probe : sample_sexprs(wa, seq.to)) {
      SExprPtr direct = apply_rensub_expr(wa, probe, seq);
      SExprPtr via = apply_rensub_expr(wa, probe, back);
      CHECK(sexpr_equal(direct, via));
      CHECK(check_sexpr(wa, seq.from, direct, mode));
    }
  }
}

TEST_CASE("embedded expressions scope everywhere") {
  for (const char *name : {"trivial.mt", "walking_arrow.mt", "idempotent.mt"}) {
    ModeTheory mt = fixture(name);
    std::vector<SCtx> ctxs;
    for (ModeId md = 0; md < mt.mode_count(); ++md) {
      ctxs.push_back(SCtx{md, {}});
      for (ModalityId mu = 0; mu < mt.modality_count(); ++mu) {
        if (mt.modality(mu).cod != md) continue;
        ctxs.push_back(SCtx{md, {var_entry(mu)}});
        ctxs.push_back(SCtx{mt.modality(mu).dom, {}});
        for (ModalityId nu = 0; nu < mt.modality_count(); ++nu)
          if (mt.modality(nu).cod == md) ctxs.push_back(SCtx{md, {var_entry(nu), lock_entry(mu)}});
      }
    }
    for (const SCtx &ctx : ctxs) {
      ModeId mode = mode_of(mt, ctx);
      for (const SExprPtr &e : sample_sexprs(mt, ctx)) {
        REQUIRE(check_sexpr(mt, ctx, e, mode));
        WExprPtr w = embed_expr(mt, ctx, e);
        CHECK(check_wexpr(mt, ctx, w, mode));
        CHECK(sexpr_equal(translate_expr(mt, ctx, w), e));
      }
    }
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mtt/equivalence.hpp"
#include "syntax.hpp"

using namespace mtt;

static ModeTheory fixture(const std::string &name) {
  return load_mode_theory_file(std::string(MTT_FIXTURE_DIR) + "/" + name);
}

TEST_CASE("expression grammar walks") {
  ModeTheory tr = fixture("trivial.mt");
  ModalityId one = tr.identity_modality(0);
  CHECK(wexpr_equal(parse_wexpr(tr, "v0"), wvar0()));
  CHECK(wexpr_equal(parse_wexpr(tr, "(lam 1@m v0)"), wlam(one, wvar0())));
  CHECK(wexpr_equal(parse_wexpr(tr, "  ( sub true ( ext ! false ) ) "),
                    wsubapp(wtrue(), ws_ext(ws_empty(), wfalse()))));
  CHECK(wexpr_equal(parse_wexpr(tr, "(if Bool true false v0)"),
                    wif(wbool(), wtrue(), wfalse(), wvar0())));
  CHECK_THROWS_AS(parse_wexpr(tr, "(lam"), ParseError);
  CHECK_THROWS_AS(parse_wexpr(tr, "(lam nu v0)"), ParseError);
  CHECK_THROWS_AS(parse_wexpr(tr, "v0 v0"), ParseError);
  CHECK_THROWS_AS(parse_wexpr(tr, "(var 0 id(1@m))"), ParseError);
  CHECK_THROWS_AS(parse_wexpr(tr, ""), ParseError);
}

TEST_CASE("substitution grammar walks") {
  ModeTheory wa = fixture("walking_arrow.mt");
  ModeId n = *wa.find_mode("n");
  ModalityId mu = *wa.find_modality("mu");
  CHECK(wsub_equal(parse_wsub(wa, "id"), ws_id()));
  CHECK(wsub_equal(parse_wsub(wa, "(comp pi !)"), ws_comp(ws_weaken(), ws_empty())));
  CHECK(wsub_equal(parse_wsub(wa, "(lock mu (ext ! true))"), ws_lock(ws_ext(ws_empty(), wtrue()), mu)));
  WSubPtr key = ws_key(wa.identity_cell(mu), LockTele{n, {mu}}, LockTele{n, {wa.identity_modality(n), mu}},
                       SCtx{n, {var_entry(mu)}});
  CHECK(wsub_equal(parse_wsub(wa, "(key id(mu) [mu] [1@n mu] (ctx n . mu))"), key));
  CHECK_THROWS_AS(parse_wsub(wa, "(key id(mu) [mu] [mu] (ctx q))"), ParseError);
  CHECK_THROWS_AS(parse_wsub(wa, "(weaken id)"), ParseError);
}

TEST_CASE("substitution-free grammar has annotated variables and no closures") {
  ModeTheory wa = fixture("walking_arrow.mt");
  ModalityId mu = *wa.find_modality("mu");
  CHECK(sexpr_equal(parse_sexpr(wa, "(var 0 id(mu))"), se_var(SVar{0, wa.identity_cell(mu)})));
  CHECK(sexpr_equal(parse_sexpr(wa, "(var 12 id(mu))"), se_var(SVar{12, wa.identity_cell(mu)})));
  CHECK(sexpr_equal(parse_sexpr(wa, "(mod mu Bool)"), se_modtm(mu, se_bool())));
  CHECK_THROWS_AS(parse_sexpr(wa, "v0"), ParseError);
  CHECK_THROWS_AS(parse_sexpr(wa, "(sub true id)"), ParseError);
  CHECK_THROWS_AS(parse_sexpr(wa, "(var x id(mu))"), ParseError);
}

TEST_CASE("context flags parse against a root mode") {
  ModeTheory wa = fixture("walking_arrow.mt");
  ModeId n = *wa.find_mode("n");
  ModalityId mu = *wa.find_modality("mu");
  CHECK(parse_ctx(wa, "()", n) == SCtx{n, {}});
  CHECK(parse_ctx(wa, "() . mu lock mu", n) == SCtx{n, {var_entry(mu), lock_entry(mu)}});
  CHECK_THROWS_AS(parse_ctx(wa, "", n), ParseError);
  CHECK_THROWS_AS(parse_ctx(wa, "() mu", n), ParseError);
  CHECK_THROWS_AS(parse_ctx(wa, "() . omega", n), ParseError);
}

TEST_CASE("parsing inverts formatting on generated values") {
  for (const char *name : {"trivial.mt", "walking_arrow.mt", "idempotent.mt"}) {
    ModeTheory mt = fixture(name);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      GenConfig cfg{seed, 6, 2, 100};
      SCtx ctx = gen_sctx(mt, cfg);
      CHECK(parse_ctx(mt, format_ctx_flag(mt, ctx), ctx.root) == ctx);

      ModeId mode = mode_of(mt, ctx);
      WExprPtr e = gen_wexpr(mt, ctx, mode, cfg);
      CHECK(wexpr_equal(parse_wexpr(mt, format_wexpr(mt, e)), e));

      auto sub = gen_wsub(mt, ctx, std::nullopt, mode, cfg);
      REQUIRE(sub.has_value());
      CHECK(wsub_equal(parse_wsub(mt, format_wsub(mt, sub->first)), sub->first));

      SExprPtr norm = translate_expr(mt, ctx, e);
      CHECK(sexpr_equal(parse_sexpr(mt, format_sexpr(mt, norm)), norm));
    }
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mtt/mode_theory.hpp"

using namespace mtt;

static ModeTheory fixture(const std::string &name) {
  return load_mode_theory_file(std::string(MTT_FIXTURE_DIR) + "/" + name);
}

TEST_CASE("trivial theory synthesizes identities") {
  ModeTheory mt = fixture("trivial.mt");
  CHECK(mt.mode_count() == 1);
  CHECK(mt.modality_count() == 1);
  CHECK(mt.cell_count() == 1);
  REQUIRE(mt.find_modality("1@m"));
  REQUIRE(mt.find_cell("id(1@m)"));
  ModalityId one = *mt.find_modality("1@m");
  CHECK(mt.identity_modality(0) == one);
  CHECK(mt.compose_modalities(one, one) == one);
  CHECK(mt.vertical_compose(mt.identity_cell(one), mt.identity_cell(one)) == mt.identity_cell(one));
  CHECK(mt.horizontal_compose(mt.identity_cell(one), mt.identity_cell(one)) == mt.identity_cell(one));
  CHECK(mt.cells_between(one, one) == std::vector<CellId>{mt.identity_cell(one)});
  CHECK(mt.validate_laws().empty());
}

TEST_CASE("walking arrow tables") {
  ModeTheory mt = fixture("walking_arrow.mt");
  CHECK(mt.mode_count() == 2);
  CHECK(mt.modality_count() == 3);
  ModalityId mu = *mt.find_modality("mu");
  ModeId m = *mt.find_mode("m"), n = *mt.find_mode("n");
  CHECK(mt.modality(mu).dom == m);
  CHECK(mt.modality(mu).cod == n);
  CHECK(mt.compose_modalities(mt.identity_modality(n), mu) == mu);
  CHECK(mt.compose_modalities(mu, mt.identity_modality(m)) == mu);
  CHECK(!mt.compose_opt(mu, mu));
  CHECK(mt.cells_between(mu, mu) == std::vector<CellId>{mt.identity_cell(mu)});
  CHECK(mt.cells_between(mt.identity_modality(m), mu).empty());
  CHECK(mt.validate_laws().empty());
}

TEST_CASE("idempotent theory laws hold") {
  ModeTheory mt = fixture("idempotent.mt");
  ModalityId p = *mt.find_modality("p");
  ModalityId one = *mt.find_modality("1@m");
  CellId c = *mt.find_cell("c");
  CHECK(mt.compose_modalities(p, p) == p);
  CHECK(mt.horizontal_compose(c, c) == c);
  CHECK(mt.horizontal_compose(mt.identity_cell(p), c) == mt.identity_cell(p));
  CHECK(mt.horizontal_compose(c, mt.identity_cell(p)) == mt.identity_cell(p));
  CHECK(mt.horizontal_compose(mt.identity_cell(p), mt.identity_cell(p)) == mt.identity_cell(p));
  CHECK(mt.vertical_compose(c, mt.identity_cell(one)) == c);
  CHECK(mt.vertical_compose(mt.identity_cell(p), c) == c);
  CHECK(mt.cells_between(one, p) == std::vector<CellId>{c});
  CHECK(mt.validate_laws().empty());
}

TEST_CASE("broken theory reports associativity violation") {
  ModeTheory mt = fixture("broken_assoc.mt");
  auto violations = mt.validate_laws();
  REQUIRE(!violations.empty());
  bool found = false;
  for (const auto &v : violations)
    if (v.law == "compose-assoc") found = true;
  CHECK(found);
}

TEST_CASE("serialize round-trips") {
  for (const char *name : {"trivial.mt", "walking_arrow.mt", "idempotent.mt", "broken_assoc.mt"}) {
    ModeTheory mt = fixture(name);
    ModeTheory again = load_mode_theory(mt.serialize());
    CHECK(mt == again);
  }
}

TEST_CASE("load rejects malformed input") {
  CHECK_THROWS_AS(load_mode_theory("mode m\nmode m\n"), Error);
  CHECK_THROWS_AS(load_mode_theory("modality f : a -> b\n"), Error);
  CHECK_THROWS_AS(load_mode_theory("mode m\nmodality 1@m : m -> m\n"), Error);
  CHECK_THROWS_AS(load_mode_theory("mode m\nfrobnicate\n"), Error);
  CHECK_THROWS_AS(load_mode_theory("mode a\nmode b\nmodality f : a -> b\nmodality g : b -> a\n"
                                   "modality gf : a -> a\ncompose g . f = gf\ncompose g . f = 1@a\n"),
                  Error);
  // Conflicting with an auto-filled unit row.
  CHECK_THROWS_AS(load_mode_theory("mode a\nmodality f : a -> a\ncompose f . 1@a = 1@a\n"), Error);
  // Identical duplicate of the unit row is fine.
  CHECK_NOTHROW(load_mode_theory("mode a\nmodality f : a -> a\ncompose f . 1@a = f\n"));
}

TEST_CASE("hcomp rows require underlying composites") {
  // c * c would land in f . f, which has no entry at declaration time.
  CHECK_THROWS_AS(load_mode_theory("mode a\nmodality f : a -> a\ncell c : 1@a => f\nhcomp c * c = c\n"), Error);
}

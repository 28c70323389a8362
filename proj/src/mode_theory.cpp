#include "mtt/mode_theory.hpp"

#include <fstream>
#include <sstream>

namespace mtt {

namespace {

std::string at_line(int line, const std::string &msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

void check_user_name(const std::string &name, int line) {
  if (name.empty()) throw Error(at_line(line, "empty name"));
  for (char c : name) {
    if (std::string("()[]{}#.=:*@\"").find(c) != std::string::npos)
      throw Error(at_line(line, "name '" + name + "' contains reserved character '" + std::string(1, c) + "'"));
  }
}

std::vector<std::string> tokenize_line(const std::string &line) {
  std::vector<std::string> toks;
  std::istringstream in(line.substr(0, line.find('#')));
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

}  // namespace

std::optional<ModeId> ModeTheory::find_mode(const std::string &name) const {
  for (ModeId m = 0; m < mode_count(); ++m)
    if (modes_[m] == name) return m;
  return std::nullopt;
}

std::optional<ModalityId> ModeTheory::find_modality(const std::string &name) const {
  for (ModalityId mu = 0; mu < modality_count(); ++mu)
    if (modalities_[mu].name == name) return mu;
  return std::nullopt;
}

std::optional<CellId> ModeTheory::find_cell(const std::string &name) const {
  for (CellId a = 0; a < cell_count(); ++a)
    if (cells_[a].name == name) return a;
  return std::nullopt;
}

bool ModeTheory::is_identity_modality(ModalityId mu) const {
  return identity_modality_.at(modalities_.at(mu).dom) == mu;
}

bool ModeTheory::is_identity_cell(CellId a) const {
  return identity_cell_.at(cells_.at(a).dom) == a;
}

std::optional<ModalityId> ModeTheory::compose_opt(ModalityId outer, ModalityId inner) const {
  if (modalities_.at(outer).dom != modalities_.at(inner).cod) return std::nullopt;
  ModalityId r = compose_[outer][inner];
  if (r < 0) return std::nullopt;
  return r;
}

std::optional<CellId> ModeTheory::vcomp_opt(CellId later, CellId earlier) const {
  if (cells_.at(later).dom != cells_.at(earlier).cod) return std::nullopt;
  CellId r = vcomp_[later][earlier];
  if (r < 0) return std::nullopt;
  return r;
}

std::optional<CellId> ModeTheory::hcomp_opt(CellId outer, CellId inner) const {
  const CellInfo &b = cells_.at(outer), &a = cells_.at(inner);
  if (modalities_[b.dom].dom != modalities_[a.dom].cod) return std::nullopt;
  CellId r = hcomp_[outer][inner];
  if (r < 0) return std::nullopt;
  return r;
}

ModalityId ModeTheory::compose_modalities(ModalityId outer, ModalityId inner) const {
  auto r = compose_opt(outer, inner);
  if (!r) throw Error("composition undefined: " + modalities_.at(outer).name + " . " + modalities_.at(inner).name);
  return *r;
}

CellId ModeTheory::vertical_compose(CellId later, CellId earlier) const {
  auto r = vcomp_opt(later, earlier);
  if (!r) throw Error("vertical composition undefined: " + cells_.at(later).name + " . " + cells_.at(earlier).name);
  return *r;
}

CellId ModeTheory::horizontal_compose(CellId outer, CellId inner) const {
  auto r = hcomp_opt(outer, inner);
  if (!r) throw Error("horizontal composition undefined: " + cells_.at(outer).name + " * " + cells_.at(inner).name);
  return *r;
}

std::vector<CellId> ModeTheory::cells_between(ModalityId mu, ModalityId nu) const {
  std::vector<CellId> out;
  for (CellId a = 0; a < cell_count(); ++a)
    if (cells_[a].dom == mu && cells_[a].cod == nu) out.push_back(a);
  return out;
}

void ModeTheory::add_mode(const std::string &name, int line) {
  if (find_mode(name)) throw Error(at_line(line, "duplicate mode '" + name + "'"));
  modes_.push_back(name);
  identity_modality_.push_back(-1);
  add_modality("1@" + name, mode_count() - 1, mode_count() - 1, line, true);
}

void ModeTheory::add_modality(const std::string &name, ModeId dom, ModeId cod, int line, bool synthetic) {
  if (find_modality(name)) throw Error(at_line(line, "duplicate modality '" + name + "'"));
  ModalityId mu = modality_count();
  modalities_.push_back({name, dom, cod});
  identity_cell_.push_back(-1);
  for (auto &row : compose_) row.push_back(-1);
  compose_.emplace_back(modality_count(), -1);
  if (synthetic) identity_modality_[dom] = mu;
  set_compose(mu, identity_modality_[dom], mu, line);
  set_compose(identity_modality_[cod], mu, mu, line);
  add_cell("id(" + name + ")", mu, mu, line, true);
}

void ModeTheory::add_cell(const std::string &name, ModalityId dom, ModalityId cod, int line, bool synthetic) {
  if (find_cell(name)) throw Error(at_line(line, "duplicate cell '" + name + "'"));
  CellId a = cell_count();
  cells_.push_back({name, dom, cod});
  for (auto &row : vcomp_) row.push_back(-1);
  vcomp_.emplace_back(cell_count(), -1);
  for (auto &row : hcomp_) row.push_back(-1);
  hcomp_.emplace_back(cell_count(), -1);
  if (synthetic) identity_cell_[dom] = a;
  set_vcomp(a, identity_cell_[dom], a, line);
  set_vcomp(identity_cell_[cod], a, a, line);
  ModeId ma = modalities_[dom].dom, mb = modalities_[dom].cod;
  set_hcomp(a, identity_cell_[identity_modality_[ma]], a, line);
  set_hcomp(identity_cell_[identity_modality_[mb]], a, a, line);
}

void ModeTheory::set_compose(ModalityId outer, ModalityId inner, ModalityId result, int line) {
  if (modalities_[outer].dom != modalities_[inner].cod)
    throw Error(at_line(line, "modalities " + modalities_[outer].name + " . " + modalities_[inner].name + " do not meet at a common mode"));
  if (modalities_[result].dom != modalities_[inner].dom || modalities_[result].cod != modalities_[outer].cod)
    throw Error(at_line(line, "composite " + modalities_[result].name + " has wrong endpoints for " + modalities_[outer].name + " . " + modalities_[inner].name));
  ModalityId &slot = compose_[outer][inner];
  if (slot >= 0 && slot != result)
    throw Error(at_line(line, "conflicting entry for " + modalities_[outer].name + " . " + modalities_[inner].name));
  slot = result;
}

void ModeTheory::set_vcomp(CellId later, CellId earlier, CellId result, int line) {
  if (cells_[later].dom != cells_[earlier].cod)
    throw Error(at_line(line, "cells " + cells_[later].name + " . " + cells_[earlier].name + " do not meet at a common modality"));
  if (cells_[result].dom != cells_[earlier].dom || cells_[result].cod != cells_[later].cod)
    throw Error(at_line(line, "composite " + cells_[result].name + " has wrong endpoints for " + cells_[later].name + " . " + cells_[earlier].name));
  CellId &slot = vcomp_[later][earlier];
  if (slot >= 0 && slot != result)
    throw Error(at_line(line, "conflicting entry for " + cells_[later].name + " . " + cells_[earlier].name));
  slot = result;
}

void ModeTheory::set_hcomp(CellId outer, CellId inner, CellId result, int line) {
  const CellInfo &b = cells_[outer], &a = cells_[inner];
  if (modalities_[b.dom].dom != modalities_[a.dom].cod)
    throw Error(at_line(line, "cells " + b.name + " * " + a.name + " do not meet at a common mode"));
  auto dom = compose_opt(b.dom, a.dom), cod = compose_opt(b.cod, a.cod);
  if (!dom || !cod)
    throw Error(at_line(line, "underlying composites for " + b.name + " * " + a.name + " are not in the table yet (declare compose rows first)"));
  if (cells_[result].dom != *dom || cells_[result].cod != *cod)
    throw Error(at_line(line, "composite " + cells_[result].name + " has wrong endpoints for " + b.name + " * " + a.name));
  CellId &slot = hcomp_[outer][inner];
  if (slot >= 0 && slot != result)
    throw Error(at_line(line, "conflicting entry for " + b.name + " * " + a.name));
  slot = result;
}

void ModeTheory::fill_identity_hcomp() {
  for (ModalityId mu = 0; mu < modality_count(); ++mu)
    for (ModalityId nu = 0; nu < modality_count(); ++nu) {
      auto comp = compose_opt(mu, nu);
      if (!comp) continue;
      CellId &slot = hcomp_[identity_cell_[mu]][identity_cell_[nu]];
      if (slot < 0) slot = identity_cell_[*comp];
    }
}

ModeTheory load_mode_theory(const std::string &text) {
  ModeTheory mt;
  std::istringstream in(text);
  std::string raw;
  int line = 0;

  auto mode_of = [&](const std::string &n) {
    auto m = mt.find_mode(n);
    if (!m) throw Error(at_line(line, "unknown mode '" + n + "'"));
    return *m;
  };
  auto modality_of = [&](const std::string &n) {
    auto mu = mt.find_modality(n);
    if (!mu) throw Error(at_line(line, "unknown modality '" + n + "'"));
    return *mu;
  };
  auto cell_of = [&](const std::string &n) {
    auto a = mt.find_cell(n);
    if (!a) throw Error(at_line(line, "unknown cell '" + n + "'"));
    return *a;
  };
  auto expect = [&](const std::vector<std::string> &toks, size_t i, const std::string &tok) {
    if (toks[i] != tok) throw Error(at_line(line, "expected '" + tok + "', got '" + toks[i] + "'"));
  };

  while (std::getline(in, raw)) {
    ++line;
    auto toks = tokenize_line(raw);
    if (toks.empty()) continue;
    const std::string &head = toks[0];
    if (head == "mode" && toks.size() == 2) {
      check_user_name(toks[1], line);
      mt.add_mode(toks[1], line);
    } else if (head == "modality" && toks.size() == 6) {
      check_user_name(toks[1], line);
      expect(toks, 2, ":");
      expect(toks, 4, "->");
      mt.add_modality(toks[1], mode_of(toks[3]), mode_of(toks[5]), line, false);
    } else if (head == "compose" && toks.size() == 6) {
      expect(toks, 2, ".");
      expect(toks, 4, "=");
      mt.set_compose(modality_of(toks[1]), modality_of(toks[3]), modality_of(toks[5]), line);
    } else if (head == "cell" && toks.size() == 6) {
      check_user_name(toks[1], line);
      expect(toks, 2, ":");
      expect(toks, 4, "=>");
      ModalityId dom = modality_of(toks[3]), cod = modality_of(toks[5]);
      const auto &d = mt.modality(dom), &c = mt.modality(cod);
      if (d.dom != c.dom || d.cod != c.cod)
        throw Error(at_line(line, "cell endpoints " + d.name + " => " + c.name + " are not parallel"));
      mt.add_cell(toks[1], dom, cod, line, false);
    } else if (head == "vcomp" && toks.size() == 6) {
      expect(toks, 2, ".");
      expect(toks, 4, "=");
      mt.set_vcomp(cell_of(toks[1]), cell_of(toks[3]), cell_of(toks[5]), line);
    } else if (head == "hcomp" && toks.size() == 6) {
      expect(toks, 2, "*");
      expect(toks, 4, "=");
      mt.set_hcomp(cell_of(toks[1]), cell_of(toks[3]), cell_of(toks[5]), line);
    } else {
      throw Error(at_line(line, "unrecognized statement '" + raw + "'"));
    }
  }
  mt.fill_identity_hcomp();
  return mt;
}

ModeTheory load_mode_theory_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mode theory file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return load_mode_theory(buf.str());
  } catch (const Error &e) {
    throw Error(path + ": " + e.what());
  }
}

std::string ModeTheory::serialize() const {
  std::ostringstream out;
  for (ModeId m = 0; m < mode_count(); ++m) out << "mode " << modes_[m] << "\n";
  for (ModalityId mu = 0; mu < modality_count(); ++mu) {
    if (is_identity_modality(mu)) continue;
    const auto &i = modalities_[mu];
    out << "modality " << i.name << " : " << modes_[i.dom] << " -> " << modes_[i.cod] << "\n";
  }
  for (ModalityId o = 0; o < modality_count(); ++o)
    for (ModalityId i = 0; i < modality_count(); ++i) {
      if (compose_[o][i] < 0 || is_identity_modality(o) || is_identity_modality(i)) continue;
      out << "compose " << modalities_[o].name << " . " << modalities_[i].name << " = " << modalities_[compose_[o][i]].name << "\n";
    }
  for (CellId a = 0; a < cell_count(); ++a) {
    if (is_identity_cell(a)) continue;
    const auto &i = cells_[a];
    out << "cell " << i.name << " : " << modalities_[i.dom].name << " => " << modalities_[i.cod].name << "\n";
  }
  for (CellId l = 0; l < cell_count(); ++l)
    for (CellId e = 0; e < cell_count(); ++e) {
      if (vcomp_[l][e] < 0 || is_identity_cell(l) || is_identity_cell(e)) continue;
      out << "vcomp " << cells_[l].name << " . " << cells_[e].name << " = " << cells_[vcomp_[l][e]].name << "\n";
    }
  auto unit_cell = [&](CellId a) { return is_identity_cell(a) && is_identity_modality(cells_[a].dom); };
  for (CellId o = 0; o < cell_count(); ++o)
    for (CellId i = 0; i < cell_count(); ++i) {
      if (hcomp_[o][i] < 0) continue;
      if (is_identity_cell(o) && is_identity_cell(i)) continue;
      if (unit_cell(o) || unit_cell(i)) continue;
      out << "hcomp " << cells_[o].name << " * " << cells_[i].name << " = " << cells_[hcomp_[o][i]].name << "\n";
    }
  return out.str();
}

std::vector<LawViolation> ModeTheory::validate_laws() const {
  std::vector<LawViolation> out;
  auto mn = [&](ModalityId mu) { return modalities_[mu].name; };
  auto cn = [&](CellId a) { return cells_[a].name; };

  for (ModalityId o = 0; o < modality_count(); ++o)
    for (ModalityId i = 0; i < modality_count(); ++i) {
      if (modalities_[o].dom != modalities_[i].cod) continue;
      if (compose_[o][i] < 0)
        out.push_back({"compose-totality", mn(o) + " . " + mn(i) + " has no entry"});
    }
  for (ModalityId mu = 0; mu < modality_count(); ++mu) {
    auto l = compose_opt(identity_modality_[modalities_[mu].cod], mu);
    auto r = compose_opt(mu, identity_modality_[modalities_[mu].dom]);
    if (l && *l != mu) out.push_back({"compose-unit", "1 . " + mn(mu) + " = " + mn(*l)});
    if (r && *r != mu) out.push_back({"compose-unit", mn(mu) + " . 1 = " + mn(*r)});
  }
  for (ModalityId a = 0; a < modality_count(); ++a)
    for (ModalityId b = 0; b < modality_count(); ++b)
      for (ModalityId c = 0; c < modality_count(); ++c) {
        auto ab = compose_opt(a, b), bc = compose_opt(b, c);
        if (!ab || !bc) continue;
        auto l = compose_opt(*ab, c), r = compose_opt(a, *bc);
        if (l && r && *l != *r)
          out.push_back({"compose-assoc", "(" + mn(a) + " . " + mn(b) + ") . " + mn(c) + " = " + mn(*l) + " but " + mn(a) + " . (" + mn(b) + " . " + mn(c) + ") = " + mn(*r)});
      }

  for (CellId l = 0; l < cell_count(); ++l)
    for (CellId e = 0; e < cell_count(); ++e) {
      if (cells_[l].dom != cells_[e].cod) continue;
      if (vcomp_[l][e] < 0)
        out.push_back({"vcomp-totality", cn(l) + " . " + cn(e) + " has no entry"});
      else {
        CellId r = vcomp_[l][e];
        if (cells_[r].dom != cells_[e].dom || cells_[r].cod != cells_[l].cod)
          out.push_back({"vcomp-endpoints", cn(l) + " . " + cn(e) + " = " + cn(r)});
      }
    }
  for (CellId a = 0; a < cell_count(); ++a) {
    auto l = vcomp_opt(identity_cell_[cells_[a].cod], a);
    auto r = vcomp_opt(a, identity_cell_[cells_[a].dom]);
    if (l && *l != a) out.push_back({"vcomp-unit", "id . " + cn(a) + " = " + cn(*l)});
    if (r && *r != a) out.push_back({"vcomp-unit", cn(a) + " . id = " + cn(*r)});
  }
  for (CellId a = 0; a < cell_count(); ++a)
    for (CellId b = 0; b < cell_count(); ++b)
      for (CellId c = 0; c < cell_count(); ++c) {
        auto ab = vcomp_opt(a, b), bc = vcomp_opt(b, c);
        if (!ab || !bc) continue;
        auto l = vcomp_opt(*ab, c), r = vcomp_opt(a, *bc);
        if (l && r && *l != *r)
          out.push_back({"vcomp-assoc", "(" + cn(a) + " . " + cn(b) + ") . " + cn(c) + " = " + cn(*l) + " but " + cn(a) + " . (" + cn(b) + " . " + cn(c) + ") = " + cn(*r)});
      }

  auto hmeet = [&](CellId o, CellId i) {
    return modalities_[cells_[o].dom].dom == modalities_[cells_[i].dom].cod;
  };
  for (CellId o = 0; o < cell_count(); ++o)
    for (CellId i = 0; i < cell_count(); ++i) {
      if (!hmeet(o, i)) continue;
      if (hcomp_[o][i] < 0) {
        out.push_back({"hcomp-totality", cn(o) + " * " + cn(i) + " has no entry"});
        continue;
      }
      auto dom = compose_opt(cells_[o].dom, cells_[i].dom), cod = compose_opt(cells_[o].cod, cells_[i].cod);
      CellId r = hcomp_[o][i];
      if (dom && cod && (cells_[r].dom != *dom || cells_[r].cod != *cod))
        out.push_back({"hcomp-endpoints", cn(o) + " * " + cn(i) + " = " + cn(r)});
    }
  for (CellId a = 0; a < cell_count(); ++a) {
    ModeId ma = modalities_[cells_[a].dom].dom, mb = modalities_[cells_[a].dom].cod;
    auto l = hcomp_opt(identity_cell_[identity_modality_[mb]], a);
    auto r = hcomp_opt(a, identity_cell_[identity_modality_[ma]]);
    if (l && *l != a) out.push_back({"hcomp-unit", "id * " + cn(a) + " = " + cn(*l)});
    if (r && *r != a) out.push_back({"hcomp-unit", cn(a) + " * id = " + cn(*r)});
  }
  for (ModalityId mu = 0; mu < modality_count(); ++mu)
    for (ModalityId nu = 0; nu < modality_count(); ++nu) {
      auto comp = compose_opt(mu, nu);
      if (!comp) continue;
      auto h = hcomp_opt(identity_cell_[mu], identity_cell_[nu]);
      if (h && *h != identity_cell_[*comp])
        out.push_back({"hcomp-identity", "id(" + mn(mu) + ") * id(" + mn(nu) + ") = " + cn(*h) + " but id(" + mn(*comp) + ") expected"});
    }
  for (CellId a = 0; a < cell_count(); ++a)
    for (CellId b = 0; b < cell_count(); ++b)
      for (CellId c = 0; c < cell_count(); ++c) {
        if (!hmeet(a, b) || !hmeet(b, c)) continue;
        auto ab = hcomp_opt(a, b), bc = hcomp_opt(b, c);
        if (!ab || !bc) continue;
        auto l = hcomp_opt(*ab, c), r = hcomp_opt(a, *bc);
        if (l && r && *l != *r)
          out.push_back({"hcomp-assoc", "(" + cn(a) + " * " + cn(b) + ") * " + cn(c) + " = " + cn(*l) + " but " + cn(a) + " * (" + cn(b) + " * " + cn(c) + ") = " + cn(*r)});
      }

  for (CellId bp = 0; bp < cell_count(); ++bp)
    for (CellId b = 0; b < cell_count(); ++b) {
      if (cells_[bp].dom != cells_[b].cod) continue;
      for (CellId ap = 0; ap < cell_count(); ++ap)
        for (CellId a = 0; a < cell_count(); ++a) {
          if (cells_[ap].dom != cells_[a].cod) continue;
          if (!hmeet(bp, ap)) continue;
          auto vb = vcomp_opt(bp, b), va = vcomp_opt(ap, a);
          auto hp = hcomp_opt(bp, ap), h = hcomp_opt(b, a);
          if (!vb || !va || !hp || !h) continue;
          auto l = hcomp_opt(*vb, *va), r = vcomp_opt(*hp, *h);
          if (l && r && *l != *r)
            out.push_back({"interchange", "(" + cn(bp) + " . " + cn(b) + ") * (" + cn(ap) + " . " + cn(a) + ") = " + cn(*l) + " but composing the other way gives " + cn(*r)});
        }
    }
  return out;
}

}  // namespace mtt

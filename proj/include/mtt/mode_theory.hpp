#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-throwing check outcome. `message` is empty iff `ok`.
struct CheckResult {
  bool ok = true;
  std::string message;

  static CheckResult pass() { return {}; }
  static CheckResult fail(std::string msg) { return {false, std::move(msg)}; }
  explicit operator bool() const { return ok; }
};

using ModeId = int;
using ModalityId = int;
using CellId = int;

struct ModalityInfo {
  std::string name;
  ModeId dom = -1;
  ModeId cod = -1;
  bool operator==(const ModalityInfo &) const = default;
};

struct CellInfo {
  std::string name;
  ModalityId dom = -1;  // parallel modalities: dom, cod share endpoints
  ModalityId cod = -1;
  bool operator==(const CellInfo &) const = default;
};

struct LawViolation {
  std::string law;
  std::string witness;
};

// A finitely tabulated strict 2-category. Identity modalities `1@<mode>` and
// identity cells `id(<modality>)` are synthesized on declaration; unit table
// rows and the rows `id(mu) * id(nu) = id(mu . nu)` are filled in
// automatically. Loading never validates the laws; validate_laws does.
class ModeTheory {
public:
  int mode_count() const { return int(modes_.size()); }
  int modality_count() const { return int(modalities_.size()); }
  int cell_count() const { return int(cells_.size()); }

  const std::string &mode_name(ModeId m) const { return modes_.at(m); }
  const ModalityInfo &modality(ModalityId mu) const { return modalities_.at(mu); }
  const CellInfo &cell(CellId a) const { return cells_.at(a); }

  std::optional<ModeId> find_mode(const std::string &name) const;
  std::optional<ModalityId> find_modality(const std::string &name) const;
  std::optional<CellId> find_cell(const std::string &name) const;

  ModalityId identity_modality(ModeId m) const { return identity_modality_.at(m); }
  CellId identity_cell(ModalityId mu) const { return identity_cell_.at(mu); }
  bool is_identity_modality(ModalityId mu) const;
  bool is_identity_cell(CellId a) const;

  // Table lookups; nullopt when the endpoints don't line up or the row is
  // missing (a totality violation, reported by validate_laws).
  std::optional<ModalityId> compose_opt(ModalityId outer, ModalityId inner) const;
  std::optional<CellId> vcomp_opt(CellId later, CellId earlier) const;
  std::optional<CellId> hcomp_opt(CellId outer, CellId inner) const;

  // Throwing variants for algorithm internals.
  ModalityId compose_modalities(ModalityId outer, ModalityId inner) const;
  CellId vertical_compose(CellId later, CellId earlier) const;
  CellId horizontal_compose(CellId outer, CellId inner) const;

  // All cells mu => nu, in declaration order.
  std::vector<CellId> cells_between(ModalityId mu, ModalityId nu) const;

  std::vector<LawViolation> validate_laws() const;
  std::string serialize() const;

  bool operator==(const ModeTheory &) const = default;

  friend ModeTheory load_mode_theory(const std::string &text);

private:
  void add_mode(const std::string &name, int line);
  void add_modality(const std::string &name, ModeId dom, ModeId cod, int line, bool synthetic);
  void add_cell(const std::string &name, ModalityId dom, ModalityId cod, int line, bool synthetic);
  void set_compose(ModalityId outer, ModalityId inner, ModalityId result, int line);
  void set_vcomp(CellId later, CellId earlier, CellId result, int line);
  void set_hcomp(CellId outer, CellId inner, CellId result, int line);
  void fill_identity_hcomp();

  std::vector<std::string> modes_;
  std::vector<ModalityInfo> modalities_;
  std::vector<CellInfo> cells_;
  std::vector<ModalityId> identity_modality_;  // per mode
  std::vector<CellId> identity_cell_;          // per modality
  std::vector<std::vector<ModalityId>> compose_;  // [outer][inner], -1 = absent
  std::vector<std::vector<CellId>> vcomp_;        // [later][earlier]
  std::vector<std::vector<CellId>> hcomp_;        // [outer][inner]
};

// Parses the tabulated format. Throws Error with a line number on malformed
// input, unknown names, redeclared names, or conflicting duplicate rows.
ModeTheory load_mode_theory(const std::string &text);
ModeTheory load_mode_theory_file(const std::string &path);

}  // namespace mtt

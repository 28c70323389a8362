#include "syntax.hpp"

#include <vector>

#include "mtt/visit.hpp"

namespace mtt {

namespace {

struct Token {
  std::string text;
  size_t pos = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_delim(char c) { return c == '(' || c == ')' || c == '[' || c == ']' || c == '.'; }

[[noreturn]] void fail_at(const std::string &msg, size_t pos) {
  throw ParseError(msg + " at offset " + std::to_string(pos));
}

std::vector<Token> tokenize(const std::string &s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    if (is_space(s[i])) {
      ++i;
      continue;
    }
    size_t start = i;
    if (is_delim(s[i])) {
      out.push_back({std::string(1, s[i]), start});
      ++i;
      continue;
    }
    std::string name;
    while (i < s.size() && !is_space(s[i]) && !is_delim(s[i])) name += s[i++];
    // a '(' glued to a name belongs to it, as in id(mu)
    while (i < s.size() && s[i] == '(') {
      int depth = 0;
      do {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        name += s[i++];
      } while (i < s.size() && depth > 0);
      if (depth > 0) fail_at("unbalanced '(' inside name", start);
      while (i < s.size() && !is_space(s[i]) && !is_delim(s[i])) name += s[i++];
    }
    out.push_back({name, start});
  }
  return out;
}

struct Parser {
  const ModeTheory &mt;
  std::vector<Token> toks;
  size_t at = 0;
  size_t end_pos = 0;

  Parser(const ModeTheory &m, const std::string &text) : mt(m), toks(tokenize(text)), end_pos(text.size()) {}

  bool done() const { return at >= toks.size(); }

  const Token &peek() {
    if (done()) fail_at("unexpected end of input", end_pos);
    return toks[at];
  }

  Token next() {
    const Token &t = peek();
    ++at;
    return t;
  }

  void expect(const std::string &text) {
    Token t = next();
    if (t.text != text) fail_at("expected '" + text + "', got '" + t.text + "'", t.pos);
  }

  ModeId mode() {
    Token t = next();
    if (auto m = mt.find_mode(t.text)) return *m;
    fail_at("unknown mode '" + t.text + "'", t.pos);
  }

  ModalityId modality() {
    Token t = next();
    if (auto mu = mt.find_modality(t.text)) return *mu;
    fail_at("unknown modality '" + t.text + "'", t.pos);
  }

  CellId cell() {
    Token t = next();
    if (auto c = mt.find_cell(t.text)) return *c;
    fail_at("unknown cell '" + t.text + "'", t.pos);
  }

  int number() {
    Token t = next();
    if (t.text.empty() || t.text.find_first_not_of("0123456789") != std::string::npos)
      fail_at("expected a number, got '" + t.text + "'", t.pos);
    return std::stoi(t.text);
  }

  std::vector<ModalityId> lock_list() {
    expect("[");
    std::vector<ModalityId> mods;
    while (peek().text != "]") mods.push_back(modality());
    expect("]");
    return mods;
  }

  std::vector<Entry> entries() {
    std::vector<Entry> out;
    while (!done()) {
      Token t = next();
      if (t.text == ".")
        out.push_back(var_entry(modality()));
      else if (t.text == "lock")
        out.push_back(lock_entry(modality()));
      else
        fail_at("expected '.' or 'lock', got '" + t.text + "'", t.pos);
    }
    return out;
  }

  SCtx rooted_ctx() {
    expect("(");
    expect("ctx");
    SCtx ctx{mode(), {}};
    while (peek().text != ")") {
      Token t = next();
      if (t.text == ".")
        ctx.entries.push_back(var_entry(modality()));
      else if (t.text == "lock")
        ctx.entries.push_back(lock_entry(modality()));
      else
        fail_at("expected '.', 'lock', or ')', got '" + t.text + "'", t.pos);
    }
    expect(")");
    return ctx;
  }

  WExprPtr wexpr() {
    Token t = next();
    if (t.text == "v0") return wvar0();
    if (t.text == "Bool") return wbool();
    if (t.text == "true") return wtrue();
    if (t.text == "false") return wfalse();
    if (t.text != "(") fail_at("expected an expression, got '" + t.text + "'", t.pos);
    Token head = next();
    WExprPtr out;
    if (head.text == "sub") {
      WExprPtr body = wexpr();
      out = wsubapp(body, wsub());
    } else if (head.text == "lam") {
      ModalityId mu = modality();
      out = wlam(mu, wexpr());
    } else if (head.text == "app") {
      ModalityId mu = modality();
      WExprPtr fun = wexpr();
      out = wapp(mu, fun, wexpr());
    } else if (head.text == "if") {
      WExprPtr motive = wexpr(), cond = wexpr(), yes = wexpr();
      out = wif(motive, cond, yes, wexpr());
    } else if (head.text == "arr") {
      ModalityId mu = modality();
      WExprPtr dom = wexpr();
      out = warrow(mu, dom, wexpr());
    } else if (head.text == "modty") {
      ModalityId mu = modality();
      out = wmodty(mu, wexpr());
    } else if (head.text == "mod") {
      ModalityId mu = modality();
      out = wmodtm(mu, wexpr());
    } else if (head.text == "letmod") {
      ModalityId nu = modality(), mu = modality();
      WExprPtr ann = wexpr(), motive = wexpr(), scrut = wexpr();
      out = wletmod(nu, mu, ann, motive, scrut, wexpr());
    } else {
      fail_at("unknown expression form '" + head.text + "'", head.pos);
    }
    expect(")");
    return out;
  }

  WSubPtr wsub() {
    Token t = next();
    if (t.text == "!") return ws_empty();
    if (t.text == "id") return ws_id();
    if (t.text == "pi") return ws_weaken();
    if (t.text != "(") fail_at("expected a substitution, got '" + t.text + "'", t.pos);
    Token head = next();
    WSubPtr out;
    if (head.text == "comp") {
      WSubPtr left = wsub();
      out = ws_comp(left, wsub());
    } else if (head.text == "lock") {
      ModalityId mu = modality();
      out = ws_lock(wsub(), mu);
    } else if (head.text == "ext") {
      WSubPtr inner = wsub();
      out = ws_ext(inner, wexpr());
    } else if (head.text == "key") {
      CellId alpha = cell();
      std::vector<ModalityId> to_mods = lock_list();
      std::vector<ModalityId> from_mods = lock_list();
      SCtx base = rooted_ctx();
      ModeId outer;
      try {
        outer = mode_of(mt, base);
      } catch (const Error &e) {
        fail_at(std::string("ill-formed key base context: ") + e.what(), head.pos);
      }
      out = ws_key(alpha, LockTele{outer, to_mods}, LockTele{outer, from_mods}, base);
    } else {
      fail_at("unknown substitution form '" + head.text + "'", head.pos);
    }
    expect(")");
    return out;
  }

  SExprPtr sexpr() {
    Token t = next();
    if (t.text == "Bool") return se_bool();
    if (t.text == "true") return se_true();
    if (t.text == "false") return se_false();
    if (t.text != "(") fail_at("expected an expression, got '" + t.text + "'", t.pos);
    Token head = next();
    SExprPtr out;
    if (head.text == "var") {
      int sucs = number();
      out = se_var(SVar{sucs, cell()});
    } else if (head.text == "lam") {
      ModalityId mu = modality();
      out = se_lam(mu, sexpr());
    } else if (head.text == "app") {
      ModalityId mu = modality();
      SExprPtr fun = sexpr();
      out = se_app(mu, fun, sexpr());
    } else if (head.text == "if") {
      SExprPtr motive = sexpr(), cond = sexpr(), yes = sexpr();
      out = se_if(motive, cond, yes, sexpr());
    } else if (head.text == "arr") {
      ModalityId mu = modality();
      SExprPtr dom = sexpr();
      out = se_arrow(mu, dom, sexpr());
    } else if (head.text == "modty") {
      ModalityId mu = modality();
      out = se_modty(mu, sexpr());
    } else if (head.text == "mod") {
      ModalityId mu = modality();
      out = se_modtm(mu, sexpr());
    } else if (head.text == "letmod") {
      ModalityId nu = modality(), mu = modality();
      SExprPtr ann = sexpr(), motive = sexpr(), scrut = sexpr();
      out = se_letmod(nu, mu, ann, motive, scrut, sexpr());
    } else {
      fail_at("unknown expression form '" + head.text + "'", head.pos);
    }
    expect(")");
    return out;
  }

  void finish() {
    if (!done()) fail_at("trailing input '" + peek().text + "'", peek().pos);
  }
};

}  // namespace

WExprPtr parse_wexpr(const ModeTheory &mt, const std::string &text) {
  Parser p(mt, text);
  WExprPtr e = p.wexpr();
  p.finish();
  return e;
}

WSubPtr parse_wsub(const ModeTheory &mt, const std::string &text) {
  Parser p(mt, text);
  WSubPtr s = p.wsub();
  p.finish();
  return s;
}

SExprPtr parse_sexpr(const ModeTheory &mt, const std::string &text) {
  Parser p(mt, text);
  SExprPtr e = p.sexpr();
  p.finish();
  return e;
}

SCtx parse_ctx(const ModeTheory &mt, const std::string &text, ModeId root) {
  if (root < 0 || root >= mt.mode_count()) throw ParseError("root mode out of range");
  Parser p(mt, text);
  p.expect("(");
  p.expect(")");
  return SCtx{root, p.entries()};
}

std::string format_wexpr(const ModeTheory &mt, const WExprPtr &e) {
  auto mod = [&](ModalityId mu) { return mt.modality(mu).name; };
  return std::visit(
      overloaded{
          [&](const WVar0 &) { return std::string("v0"); },
          [&](const WBool &) { return std::string("Bool"); },
          [&](const WTrue &) { return std::string("true"); },
          [&](const WFalse &) { return std::string("false"); },
          [&](const WIf &x) {
            return "(if " + format_wexpr(mt, x.motive) + " " + format_wexpr(mt, x.cond) + " " +
                   format_wexpr(mt, x.on_true) + " " + format_wexpr(mt, x.on_false) + ")";
          },
          [&](const WArrow &x) {
            return "(arr " + mod(x.mod) + " " + format_wexpr(mt, x.dom) + " " + format_wexpr(mt, x.cod) + ")";
          },
          [&](const WLam &x) { return "(lam " + mod(x.mod) + " " + format_wexpr(mt, x.body) + ")"; },
          [&](const WApp &x) {
            return "(app " + mod(x.mod) + " " + format_wexpr(mt, x.fun) + " " + format_wexpr(mt, x.arg) + ")";
          },
          [&](const WModTy &x) { return "(modty " + mod(x.mod) + " " + format_wexpr(mt, x.body) + ")"; },
          [&](const WModTm &x) { return "(mod " + mod(x.mod) + " " + format_wexpr(mt, x.body) + ")"; },
          [&](const WLetMod &x) {
            return "(letmod " + mod(x.outer) + " " + mod(x.inner) + " " + format_wexpr(mt, x.ann) + " " +
                   format_wexpr(mt, x.motive) + " " + format_wexpr(mt, x.scrut) + " " +
                   format_wexpr(mt, x.body) + ")";
          },
          [&](const WSubApp &x) {
            return "(sub " + format_wexpr(mt, x.body) + " " + format_wsub(mt, x.sub) + ")";
          },
      },
      e->node);
}

std::string format_wsub(const ModeTheory &mt, const WSubPtr &s) {
  return std::visit(
      overloaded{
          [&](const WEmpty &) { return std::string("!"); },
          [&](const WId &) { return std::string("id"); },
          [&](const WWeaken &) { return std::string("pi"); },
          [&](const WComp &x) {
            return "(comp " + format_wsub(mt, x.left) + " " + format_wsub(mt, x.right) + ")";
          },
          [&](const WLock &x) {
            return "(lock " + mt.modality(x.mod).name + " " + format_wsub(mt, x.sub) + ")";
          },
          [&](const WKey &x) {
            return "(key " + mt.cell(x.cell).name + " " + format_lock_tele(mt, x.to_tele) + " " +
                   format_lock_tele(mt, x.from_tele) + " " + format_ctx(mt, x.base) + ")";
          },
          [&](const WExt &x) {
            return "(ext " + format_wsub(mt, x.sub) + " " + format_wexpr(mt, x.payload) + ")";
          },
      },
      s->node);
}

std::string format_sexpr(const ModeTheory &mt, const SExprPtr &e) {
  auto mod = [&](ModalityId mu) { return mt.modality(mu).name; };
  return std::visit(
      overloaded{
          [&](const SEVar &x) {
            return "(var " + std::to_string(x.var.sucs) + " " + mt.cell(x.var.cell).name + ")";
          },
          [&](const SEBool &) { return std::string("Bool"); },
          [&](const SETrue &) { return std::string("true"); },
          [&](const SEFalse &) { return std::string("false"); },
          [&](const SEIf &x) {
            return "(if " + format_sexpr(mt, x.motive) + " " + format_sexpr(mt, x.cond) + " " +
                   format_sexpr(mt, x.on_true) + " " + format_sexpr(mt, x.on_false) + ")";
          },
          [&](const SEArrow &x) {
            return "(arr " + mod(x.mod) + " " + format_sexpr(mt, x.dom) + " " + format_sexpr(mt, x.cod) + ")";
          },
          [&](const SELam &x) { return "(lam " + mod(x.mod) + " " + format_sexpr(mt, x.body) + ")"; },
          [&](const SEApp &x) {
            return "(app " + mod(x.mod) + " " + format_sexpr(mt, x.fun) + " " + format_sexpr(mt, x.arg) + ")";
          },
          [&](const SEModTy &x) { return "(modty " + mod(x.mod) + " " + format_sexpr(mt, x.body) + ")"; },
          [&](const SEModTm &x) { return "(mod " + mod(x.mod) + " " + format_sexpr(mt, x.body) + ")"; },
          [&](const SELetMod &x) {
            return "(letmod " + mod(x.outer) + " " + mod(x.inner) + " " + format_sexpr(mt, x.ann) + " " +
                   format_sexpr(mt, x.motive) + " " + format_sexpr(mt, x.scrut) + " " +
                   format_sexpr(mt, x.body) + ")";
          },
      },
      e->node);
}

std::string format_ctx_flag(const ModeTheory &mt, const SCtx &ctx) {
  std::string out = "()";
  for (const Entry &e : ctx.entries) {
    out += e.kind == EntryKind::Var ? " . " : " lock ";
    out += mt.modality(e.mod).name;
  }
  return out;
}

}  // namespace mtt

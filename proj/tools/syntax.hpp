#pragma once

#include "mtt/bridge.hpp"

namespace mtt {

// Raised on malformed input text; the message carries a byte offset.
struct ParseError : Error {
  using Error::Error;
};

// S-expression grammar over names from the mode theory.
//
// expressions:    v0 | Bool | true | false | (sub E S) | (lam M E)
//                 | (app M E E) | (if E E E E) | (arr M E E)
//                 | (modty M E) | (mod M E) | (letmod M M E E E E)
// substitutions:  ! | id | pi | (comp S S) | (lock M S)
//                 | (key C [M...] [M...] (ctx <mode> ENTRIES)) | (ext S E)
// substitution-free expressions: the expression grammar with (var N C)
//                 instead of v0 and without (sub ...).
//
// M is a modality name, C a cell name; names like id(mu) keep their
// parenthesized part. Context flags use ENTRIES after a literal `()`, where
// ENTRIES is a sequence of `. M` and `lock M`; the root mode is supplied by
// the caller.
WExprPtr parse_wexpr(const ModeTheory &mt, const std::string &text);
WSubPtr parse_wsub(const ModeTheory &mt, const std::string &text);
SExprPtr parse_sexpr(const ModeTheory &mt, const std::string &text);
SCtx parse_ctx(const ModeTheory &mt, const std::string &text, ModeId root);

std::string format_wexpr(const ModeTheory &mt, const WExprPtr &e);
std::string format_wsub(const ModeTheory &mt, const WSubPtr &s);
std::string format_sexpr(const ModeTheory &mt, const SExprPtr &e);

// The flag form of a context: `()` followed by its entries.
std::string format_ctx_flag(const ModeTheory &mt, const SCtx &ctx);

}  // namespace mtt

// Recursive-descent parser for MiniLang (grammar in docs/grammar.md),
// plus the static checks every accepted program satisfies: unique
// parameter names, definite assignment, and full expression/statement
// typing. Constraint strings reuse the same expression grammar with
// chained comparisons enabled.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sep/ast.hpp"

namespace sep {

struct ParseError : std::runtime_error {
  int line = 0;
  int column = 0;
  std::vector<std::string> expected;

  ParseError(std::string message, int line, int column, std::vector<std::string> expected = {});
};

// Parses exactly one function definition; a second definition, trailing
// input, or any static-check violation raises ParseError.
Program parse(const std::string& source, const std::string& id = "anon",
              int generation_index = 0);

// Parses a single boolean expression over the given parameters. With
// allow_chained, comparison chains like `1 <= n <= 100` are accepted and
// returned as one conjunct per link; otherwise exactly one expression is
// returned. Rejects array element references (only len(param) is allowed
// on arrays) and names outside `params`.
std::vector<ExprPtr> parse_bool_expr(const std::string& source,
                                     const std::vector<Param>& params,
                                     bool allow_chained);

// Parses a signature header of the form `fn name(p: type, ...) -> type`
// (no body). Used by problem specs.
FunctionDef parse_signature(const std::string& source);

// Lexes source into token texts (comments and whitespace dropped).
std::vector<std::string> tokenize(const std::string& source);

}  // namespace sep

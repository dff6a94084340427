#ifndef MDAG_DSL_HPP
#define MDAG_DSL_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "mdag/graph.hpp"

namespace mdag {

/// Parse failure with a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, std::string message, std::string token);

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }
    const std::string& offending_token() const { return token_; }

private:
    int line_;
    int column_;
    std::string message_;
    std::string token_;
};

/// Parse a `.mdag` document:
///
///   document  := 'dag' STRING '{' statement* '}'
///   statement := node | edge | analysis
///   node      := 'node' IDENT '{' 'status' ':' STATUS (',' 'role' ':' ROLE)? '}'
///   edge      := endpoint '->' endpoint ';'?
///   endpoint  := IDENT | 'R' '[' IDENT ']' | 'M' '[' IDENT ']'
///   analysis  := 'target' ':' IDENT '~' IDENT ('+' IDENT)*
///                (';' 'auxiliary' ':' IDENT (',' IDENT)*)?
///
/// '#' starts a comment running to end of line. LF and CRLF both accepted.
/// Names must be declared before use. 'M[V]' is notation sugar for 'R[V]'
/// (indicator polarity is handled semantically, R = 1 - M). Exactly one
/// analysis statement per document; the target's first right-hand-side
/// variable is the exposure and the rest are covariates.
MDag parse(std::string_view text);

/// Canonical document: nodes sorted by name, edges sorted lexicographically,
/// analysis last, LF line endings. parse(serialize(g)) == g.
std::string serialize(const MDag& g);

}  // namespace mdag

#endif

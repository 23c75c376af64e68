#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qecm/linalg.hpp"

namespace qecm::pauli {

struct Term {
  cplx coefficient{1.0, 0.0};
  std::string letters;  // over {I,X,Y,Z}; letters[0] is qubit 1

  friend bool operator==(const Term&, const Term&) = default;
};

struct Expr {
  std::vector<Term> terms;

  std::size_t num_qubits() const { return terms.empty() ? 0 : terms.front().letters.size(); }
  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Grammar (whitespace ignored):
///   expr  := term (('+' | '-') term)*
///   term  := [coeff '*'] letters
///   coeff := real | real 'i' | real ('+'|'-') real 'i' | '(' coeff ')'
/// Throws ParseError (with byte offset) or MixedArity.
Expr parse(std::string_view text);

/// Renders an expression that parses back to an equal Expr.
std::string render(const Expr& e);

/// Single-qubit Pauli matrix for one of 'I','X','Y','Z'.
Matrix single(char letter);

/// Letters string with `letter` on qubit `qubit` (1-based) and I elsewhere.
std::string on_site(char letter, std::size_t qubit, std::size_t num_qubits);

/// Sum over terms of coefficient times the Kronecker product of the letters,
/// leftmost letter the most significant tensor factor. N <= 10.
Matrix materialize(const Expr& e);
Matrix materialize(std::string_view letters);

}  // namespace qecm::pauli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracode/codes.hpp"
#include "fracode/fractalizer.hpp"
#include "fracode/pauli.hpp"
#include "fracode/poly.hpp"

namespace fracode {

/// Canonical text form "p=<p>; vars=<n>; <coeff>*x1^<e1>...xn^<en> + ...".
/// Every variable is printed with an explicit (possibly negative) exponent;
/// terms appear in canonical (lexicographic) order; the zero polynomial
/// prints as "0".  Round-trips exactly through poly_from_string.
std::string poly_to_string(const LaurentPoly& a);
LaurentPoly poly_from_string(const std::string& text);

/// Lenient parser for CLI flags: sums of optionally signed terms like
/// "1+y+y^2", "x1^-1", "2*x1x2^3".  Variable tokens x1..xn / y1..yn are
/// accepted, as are the aliases x,y,z,w for the first four variables.
LaurentPoly parse_poly(const std::string& text, Prime p, std::size_t nvars);

/// "<species> <p> <D> <N> anchor=<r0,...>" header followed by N polynomial
/// lines in the canonical form above.
std::string operator_to_string(const CssOperator& op);
CssOperator operator_from_string(const std::string& text);

std::string spec_to_string(const CodeSpec& spec);
CodeSpec spec_from_string(const std::string& text);
CodeSpec spec_from_file(const std::string& path);
void spec_to_file(const CodeSpec& spec, const std::string& path);

/// "p m D order" header line, then D*order polynomial lines (axis-major).
std::string ruleset_to_string(const LcaRuleSet& rules);
LcaRuleSet ruleset_from_string(const std::string& text);
LcaRuleSet ruleset_from_file(const std::string& path);

/// Circuit export: one "CX i j" line per gate ("CXP i j lambda" for p > 2).
struct CxGate;  // fwd from threestep.hpp

/// 0/1 rows, one line per lattice row.
FpMat kmatrix_from_string(const std::string& text, Prime p);
FpMat kmatrix_from_file(const std::string& path, Prime p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fracode

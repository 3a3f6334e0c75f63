#pragma once

#include <cstdint>
#include <vector>

#include "fracode/poly.hpp"

namespace fracode {

enum class Species { X, Z };

inline Species opposite(Species s) { return s == Species::X ? Species::Z : Species::X; }

/// A pure-X or pure-Z clock operator on a D-dimensional lattice with N qudits
/// per site, in anchored polynomial form.
///
/// The operator acts as sigma[x^anchor * coeffs].  Anchoring convention:
///   X species: every stored exponent is >= 0 and each axis has a term with
///              exponent 0 (the anchor is the componentwise support minimum).
///   Z species: mirrored; stored exponents <= 0, anchor = support maximum.
/// The identity operator is representable as all-zero coeffs with anchor 0.
struct CssOperator {
    Species species = Species::X;
    std::uint32_t p = 2;
    std::size_t dims = 0;     // D
    std::size_t nqudits = 0;  // N per site
    std::vector<LaurentPoly> coeffs;
    Exponents anchor;

    bool is_identity() const;
    bool operator==(const CssOperator& o) const = default;
};

/// Canonicalize raw coefficient polynomials into an anchored operator.
CssOperator make_operator(Species species, Prime p, std::size_t dims, std::size_t nqudits,
                          std::vector<LaurentPoly> raw_coeffs);

CssOperator translate(const CssOperator& op, const Exponents& shift);

/// Commutation polynomial c(x) = x^{r0-r1} sum_n a_n(x) * bar(b_n)(x) between
/// an X and a Z operator.  The coefficient of x^t is the commutator phase
/// exponent between a and b translated by t.  Same-species pairs always
/// commute and give 0.
LaurentPoly commutation_poly(const CssOperator& a, const CssOperator& b);

/// True iff the pair commutes at the given relative placement, i.e. the
/// reduced commutation polynomial has zero constant term.
bool commutes(const CssOperator& a, const CssOperator& b, const Boundary& bc);

/// Number of (site, qudit) pairs acted on, after boundary reduction.
std::size_t weight(const CssOperator& op, const Boundary& bc);

}  // namespace fracode

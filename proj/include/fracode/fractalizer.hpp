#pragma once

#include <cstdint>
#include <vector>

#include "fracode/codes.hpp"
#include "fracode/pauli.hpp"

namespace fracode {

/// D rules, each a list of `order` polynomials in the m new variables:
/// rules[i][j-1] = f_i^(j)(y).  First-order rules substitute x_i -> f_i(y) x_i;
/// order-n rules substitute x_i -> sum_j f_i^(j)(y) x_i^j.
struct LcaRuleSet {
    std::uint32_t p = 2;
    std::size_t dims = 0;      // D, rules indexed by original axis
    std::size_t new_dims = 0;  // m
    std::size_t order = 1;     // n
    std::vector<std::vector<LaurentPoly>> rules;

    /// Validates shape, non-negative exponents, and that each f_i^(1) has a
    /// nonzero constant term.  Identity rules (all f_i = 1) are allowed; they
    /// produce layered copies.
    static LcaRuleSet make(Prime p, std::size_t dims, std::size_t new_dims, std::size_t order,
                           std::vector<std::vector<LaurentPoly>> rules);
    static LcaRuleSet first_order(Prime p, std::vector<LaurentPoly> fs);

    const LaurentPoly& f(std::size_t axis) const { return rules[axis][0]; }
};

/// Embed an m-variable polynomial into `total` variables at column `offset`.
LaurentPoly embed(const LaurentPoly& q, std::size_t total, std::size_t offset);

/// First-order fractalization of a local anchored operator: D -> D+m, result
/// anchored at (r0, s0).  X species substitutes x_i -> f_i(y) x_i; Z species
/// substitutes xbar_i -> f_i(ybar) xbar_i.
CssOperator fractalize_op(const CssOperator& op, const LcaRuleSet& rules, const Exponents& s0);

/// Higher-order generalization; agrees with fractalize_op at order 1.  Only
/// safe for operators from translation-invariant families whose translations
/// all commute (c(x) = 0), which CodeSpec construction enforces.
CssOperator fractalize_op_ho(const CssOperator& op, const LcaRuleSet& rules, const Exponents& s0);

/// Basis of Q_i = { q(y) : q f_i^{L_i} = q } on the periodic y-torus, as the
/// kernel of multiplication by f_i^{L_i} - 1 (reduced-row-echelon canonical).
struct CommensurabilityBasis {
    std::size_t axis = 0;
    std::vector<LaurentPoly> basis;
    std::size_t dimension = 0;
};
CommensurabilityBasis commensurability_basis(const LcaRuleSet& rules, std::size_t axis,
                                             std::int32_t axis_length, const Boundary& bc_y);

/// Fractalize an operator that is non-local along some axes.  The boundary
/// covers all D+m axes (x axes first); y axes must be periodic.  An axis is
/// treated as non-local when it is periodic and the operator's support covers
/// every residue along it.  Returns one operator per basis element of the
/// intersection of the commensurability spaces (all y-shifts when no axis is
/// non-local); empty when the intersection is trivial.
std::vector<CssOperator> fractalize_nonlocal(const CssOperator& op, const LcaRuleSet& rules,
                                             const Boundary& bc_full);

/// Fractalize every generator of a spec (at y-shift 0); the result is
/// translation invariant along the new axes by construction.
CodeSpec fractalize_code(const CodeSpec& spec, const LcaRuleSet& rules);

}  // namespace fracode

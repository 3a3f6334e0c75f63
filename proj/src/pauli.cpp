#include "fracode/pauli.hpp"

#include <algorithm>
#include <limits>

namespace fracode {

bool CssOperator::is_identity() const {
    for (const auto& c : coeffs)
        if (!c.is_zero()) return false;
    return true;
}

CssOperator make_operator(Species species, Prime p, std::size_t dims, std::size_t nqudits,
                          std::vector<LaurentPoly> raw_coeffs) {
    if (raw_coeffs.size() != nqudits)
        throw std::invalid_argument("make_operator: need one polynomial per qudit");
    for (const auto& c : raw_coeffs)
        if (c.prime() != p.value || c.nvars() != dims)
            throw std::invalid_argument("make_operator: coefficient prime or arity mismatch");

    CssOperator op;
    op.species = species;
    op.p = p.value;
    op.dims = dims;
    op.nqudits = nqudits;
    op.anchor.assign(dims, 0);

    bool any = false;
    Exponents extreme(dims, 0);
    for (const auto& c : raw_coeffs) {
        for (const auto& [e, k] : c.terms()) {
            for (std::size_t i = 0; i < dims; ++i) {
                if (!any) {
                    extreme = e;
                    break;
                }
                if (species == Species::X)
                    extreme[i] = std::min(extreme[i], e[i]);
                else
                    extreme[i] = std::max(extreme[i], e[i]);
            }
            any = true;
        }
    }
    if (!any) {
        op.coeffs = std::move(raw_coeffs);  // identity marker: all-zero coeffs, anchor 0
        return op;
    }
    op.anchor = extreme;
    Exponents shifted(dims);
    for (auto& c : raw_coeffs) {
        LaurentPoly out(p, dims);
        for (const auto& [e, k] : c.terms()) {
            for (std::size_t i = 0; i < dims; ++i) shifted[i] = e[i] - extreme[i];
            out.add_term(shifted, k);
        }
        c = std::move(out);
    }
    op.coeffs = std::move(raw_coeffs);
    return op;
}

CssOperator translate(const CssOperator& op, const Exponents& shift) {
    if (shift.size() != op.dims) throw std::invalid_argument("translate: shift arity mismatch");
    CssOperator r = op;
    for (std::size_t i = 0; i < op.dims; ++i) r.anchor[i] += shift[i];
    return r;
}

LaurentPoly commutation_poly(const CssOperator& a, const CssOperator& b) {
    if (a.p != b.p || a.dims != b.dims || a.nqudits != b.nqudits)
        throw std::invalid_argument("commutation_poly: operator shape mismatch");
    Prime p(a.p);
    if (a.species == b.species) return LaurentPoly::zero(p, a.dims);
    const CssOperator& x = a.species == Species::X ? a : b;
    const CssOperator& z = a.species == Species::X ? b : a;
    LaurentPoly c(p, a.dims);
    for (std::size_t n = 0; n < a.nqudits; ++n)
        c = poly_add(c, poly_mul(x.coeffs[n], poly_bar(z.coeffs[n])));
    Exponents shift(a.dims);
    for (std::size_t i = 0; i < a.dims; ++i) shift[i] = x.anchor[i] - z.anchor[i];
    return poly_mul(c, LaurentPoly::monomial(p, shift));
}

bool commutes(const CssOperator& a, const CssOperator& b, const Boundary& bc) {
    if (a.species == b.species) return true;
    LaurentPoly c = poly_reduce(commutation_poly(a, b), bc);
    return c.constant_term() == 0;
}

std::size_t weight(const CssOperator& op, const Boundary& bc) {
    if (bc.size() != op.dims) throw std::invalid_argument("weight: boundary arity mismatch");
    std::size_t w = 0;
    // Anchor is a pure translation: it cannot merge or split sites, so the
    // count is taken on the anchored coefficients directly.
    for (const auto& c : op.coeffs) w += poly_reduce(c, bc).term_count();
    return w;
}

}  // namespace fracode

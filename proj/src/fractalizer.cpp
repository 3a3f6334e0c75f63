#include "fracode/fractalizer.hpp"

#include <algorithm>

namespace fracode {

LcaRuleSet LcaRuleSet::make(Prime p, std::size_t dims, std::size_t new_dims, std::size_t order,
                            std::vector<std::vector<LaurentPoly>> rules) {
    if (order < 1) throw std::invalid_argument("LcaRuleSet: order must be >= 1");
    if (rules.size() != dims) throw std::invalid_argument("LcaRuleSet: need one rule list per axis");
    for (const auto& rule : rules) {
        if (rule.size() != order) throw std::invalid_argument("LcaRuleSet: rule list length != order");
        for (const auto& f : rule) {
            if (f.prime() != p.value || f.nvars() != new_dims)
                throw std::invalid_argument("LcaRuleSet: rule polynomial prime or arity mismatch");
            for (const auto& [e, c] : f.terms())
                for (auto x : e)
                    if (x < 0) throw std::invalid_argument("LcaRuleSet: rule exponents must be non-negative");
        }
        if (rule[0].constant_term() == 0)
            throw std::invalid_argument("LcaRuleSet: f^(1) must have a nonzero constant term");
    }
    LcaRuleSet rs;
    rs.p = p.value;
    rs.dims = dims;
    rs.new_dims = new_dims;
    rs.order = order;
    rs.rules = std::move(rules);
    return rs;
}

LcaRuleSet LcaRuleSet::first_order(Prime p, std::vector<LaurentPoly> fs) {
    if (fs.empty()) throw std::invalid_argument("LcaRuleSet: no rules given");
    std::size_t m = fs[0].nvars();
    std::vector<std::vector<LaurentPoly>> rules;
    for (auto& f : fs) rules.push_back({std::move(f)});
    return make(p, rules.size(), m, 1, std::move(rules));
}

LaurentPoly embed(const LaurentPoly& q, std::size_t total, std::size_t offset) {
    if (offset + q.nvars() > total) throw std::invalid_argument("embed: offset out of range");
    LaurentPoly r(Prime(q.prime()), total);
    Exponents e(total, 0);
    for (const auto& [eq, c] : q.terms()) {
        std::fill(e.begin(), e.end(), 0);
        for (std::size_t i = 0; i < q.nvars(); ++i) e[offset + i] = eq[i];
        r.add_term(e, c);
    }
    return r;
}

namespace {

// Substitution images in D+m variables.  X species: x_i -> sum_j f_i^(j)(y)
// x_i^j.  Z species: the same with y -> ybar and x_i -> xbar_i, applied to the
// xbar expansion of the stored coefficients.
std::vector<LaurentPoly> build_images(const LcaRuleSet& rules, Species species, std::size_t D) {
    Prime p(rules.p);
    std::size_t total = D + rules.new_dims;
    std::vector<LaurentPoly> images;
    for (std::size_t i = 0; i < D; ++i) {
        LaurentPoly img(p, total);
        for (std::size_t j = 1; j <= rules.order; ++j) {
            LaurentPoly fj = embed(rules.rules[i][j - 1], total, D);
            if (species == Species::Z) fj = poly_bar(fj);
            std::int32_t e = species == Species::X ? static_cast<std::int32_t>(j)
                                                   : -static_cast<std::int32_t>(j);
            img = poly_add(img, poly_mul(fj, LaurentPoly::variable(p, total, i, e)));
        }
        images.push_back(std::move(img));
    }
    return images;
}

// Evaluate an anchored coefficient polynomial on the substitution images.
// X-species exponents are non-negative, Z-species non-positive; either way the
// image of x_i^{e} is images[i] raised to |e|.
LaurentPoly compose(const LaurentPoly& coeff, const std::vector<LaurentPoly>& images,
                    Species species, std::size_t D, std::size_t total, Prime p) {
    LaurentPoly out(p, total);
    for (const auto& [e, c] : coeff.terms()) {
        LaurentPoly term = LaurentPoly::constant(p, total, c);
        for (std::size_t i = 0; i < D; ++i) {
            if (e[i] == 0) continue;
            if ((species == Species::X && e[i] < 0) || (species == Species::Z && e[i] > 0))
                throw std::domain_error("fractalize: operator coefficients are not anchored");
            term = poly_mul(term, poly_pow(images[i], static_cast<std::uint64_t>(std::abs(e[i]))));
        }
        out = poly_add(out, term);
    }
    return out;
}

CssOperator fractalize_impl(const CssOperator& op, const LcaRuleSet& rules, const Exponents& s0) {
    if (op.p != rules.p) throw std::invalid_argument("fractalize: prime mismatch");
    if (op.dims != rules.dims) throw std::invalid_argument("fractalize: rule count != operator dimension");
    if (s0.size() != rules.new_dims) throw std::invalid_argument("fractalize: s0 arity mismatch");
    Prime p(op.p);
    std::size_t total = op.dims + rules.new_dims;
    auto images = build_images(rules, op.species, op.dims);

    Exponents full_anchor = op.anchor;
    full_anchor.insert(full_anchor.end(), s0.begin(), s0.end());
    LaurentPoly anchor_mono = LaurentPoly::monomial(p, full_anchor);
    std::vector<LaurentPoly> raw;
    for (const auto& c : op.coeffs)
        raw.push_back(poly_mul(anchor_mono, compose(c, images, op.species, op.dims, total, p)));
    return make_operator(op.species, p, total, op.nqudits, std::move(raw));
}

}  // namespace

CssOperator fractalize_op(const CssOperator& op, const LcaRuleSet& rules, const Exponents& s0) {
    if (rules.order != 1)
        throw std::invalid_argument("fractalize_op: higher-order rules require fractalize_op_ho");
    return fractalize_impl(op, rules, s0);
}

CssOperator fractalize_op_ho(const CssOperator& op, const LcaRuleSet& rules, const Exponents& s0) {
    return fractalize_impl(op, rules, s0);
}

namespace {

// Multiplication-by-g operator on the group algebra of the y-torus.
FpMat multiplication_matrix(const LaurentPoly& g, const Boundary& bc_y) {
    Prime p(g.prime());
    std::size_t dim = 1;
    for (const auto& ax : bc_y) {
        if (!ax.periodic) throw std::domain_error("commensurability: y axes must be periodic");
        dim *= static_cast<std::size_t>(ax.length);
    }
    auto index_of = [&](const Exponents& e) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < e.size(); ++i) idx = idx * bc_y[i].length + e[i];
        return idx;
    };
    FpMat M(g.prime(), dim, dim);
    Exponents mono(g.nvars(), 0);
    for (std::size_t col = 0; col < dim; ++col) {
        LaurentPoly shifted = poly_reduce(poly_mul(g, LaurentPoly::monomial(p, mono)), bc_y);
        for (const auto& [e, c] : shifted.terms()) M.at(index_of(e), col) = c;
        for (std::size_t i = mono.size(); i-- > 0;) {
            if (++mono[i] < bc_y[i].length) break;
            mono[i] = 0;
        }
    }
    return M;
}

LaurentPoly vector_to_poly(const std::vector<std::uint32_t>& v, const Boundary& bc_y, Prime p) {
    LaurentPoly q(p, bc_y.size());
    Exponents e(bc_y.size(), 0);
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
        if (v[idx]) {
            std::size_t rem = idx;
            for (std::size_t i = e.size(); i-- > 0;) {
                e[i] = static_cast<std::int32_t>(rem % bc_y[i].length);
                rem /= bc_y[i].length;
            }
            q.add_term(e, v[idx]);
        }
    }
    return q;
}

}  // namespace

CommensurabilityBasis commensurability_basis(const LcaRuleSet& rules, std::size_t axis,
                                             std::int32_t axis_length, const Boundary& bc_y) {
    if (rules.order != 1)
        throw std::invalid_argument("commensurability_basis: defined for first-order rules only");
    if (axis >= rules.dims) throw std::invalid_argument("commensurability_basis: axis out of range");
    if (axis_length <= 0) throw std::invalid_argument("commensurability_basis: axis length must be positive");
    Prime p(rules.p);
    LaurentPoly g = poly_reduce(poly_pow(rules.f(axis), static_cast<std::uint64_t>(axis_length)), bc_y);
    g = poly_sub(g, LaurentPoly::constant(p, rules.new_dims, 1));
    FpMat M = multiplication_matrix(g, bc_y);
    CommensurabilityBasis out;
    out.axis = axis;
    for (const auto& v : M.kernel_basis()) out.basis.push_back(vector_to_poly(v, bc_y, p));
    out.dimension = out.basis.size();
    return out;
}

std::vector<CssOperator> fractalize_nonlocal(const CssOperator& op, const LcaRuleSet& rules,
                                             const Boundary& bc_full) {
    if (op.dims != rules.dims) throw std::invalid_argument("fractalize_nonlocal: dimension mismatch");
    if (bc_full.size() != op.dims + rules.new_dims)
        throw std::invalid_argument("fractalize_nonlocal: boundary must cover all D+m axes");
    if (rules.order != 1)
        throw std::invalid_argument("fractalize_nonlocal: defined for first-order rules only");
    Prime p(op.p);
    Boundary bc_y(bc_full.begin() + op.dims, bc_full.end());
    for (const auto& ax : bc_y)
        if (!ax.periodic) throw std::domain_error("fractalize_nonlocal: y axes must be periodic");

    // Detect non-local axes: periodic and the (anchored) support covers every
    // residue class along them.
    std::vector<std::size_t> nonlocal;
    for (std::size_t i = 0; i < op.dims; ++i) {
        const Axis& ax = bc_full[i];
        if (!ax.periodic) continue;
        std::vector<bool> hit(ax.length, false);
        for (const auto& c : op.coeffs)
            for (const auto& [e, k] : c.terms()) {
                std::int64_t v = (op.anchor[i] + e[i]) % ax.length;
                hit[static_cast<std::size_t>(v < 0 ? v + ax.length : v)] = true;
            }
        if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) nonlocal.push_back(i);
    }

    // Basis of the intersection of the commensurability spaces: stacked
    // multiplication matrices, RREF-canonical kernel.  With no non-local axis
    // the constraint is empty and the basis is every monomial shift.
    std::size_t ydim = 1;
    for (const auto& ax : bc_y) ydim *= static_cast<std::size_t>(ax.length);
    std::vector<LaurentPoly> qbasis;
    if (nonlocal.empty()) {
        Exponents e(rules.new_dims, 0);
        for (std::size_t idx = 0; idx < ydim; ++idx) {
            std::size_t rem = idx;
            for (std::size_t i = e.size(); i-- > 0;) {
                e[i] = static_cast<std::int32_t>(rem % bc_y[i].length);
                rem /= bc_y[i].length;
            }
            qbasis.push_back(LaurentPoly::monomial(p, e));
        }
    } else {
        FpMat stacked(rules.p, 0, ydim);
        for (auto i : nonlocal) {
            LaurentPoly g = poly_reduce(
                poly_pow(rules.f(i), static_cast<std::uint64_t>(bc_full[i].length)), bc_y);
            g = poly_sub(g, LaurentPoly::constant(p, rules.new_dims, 1));
            FpMat Mi = multiplication_matrix(g, bc_y);
            for (std::size_t r = 0; r < Mi.rows(); ++r) stacked.append_row(Mi.row(r));
        }
        for (const auto& v : stacked.kernel_basis()) qbasis.push_back(vector_to_poly(v, bc_y, p));
    }

    // Re-anchor: local axes keep the anchor; non-local axes fold it in and
    // normalize representatives into [0, L) for X and (-L, 0] for Z.
    std::vector<bool> is_nonlocal(op.dims, false);
    for (auto i : nonlocal) is_nonlocal[i] = true;
    Exponents kept_anchor = op.anchor;
    for (auto i : nonlocal) kept_anchor[i] = 0;
    std::vector<LaurentPoly> normalized;
    for (const auto& c : op.coeffs) {
        LaurentPoly out(p, op.dims);
        Exponents e(op.dims);
        for (const auto& [ce, k] : c.terms()) {
            for (std::size_t i = 0; i < op.dims; ++i) {
                if (!is_nonlocal[i]) {
                    e[i] = ce[i];
                    continue;
                }
                std::int64_t L = bc_full[i].length;
                std::int64_t v = (op.anchor[i] + ce[i]) % L;
                if (v < 0) v += L;
                if (op.species == Species::Z && v > 0) v -= L;
                e[i] = static_cast<std::int32_t>(v);
            }
            out.add_term(e, k);
        }
        normalized.push_back(std::move(out));
    }

    std::size_t total = op.dims + rules.new_dims;
    auto images = build_images(rules, op.species, op.dims);
    LaurentPoly anchor_mono =
        LaurentPoly::monomial(p, [&] {
            Exponents a = kept_anchor;
            a.insert(a.end(), rules.new_dims, 0);
            return a;
        }());
    std::vector<CssOperator> results;
    for (const auto& q : qbasis) {
        LaurentPoly qext = embed(op.species == Species::X ? q : poly_bar(q), total, op.dims);
        std::vector<LaurentPoly> raw;
        for (const auto& c : normalized) {
            LaurentPoly v = compose(c, images, op.species, op.dims, total, p);
            v = poly_mul(v, qext);
            v = poly_mul(v, anchor_mono);
            raw.push_back(poly_reduce(v, bc_full));
        }
        results.push_back(make_operator(op.species, p, total, op.nqudits, std::move(raw)));
    }
    return results;
}

CodeSpec fractalize_code(const CodeSpec& spec, const LcaRuleSet& rules) {
    if (spec.p != rules.p) throw std::invalid_argument("fractalize_code: prime mismatch");
    Exponents s0(rules.new_dims, 0);
    std::vector<CssOperator> xg, zg;
    for (const auto& g : spec.xgens) xg.push_back(fractalize_op_ho(g, rules, s0));
    for (const auto& g : spec.zgens) zg.push_back(fractalize_op_ho(g, rules, s0));
    return CodeSpec::make(Prime(spec.p), spec.dims + rules.new_dims, spec.nqudits, std::move(xg),
                          std::move(zg));
}

}  // namespace fracode

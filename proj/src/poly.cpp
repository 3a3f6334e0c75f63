#include "fracode/poly.hpp"

#include <algorithm>
#include <numeric>

#include "fracode/linalg.hpp"

namespace fracode {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Prime::Prime(std::uint32_t p) : value(p) {
    if (!is_prime(p)) throw std::invalid_argument("Prime: " + std::to_string(p) + " is not prime");
}

std::uint32_t fp_inv(std::uint32_t a, std::uint32_t p) {
    a %= p;
    if (a == 0) throw std::domain_error("fp_inv: zero has no inverse");
    std::int64_t t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::swap(t -= q * new_t, new_t);
        std::swap(r -= q * new_r, new_r);
    }
    return static_cast<std::uint32_t>(t < 0 ? t + p : t);
}

Boundary torus(const std::vector<std::int32_t>& sizes) {
    Boundary bc;
    for (auto L : sizes) bc.push_back(Axis::torus(L));
    return bc;
}

Boundary open_box(const std::vector<std::int32_t>& sizes) {
    Boundary bc;
    for (auto L : sizes) bc.push_back(Axis::open(L));
    return bc;
}

LaurentPoly LaurentPoly::constant(Prime p, std::size_t nvars, std::int64_t c) {
    LaurentPoly r(p, nvars);
    r.add_term(Exponents(nvars, 0), c);
    return r;
}

LaurentPoly LaurentPoly::monomial(Prime p, Exponents exps, std::int64_t c) {
    LaurentPoly r(p, exps.size());
    r.add_term(std::move(exps), c);
    return r;
}

LaurentPoly LaurentPoly::variable(Prime p, std::size_t nvars, std::size_t var, std::int32_t e) {
    if (var >= nvars) throw std::invalid_argument("LaurentPoly::variable: index out of range");
    Exponents exps(nvars, 0);
    exps[var] = e;
    return monomial(p, std::move(exps));
}

bool LaurentPoly::is_one() const {
    return terms_.size() == 1 && terms_.begin()->second == 1 &&
           terms_.begin()->first == Exponents(nvars_, 0);
}

std::uint32_t LaurentPoly::coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
}

void LaurentPoly::set(const Exponents& e, std::int64_t c) {
    if (e.size() != nvars_) throw std::invalid_argument("LaurentPoly::set: exponent arity mismatch");
    std::int64_t r = c % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    if (r == 0)
        terms_.erase(e);
    else
        terms_[e] = static_cast<std::uint32_t>(r);
}

void LaurentPoly::add_term(const Exponents& e, std::int64_t c) {
    if (e.size() != nvars_) throw std::invalid_argument("LaurentPoly::add_term: exponent arity mismatch");
    auto it = terms_.find(e);
    std::int64_t cur = it == terms_.end() ? 0 : it->second;
    set(e, cur + c);
}

std::pair<Exponents, Exponents> LaurentPoly::exponent_range() const {
    Exponents lo(nvars_, 0), hi(nvars_, 0);
    bool first = true;
    for (const auto& [e, c] : terms_) {
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (first) {
                lo[i] = hi[i] = e[i];
            } else {
                lo[i] = std::min(lo[i], e[i]);
                hi[i] = std::max(hi[i], e[i]);
            }
        }
        if (!terms_.empty()) first = false;
    }
    return {lo, hi};
}

namespace {

void check_compatible(const LaurentPoly& a, const LaurentPoly& b, const char* what) {
    if (a.prime() != b.prime() || a.nvars() != b.nvars())
        throw std::invalid_argument(std::string(what) + ": mismatched prime or variable count");
}

}  // namespace

LaurentPoly poly_add(const LaurentPoly& a, const LaurentPoly& b) {
    check_compatible(a, b, "poly_add");
    LaurentPoly r = a;
    for (const auto& [e, c] : b.terms()) r.add_term(e, c);
    return r;
}

LaurentPoly poly_sub(const LaurentPoly& a, const LaurentPoly& b) {
    check_compatible(a, b, "poly_sub");
    LaurentPoly r = a;
    for (const auto& [e, c] : b.terms()) r.add_term(e, -static_cast<std::int64_t>(c));
    return r;
}

LaurentPoly poly_neg(const LaurentPoly& a) {
    LaurentPoly r(Prime(a.prime()), a.nvars());
    for (const auto& [e, c] : a.terms()) r.add_term(e, -static_cast<std::int64_t>(c));
    return r;
}

LaurentPoly poly_scale(const LaurentPoly& a, std::int64_t c) {
    LaurentPoly r(Prime(a.prime()), a.nvars());
    for (const auto& [e, k] : a.terms()) r.add_term(e, c * static_cast<std::int64_t>(k));
    return r;
}

LaurentPoly poly_mul(const LaurentPoly& a, const LaurentPoly& b) {
    check_compatible(a, b, "poly_mul");
    LaurentPoly r(Prime(a.prime()), a.nvars());
    Exponents e(a.nvars());
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, static_cast<std::int64_t>(ca) * cb);
        }
    }
    return r;
}

LaurentPoly poly_pow(const LaurentPoly& a, std::uint64_t t) {
    LaurentPoly result = LaurentPoly::constant(Prime(a.prime()), a.nvars(), 1);
    LaurentPoly base = a;
    while (t > 0) {
        if (t & 1) result = poly_mul(result, base);
        t >>= 1;
        if (t > 0) base = poly_mul(base, base);
    }
    return result;
}

LaurentPoly poly_bar(const LaurentPoly& a) {
    LaurentPoly r(Prime(a.prime()), a.nvars());
    Exponents e(a.nvars());
    for (const auto& [ea, c] : a.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = -ea[i];
        r.add_term(e, c);
    }
    return r;
}

LaurentPoly poly_substitute(const LaurentPoly& a, const std::vector<LaurentPoly>& images) {
    if (images.size() != a.nvars())
        throw std::invalid_argument("poly_substitute: need one image per variable");
    std::size_t out_vars = a.nvars() == 0 ? 0 : images[0].nvars();
    for (const auto& img : images) {
        if (img.prime() != a.prime() || img.nvars() != out_vars)
            throw std::invalid_argument("poly_substitute: images must share prime and arity");
    }
    Prime p(a.prime());
    // Inverses of monomial images, materialized on demand.
    std::vector<std::optional<LaurentPoly>> inverses(images.size());
    auto image_power = [&](std::size_t i, std::int32_t e) -> LaurentPoly {
        if (e >= 0) return poly_pow(images[i], static_cast<std::uint64_t>(e));
        if (!inverses[i]) {
            if (images[i].term_count() != 1)
                throw std::domain_error(
                    "poly_substitute: negative exponent of a variable whose image is not an "
                    "invertible monomial");
            const auto& [me, mc] = *images[i].terms().begin();
            Exponents inv_e(me.size());
            for (std::size_t j = 0; j < me.size(); ++j) inv_e[j] = -me[j];
            inverses[i] = LaurentPoly::monomial(p, std::move(inv_e), fp_inv(mc, p.value));
        }
        return poly_pow(*inverses[i], static_cast<std::uint64_t>(-static_cast<std::int64_t>(e)));
    };
    LaurentPoly r(p, out_vars);
    for (const auto& [e, c] : a.terms()) {
        LaurentPoly t = LaurentPoly::constant(p, out_vars, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) t = poly_mul(t, image_power(i, e[i]));
        r = poly_add(r, t);
    }
    return r;
}

LaurentPoly poly_reduce(const LaurentPoly& a, const Boundary& bc) {
    if (bc.size() != a.nvars()) throw std::invalid_argument("poly_reduce: boundary arity mismatch");
    LaurentPoly r(Prime(a.prime()), a.nvars());
    Exponents e(a.nvars());
    for (const auto& [ea, c] : a.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (bc[i].periodic) {
                if (bc[i].length <= 0) throw std::invalid_argument("poly_reduce: periodic axis needs length > 0");
                std::int32_t m = ea[i] % bc[i].length;
                e[i] = m < 0 ? m + bc[i].length : m;
            } else {
                e[i] = ea[i];
            }
        }
        r.add_term(e, c);
    }
    return r;
}

std::optional<LaurentPoly> poly_inverse(const LaurentPoly& a, const Boundary& bc) {
    if (bc.size() != a.nvars()) throw std::invalid_argument("poly_inverse: boundary arity mismatch");
    for (const auto& ax : bc)
        if (!ax.periodic) throw std::domain_error("poly_inverse: all axes must be periodic");
    std::size_t dim = 1;
    for (const auto& ax : bc) {
        if (ax.length <= 0) throw std::invalid_argument("poly_inverse: axis length must be positive");
        dim *= static_cast<std::size_t>(ax.length);
    }
    Prime p(a.prime());
    LaurentPoly ar = poly_reduce(a, bc);

    // Mixed-radix index of a reduced exponent vector.
    auto index_of = [&](const Exponents& e) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < e.size(); ++i) idx = idx * bc[i].length + e[i];
        return idx;
    };

    // Columns of the multiplication-by-a operator on the group algebra.
    FpMat M(p.value, dim, dim);
    Exponents g(a.nvars(), 0);
    for (std::size_t col = 0; col < dim; ++col) {
        LaurentPoly shifted = poly_reduce(poly_mul(ar, LaurentPoly::monomial(p, g)), bc);
        for (const auto& [e, c] : shifted.terms()) M.at(index_of(e), col) = c;
        // increment mixed-radix counter g
        for (std::size_t i = g.size(); i-- > 0;) {
            if (++g[i] < bc[i].length) break;
            g[i] = 0;
        }
    }
    std::vector<std::uint32_t> rhs(dim, 0);
    rhs[0] = 1;
    auto sol = M.solve(rhs);
    if (!sol) return std::nullopt;
    LaurentPoly inv(p, a.nvars());
    Exponents e(a.nvars(), 0);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        if ((*sol)[idx] != 0) {
            std::size_t rem = idx;
            for (std::size_t i = e.size(); i-- > 0;) {
                e[i] = static_cast<std::int32_t>(rem % bc[i].length);
                rem /= bc[i].length;
            }
            inv.add_term(e, (*sol)[idx]);
        }
    }
    return inv;
}

}  // namespace fracode

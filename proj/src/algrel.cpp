#include "fracode/algrel.hpp"

#include <algorithm>

namespace fracode {

namespace {

std::uint64_t total_degree(const LaurentPoly& f) {
    std::uint64_t d = 0;
    for (const auto& [e, c] : f.terms()) {
        std::uint64_t t = 0;
        for (auto x : e) t += static_cast<std::uint64_t>(std::abs(x));
        d = std::max(d, t);
    }
    return d;
}

LaurentPoly side_product(const std::vector<LaurentPoly>& fs, const std::vector<std::size_t>& idx,
                         const std::vector<std::uint64_t>& n) {
    Prime p(fs[0].prime());
    LaurentPoly prod = LaurentPoly::constant(p, fs[0].nvars(), 1);
    for (auto i : idx) prod = poly_mul(prod, poly_pow(fs[i], n[i]));
    return prod;
}

}  // namespace

bool RelationWitness::verify(const std::vector<LaurentPoly>& fs) const {
    if (exponents.size() != fs.size()) return false;
    bool all_zero = true;
    for (auto e : exponents) all_zero &= e == 0;
    if (all_zero || constant == 0) return false;
    std::vector<std::size_t> rhs;
    std::vector<bool> on_lhs(fs.size(), false);
    for (auto i : lhs) on_lhs[i] = true;
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (!on_lhs[i]) rhs.push_back(i);
    LaurentPoly left = side_product(fs, lhs, exponents);
    LaurentPoly right = poly_scale(side_product(fs, rhs, exponents), constant);
    return left == right;
}

namespace {

// Exhaustive search over one split pattern: exponents 0..bound per index (not
// all zero), constants in F_p^*; candidates skipped unless total degrees
// match on both sides.
std::optional<RelationWitness> search_split(const std::vector<LaurentPoly>& fs,
                                            const std::vector<std::size_t>& lhs,
                                            std::uint64_t bound) {
    std::size_t K = fs.size();
    std::uint32_t p = fs[0].prime();
    std::vector<std::size_t> rhs;
    std::vector<bool> on_lhs(K, false);
    for (auto i : lhs) on_lhs[i] = true;
    for (std::size_t i = 0; i < K; ++i)
        if (!on_lhs[i]) rhs.push_back(i);
    std::vector<std::uint64_t> deg(K);
    for (std::size_t i = 0; i < K; ++i) deg[i] = total_degree(fs[i]);

    std::vector<std::uint64_t> n(K, 0);
    for (;;) {
        bool all_zero = std::all_of(n.begin(), n.end(), [](std::uint64_t v) { return v == 0; });
        if (!all_zero) {
            std::uint64_t dl = 0, dr = 0;
            for (auto i : lhs) dl += n[i] * deg[i];
            for (auto i : rhs) dr += n[i] * deg[i];
            if (dl == dr) {
                LaurentPoly left = side_product(fs, lhs, n);
                LaurentPoly right = side_product(fs, rhs, n);
                for (std::uint32_t c = 1; c < p; ++c) {
                    if (left == poly_scale(right, c)) {
                        RelationWitness w;
                        w.exponents = n;
                        w.constant = c;
                        w.lhs = lhs;
                        return w;
                    }
                }
            }
        }
        std::size_t i = K;
        bool done = true;
        while (i-- > 0) {
            if (++n[i] <= bound) {
                done = false;
                break;
            }
            n[i] = 0;
        }
        if (done) return std::nullopt;
    }
}

std::optional<RelationWitness> search_all_splits(const std::vector<LaurentPoly>& fs,
                                                 std::uint64_t bound) {
    if (fs.size() < 2) throw std::invalid_argument("related_multi: need at least two polynomials");
    if (bound < 1) throw std::invalid_argument("algrel: bound must be >= 1");
    for (const auto& f : fs)
        if (f.prime() != fs[0].prime() || f.nvars() != fs[0].nvars())
            throw std::invalid_argument("algrel: polynomials must share prime and arity");
    std::size_t K = fs.size();
    // Bipartitions with a nonempty left side, up to complement symmetry:
    // index 0 always lives on the left.
    std::size_t masks = static_cast<std::size_t>(1) << (K - 1);
    for (std::size_t m = 0; m < masks; ++m) {
        std::vector<std::size_t> lhs{0};
        for (std::size_t i = 1; i < K; ++i)
            if (m & (static_cast<std::size_t>(1) << (i - 1))) lhs.push_back(i);
        auto w = search_split(fs, lhs, bound);
        if (w) return w;
    }
    return std::nullopt;
}

}  // namespace

std::optional<RelationWitness> related_pair(const LaurentPoly& f1, const LaurentPoly& f2,
                                            std::uint64_t bound) {
    return search_all_splits({f1, f2}, bound);
}

std::optional<RelationWitness> related_triple(const LaurentPoly& f1, const LaurentPoly& f2,
                                              const LaurentPoly& f3, std::uint64_t bound) {
    return search_all_splits({f1, f2, f3}, bound);
}

std::optional<RelationWitness> related_quad(const LaurentPoly& f1, const LaurentPoly& f2,
                                            const LaurentPoly& f3, const LaurentPoly& f4,
                                            std::uint64_t bound) {
    return search_all_splits({f1, f2, f3, f4}, bound);
}

std::optional<RelationWitness> related_multi(const std::vector<LaurentPoly>& fs,
                                             std::uint64_t bound) {
    return search_all_splits(fs, bound);
}

}  // namespace fracode

#include "fracode/lca.hpp"

#include <cmath>

namespace fracode {

namespace {

void check_state(const LaurentPoly& s, const char* what) {
    for (const auto& [e, c] : s.terms())
        for (auto x : e)
            if (x < 0) throw std::invalid_argument(std::string(what) + ": state exponents must be non-negative");
}

}  // namespace

CaState lca_step(const LaurentPoly& rule, const CaState& state, const Boundary& bc) {
    check_state(state, "lca_step");
    return poly_reduce(poly_mul(rule, state), bc);
}

std::vector<CaState> lca_run(const LaurentPoly& rule, const CaState& c0, std::size_t steps,
                             const Boundary& bc) {
    std::vector<CaState> traj;
    traj.reserve(steps + 1);
    traj.push_back(poly_reduce(c0, bc));
    for (std::size_t t = 0; t < steps; ++t) traj.push_back(lca_step(rule, traj.back(), bc));
    return traj;
}

std::optional<LaurentPoly> lca_reversible(const LaurentPoly& rule,
                                          const std::vector<std::int32_t>& sizes) {
    if (sizes.size() != rule.nvars()) throw std::invalid_argument("lca_reversible: size arity mismatch");
    std::uint32_t p = rule.prime();
    // f(1,...,1) = 0 makes f a zero divisor in every quotient: irreversible.
    std::uint64_t at_one = 0;
    for (const auto& [e, c] : rule.terms()) at_one = (at_one + c) % p;
    if (at_one == 0) return std::nullopt;

    Boundary bc = torus(sizes);
    bool all_p_power = true;
    std::uint64_t pn = 1;
    for (auto L : sizes) {
        std::int64_t v = L;
        if (v <= 0) throw std::invalid_argument("lca_reversible: sizes must be positive");
        while (v % p == 0) v /= p;
        if (v != 1) all_p_power = false;
    }
    if (all_p_power) {
        // smallest p^n divisible by every L_i
        std::uint64_t need = 1;
        for (auto L : sizes)
            while (need % static_cast<std::uint64_t>(L) != 0) need *= p;
        pn = need;
        // f^{p^n} = f(x^{p^n}) = f(1) on the torus, so f^{-1} = f(1)^{-1} f^{p^n-1}.
        LaurentPoly inv = poly_reduce(poly_pow(rule, pn - 1), bc);
        inv = poly_scale(inv, fp_inv(static_cast<std::uint32_t>(at_one), p));
        return inv;
    }
    return poly_inverse(rule, bc);
}

std::string render_pbm(const std::vector<CaState>& trajectory) {
    if (trajectory.empty()) throw std::invalid_argument("render_pbm: empty trajectory");
    if (trajectory[0].nvars() != 1)
        throw std::invalid_argument("render_pbm: only 1-dimensional states render to PBM");
    std::int32_t width = 1;
    for (const auto& s : trajectory) {
        check_state(s, "render_pbm");
        auto [lo, hi] = s.exponent_range();
        if (!s.is_zero()) width = std::max(width, hi[0] + 1);
    }
    std::string out = "P1\n" + std::to_string(width) + " " + std::to_string(trajectory.size()) + "\n";
    for (const auto& s : trajectory) {
        for (std::int32_t x = 0; x < width; ++x) {
            out += s.coeff({x}) != 0 ? '1' : '0';
            out += x + 1 < width ? ' ' : '\n';
        }
    }
    return out;
}

double hausdorff_estimate(const LaurentPoly& rule, std::size_t steps) {
    if (steps < 16) throw std::invalid_argument("hausdorff_estimate: need steps >= 16");
    if (rule.is_zero()) throw std::domain_error("hausdorff_estimate: trajectory degenerates to zero");
    std::uint32_t p = rule.prime();
    CaState c = LaurentPoly::constant(Prime(p), rule.nvars(), 1);
    std::uint64_t cumulative = 0;
    std::uint64_t next_sample = 1;
    std::vector<std::pair<double, double>> pts;  // (log t, log N(t))
    for (std::size_t t = 0;; ++t) {
        if (t == next_sample) {
            if (cumulative == 0) throw std::domain_error("hausdorff_estimate: trajectory degenerates to zero");
            pts.emplace_back(std::log(static_cast<double>(t)), std::log(static_cast<double>(cumulative)));
            next_sample *= p;
        }
        if (t >= steps) break;
        cumulative += c.term_count();
        c = poly_mul(rule, c);
    }
    if (pts.size() < 2) throw std::invalid_argument("hausdorff_estimate: too few sample points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fracode

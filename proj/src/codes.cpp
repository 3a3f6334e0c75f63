#include "fracode/codes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "fracode/threading.hpp"

namespace fracode {

namespace {
std::atomic<std::size_t> g_thread_cap{1};
}

void set_thread_cap(std::size_t n) { g_thread_cap.store(n == 0 ? 1 : n); }
std::size_t thread_cap() { return g_thread_cap.load(); }

CodeSpec CodeSpec::make(Prime p, std::size_t dims, std::size_t nqudits,
                        std::vector<CssOperator> xgens, std::vector<CssOperator> zgens) {
    CodeSpec spec;
    spec.p = p.value;
    spec.dims = dims;
    spec.nqudits = nqudits;
    auto check = [&](const CssOperator& g, Species want) {
        if (g.species != want) throw std::invalid_argument("CodeSpec: generator in the wrong species list");
        if (g.p != p.value || g.dims != dims || g.nqudits != nqudits)
            throw std::invalid_argument("CodeSpec: generator shape mismatch");
    };
    for (const auto& g : xgens) check(g, Species::X);
    for (const auto& g : zgens) check(g, Species::Z);
    for (const auto& xg : xgens)
        for (const auto& zg : zgens)
            if (!commutation_poly(xg, zg).is_zero())
                throw std::invalid_argument(
                    "CodeSpec: generator pair fails to commute at all translations");
    spec.xgens = std::move(xgens);
    spec.zgens = std::move(zgens);
    return spec;
}

namespace {

// 1 - x_i, and x_i - 1, in `dims` variables; the signed nearest-neighbour
// difference terms shared by the whole zoo.
LaurentPoly one_minus(Prime p, std::size_t dims, std::size_t var, std::int32_t e) {
    LaurentPoly r = LaurentPoly::constant(p, dims, 1);
    r.add_term(LaurentPoly::variable(p, dims, var, e).terms().begin()->first, -1);
    return r;
}

LaurentPoly minus_one_plus(Prime p, std::size_t dims, std::size_t var, std::int32_t e) {
    return poly_neg(one_minus(p, dims, var, e));
}

CssOperator xop(Prime p, std::size_t dims, std::vector<LaurentPoly> coeffs) {
    std::size_t n = coeffs.size();
    return make_operator(Species::X, p, dims, n, std::move(coeffs));
}
CssOperator zop(Prime p, std::size_t dims, std::vector<LaurentPoly> coeffs) {
    std::size_t n = coeffs.size();
    return make_operator(Species::Z, p, dims, n, std::move(coeffs));
}

CodeSpec build_toric2d(Prime p) {
    std::size_t D = 2;
    std::vector<CssOperator> xg{xop(p, D, {one_minus(p, D, 1, 1), minus_one_plus(p, D, 0, 1)})};
    std::vector<CssOperator> zg{zop(p, D, {one_minus(p, D, 0, -1), one_minus(p, D, 1, -1)})};
    return CodeSpec::make(p, D, 2, std::move(xg), std::move(zg));
}

CodeSpec build_toric3d(Prime p) {
    std::size_t D = 3;
    auto zero = LaurentPoly::zero(p, D);
    // Plaquette (i,j), i<j: qudit i gets (1-x_j), qudit j gets -(1-x_i).
    auto plaq = [&](std::size_t i, std::size_t j) {
        std::vector<LaurentPoly> c(3, zero);
        c[i] = one_minus(p, D, j, 1);
        c[j] = minus_one_plus(p, D, i, 1);
        return xop(p, D, std::move(c));
    };
    // Column order follows the display: (2,3), (1,3), (1,2).
    std::vector<CssOperator> xg{plaq(1, 2), plaq(0, 2), plaq(0, 1)};
    std::vector<CssOperator> zg{zop(p, D,
                                    {one_minus(p, D, 0, -1), one_minus(p, D, 1, -1),
                                     one_minus(p, D, 2, -1)})};
    return CodeSpec::make(p, D, 3, std::move(xg), std::move(zg));
}

CodeSpec build_toric4d(Prime p) {
    std::size_t D = 4;
    auto zero = LaurentPoly::zero(p, D);
    // Qudits live on plaquettes, listed in the row order of the display:
    // (1,2), (1,4), (1,3), (2,3), (2,4), (3,4)  [0-based below].
    const std::vector<std::pair<std::size_t, std::size_t>> plaquettes = {
        {0, 1}, {0, 3}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
    // X generators: one per edge direction k; on plaquette (i,j) the entry is
    // (1-x_j) when k=i and -(1-x_i) when k=j.
    std::vector<CssOperator> xg;
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<LaurentPoly> c(6, zero);
        for (std::size_t q = 0; q < 6; ++q) {
            auto [i, j] = plaquettes[q];
            if (k == i) c[q] = one_minus(p, D, j, 1);
            if (k == j) c[q] = minus_one_plus(p, D, i, 1);
        }
        xg.push_back(xop(p, D, std::move(c)));
    }
    // Z generators: one per cube (complement of direction l); on plaquette
    // P subset of the cube the entry is +-(1-xbar_c) where c is the omitted
    // cube direction, the sign alternating with c's position in the cube.
    std::vector<CssOperator> zg;
    for (std::size_t l = 0; l < 4; ++l) {
        std::vector<std::size_t> cube;
        for (std::size_t d = 0; d < 4; ++d)
            if (d != l) cube.push_back(d);
        std::vector<LaurentPoly> c(6, zero);
        for (std::size_t q = 0; q < 6; ++q) {
            auto [i, j] = plaquettes[q];
            if (i == l || j == l) continue;
            std::size_t omitted = 0, pos = 0;
            for (std::size_t t = 0; t < 3; ++t)
                if (cube[t] != i && cube[t] != j) {
                    omitted = cube[t];
                    pos = t;
                }
            LaurentPoly term = one_minus(p, D, omitted, -1);
            c[q] = (pos == 1) ? poly_neg(term) : term;
        }
        zg.push_back(zop(p, D, std::move(c)));
    }
    return CodeSpec::make(p, D, 6, std::move(xg), std::move(zg));
}

// Direct edge-qudit generalization of the 3D toric code to four dimensions
// (single vertex-type Z generator, six plaquette X generators).  Described in
// prose only; reconstructed rather than transcribed.
CodeSpec build_toric4d_alt(Prime p) {
    std::size_t D = 4;
    auto zero = LaurentPoly::zero(p, D);
    std::vector<CssOperator> xg;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            std::vector<LaurentPoly> c(4, zero);
            c[i] = one_minus(p, D, j, 1);
            c[j] = minus_one_plus(p, D, i, 1);
            xg.push_back(xop(p, D, std::move(c)));
        }
    }
    std::vector<LaurentPoly> b;
    for (std::size_t i = 0; i < 4; ++i) b.push_back(one_minus(p, D, i, -1));
    std::vector<CssOperator> zg{zop(p, D, std::move(b))};
    return CodeSpec::make(p, D, 4, std::move(xg), std::move(zg));
}

}  // namespace

std::vector<std::string> model_catalog() {
    return {"ising1d", "ising2d", "cluster1d", "toric2d", "toric3d", "toric4d", "toric4d_alt"};
}

CodeSpec build_model(const std::string& name, Prime p) {
    if (name == "ising1d") {
        return CodeSpec::make(p, 1, 1, {}, {zop(p, 1, {one_minus(p, 1, 0, -1)})});
    }
    if (name == "ising2d") {
        return CodeSpec::make(p, 2, 1, {},
                              {zop(p, 2, {one_minus(p, 2, 0, -1)}), zop(p, 2, {one_minus(p, 2, 1, -1)})});
    }
    if (name == "cluster1d") {
        LaurentPoly one = LaurentPoly::constant(p, 1, 1);
        std::vector<CssOperator> xg{
            xop(p, 1, {poly_add(one, LaurentPoly::variable(p, 1, 0, 1)), poly_neg(one)})};
        std::vector<CssOperator> zg{
            zop(p, 1, {one, poly_add(one, LaurentPoly::variable(p, 1, 0, -1))})};
        return CodeSpec::make(p, 1, 2, std::move(xg), std::move(zg));
    }
    if (name == "toric2d") return build_toric2d(p);
    if (name == "toric3d") return build_toric3d(p);
    if (name == "toric4d") return build_toric4d(p);
    if (name == "toric4d_alt") return build_toric4d_alt(p);
    throw std::invalid_argument("build_model: unknown model '" + name + "'");
}

std::size_t Lattice::sites() const {
    std::size_t s = 1;
    for (const auto& ax : bc) {
        if (ax.length <= 0) throw std::invalid_argument("Lattice: axis length must be positive");
        s *= static_cast<std::size_t>(ax.length);
    }
    return s;
}

std::size_t Lattice::site_index(const Exponents& r) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < bc.size(); ++i) idx = idx * bc[i].length + r[i];
    return idx;
}

Exponents Lattice::site_coords(std::size_t index) const {
    Exponents r(bc.size(), 0);
    for (std::size_t i = bc.size(); i-- > 0;) {
        r[i] = static_cast<std::int32_t>(index % bc[i].length);
        index /= bc[i].length;
    }
    return r;
}

std::optional<std::vector<std::uint32_t>> place_operator(const CssOperator& op,
                                                         const Exponents& shift,
                                                         const Lattice& lat,
                                                         Truncation trunc) {
    if (op.dims != lat.bc.size() || shift.size() != op.dims)
        throw std::invalid_argument("place_operator: dimension mismatch");
    std::vector<std::uint32_t> row(lat.columns(), 0);
    Exponents pos(op.dims);
    for (std::size_t nq = 0; nq < op.nqudits; ++nq) {
        for (const auto& [e, c] : op.coeffs[nq].terms()) {
            bool in_range = true;
            for (std::size_t i = 0; i < op.dims; ++i) {
                std::int64_t v = static_cast<std::int64_t>(shift[i]) + op.anchor[i] + e[i];
                const Axis& ax = lat.bc[i];
                if (ax.periodic) {
                    v %= ax.length;
                    if (v < 0) v += ax.length;
                } else if (v < 0 || v >= ax.length) {
                    if (trunc == Truncation::Drop) return std::nullopt;
                    in_range = false;
                    break;
                }
                pos[i] = static_cast<std::int32_t>(v);
            }
            if (!in_range) continue;
            std::size_t col = lat.column(pos, nq);
            row[col] = (row[col] + c) % op.p;
        }
    }
    return row;
}

std::vector<Exponents> generator_placements(const CssOperator& op, const Lattice& lat) {
    if (op.dims != lat.bc.size()) throw std::invalid_argument("generator_placements: dimension mismatch");
    // Absolute support extent per axis (anchor folded in).
    Exponents lo(op.dims, 0), hi(op.dims, 0);
    bool any = false;
    for (const auto& c : op.coeffs) {
        for (const auto& [e, k] : c.terms()) {
            for (std::size_t i = 0; i < op.dims; ++i) {
                std::int32_t v = op.anchor[i] + e[i];
                if (!any) {
                    lo[i] = hi[i] = v;
                } else {
                    lo[i] = std::min(lo[i], v);
                    hi[i] = std::max(hi[i], v);
                }
            }
            any = true;
        }
    }
    std::vector<std::pair<std::int32_t, std::int32_t>> ranges(op.dims);
    for (std::size_t i = 0; i < op.dims; ++i) {
        const Axis& ax = lat.bc[i];
        if (ax.periodic) {
            ranges[i] = {0, ax.length - 1};
        } else {
            ranges[i] = {-lo[i], ax.length - 1 - hi[i]};
            if (ranges[i].second < ranges[i].first) return {};
        }
    }
    std::vector<Exponents> out;
    Exponents r(op.dims);
    for (std::size_t i = 0; i < op.dims; ++i) r[i] = ranges[i].first;
    for (;;) {
        out.push_back(r);
        std::size_t i = op.dims;
        while (i-- > 0) {
            if (++r[i] <= ranges[i].second) break;
            r[i] = ranges[i].first;
            if (i == 0) return out;
        }
        if (op.dims == 0) return out;
    }
}

InstantiatedCode instantiate(const CodeSpec& spec, const Boundary& bc) {
    if (bc.size() != spec.dims) throw std::invalid_argument("instantiate: boundary arity mismatch");
    InstantiatedCode inst;
    inst.p = spec.p;
    inst.lattice = Lattice{bc, spec.nqudits};
    inst.n = inst.lattice.columns();
    inst.Hx = FpMat(spec.p, 0, inst.n);
    inst.Hz = FpMat(spec.p, 0, inst.n);
    for (const auto& g : spec.xgens)
        for (const auto& r : generator_placements(g, inst.lattice))
            inst.Hx.append_row(*place_operator(g, r, inst.lattice, Truncation::Drop));
    for (const auto& g : spec.zgens)
        for (const auto& r : generator_placements(g, inst.lattice))
            inst.Hz.append_row(*place_operator(g, r, inst.lattice, Truncation::Drop));
    return inst;
}

bool css_orthogonal(const InstantiatedCode& inst) {
    std::uint32_t p = inst.p;
    // Sparse row representations keep this quadratic in placements, not qudits.
    auto sparsify = [](const FpMat& m) {
        std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> rows(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (m.at(i, j)) rows[i].emplace_back(j, m.at(i, j));
        return rows;
    };
    auto rx = sparsify(inst.Hx), rz = sparsify(inst.Hz);
    for (const auto& a : rx) {
        for (const auto& b : rz) {
            std::uint64_t dot = 0;
            auto ia = a.begin();
            auto ib = b.begin();
            while (ia != a.end() && ib != b.end()) {
                if (ia->first < ib->first)
                    ++ia;
                else if (ib->first < ia->first)
                    ++ib;
                else {
                    dot += static_cast<std::uint64_t>(ia->second) * ib->second;
                    ++ia;
                    ++ib;
                }
            }
            if (dot % p != 0) return false;
        }
    }
    return true;
}

std::size_t logical_count(const InstantiatedCode& inst) {
    std::size_t rx = inst.Hx.rank(), rz = inst.Hz.rank();
    return inst.n - rx - rz;
}

namespace {

// Vectors of `source` independent modulo span(mod), sifted in order.
FpMat quotient_basis(const std::vector<std::vector<std::uint32_t>>& source, const FpMat& mod) {
    MutableSpan acc(mod.prime(), mod.cols());
    for (std::size_t i = 0; i < mod.rows(); ++i) acc.add(mod.row(i));
    FpMat out(mod.prime(), 0, mod.cols());
    for (const auto& v : source)
        if (acc.add(v)) out.append_row(v);
    return out;
}

}  // namespace

LogicalBasis logical_basis(const InstantiatedCode& inst) {
    std::uint32_t p = inst.p;
    FpMat xl = quotient_basis(inst.Hz.kernel_basis(), inst.Hx);
    FpMat zl = quotient_basis(inst.Hx.kernel_basis(), inst.Hz);
    std::size_t k = xl.rows();
    if (zl.rows() != k) throw std::logic_error("logical_basis: side mismatch");
    if (k == 0) return {FpMat(p, 0, inst.n), FpMat(p, 0, inst.n)};
    // Pairing matrix P = X Z^T is invertible; replace Z by P^{-T} Z so that
    // X_i . Z_j = delta_ij.
    FpMat P = xl.mul(zl.transpose());
    auto Pinv = P.inverse();
    if (!Pinv) throw std::logic_error("logical_basis: degenerate logical pairing");
    FpMat z2 = Pinv->transpose().mul(zl);
    return {std::move(xl), std::move(z2)};
}

namespace {

long double enumeration_budget(std::size_t n, std::size_t wmax, std::size_t patterns) {
    long double total = 0, comb = 1;
    for (std::size_t w = 1; w <= wmax && w <= n; ++w) {
        comb = comb * static_cast<long double>(n - w + 1) / w;
        long double pat = std::pow(static_cast<long double>(patterns), static_cast<long double>(w));
        total += comb * pat;
    }
    return total;
}

// Depth-first enumeration of weight-w supports with incremental syndromes.
// Patterns are abstract: apply(site, pattern_id, +1/-1) updates the syndrome,
// fill(v, site, pattern_id) writes the candidate for the membership check.
struct WeightSearch {
    std::uint32_t p;
    std::size_t n, npatterns;
    const FpMat& commute;
    const RowSpan& modulo;
    std::function<void(std::vector<std::uint32_t>&, std::size_t, std::size_t, bool)> apply;
    std::function<void(std::vector<std::uint32_t>&, std::size_t, std::size_t)> fill;
    std::size_t candidate_len;

    bool edge_found(std::size_t w, std::size_t first_lo, std::size_t first_hi,
                    std::atomic<bool>& found) const {
        std::vector<std::uint32_t> syn(commute.rows(), 0);
        std::vector<std::size_t> sites(w), pats(w);
        bool ok = false;
        auto rec = [&](auto&& self, std::size_t depth, std::size_t next_site) -> void {
            if (found.load(std::memory_order_relaxed)) return;
            if (depth == w) {
                for (auto s : syn)
                    if (s != 0) return;
                std::vector<std::uint32_t> v(candidate_len, 0);
                for (std::size_t t = 0; t < w; ++t) fill(v, sites[t], pats[t]);
                if (!modulo.contains(v)) {
                    ok = true;
                    found.store(true, std::memory_order_relaxed);
                }
                return;
            }
            std::size_t lo = depth == 0 ? first_lo : next_site;
            std::size_t hi = depth == 0 ? first_hi : n;
            for (std::size_t q = lo; q < hi; ++q) {
                if (n - q < w - depth) break;
                sites[depth] = q;
                for (std::size_t pat = 0; pat < npatterns; ++pat) {
                    pats[depth] = pat;
                    apply(syn, q, pat, true);
                    self(self, depth + 1, q + 1);
                    apply(syn, q, pat, false);
                    if (ok || found.load(std::memory_order_relaxed)) return;
                }
            }
        };
        rec(rec, 0, 0);
        return ok;
    }

    std::optional<std::size_t> run(std::size_t wmax) const {
        for (std::size_t w = 1; w <= wmax && w <= n; ++w) {
            std::atomic<bool> found{false};
            std::size_t nthreads = std::min<std::size_t>(thread_cap(), n);
            if (nthreads <= 1 || w == 0) {
                if (edge_found(w, 0, n, found)) return w;
            } else {
                std::vector<std::thread> pool;
                std::vector<char> results(nthreads, 0);
                std::size_t chunk = (n + nthreads - 1) / nthreads;
                for (std::size_t t = 0; t < nthreads; ++t) {
                    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
                    if (lo >= hi) break;
                    pool.emplace_back([&, t, lo, hi] { results[t] = edge_found(w, lo, hi, found); });
                }
                for (auto& th : pool) th.join();
                for (auto r : results)
                    if (r) return w;
            }
        }
        return std::nullopt;
    }
};

}  // namespace

std::optional<std::size_t> min_weight_vector(std::uint32_t p, std::size_t n, std::size_t wmax,
                                             const FpMat& commute_rows, const RowSpan& modulo) {
    if (enumeration_budget(n, wmax, p - 1) > 1e8)
        throw budget_error("min_weight_vector: enumeration budget exceeded");
    // Columns of the constraint matrix, for incremental syndrome updates.
    FpMat cols = commute_rows.transpose();
    WeightSearch ws{
        p,
        n,
        p - 1,
        commute_rows,
        modulo,
        [&](std::vector<std::uint32_t>& syn, std::size_t q, std::size_t pat, bool add) {
            std::uint64_t coef = pat + 1;
            if (!add) coef = p - coef % p;
            for (std::size_t r = 0; r < syn.size(); ++r)
                syn[r] = static_cast<std::uint32_t>((syn[r] + coef * cols.at(q, r)) % p);
        },
        [&](std::vector<std::uint32_t>& v, std::size_t q, std::size_t pat) {
            v[q] = static_cast<std::uint32_t>(pat + 1);
        },
        n};
    return ws.run(wmax);
}

std::optional<std::size_t> min_weight_symplectic(std::uint32_t p, std::size_t n, std::size_t wmax,
                                                 const FpMat& commute_rows, const RowSpan& modulo) {
    std::size_t npat = static_cast<std::size_t>(p) * p - 1;
    if (enumeration_budget(n, wmax, npat) > 1e8)
        throw budget_error("min_weight_symplectic: enumeration budget exceeded");
    FpMat cols = commute_rows.transpose();
    auto pattern = [p](std::size_t pat) {
        std::uint32_t a = static_cast<std::uint32_t>((pat + 1) / p);
        std::uint32_t b = static_cast<std::uint32_t>((pat + 1) % p);
        return std::pair<std::uint32_t, std::uint32_t>(a, b);
    };
    WeightSearch ws{
        p,
        n,
        npat,
        commute_rows,
        modulo,
        [&, pattern](std::vector<std::uint32_t>& syn, std::size_t q, std::size_t pat, bool add) {
            auto [a, b] = pattern(pat);
            std::uint64_t ca = add ? a : (p - a % p) % p;
            std::uint64_t cb = add ? b : (p - b % p) % p;
            for (std::size_t r = 0; r < syn.size(); ++r)
                syn[r] = static_cast<std::uint32_t>(
                    (syn[r] + ca * cols.at(q, r) + cb * cols.at(n + q, r)) % p);
        },
        [&, pattern](std::vector<std::uint32_t>& v, std::size_t q, std::size_t pat) {
            auto [a, b] = pattern(pat);
            v[q] = a;
            v[n + q] = b;
        },
        2 * n};
    return ws.run(wmax);
}

DistanceResult distance_bruteforce(const InstantiatedCode& inst, std::size_t wmax) {
    DistanceResult res;
    res.wmax = wmax;
    RowSpan xspan(inst.Hx), zspan(inst.Hz);
    res.dx = min_weight_vector(inst.p, inst.n, wmax, inst.Hz, xspan);
    res.dz = min_weight_vector(inst.p, inst.n, wmax, inst.Hx, zspan);
    if (res.dx && res.dz)
        res.d = std::min(*res.dx, *res.dz);
    else if (res.dx)
        res.d = res.dx;
    else if (res.dz)
        res.d = res.dz;
    return res;
}

ExcitationVector excitation_map(const CssOperator& op, const CodeSpec& spec) {
    if (op.p != spec.p || op.dims != spec.dims || op.nqudits != spec.nqudits)
        throw std::invalid_argument("excitation_map: operator incompatible with spec");
    const auto& gens = op.species == Species::X ? spec.zgens : spec.xgens;
    Prime p(spec.p);
    ExcitationVector out;
    for (const auto& g : gens) {
        LaurentPoly e(p, spec.dims);
        for (std::size_t nq = 0; nq < spec.nqudits; ++nq)
            e = poly_add(e, poly_mul(poly_bar(g.coeffs[nq]), op.coeffs[nq]));
        Exponents shift(spec.dims);
        for (std::size_t i = 0; i < spec.dims; ++i) shift[i] = op.anchor[i] - g.anchor[i];
        out.components.push_back(poly_mul(e, LaurentPoly::monomial(p, shift)));
    }
    return out;
}

std::vector<LocalRelation> local_relations(const CodeSpec& spec, Species species,
                                           std::size_t degree_bound) {
    const auto& gens = species == Species::Z ? spec.zgens : spec.xgens;
    if (gens.empty()) return {};
    Prime p(spec.p);
    std::int32_t sign = species == Species::Z ? -1 : 1;

    // Monomial slots x^e with sign-matching exponents, total degree <= bound.
    std::vector<Exponents> monos;
    Exponents e(spec.dims, 0);
    auto gen_monos = [&](auto&& self, std::size_t axis, std::size_t budget) -> void {
        if (axis == spec.dims) {
            monos.push_back(e);
            return;
        }
        for (std::size_t d = 0; d <= budget; ++d) {
            e[axis] = sign * static_cast<std::int32_t>(d);
            self(self, axis + 1, budget - d);
        }
        e[axis] = 0;
    };
    gen_monos(gen_monos, 0, degree_bound);
    std::sort(monos.begin(), monos.end());

    // Unknowns c_{k,m}: coefficient of monomial m in l_k.  Equations: for each
    // site qudit, every monomial coefficient of sum_k g_k l_k vanishes.
    std::size_t ncols = gens.size() * monos.size();
    std::map<std::pair<std::size_t, Exponents>, std::size_t> eqn_index;
    std::vector<std::vector<std::uint32_t>> eqns;
    Exponents prod(spec.dims);
    for (std::size_t k = 0; k < gens.size(); ++k) {
        for (std::size_t m = 0; m < monos.size(); ++m) {
            for (std::size_t nq = 0; nq < spec.nqudits; ++nq) {
                for (const auto& [ge, gc] : gens[k].coeffs[nq].terms()) {
                    for (std::size_t i = 0; i < spec.dims; ++i)
                        prod[i] = gens[k].anchor[i] + ge[i] + monos[m][i];
                    auto key = std::make_pair(nq, prod);
                    auto it = eqn_index.find(key);
                    if (it == eqn_index.end()) {
                        it = eqn_index.emplace(key, eqns.size()).first;
                        eqns.emplace_back(ncols, 0);
                    }
                    auto& row = eqns[it->second];
                    std::size_t col = k * monos.size() + m;
                    row[col] = (row[col] + gc) % spec.p;
                }
            }
        }
    }
    FpMat M = FpMat::from_rows(spec.p, eqns, ncols);
    std::vector<LocalRelation> out;
    for (const auto& v : M.kernel_basis()) {
        LocalRelation rel;
        for (std::size_t k = 0; k < gens.size(); ++k) {
            LaurentPoly lk(p, spec.dims);
            for (std::size_t m = 0; m < monos.size(); ++m)
                if (v[k * monos.size() + m]) lk.add_term(monos[m], v[k * monos.size() + m]);
            rel.l.push_back(std::move(lk));
        }
        out.push_back(std::move(rel));
    }
    return out;
}

CodeSpec excitation_code(const CodeSpec& spec, Species excited) {
    const auto& same = excited == Species::Z ? spec.zgens : spec.xgens;
    Prime p(spec.p);
    // Smallest bound with any relation; default cap = max generator degree + 1.
    std::size_t cap = 1;
    for (const auto& g : same) {
        for (const auto& c : g.coeffs) {
            auto [lo, hi] = c.exponent_range();
            std::size_t deg = 0;
            for (std::size_t i = 0; i < spec.dims; ++i)
                deg += static_cast<std::size_t>(std::max(std::abs(lo[i]), std::abs(hi[i])));
            cap = std::max(cap, deg + 1);
        }
    }
    std::vector<LocalRelation> rels;
    for (std::size_t b = 1; b <= cap && rels.empty(); ++b) rels = local_relations(spec, excited, b);

    std::size_t nq_exc = same.size();
    std::vector<CssOperator> relation_gens;
    for (const auto& rel : rels) {
        std::vector<LaurentPoly> coeffs = rel.l;
        relation_gens.push_back(make_operator(excited, p, spec.dims, nq_exc, std::move(coeffs)));
    }
    // One opposite-species generator per original qudit: its component on the
    // new qudit k is bar of generator k's coefficient there (anchor folded).
    std::vector<CssOperator> cluster_gens;
    for (std::size_t nq = 0; nq < spec.nqudits; ++nq) {
        std::vector<LaurentPoly> coeffs;
        for (const auto& g : same) {
            LaurentPoly full = poly_mul(g.coeffs[nq], LaurentPoly::monomial(p, g.anchor));
            coeffs.push_back(poly_bar(full));
        }
        cluster_gens.push_back(make_operator(opposite(excited), p, spec.dims, nq_exc, std::move(coeffs)));
    }
    if (excited == Species::Z)
        return CodeSpec::make(p, spec.dims, nq_exc, std::move(cluster_gens), std::move(relation_gens));
    return CodeSpec::make(p, spec.dims, nq_exc, std::move(relation_gens), std::move(cluster_gens));
}

namespace {

// Signature of one generator under a qudit permutation, normalized for
// translation (per-axis exponent minimum) and overall scalar (leading
// coefficient scaled to 1).
std::string gen_signature(const CssOperator& g, const std::vector<std::size_t>& perm, bool barred) {
    Prime p(g.p);
    std::vector<LaurentPoly> coeffs(g.nqudits, LaurentPoly::zero(p, g.dims));
    for (std::size_t i = 0; i < g.nqudits; ++i)
        coeffs[perm[i]] = barred ? poly_bar(g.coeffs[i]) : g.coeffs[i];

    Exponents mins(g.dims, 0);
    bool first = true;
    std::uint32_t lead = 1;
    for (const auto& c : coeffs)
        for (const auto& [e, k] : c.terms()) {
            if (first) lead = k;
            for (std::size_t i = 0; i < g.dims; ++i)
                mins[i] = first ? e[i] : std::min(mins[i], e[i]);
            first = false;
        }
    std::uint64_t scale = fp_inv(lead, g.p);
    std::string sig;
    for (const auto& c : coeffs) {
        sig += "|";
        for (const auto& [e, k] : c.terms()) {
            sig += "(";
            for (std::size_t i = 0; i < g.dims; ++i) sig += std::to_string(e[i] - mins[i]) + ",";
            sig += ")" + std::to_string(k * scale % g.p);
        }
    }
    return sig;
}

std::vector<std::string> side_signature(const std::vector<CssOperator>& gens,
                                        const std::vector<std::size_t>& perm, bool barred) {
    std::vector<std::string> sigs;
    for (const auto& g : gens) sigs.push_back(gen_signature(g, perm, barred));
    std::sort(sigs.begin(), sigs.end());
    return sigs;
}

}  // namespace

bool specs_isomorphic(const CodeSpec& a, const CodeSpec& b, bool allow_species_swap) {
    if (a.p != b.p || a.dims != b.dims || a.nqudits != b.nqudits) return false;
    std::vector<std::size_t> perm(a.nqudits);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> id = perm;
    auto bx = side_signature(b.xgens, id, false);
    auto bz = side_signature(b.zgens, id, false);
    do {
        if (a.xgens.size() == b.xgens.size() && a.zgens.size() == b.zgens.size()) {
            if (side_signature(a.xgens, perm, false) == bx &&
                side_signature(a.zgens, perm, false) == bz)
                return true;
        }
        if (allow_species_swap && a.xgens.size() == b.zgens.size() &&
            a.zgens.size() == b.xgens.size()) {
            if (side_signature(a.xgens, perm, true) == bz &&
                side_signature(a.zgens, perm, true) == bx)
                return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

std::string export_sparse(const FpMat& m) {
    std::ostringstream os;
    std::size_t nnz = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.at(i, j)) ++nnz;
    os << m.rows() << " " << m.cols() << " " << nnz << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.at(i, j)) os << i << " " << j << " " << m.at(i, j) << "\n";
    return os.str();
}

}  // namespace fracode

#include "fracode/threestep.hpp"

#include <sstream>

namespace fracode {

FpMat circuit_matrix(const CxCircuit& c) {
    FpMat M = FpMat::identity(c.p, c.n);
    for (const auto& g : c.gates) {
        // right-multiply by T = 1 + lambda e_i e_j^T: col_j += lambda col_i
        for (std::size_t r = 0; r < c.n; ++r)
            M.at(r, g.j) = static_cast<std::uint32_t>(
                (M.at(r, g.j) + static_cast<std::uint64_t>(g.lambda) * M.at(r, g.i)) % c.p);
    }
    return M;
}

std::string circuit_to_string(const CxCircuit& c) {
    std::ostringstream os;
    for (const auto& g : c.gates) {
        if (c.p == 2)
            os << "CX " << g.i << " " << g.j << "\n";
        else
            os << "CXP " << g.i << " " << g.j << " " << g.lambda << "\n";
    }
    return os.str();
}

CxCircuit cx_synthesize(const FpMat& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("cx_synthesize: matrix not square");
    std::uint32_t p = M.prime();
    std::size_t L = M.rows();
    for (std::size_t i = 0; i < L; ++i)
        if (M.at(i, i) == 0) throw std::invalid_argument("cx_synthesize: zero diagonal entry");

    FpMat A = M;
    // Row operations applied left: o_N ... o_1 A = 1, hence
    // M = inv(o_1) ... inv(o_N); inv(T(lambda)) = T(-lambda).
    std::vector<CxGate> ops;
    auto rowop = [&](std::size_t i, std::size_t j, std::uint32_t lambda) {
        lambda %= p;
        if (lambda == 0) return;
        for (std::size_t c = 0; c < L; ++c)
            A.at(i, c) = static_cast<std::uint32_t>(
                (A.at(i, c) + static_cast<std::uint64_t>(lambda) * A.at(j, c)) % p);
        ops.push_back({i, j, lambda});
    };

    for (std::size_t j = 0; j < L; ++j) {
        // The literal column sweep can zero a later pivot, so restore it from
        // a lower row when needed (rows above j would pollute cleared columns).
        if (A.at(j, j) == 0) {
            std::size_t src = j + 1;
            while (src < L && A.at(src, j) == 0) ++src;
            if (src == L) throw std::invalid_argument("cx_synthesize: matrix is singular");
            rowop(j, src, 1);
        }
        std::uint32_t pivinv = fp_inv(A.at(j, j), p);
        for (std::size_t i = 0; i < L; ++i) {
            if (i == j || A.at(i, j) == 0) continue;
            std::uint32_t lambda = static_cast<std::uint32_t>(
                (static_cast<std::uint64_t>(p - A.at(i, j)) * pivinv) % p);
            rowop(i, j, lambda);
        }
    }
    if (p > 2) {
        // Transvections cannot scale rows; sweep the leftover diagonal into
        // the last slot via SL2 gadgets diag(a, 1/a) on adjacent pairs.
        auto diag_gadget = [&](std::size_t r, std::uint32_t a) {
            std::uint32_t ainv = fp_inv(a, p);
            rowop(r, r + 1, p - 1);
            rowop(r + 1, r, 1);
            rowop(r, r + 1, p - 1);
            rowop(r, r + 1, a);
            rowop(r + 1, r, p - ainv);
            rowop(r, r + 1, a);
        };
        for (std::size_t r = 0; r + 1 < L; ++r) {
            std::uint32_t d = A.at(r, r);
            if (d != 1) diag_gadget(r, fp_inv(d, p));
        }
        if (L > 0 && A.at(L - 1, L - 1) != 1)
            throw std::domain_error("cx_synthesize: determinant != 1, not a transvection product");
    }
    CxCircuit out;
    out.p = p;
    out.n = L;
    for (const auto& g : ops) out.gates.push_back({g.i, g.j, (p - g.lambda % p) % p});
    return out;
}

std::vector<std::uint32_t> conjugate_vector(Species species, const std::vector<std::uint32_t>& v,
                                            const FpMat& M, const FpMat& Minv) {
    std::uint32_t p = M.prime();
    std::size_t n = M.rows();
    if (v.size() != n) throw std::invalid_argument("conjugate_vector: size mismatch");
    std::vector<std::uint32_t> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < n; ++j) {
            // X: out = M v;  Z: out = M^{-T} w, i.e. out_i = sum_j Minv_{ji} w_j
            std::uint64_t m = species == Species::X ? M.at(i, j) : Minv.at(j, i);
            acc += m % p * v[j] % p;
        }
        out[i] = static_cast<std::uint32_t>(acc % p);
    }
    return out;
}

FpMat conjugate_rows(Species species, const FpMat& rows, const FpMat& M) {
    auto Minv = M.inverse();
    if (!Minv) throw std::invalid_argument("conjugate_rows: matrix not invertible");
    FpMat out(rows.prime(), 0, rows.cols());
    for (std::size_t r = 0; r < rows.rows(); ++r)
        out.append_row(conjugate_vector(species, rows.row(r), M, *Minv));
    return out;
}

FpMat conjugate_rows(Species species, const FpMat& rows, const CxCircuit& circuit) {
    std::uint32_t p = circuit.p;
    FpMat out = rows;
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        auto v = out.row(r);
        if (species == Species::X) {
            // M v = T_{g1}(T_{g2}(...)): apply gates right to left
            for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it)
                v[it->i] = static_cast<std::uint32_t>(
                    (v[it->i] + static_cast<std::uint64_t>(it->lambda) * v[it->j]) % p);
        } else {
            // M^{-T} w: inverse transposes compose in forward order
            for (const auto& g : circuit.gates)
                v[g.j] = static_cast<std::uint32_t>(
                    (v[g.j] + static_cast<std::uint64_t>(p - g.lambda) * v[g.i]) % p);
        }
        out.set_row(r, v);
    }
    return out;
}

CodeSpec layered_code(const CodeSpec& spec, std::size_t new_dims) {
    Prime p(spec.p);
    std::size_t total = spec.dims + new_dims;
    auto lift = [&](const CssOperator& g) {
        std::vector<LaurentPoly> coeffs;
        for (const auto& c : g.coeffs)
            coeffs.push_back(poly_mul(embed(c, total, 0),
                                      LaurentPoly::monomial(p, [&] {
                                          Exponents a(total, 0);
                                          for (std::size_t i = 0; i < spec.dims; ++i) a[i] = g.anchor[i];
                                          return a;
                                      }())));
        return make_operator(g.species, p, total, g.nqudits, std::move(coeffs));
    };
    std::vector<CssOperator> xg, zg;
    for (const auto& g : spec.xgens) xg.push_back(lift(g));
    for (const auto& g : spec.zgens) zg.push_back(lift(g));
    return CodeSpec::make(p, total, spec.nqudits, std::move(xg), std::move(zg));
}

namespace {

std::size_t volume(const std::vector<std::int32_t>& sizes) {
    std::size_t v = 1;
    for (auto L : sizes) {
        if (L <= 0) throw std::invalid_argument("three-step: sizes must be positive");
        v *= static_cast<std::size_t>(L);
    }
    return v;
}

// prod_i f_i^{e_i} reduced on the y-torus, negative powers via the group
// algebra inverse (precondition: every f_i invertible there).
LaurentPoly f_power_product(const LcaRuleSet& rules, const Exponents& e, const Boundary& ybc) {
    Prime p(rules.p);
    LaurentPoly g = LaurentPoly::constant(p, rules.new_dims, 1);
    for (std::size_t i = 0; i < rules.dims; ++i) {
        if (e[i] == 0) continue;
        LaurentPoly base = poly_reduce(rules.f(i), ybc);
        if (e[i] < 0) {
            auto inv = poly_inverse(rules.f(i), ybc);
            if (!inv) throw std::invalid_argument("three-step: rule not invertible on the y-torus");
            base = *inv;
        }
        g = poly_reduce(poly_mul(g, poly_pow(base, static_cast<std::uint64_t>(std::abs(e[i])))), ybc);
    }
    return g;
}

// Coefficient table of g on the y-torus as a dense vector.
std::vector<std::uint32_t> poly_table(const LaurentPoly& g, const std::vector<std::int32_t>& ysizes) {
    std::vector<std::uint32_t> t(volume(ysizes), 0);
    for (const auto& [e, c] : g.terms()) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < ysizes.size(); ++i) idx = idx * ysizes[i] + e[i];
        t[idx] = c;
    }
    return t;
}

std::size_t ydiff_index(const Exponents& a, const Exponents& b, const std::vector<std::int32_t>& ysizes) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < ysizes.size(); ++i) {
        std::int32_t d = (a[i] - b[i]) % ysizes[i];
        if (d < 0) d += ysizes[i];
        idx = idx * ysizes[i] + d;
    }
    return idx;
}

}  // namespace

LayerMatrix build_M(const LcaRuleSet& rules, const Boundary& rbc,
                    const std::vector<std::int32_t>& ysizes, std::size_t nqudits) {
    if (rules.order != 1) throw std::invalid_argument("build_M: three-step is first-order only");
    if (rbc.size() != rules.dims) throw std::invalid_argument("build_M: boundary arity mismatch");
    if (ysizes.size() != rules.new_dims) throw std::invalid_argument("build_M: y size arity mismatch");
    Boundary ybc = torus(ysizes);
    Prime p(rules.p);
    for (std::size_t i = 0; i < rules.dims; ++i) {
        if (!poly_inverse(rules.f(i), ybc))
            throw std::invalid_argument("build_M: rule " + std::to_string(i) +
                                        " is not invertible on the y-torus");
        if (rbc[i].periodic) {
            LaurentPoly fl = poly_reduce(
                poly_pow(rules.f(i), static_cast<std::uint64_t>(rbc[i].length)), ybc);
            if (!fl.is_one())
                throw std::invalid_argument(
                    "build_M: periodic original axis requires f_i^{L_i} = 1 on the y-torus");
        }
    }
    std::vector<std::int32_t> rsizes;
    for (const auto& ax : rbc) rsizes.push_back(ax.length);
    std::size_t rvol = volume(rsizes), yvol = volume(ysizes);
    std::size_t n = rvol * yvol * nqudits;

    LayerMatrix lm;
    lm.rsizes = rsizes;
    lm.ysizes = ysizes;
    lm.nqudits = nqudits;
    lm.mat = FpMat(rules.p, n, n);

    // Site index convention matches Lattice: r axes (slowest), then y axes,
    // qudit innermost: col((r, y), n) = ((ridx * yvol) + yidx) * N + n.
    Exponents r(rules.dims, 0);
    for (std::size_t ridx = 0; ridx < rvol; ++ridx) {
        LaurentPoly g = f_power_product(rules, r, ybc);
        auto table = poly_table(g, ysizes);
        Exponents s(rules.new_dims, 0);
        for (std::size_t sidx = 0; sidx < yvol; ++sidx) {
            Exponents s2(rules.new_dims, 0);
            for (std::size_t s2idx = 0; s2idx < yvol; ++s2idx) {
                std::uint32_t c = table[ydiff_index(s, s2, ysizes)];
                if (c != 0)
                    for (std::size_t q = 0; q < nqudits; ++q)
                        lm.mat.at((ridx * yvol + sidx) * nqudits + q,
                                  (ridx * yvol + s2idx) * nqudits + q) = c;
                for (std::size_t i = s2.size(); i-- > 0;) {
                    if (++s2[i] < ysizes[i]) break;
                    s2[i] = 0;
                }
            }
            for (std::size_t i = s.size(); i-- > 0;) {
                if (++s[i] < ysizes[i]) break;
                s[i] = 0;
            }
        }
        for (std::size_t i = r.size(); i-- > 0;) {
            if (++r[i] < rsizes[i]) break;
            r[i] = 0;
        }
    }
    if (!lm.mat.inverse()) throw std::logic_error("build_M: matrix unexpectedly singular");
    return lm;
}

std::vector<std::vector<std::uint32_t>> change_generators(
    Species species, const std::vector<std::vector<std::uint32_t>>& rows_by_layer,
    const Exponents& anchor, const LcaRuleSet& rules, const Boundary& rbc,
    const std::vector<std::int32_t>& ysizes) {
    Boundary ybc = torus(ysizes);
    std::size_t yvol = volume(ysizes);
    if (rows_by_layer.size() != yvol)
        throw std::invalid_argument("change_generators: need one row per layer");
    std::uint32_t p = rules.p;
    (void)rbc;
    // X: new_{s0} = sum_{s'} (prod F^{-anchor})_{s',s0} old_{s'}
    // Z: new_{s0} = sum_{s'} (prod F^{+anchor})_{s0,s'} old_{s'}
    Exponents e = anchor;
    if (species == Species::X)
        for (auto& x : e) x = -x;
    LaurentPoly h = f_power_product(rules, e, ybc);
    auto table = poly_table(h, ysizes);

    std::size_t width = rows_by_layer[0].size();
    std::vector<std::vector<std::uint32_t>> out(yvol, std::vector<std::uint32_t>(width, 0));
    Exponents s0(ysizes.size(), 0);
    for (std::size_t s0idx = 0; s0idx < yvol; ++s0idx) {
        Exponents s1(ysizes.size(), 0);
        for (std::size_t s1idx = 0; s1idx < yvol; ++s1idx) {
            // (M_h)_{a,b} = h_{a-b}: X takes (s', s0), Z takes (s0, s').
            std::uint64_t c = species == Species::X ? table[ydiff_index(s1, s0, ysizes)]
                                                    : table[ydiff_index(s0, s1, ysizes)];
            if (c != 0) {
                const auto& src = rows_by_layer[s1idx];
                auto& dst = out[s0idx];
                for (std::size_t w = 0; w < width; ++w)
                    dst[w] = static_cast<std::uint32_t>((dst[w] + c * src[w]) % p);
            }
            for (std::size_t i = s1.size(); i-- > 0;) {
                if (++s1[i] < ysizes[i]) break;
                s1[i] = 0;
            }
        }
        for (std::size_t i = s0.size(); i-- > 0;) {
            if (++s0[i] < ysizes[i]) break;
            s0[i] = 0;
        }
    }
    return out;
}

FpMat symplectic_rows(const std::vector<CssOperator>& ops, const Boundary& bc,
                      std::size_t nqudits) {
    if (ops.empty()) throw std::invalid_argument("symplectic_rows: empty operator list");
    Lattice lat{bc, nqudits};
    std::size_t n = lat.columns();
    FpMat out(ops[0].p, 0, 2 * n);
    for (const auto& op : ops) {
        auto placed = place_operator(op, Exponents(op.dims, 0), lat, Truncation::Drop);
        if (!placed) throw std::invalid_argument("symplectic_rows: operator exceeds open boundary");
        std::vector<std::uint32_t> row(2 * n, 0);
        std::size_t offset = op.species == Species::X ? 0 : n;
        for (std::size_t c = 0; c < n; ++c) row[offset + c] = (*placed)[c];
        out.append_row(row);
    }
    return out;
}

FpMat symplectic_rows(const InstantiatedCode& inst) {
    std::size_t n = inst.n;
    FpMat out(inst.p, 0, 2 * n);
    std::vector<std::uint32_t> row(2 * n, 0);
    for (std::size_t r = 0; r < inst.Hx.rows(); ++r) {
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t c = 0; c < n; ++c) row[c] = inst.Hx.at(r, c);
        out.append_row(row);
    }
    for (std::size_t r = 0; r < inst.Hz.rows(); ++r) {
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t c = 0; c < n; ++c) row[n + c] = inst.Hz.at(r, c);
        out.append_row(row);
    }
    return out;
}

bool groups_equal(const FpMat& gens1, const FpMat& gens2) {
    if (gens1.cols() != gens2.cols() || gens1.prime() != gens2.prime()) return false;
    return same_rowspace(gens1, gens2);
}

FpMat three_step_fractalize(const CodeSpec& spec, const LcaRuleSet& rules, const Boundary& rbc,
                            const std::vector<std::int32_t>& ysizes) {
    if (rules.order != 1)
        throw std::invalid_argument("three_step_fractalize: three-step is first-order only");
    LayerMatrix lm = build_M(rules, rbc, ysizes, spec.nqudits);
    auto Minv = lm.mat.inverse();
    Boundary full_bc = rbc;
    for (auto L : ysizes) full_bc.push_back(Axis::torus(L));
    Lattice lat{full_bc, spec.nqudits};
    std::size_t n = lat.columns();
    std::size_t yvol = volume(ysizes);

    CodeSpec layered = layered_code(spec, rules.new_dims);
    FpMat out(spec.p, 0, 2 * n);
    auto process = [&](const CssOperator& lifted, const CssOperator& original) {
        // Placements along the original axes only; every layer s' is handled
        // by the regrouping step.
        Lattice rlat{rbc, spec.nqudits};
        for (const auto& rshift : generator_placements(original, rlat)) {
            // layered placements at (rshift, s') for every layer s'
            std::vector<std::vector<std::uint32_t>> layer_rows;
            Exponents s(ysizes.size(), 0);
            for (std::size_t sidx = 0; sidx < yvol; ++sidx) {
                Exponents shift = rshift;
                shift.insert(shift.end(), s.begin(), s.end());
                auto placed = place_operator(lifted, shift, lat, Truncation::Drop);
                if (!placed) throw std::logic_error("three_step: placement unexpectedly dropped");
                layer_rows.push_back(conjugate_vector(original.species, *placed, lm.mat, *Minv));
                for (std::size_t i = s.size(); i-- > 0;) {
                    if (++s[i] < ysizes[i]) break;
                    s[i] = 0;
                }
            }
            Exponents anchor(original.dims);
            for (std::size_t i = 0; i < original.dims; ++i) anchor[i] = rshift[i] + original.anchor[i];
            auto regrouped = change_generators(original.species, layer_rows, anchor, rules, rbc, ysizes);
            std::size_t offset = original.species == Species::X ? 0 : n;
            for (const auto& v : regrouped) {
                std::vector<std::uint32_t> row(2 * n, 0);
                for (std::size_t c = 0; c < n; ++c) row[offset + c] = v[c];
                out.append_row(row);
            }
        }
    };
    for (std::size_t i = 0; i < spec.xgens.size(); ++i) process(layered.xgens[i], spec.xgens[i]);
    for (std::size_t i = 0; i < spec.zgens.size(); ++i) process(layered.zgens[i], spec.zgens[i]);
    return out;
}

}  // namespace fracode

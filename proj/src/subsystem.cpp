#include "fracode/subsystem.hpp"

#include <algorithm>
#include <cmath>

#include "fracode/fractalizer.hpp"

namespace fracode {

namespace {

// Append a CssOperator placement as a symplectic row.
void append_gauge(GaugeCode& g, const CssOperator& op, const Exponents& shift, const Lattice& lat,
                  Truncation trunc) {
    auto placed = place_operator(op, shift, lat, trunc);
    if (!placed) throw std::logic_error("append_gauge: placement dropped");
    bool nonzero = false;
    for (auto v : *placed) nonzero |= v != 0;
    if (!nonzero) return;
    std::vector<std::uint32_t> row(2 * g.n, 0);
    std::size_t offset = op.species == Species::X ? 0 : g.n;
    for (std::size_t c = 0; c < g.n; ++c) row[offset + c] = (*placed)[c];
    g.gens.append_row(row);
    g.gen_species.push_back(op.species);
}

LaurentPoly poly_one(Prime p, std::size_t nvars) { return LaurentPoly::constant(p, nvars, 1); }

std::size_t poly_degree(const LaurentPoly& f) {
    std::size_t d = 0;
    for (const auto& [e, c] : f.terms()) {
        std::size_t t = 0;
        for (auto x : e) t += static_cast<std::size_t>(std::abs(x));
        d = std::max(d, t);
    }
    return d;
}

}  // namespace

GaugeCode build_bbs(const FpMat& K, Prime p) {
    std::size_t L1 = K.rows(), L2 = K.cols();
    if (L1 == 0 || L2 == 0) throw std::invalid_argument("build_bbs: empty K matrix");
    bool any = false;
    for (std::size_t i = 0; i < L1; ++i)
        for (std::size_t j = 0; j < L2; ++j) any |= K.at(i, j) != 0;
    if (!any) throw std::invalid_argument("build_bbs: all sites removed");

    // Kept sites get contiguous qudit indices, row-major.
    std::vector<std::vector<std::int64_t>> qudit(L1, std::vector<std::int64_t>(L2, -1));
    std::size_t n = 0;
    for (std::size_t i = 0; i < L1; ++i)
        for (std::size_t j = 0; j < L2; ++j)
            if (K.at(i, j)) qudit[i][j] = static_cast<std::int64_t>(n++);

    GaugeCode g;
    g.p = p.value;
    g.n = n;
    g.spatial_dims = 2;
    g.model = "bbs";
    g.sizes = {static_cast<std::int32_t>(L1), static_cast<std::int32_t>(L2)};
    g.gens = FpMat(p.value, 0, 2 * n);
    auto add_pair = [&](std::size_t qa, std::size_t qb, bool xtype) {
        std::vector<std::uint32_t> row(2 * n, 0);
        std::size_t offset = xtype ? 0 : n;
        row[offset + qa] = 1;
        row[offset + qb] = p.value - 1;  // 1 - x form; for p = 2 both entries are 1
        g.gens.append_row(row);
        g.gen_species.push_back(xtype ? Species::X : Species::Z);
    };
    // X gauge: nearest kept neighbours along x1 (rows of the grid, fixed x2).
    for (std::size_t j = 0; j < L2; ++j) {
        std::int64_t prev = -1;
        for (std::size_t i = 0; i < L1; ++i) {
            if (qudit[i][j] < 0) continue;
            if (prev >= 0) add_pair(static_cast<std::size_t>(prev), static_cast<std::size_t>(qudit[i][j]), true);
            prev = qudit[i][j];
        }
    }
    // Z gauge: nearest kept neighbours along x2.
    for (std::size_t i = 0; i < L1; ++i) {
        std::int64_t prev = -1;
        for (std::size_t j = 0; j < L2; ++j) {
            if (qudit[i][j] < 0) continue;
            if (prev >= 0) add_pair(static_cast<std::size_t>(prev), static_cast<std::size_t>(qudit[i][j]), false);
            prev = qudit[i][j];
        }
    }
    return g;
}

GaugeCode build_bacon_shor(std::int32_t L1, std::int32_t L2, Prime p) {
    if (L1 <= 0 || L2 <= 0) throw std::invalid_argument("build_bacon_shor: sizes must be positive");
    FpMat K(p.value, static_cast<std::size_t>(L1), static_cast<std::size_t>(L2));
    for (std::size_t i = 0; i < K.rows(); ++i)
        for (std::size_t j = 0; j < K.cols(); ++j) K.at(i, j) = 1;
    GaugeCode g = build_bbs(K, p);
    g.model = "bs";
    return g;
}

GaugeCode build_fbbs(const FpMat& K, std::int32_t L3, const LaurentPoly& f1, const LaurentPoly& f2,
                     Prime p, bool pad) {
    std::size_t L1 = K.rows(), L2 = K.cols();
    if (L1 == 0 || L2 == 0 || L3 <= 0) throw std::invalid_argument("build_fbbs: bad sizes");
    if (f1.nvars() != 1 || f2.nvars() != 1 || f1.prime() != p.value || f2.prime() != p.value)
        throw std::invalid_argument("build_fbbs: rules must be univariate over the same prime");
    bool any = false;
    for (std::size_t i = 0; i < L1; ++i)
        for (std::size_t j = 0; j < L2; ++j) any |= K.at(i, j) != 0;
    if (!any) throw std::invalid_argument("build_fbbs: all sites removed");

    std::int32_t dL = pad ? static_cast<std::int32_t>(L1 * poly_degree(f1) + L2 * poly_degree(f2)) : 0;
    std::int32_t Ly = L3 + 2 * dL;
    Axis yaxis = pad ? Axis::open(Ly) : Axis::torus(L3);

    // Kept (site, layer) pairs, row-major with y innermost.
    std::vector<std::vector<std::int64_t>> site(L1, std::vector<std::int64_t>(L2, -1));
    std::size_t kept = 0;
    for (std::size_t i = 0; i < L1; ++i)
        for (std::size_t j = 0; j < L2; ++j)
            if (K.at(i, j)) site[i][j] = static_cast<std::int64_t>(kept++);
    std::size_t n = kept * static_cast<std::size_t>(yaxis.length);

    GaugeCode g;
    g.p = p.value;
    g.n = n;
    g.spatial_dims = 3;
    g.model = "fbbs";
    g.sizes = {static_cast<std::int32_t>(L1), static_cast<std::int32_t>(L2), L3};
    g.gens = FpMat(p.value, 0, 2 * n);

    auto col = [&](std::size_t site_idx, std::int32_t s) {
        return site_idx * static_cast<std::size_t>(yaxis.length) + static_cast<std::size_t>(s);
    };
    // Gauge generator between kept sites at grid distance `gap` along an
    // axis, anchored per the operator forms: X is x^r y^s (1 - f1(y)^gap
    // x1^gap) with the unit at the lower site, Z is x^r y^s (1 - f2(ybar)^gap
    // xbar2^gap) with the unit at the upper site.
    auto add_gen = [&](std::size_t q_low, std::size_t q_high, const LaurentPoly& f, std::size_t gap,
                       std::int32_t s, bool xtype) {
        LaurentPoly spread = poly_pow(f, gap);
        std::vector<std::uint32_t> row(2 * n, 0);
        std::size_t offset = xtype ? 0 : n;
        bool clipped_all = true;
        auto deposit = [&](std::size_t site_idx, std::int32_t y, std::int64_t coeff) {
            if (yaxis.periodic) {
                y = static_cast<std::int32_t>(((y % yaxis.length) + yaxis.length) % yaxis.length);
            } else if (y < 0 || y >= yaxis.length) {
                return;  // clip at the open boundary
            }
            std::size_t c = offset + col(site_idx, y);
            std::int64_t v = (row[c] + coeff) % p.value;
            if (v < 0) v += p.value;
            row[c] = static_cast<std::uint32_t>(v);
            clipped_all = false;
        };
        if (xtype) {
            deposit(q_low, s, 1);
            for (const auto& [e, c] : spread.terms())
                deposit(q_high, s + e[0], -static_cast<std::int64_t>(c));
        } else {
            deposit(q_high, s, 1);
            for (const auto& [e, c] : spread.terms())
                deposit(q_low, s - e[0], -static_cast<std::int64_t>(c));
        }
        if (!clipped_all) {
            g.gens.append_row(row);
            g.gen_species.push_back(xtype ? Species::X : Species::Z);
        }
    };

    std::int32_t s_lo = 0, s_hi = yaxis.periodic ? yaxis.length : Ly;
    for (std::int32_t s = s_lo; s < s_hi; ++s) {
        for (std::size_t j = 0; j < L2; ++j) {
            std::int64_t prev = -1;
            std::size_t prev_i = 0;
            for (std::size_t i = 0; i < L1; ++i) {
                if (site[i][j] < 0) continue;
                if (prev >= 0)
                    add_gen(static_cast<std::size_t>(prev), static_cast<std::size_t>(site[i][j]), f1,
                            i - prev_i, s, true);
                prev = site[i][j];
                prev_i = i;
            }
        }
        for (std::size_t i = 0; i < L1; ++i) {
            std::int64_t prev = -1;
            std::size_t prev_j = 0;
            for (std::size_t j = 0; j < L2; ++j) {
                if (site[i][j] < 0) continue;
                if (prev >= 0)
                    add_gen(static_cast<std::size_t>(prev), static_cast<std::size_t>(site[i][j]), f2,
                            j - prev_j, s, false);
                prev = site[i][j];
                prev_j = j;
            }
        }
    }
    return g;
}

GaugeCode build_fbs(std::int32_t L1, std::int32_t L2, std::int32_t L3, const LaurentPoly& f1,
                    const LaurentPoly& f2, Prime p, bool pad) {
    FpMat K(p.value, static_cast<std::size_t>(L1), static_cast<std::size_t>(L2));
    for (std::size_t i = 0; i < K.rows(); ++i)
        for (std::size_t j = 0; j < K.cols(); ++j) K.at(i, j) = 1;
    GaugeCode g = build_fbbs(K, L3, f1, f2, p, pad);
    g.model = "fbs";
    return g;
}

FpMat center(const GaugeCode& g) {
    std::size_t m = g.gens.rows();
    std::uint32_t p = g.p;
    // Gram matrix of the symplectic form on the generators.
    FpMat gram(p, m, m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            std::uint64_t acc = 0;
            for (std::size_t q = 0; q < g.n; ++q) {
                acc += static_cast<std::uint64_t>(g.gens.at(a, q)) * g.gens.at(b, g.n + q) % p;
                acc += static_cast<std::uint64_t>(p - 1) * (static_cast<std::uint64_t>(g.gens.at(a, g.n + q)) * g.gens.at(b, q) % p) % p;
            }
            gram.at(a, b) = static_cast<std::uint32_t>(acc % p);
        }
    }
    FpMat rows(p, 0, 2 * g.n);
    for (const auto& v : gram.kernel_basis()) {
        std::vector<std::uint32_t> elem(2 * g.n, 0);
        for (std::size_t a = 0; a < m; ++a) {
            if (v[a] == 0) continue;
            for (std::size_t c = 0; c < 2 * g.n; ++c)
                elem[c] = static_cast<std::uint32_t>(
                    (elem[c] + static_cast<std::uint64_t>(v[a]) * g.gens.at(a, c)) % p);
        }
        rows.append_row(elem);
    }
    return rows.rref();
}

std::size_t logical_count(const GaugeCode& g) {
    std::size_t rg = g.gens.rank();
    std::size_t rs = center(g).rank();
    return g.n - (rg + rs) / 2;
}

namespace {

// Split symplectic rows into pure X-part and Z-part blocks; throws if a row
// mixes species (cannot happen for CSS gauge groups, whose centers separate).
void split_css(const FpMat& rows, std::size_t n, FpMat& xpart, FpMat& zpart) {
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        bool has_x = false, has_z = false;
        for (std::size_t c = 0; c < n; ++c) has_x |= rows.at(r, c) != 0;
        for (std::size_t c = 0; c < n; ++c) has_z |= rows.at(r, n + c) != 0;
        if (has_x && has_z) throw std::logic_error("split_css: mixed-species row");
        std::vector<std::uint32_t> v(n, 0);
        if (has_x) {
            for (std::size_t c = 0; c < n; ++c) v[c] = rows.at(r, c);
            xpart.append_row(v);
        } else if (has_z) {
            for (std::size_t c = 0; c < n; ++c) v[c] = rows.at(r, n + c);
            zpart.append_row(v);
        }
    }
}

FpMat species_parts(const GaugeCode& g, Species s) {
    FpMat out(g.p, 0, g.n);
    std::size_t offset = s == Species::X ? 0 : g.n;
    for (std::size_t r = 0; r < g.gens.rows(); ++r) {
        if (g.gen_species[r] != s) continue;
        std::vector<std::uint32_t> v(g.n, 0);
        for (std::size_t c = 0; c < g.n; ++c) v[c] = g.gens.at(r, offset + c);
        out.append_row(v);
    }
    return out;
}

}  // namespace

BareLogicals bare_logicals(const GaugeCode& g) {
    if (!g.is_css()) throw std::invalid_argument("bare_logicals: implemented for CSS gauge groups");
    std::uint32_t p = g.p;
    FpMat stab = center(g);
    FpMat sx(p, 0, g.n), sz(p, 0, g.n);
    split_css(stab, g.n, sx, sz);
    FpMat gx = species_parts(g, Species::X);
    FpMat gz = species_parts(g, Species::Z);

    // Bare X logicals: commute with Z stabilizers, taken modulo X gauge ops.
    auto sift = [&](const FpMat& constraint, const FpMat& mod) {
        MutableSpan span(p, g.n);
        for (std::size_t r = 0; r < mod.rows(); ++r) span.add(mod.row(r));
        FpMat out(p, 0, g.n);
        for (const auto& v : constraint.kernel_basis())
            if (span.add(v)) out.append_row(v);
        return out;
    };
    FpMat lx = sift(sz, gx);
    FpMat lz = sift(sx, gz);
    if (lx.rows() != lz.rows()) throw std::logic_error("bare_logicals: side mismatch");
    if (lx.rows() == 0) return {FpMat(p, 0, g.n), FpMat(p, 0, g.n)};
    FpMat P = lx.mul(lz.transpose());
    auto Pinv = P.inverse();
    if (!Pinv) throw std::logic_error("bare_logicals: degenerate pairing");
    return {lx, Pinv->transpose().mul(lz)};
}

DressedDistance dressed_distance(const GaugeCode& g, std::size_t wmax) {
    DressedDistance out;
    out.wmax = wmax;
    std::uint32_t p = g.p;
    FpMat stab = center(g);
    if (g.is_css()) {
        FpMat sx(p, 0, g.n), sz(p, 0, g.n);
        split_css(stab, g.n, sx, sz);
        RowSpan gx(species_parts(g, Species::X));
        RowSpan gz(species_parts(g, Species::Z));
        auto dx = min_weight_vector(p, g.n, wmax, sz, gx);
        auto dz = min_weight_vector(p, g.n, wmax, sx, gz);
        if (dx && dz)
            out.d = std::min(*dx, *dz);
        else
            out.d = dx ? dx : dz;
        return out;
    }
    // General symplectic enumeration: commute with every stabilizer row under
    // the symplectic form, outside the gauge row space.
    FpMat form(p, 0, 2 * g.n);
    for (std::size_t r = 0; r < stab.rows(); ++r) {
        std::vector<std::uint32_t> v(2 * g.n, 0);
        for (std::size_t c = 0; c < g.n; ++c) {
            v[c] = (p - stab.at(r, g.n + c) % p) % p;  // -sz | sx
            v[g.n + c] = stab.at(r, c);
        }
        form.append_row(v);
    }
    RowSpan gauge(g.gens);
    out.d = min_weight_symplectic(p, g.n, wmax, form, gauge);
    return out;
}

double tradeoff_ratio(std::size_t k, std::size_t d, std::size_t n, std::size_t D) {
    if (k == 0 || n == 0) return 0.0;
    if (D < 2) throw std::invalid_argument("tradeoff_ratio: need D >= 2");
    double expo = 1.0 / static_cast<double>(D - 1);
    return static_cast<double>(k) * std::pow(static_cast<double>(d), expo) / static_cast<double>(n);
}

EtaEstimate eta_estimate(const std::vector<std::pair<std::int32_t, std::optional<std::size_t>>>& data) {
    EtaEstimate out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& [L, d] : data) {
        if (!d) continue;
        out.points.push_back({L, *d});
        double x = std::log(static_cast<double>(L)), y = std::log(static_cast<double>(*d));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m >= 2) {
        double denom = m * sxx - sx * sx;
        if (denom > 1e-12) out.eta = (m * sxy - sx * sy) / denom;
    }
    return out;
}

SubsystemReport subsystem_report(const GaugeCode& g, std::size_t wmax) {
    SubsystemReport rep;
    rep.model = g.model;
    rep.p = g.p;
    rep.sizes = g.sizes;
    rep.n = g.n;
    rep.k = logical_count(g);
    rep.wmax = wmax;
    if (wmax > 0) {
        try {
            rep.d = dressed_distance(g, wmax).d;
        } catch (const budget_error&) {
            rep.partial = true;
        }
    }
    if (rep.d) rep.bound_ratio = tradeoff_ratio(rep.k, *rep.d, rep.n, g.spatial_dims);
    return rep;
}

}  // namespace fracode

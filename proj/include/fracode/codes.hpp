#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracode/linalg.hpp"
#include "fracode/pauli.hpp"

namespace fracode {

/// Translation-invariant CSS code specification: lists of X and Z generator
/// types.  Column k of the generator matrix A(x) (resp. B(xbar)) is
/// xgens[k].coeffs (resp. zgens[k].coeffs) with the anchor monomial folded in.
struct CodeSpec {
    std::uint32_t p = 2;
    std::size_t dims = 0;
    std::size_t nqudits = 0;  // per site
    std::vector<CssOperator> xgens;
    std::vector<CssOperator> zgens;

    /// Validates that every (X, Z) generator pair commutes at all
    /// translations, i.e. its commutation polynomial vanishes identically.
    static CodeSpec make(Prime p, std::size_t dims, std::size_t nqudits,
                         std::vector<CssOperator> xgens, std::vector<CssOperator> zgens);
};

std::vector<std::string> model_catalog();

/// Model zoo.  For p > 2 the generators carry the sign conventions needed for
/// the pairs to commute mod p; at p = 2 they coincide with the usual unsigned
/// forms.
CodeSpec build_model(const std::string& name, Prime p);

/// Finite-lattice site/qudit indexing: site index is mixed-radix over the
/// boundary axes (axis 0 slowest), qudit index innermost.
struct Lattice {
    Boundary bc;
    std::size_t nqudits;

    std::size_t sites() const;
    std::size_t columns() const { return sites() * nqudits; }
    std::size_t site_index(const Exponents& r) const;
    Exponents site_coords(std::size_t index) const;
    std::size_t column(const Exponents& r, std::size_t qudit) const {
        return site_index(r) * nqudits + qudit;
    }
};

enum class Truncation { Drop, Clip };

/// Materialize `op` translated by `shift` as a dense row over lattice columns.
/// Periodic axes wrap.  On open axes, out-of-range support either discards the
/// whole placement (Drop, returns nullopt) or just the offending sites (Clip).
std::optional<std::vector<std::uint32_t>> place_operator(const CssOperator& op,
                                                         const Exponents& shift,
                                                         const Lattice& lat,
                                                         Truncation trunc);

/// All placements of a generator on the lattice: every offset on periodic
/// axes, and on open axes every offset for which the support fits.
std::vector<Exponents> generator_placements(const CssOperator& op, const Lattice& lat);

struct InstantiatedCode {
    std::uint32_t p = 2;
    Lattice lattice;
    std::size_t n = 0;  // total qudits
    FpMat Hx, Hz;       // rows = generator placements, columns = (site, qudit)
};

InstantiatedCode instantiate(const CodeSpec& spec, const Boundary& bc);

/// Exact sparse check of Hx * Hz^T = 0.
bool css_orthogonal(const InstantiatedCode& inst);

std::size_t logical_count(const InstantiatedCode& inst);

struct LogicalBasis {
    FpMat x, z;  // k rows each, symplectically paired: x_i . z_j = delta_ij
};
LogicalBasis logical_basis(const InstantiatedCode& inst);

struct DistanceResult {
    std::optional<std::size_t> d;    // min(dx, dz) when found
    std::optional<std::size_t> dx;   // X-side distance
    std::optional<std::size_t> dz;   // Z-side distance
    std::size_t wmax = 0;
};

/// Exhaustive minimum-distance search by increasing weight, X and Z sides
/// separately.  Throws budget_error when the candidate count exceeds the
/// enumeration budget.
DistanceResult distance_bruteforce(const InstantiatedCode& inst, std::size_t wmax);

/// Shared enumeration core: least weight w <= wmax such that some vector v
/// supported on w positions satisfies commute_rows * v = 0 and v not in
/// `modulo`.  Single-column patterns with coefficients 1..p-1 per position.
std::optional<std::size_t> min_weight_vector(std::uint32_t p, std::size_t n, std::size_t wmax,
                                             const FpMat& commute_rows, const RowSpan& modulo);

/// Symplectic variant: positions are qudits, patterns are the p^2 - 1 nonzero
/// (x, z) pairs acting on columns (q, n + q).
std::optional<std::size_t> min_weight_symplectic(std::uint32_t p, std::size_t n, std::size_t wmax,
                                                 const FpMat& commute_rows, const RowSpan& modulo);

/// Syndrome pattern of `op` against the opposite-species generators of the
/// spec: component k is E_k(x) = sum_n bar(g^(k)_n)(x) * w_n(x), whose
/// coefficient at x^r is the commutator exponent with generator k placed at r.
struct ExcitationVector {
    std::vector<LaurentPoly> components;  // one per opposite-species generator
};
ExcitationVector excitation_map(const CssOperator& op, const CodeSpec& spec);

/// A product of same-species generator translates equal to the identity:
/// sum_k g^(k) l_k = 0 componentwise, with the generator anchors folded in.
struct LocalRelation {
    std::vector<LaurentPoly> l;  // one per generator of that species
};

/// Basis of relations among the `species` generators with monomial degree
/// bounded by `degree_bound` (non-positive exponents for Z, non-negative for
/// X), found by an exact linear solve over the unknown coefficients.
std::vector<LocalRelation> local_relations(const CodeSpec& spec, Species species,
                                           std::size_t degree_bound);

/// The excitation code of `spec` for excitations of its `excited` generators:
/// same-species generators become the local relations, opposite-species
/// generators the single-site excitation clusters.
CodeSpec excitation_code(const CodeSpec& spec, Species excited = Species::Z);

/// Structural equality of two specs up to a permutation of the per-site qudit
/// coordinates, reordering of generators, translation, and per-generator
/// scalars.  With allow_species_swap, also tries matching X generators of one
/// against bar-reflected Z generators of the other.
bool specs_isomorphic(const CodeSpec& a, const CodeSpec& b, bool allow_species_swap = false);

/// Coordinate text export: "nrows ncols nnz" then one "r c v" line per entry.
std::string export_sparse(const FpMat& m);

}  // namespace fracode

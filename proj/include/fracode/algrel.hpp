#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fracode/poly.hpp"

namespace fracode {

/// Witness of an algebraic relation prod_{i in lhs} f_i^{n_i} =
/// c prod_{j not in lhs} f_j^{n_j}, as exact polynomials (no boundary
/// reduction).  Exponents are indexed like the input list; not all zero.
struct RelationWitness {
    std::vector<std::uint64_t> exponents;
    std::uint32_t constant = 1;
    std::vector<std::size_t> lhs;  // indices on the left-hand side

    /// Re-verify the witness by exact polynomial arithmetic.
    bool verify(const std::vector<LaurentPoly>& fs) const;
};

/// Exhaustive bounded searches.  An empty result means "no relation with all
/// exponents <= bound", never a proof of unrelatedness.  Candidate exponent
/// tuples are pruned unless total degrees balance, which is exact over a
/// field.
std::optional<RelationWitness> related_pair(const LaurentPoly& f1, const LaurentPoly& f2,
                                            std::uint64_t bound);
std::optional<RelationWitness> related_triple(const LaurentPoly& f1, const LaurentPoly& f2,
                                              const LaurentPoly& f3, std::uint64_t bound);
std::optional<RelationWitness> related_quad(const LaurentPoly& f1, const LaurentPoly& f2,
                                            const LaurentPoly& f3, const LaurentPoly& f4,
                                            std::uint64_t bound);
/// All split patterns of the index set (delegates to the fixed-arity searches
/// for lists of length 2-4 in behaviour).
std::optional<RelationWitness> related_multi(const std::vector<LaurentPoly>& fs,
                                             std::uint64_t bound);

}  // namespace fracode

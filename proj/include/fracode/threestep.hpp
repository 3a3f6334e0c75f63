#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracode/codes.hpp"
#include "fracode/fractalizer.hpp"
#include "fracode/linalg.hpp"

namespace fracode {

/// One transvection T = 1 + lambda e_i e_j^T (a CX gate from qudit j onto
/// qudit i; lambda is 1 for qubits).
struct CxGate {
    std::size_t i = 0;
    std::size_t j = 0;
    std::uint32_t lambda = 1;
};

/// Gate list whose left-to-right matrix product equals the synthesized M.
struct CxCircuit {
    std::uint32_t p = 2;
    std::size_t n = 0;
    std::vector<CxGate> gates;
};

FpMat circuit_matrix(const CxCircuit& c);
std::string circuit_to_string(const CxCircuit& c);

/// Deterministic column-major synthesis of an invertible unit-diagonal M as a
/// transvection product.  Over F_2 this always succeeds; for p > 2 the gate
/// set generates only SL, so det(M) = 1 is additionally required.
CxCircuit cx_synthesize(const FpMat& M);

/// Conjugation action on operator vectors: X vectors map by M, Z vectors by
/// the inverse transpose of M.
std::vector<std::uint32_t> conjugate_vector(Species species, const std::vector<std::uint32_t>& v,
                                            const FpMat& M, const FpMat& Minv);
FpMat conjugate_rows(Species species, const FpMat& rows, const FpMat& M);
/// Gate-by-gate application; agrees with conjugate_rows for the synthesized
/// circuit of M.
FpMat conjugate_rows(Species species, const FpMat& rows, const CxCircuit& circuit);

/// Step 1: reinterpret a D-dimensional spec on a (D+m)-dimensional lattice;
/// every generator acts within a layer, one copy per perpendicular shift.
CodeSpec layered_code(const CodeSpec& spec, std::size_t new_dims = 1);

/// Step 2 matrix M_{(r,s,n),(r',s',n')} = delta_{rr'} delta_{nn'}
/// (prod_i F_i^{r_i})_{s,s'} over the finite lattice, where F_i multiplies by
/// f_i(y) on the periodic y-torus.  Requires every F_i invertible, and
/// f_i^{L_i} = 1 on periodic r axes.
struct LayerMatrix {
    FpMat mat;
    std::vector<std::int32_t> rsizes, ysizes;
    std::size_t nqudits = 0;
};
LayerMatrix build_M(const LcaRuleSet& rules, const Boundary& rbc,
                    const std::vector<std::int32_t>& ysizes, std::size_t nqudits);

/// Step 3: regroup the conjugated layered generators.  rows[s'] is the
/// conjugated generator at layer s'; `anchor` is the anchor of the placed
/// operator along the original axes.  Output row s0 is the local fractalized
/// generator at shift s0.
std::vector<std::vector<std::uint32_t>> change_generators(
    Species species, const std::vector<std::vector<std::uint32_t>>& rows_by_layer,
    const Exponents& anchor, const LcaRuleSet& rules, const Boundary& rbc,
    const std::vector<std::int32_t>& ysizes);

/// Symplectic (X|Z) rows of an explicit operator list on a finite lattice.
FpMat symplectic_rows(const std::vector<CssOperator>& ops, const Boundary& bc,
                      std::size_t nqudits);
/// Symplectic rows of all generator placements of an instantiated code.
FpMat symplectic_rows(const InstantiatedCode& inst);

/// Row-space equality of two stacked symplectic generator matrices.
bool groups_equal(const FpMat& gens1, const FpMat& gens2);

/// The full pipeline: layer, conjugate by M, change generators.  Returns the
/// stacked symplectic rows of the resulting generator set on the given
/// lattice (r axes from rbc, new axes periodic with the given sizes).
FpMat three_step_fractalize(const CodeSpec& spec, const LcaRuleSet& rules, const Boundary& rbc,
                            const std::vector<std::int32_t>& ysizes);

}  // namespace fracode

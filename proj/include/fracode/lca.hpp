#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracode/poly.hpp"

namespace fracode {

/// State of a p-state linear cellular automaton: a polynomial with
/// non-negative exponents in the space variables.
using CaState = LaurentPoly;

/// One update step c -> f * c, reduced by the boundary.
CaState lca_step(const LaurentPoly& rule, const CaState& state, const Boundary& bc);

/// Trajectory [c_0, f c_0, ..., f^T c_0].
std::vector<CaState> lca_run(const LaurentPoly& rule, const CaState& c0, std::size_t steps,
                             const Boundary& bc);

/// Inverse rule polynomial on the given torus, if the rule is reversible.
/// Fast path: f(1) != 0 on sizes that are all powers of p gives
/// f^{-1} = f(1)^{-1} f^{p^n - 1}; otherwise a dense group-algebra solve.
std::optional<LaurentPoly> lca_reversible(const LaurentPoly& rule,
                                          const std::vector<std::int32_t>& sizes);

/// ASCII PBM (P1) bitmap of a 1-dimensional trajectory, one row per time step.
std::string render_pbm(const std::vector<CaState>& trajectory);

/// Hausdorff-dimension estimate for the space-time fractal of `rule`:
/// least-squares slope of log(cumulative support count) against log(t),
/// sampled at t = p^j <= steps to respect the fractal's self-similarity.
double hausdorff_estimate(const LaurentPoly& rule, std::size_t steps);

}  // namespace fracode

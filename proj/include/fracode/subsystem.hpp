#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracode/codes.hpp"
#include "fracode/linalg.hpp"
#include "fracode/pauli.hpp"

namespace fracode {

/// Subsystem (gauge) code over F_p qudits: gauge generators as symplectic
/// (X-part | Z-part) rows of width 2n.
struct GaugeCode {
    std::uint32_t p = 2;
    std::size_t n = 0;
    std::size_t spatial_dims = 2;  // D, for the tradeoff exponent
    FpMat gens;                    // rows of width 2n
    std::vector<Species> gen_species;  // per generator, when CSS

    // provenance
    std::string model;
    std::vector<std::int32_t> sizes;

    bool is_css() const { return gen_species.size() == static_cast<std::size_t>(gens.rows()); }
};

/// 2D Bacon-Shor on an open L1 x L2 grid: X gauge pairs along rows, Z gauge
/// pairs along columns (1 - x terms; the signs matter only for p > 2).
GaugeCode build_bacon_shor(std::int32_t L1, std::int32_t L2, Prime p);

/// Fractal Bacon-Shor: gauge generators (1 - f1(y) x1) and (1 - f2(ybar)
/// xbar2) on an L1 x L2 x L3 lattice, open along x1/x2.  Unpadded, the third
/// axis is periodic; with `pad`, it is open with extent L3 + 2 dL, dL = L1
/// deg(f1) + L2 deg(f2), and generators are clipped at the edges.
GaugeCode build_fbs(std::int32_t L1, std::int32_t L2, std::int32_t L3, const LaurentPoly& f1,
                    const LaurentPoly& f2, Prime p, bool pad = false);

/// Bravyi-Bacon-Shor: K[r] = 0 removes site r; gauge generators couple
/// nearest kept sites along each row/column (kept long-range, no auxiliary
/// qudits).
GaugeCode build_bbs(const FpMat& K, Prime p);

/// Fractal BBS: removing a site removes the whole column {(r, s)}_s.
GaugeCode build_fbbs(const FpMat& K, std::int32_t L3, const LaurentPoly& f1, const LaurentPoly& f2,
                     Prime p, bool pad = false);

/// Stabilizer group S = C(G) n G via the kernel of the symplectic Gram matrix
/// of the gauge generators; returned as RREF symplectic rows.
FpMat center(const GaugeCode& g);

/// k = n - (rank(G) + rank(S)) / 2.
std::size_t logical_count(const GaugeCode& g);

struct BareLogicals {
    FpMat x, z;  // k rows each; <x_i, z_j> = delta_ij
};
/// Symplectically paired basis of C(S) modulo G.
BareLogicals bare_logicals(const GaugeCode& g);

struct DressedDistance {
    std::optional<std::size_t> d;
    std::size_t wmax = 0;
};
/// Least weight of an element of C(S) \ G, by increasing-weight enumeration
/// (per species for CSS gauge groups, symplectic patterns otherwise).
DressedDistance dressed_distance(const GaugeCode& g, std::size_t wmax);

/// k d^{1/(D-1)} / n for the instance; 0 when k = 0.
double tradeoff_ratio(std::size_t k, std::size_t d, std::size_t n, std::size_t D);

struct EtaPoint {
    std::int32_t L = 0;
    std::size_t d = 0;
};
struct EtaEstimate {
    std::optional<double> eta;  // empty when fewer than two distances resolved
    std::vector<EtaPoint> points;
};
/// Log-log regression of dressed distance against linear size over a family.
EtaEstimate eta_estimate(const std::vector<std::pair<std::int32_t, std::optional<std::size_t>>>& data);

struct SubsystemReport {
    std::string model;
    std::uint32_t p = 2;
    std::vector<std::int32_t> sizes;
    std::size_t n = 0;
    std::size_t k = 0;
    std::optional<std::size_t> d;
    std::size_t wmax = 0;
    std::optional<double> eta;
    double bound_ratio = 0.0;
    bool padded = false;
    bool partial = false;  // set when the distance search hit its budget
};
SubsystemReport subsystem_report(const GaugeCode& g, std::size_t wmax);

}  // namespace fracode

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracode {

/// Enumeration budget exceeded.  Callers distinguish this from precondition
/// failures (std::invalid_argument / std::domain_error) when mapping to exit
/// codes.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A prime modulus, validated at construction.
struct Prime {
    std::uint32_t value;
    explicit Prime(std::uint32_t p);
};

bool is_prime(std::uint32_t n);

/// Modular inverse in F_p, a must be nonzero mod p.
std::uint32_t fp_inv(std::uint32_t a, std::uint32_t p);

using Exponents = std::vector<std::int32_t>;

/// One lattice axis: open (finite extent, no identification) or periodic
/// (exponents identified mod length).
struct Axis {
    std::int32_t length = 0;
    bool periodic = false;

    static Axis open(std::int32_t extent = 0) { return Axis{extent, false}; }
    static Axis torus(std::int32_t len) { return Axis{len, true}; }
};

using Boundary = std::vector<Axis>;

Boundary torus(const std::vector<std::int32_t>& sizes);
Boundary open_box(const std::vector<std::int32_t>& sizes);

/// Multivariate Laurent polynomial over F_p.
///
/// Terms map integer exponent vectors (entries may be negative) to nonzero
/// coefficients in {1,...,p-1}.  Zero coefficients are pruned eagerly and the
/// map is ordered lexicographically, so two polynomials over the same (p,
/// nvars) are equal iff their representations are identical.
class LaurentPoly {
public:
    LaurentPoly(Prime p, std::size_t nvars)
        : p_(p.value), nvars_(nvars) {}

    static LaurentPoly zero(Prime p, std::size_t nvars) { return LaurentPoly(p, nvars); }
    static LaurentPoly constant(Prime p, std::size_t nvars, std::int64_t c);
    static LaurentPoly monomial(Prime p, Exponents exps, std::int64_t c = 1);
    /// Univariate convenience: x_var^e in `nvars` variables.
    static LaurentPoly variable(Prime p, std::size_t nvars, std::size_t var,
                                std::int32_t e = 1);

    std::uint32_t prime() const { return p_; }
    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Exponents, std::uint32_t>& terms() const { return terms_; }

    std::uint32_t coeff(const Exponents& e) const;
    std::uint32_t constant_term() const { return coeff(Exponents(nvars_, 0)); }
    void set(const Exponents& e, std::int64_t c);
    void add_term(const Exponents& e, std::int64_t c);

    /// Per-axis [min,max] exponent over the support; zeros when empty.
    std::pair<Exponents, Exponents> exponent_range() const;

    bool operator==(const LaurentPoly& o) const = default;

private:
    std::uint32_t p_;
    std::size_t nvars_;
    std::map<Exponents, std::uint32_t> terms_;
};

LaurentPoly poly_add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly poly_sub(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly poly_mul(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly poly_neg(const LaurentPoly& a);
LaurentPoly poly_scale(const LaurentPoly& a, std::int64_t c);
LaurentPoly poly_pow(const LaurentPoly& a, std::uint64_t t);

/// Replace every exponent vector by its negative (x -> 1/x).
LaurentPoly poly_bar(const LaurentPoly& a);

/// Simultaneous substitution x_i -> images[i].  Images must share p and a
/// common variable count (which may differ from a's).  A variable appearing
/// with a negative exponent is only substitutable if its image is an
/// invertible monomial.
LaurentPoly poly_substitute(const LaurentPoly& a, const std::vector<LaurentPoly>& images);

/// Reduce exponents into [0, L) on periodic axes; open axes are untouched.
LaurentPoly poly_reduce(const LaurentPoly& a, const Boundary& bc);

/// Inverse of a in the group algebra F_p[Z_{L_1} x ... x Z_{L_n}]; all axes
/// must be periodic.  Solved as a dense F_p linear system of size prod(L_i).
std::optional<LaurentPoly> poly_inverse(const LaurentPoly& a, const Boundary& bc);

inline LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return poly_add(a, b); }
inline LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return poly_sub(a, b); }
inline LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) { return poly_mul(a, b); }

}  // namespace fracode

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace fracode {

/// Dense matrix over F_p with exact Gaussian elimination.
class FpMat {
public:
    FpMat() : p_(2), rows_(0), cols_(0) {}
    FpMat(std::uint32_t p, std::size_t rows, std::size_t cols)
        : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static FpMat identity(std::uint32_t p, std::size_t n);
    static FpMat from_rows(std::uint32_t p, const std::vector<std::vector<std::uint32_t>>& rows,
                           std::size_t cols);

    std::uint32_t prime() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint32_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    std::uint32_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::vector<std::uint32_t> row(std::size_t r) const;
    void set_row(std::size_t r, const std::vector<std::uint32_t>& v);
    void append_row(const std::vector<std::uint32_t>& v);

    FpMat mul(const FpMat& o) const;
    FpMat transpose() const;
    FpMat vstack(const FpMat& o) const;
    /// Horizontal concatenation [this | o].
    FpMat hstack(const FpMat& o) const;
    bool is_zero() const;
    bool operator==(const FpMat& o) const = default;

    std::size_t rank() const;
    /// Reduced row echelon form; pivot column indices returned if requested.
    FpMat rref(std::vector<std::size_t>* pivots = nullptr) const;
    /// Basis of {x : A x = 0}.
    std::vector<std::vector<std::uint32_t>> kernel_basis() const;
    /// One solution of A x = b, if any.
    std::optional<std::vector<std::uint32_t>> solve(const std::vector<std::uint32_t>& b) const;
    std::optional<FpMat> inverse() const;
    std::uint32_t determinant() const;

private:
    std::uint32_t p_;
    std::size_t rows_, cols_;
    std::vector<std::uint32_t> a_;
};

/// Precomputed row-space of a matrix, for repeated membership and reduction
/// queries.
class RowSpan {
public:
    explicit RowSpan(const FpMat& m);

    std::size_t rank() const { return rref_.rows(); }
    std::uint32_t prime() const { return rref_.prime(); }
    std::size_t cols() const { return rref_.cols(); }

    bool contains(const std::vector<std::uint32_t>& v) const;
    /// v reduced modulo the row space (zero iff contained).
    std::vector<std::uint32_t> reduce(const std::vector<std::uint32_t>& v) const;
    const FpMat& basis() const { return rref_; }

private:
    FpMat rref_;                     // zero rows stripped
    std::vector<std::size_t> pivots_;
};

/// Incrementally grown row space with O(rank * cols) insertion.
class MutableSpan {
public:
    MutableSpan(std::uint32_t p, std::size_t cols) : p_(p), cols_(cols) {}

    /// Insert v; returns true iff v was independent of the current span.
    bool add(const std::vector<std::uint32_t>& v);
    bool contains(const std::vector<std::uint32_t>& v) const;
    std::size_t rank() const { return rows_.size(); }

private:
    std::vector<std::uint32_t> reduce(const std::vector<std::uint32_t>& v) const;
    std::uint32_t p_;
    std::size_t cols_;
    std::vector<std::vector<std::uint32_t>> rows_;  // each normalized with unit pivot
    std::vector<std::size_t> pivots_;
};

bool same_rowspace(const FpMat& a, const FpMat& b);

// spec-facing aliases
std::size_t rank_fp(const FpMat& m);
std::vector<std::vector<std::uint32_t>> kernel_fp(const FpMat& m);
std::optional<std::vector<std::uint32_t>> solve_fp(const FpMat& m, const std::vector<std::uint32_t>& b);
bool in_rowspace(const FpMat& m, const std::vector<std::uint32_t>& v);

}  // namespace fracode

#include "fracode/linalg.hpp"

#include <stdexcept>

#include "fracode/poly.hpp"

namespace fracode {

FpMat FpMat::identity(std::uint32_t p, std::size_t n) {
    FpMat m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FpMat FpMat::from_rows(std::uint32_t p, const std::vector<std::vector<std::uint32_t>>& rows,
                       std::size_t cols) {
    FpMat m(p, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
}

std::vector<std::uint32_t> FpMat::row(std::size_t r) const {
    return std::vector<std::uint32_t>(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_);
}

void FpMat::set_row(std::size_t r, const std::vector<std::uint32_t>& v) {
    if (v.size() != cols_) throw std::invalid_argument("FpMat::set_row: width mismatch");
    for (std::size_t c = 0; c < cols_; ++c) a_[r * cols_ + c] = v[c] % p_;
}

void FpMat::append_row(const std::vector<std::uint32_t>& v) {
    if (v.size() != cols_) throw std::invalid_argument("FpMat::append_row: width mismatch");
    for (auto x : v) a_.push_back(x % p_);
    ++rows_;
}

FpMat FpMat::mul(const FpMat& o) const {
    if (cols_ != o.rows_ || p_ != o.p_) throw std::invalid_argument("FpMat::mul: shape or prime mismatch");
    FpMat r(p_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            std::uint64_t aik = at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                r.at(i, j) = static_cast<std::uint32_t>((r.at(i, j) + aik * o.at(k, j)) % p_);
            }
        }
    }
    return r;
}

FpMat FpMat::transpose() const {
    FpMat r(p_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

FpMat FpMat::vstack(const FpMat& o) const {
    if (cols_ != o.cols_ || p_ != o.p_) throw std::invalid_argument("FpMat::vstack: shape or prime mismatch");
    FpMat r(p_, rows_ + o.rows_, cols_);
    r.a_ = a_;
    r.a_.insert(r.a_.end(), o.a_.begin(), o.a_.end());
    return r;
}

FpMat FpMat::hstack(const FpMat& o) const {
    if (rows_ != o.rows_ || p_ != o.p_) throw std::invalid_argument("FpMat::hstack: shape or prime mismatch");
    FpMat r(p_, rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
}

bool FpMat::is_zero() const {
    for (auto x : a_)
        if (x != 0) return false;
    return true;
}

FpMat FpMat::rref(std::vector<std::size_t>* pivots) const {
    FpMat m = *this;
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
        std::size_t sel = r;
        while (sel < rows_ && m.at(sel, c) == 0) ++sel;
        if (sel == rows_) continue;
        if (sel != r)
            for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(sel, j), m.at(r, j));
        std::uint64_t inv = fp_inv(m.at(r, c), p_);
        for (std::size_t j = 0; j < cols_; ++j)
            m.at(r, j) = static_cast<std::uint32_t>(m.at(r, j) * inv % p_);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            std::uint64_t f = m.at(i, c);
            if (f == 0) continue;
            std::uint64_t neg = p_ - f;
            for (std::size_t j = 0; j < cols_; ++j)
                m.at(i, j) = static_cast<std::uint32_t>((m.at(i, j) + neg * m.at(r, j)) % p_);
        }
        piv.push_back(c);
        ++r;
    }
    if (pivots) *pivots = piv;
    // strip zero rows
    FpMat out(p_, piv.size(), cols_);
    for (std::size_t i = 0; i < piv.size(); ++i) out.set_row(i, m.row(i));
    return out;
}

std::size_t FpMat::rank() const {
    return rref().rows();
}

std::vector<std::vector<std::uint32_t>> FpMat::kernel_basis() const {
    std::vector<std::size_t> piv;
    FpMat r = rref(&piv);
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t c = 0; c < cols_; ++c) {
        if (is_pivot[c]) continue;
        std::vector<std::uint32_t> v(cols_, 0);
        v[c] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) {
            std::uint32_t coef = r.at(i, c);
            if (coef != 0) v[piv[i]] = p_ - coef;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<std::uint32_t>> FpMat::solve(const std::vector<std::uint32_t>& b) const {
    if (b.size() != rows_) throw std::invalid_argument("FpMat::solve: rhs size mismatch");
    FpMat aug(p_, rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_) = b[i] % p_;
    }
    std::vector<std::size_t> piv;
    FpMat r = aug.rref(&piv);
    std::vector<std::uint32_t> x(cols_, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) {
        if (piv[i] == cols_) return std::nullopt;  // pivot in rhs column: inconsistent
        x[piv[i]] = r.at(i, cols_);
    }
    return x;
}

std::optional<FpMat> FpMat::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("FpMat::inverse: matrix not square");
    FpMat aug = hstack(identity(p_, rows_));
    std::vector<std::size_t> piv;
    FpMat r = aug.rref(&piv);
    if (piv.size() != rows_) return std::nullopt;
    for (std::size_t i = 0; i < rows_; ++i)
        if (piv[i] != i) return std::nullopt;
    FpMat inv(p_, rows_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < rows_; ++j) inv.at(i, j) = r.at(i, cols_ + j);
    return inv;
}

std::uint32_t FpMat::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("FpMat::determinant: matrix not square");
    FpMat m = *this;
    std::uint64_t det = 1;
    for (std::size_t c = 0; c < cols_; ++c) {
        std::size_t sel = c;
        while (sel < rows_ && m.at(sel, c) == 0) ++sel;
        if (sel == rows_) return 0;
        if (sel != c) {
            for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(sel, j), m.at(c, j));
            det = det * (p_ - 1) % p_;
        }
        det = det * m.at(c, c) % p_;
        std::uint64_t inv = fp_inv(m.at(c, c), p_);
        for (std::size_t i = c + 1; i < rows_; ++i) {
            std::uint64_t f = m.at(i, c) * inv % p_;
            if (f == 0) continue;
            std::uint64_t neg = p_ - f;
            for (std::size_t j = c; j < cols_; ++j)
                m.at(i, j) = static_cast<std::uint32_t>((m.at(i, j) + neg * m.at(c, j)) % p_);
        }
    }
    return static_cast<std::uint32_t>(det);
}

RowSpan::RowSpan(const FpMat& m) : rref_(m.rref(&pivots_)) {}

std::vector<std::uint32_t> RowSpan::reduce(const std::vector<std::uint32_t>& v) const {
    if (v.size() != rref_.cols()) throw std::invalid_argument("RowSpan::reduce: width mismatch");
    std::uint32_t p = rref_.prime();
    std::vector<std::uint32_t> w = v;
    for (auto& x : w) x %= p;
    for (std::size_t i = 0; i < rref_.rows(); ++i) {
        std::uint64_t f = w[pivots_[i]];
        if (f == 0) continue;
        std::uint64_t neg = p - f;
        for (std::size_t j = 0; j < w.size(); ++j)
            w[j] = static_cast<std::uint32_t>((w[j] + neg * rref_.at(i, j)) % p);
    }
    return w;
}

bool RowSpan::contains(const std::vector<std::uint32_t>& v) const {
    auto w = reduce(v);
    for (auto x : w)
        if (x != 0) return false;
    return true;
}

std::vector<std::uint32_t> MutableSpan::reduce(const std::vector<std::uint32_t>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("MutableSpan: width mismatch");
    std::vector<std::uint32_t> w = v;
    for (auto& x : w) x %= p_;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        std::uint64_t f = w[pivots_[i]];
        if (f == 0) continue;
        std::uint64_t neg = p_ - f;
        for (std::size_t j = 0; j < cols_; ++j)
            w[j] = static_cast<std::uint32_t>((w[j] + neg * rows_[i][j]) % p_);
    }
    return w;
}

bool MutableSpan::add(const std::vector<std::uint32_t>& v) {
    auto w = reduce(v);
    std::size_t piv = cols_;
    for (std::size_t j = 0; j < cols_; ++j)
        if (w[j] != 0) {
            piv = j;
            break;
        }
    if (piv == cols_) return false;
    std::uint64_t inv = fp_inv(w[piv], p_);
    for (auto& x : w) x = static_cast<std::uint32_t>(x * inv % p_);
    rows_.push_back(std::move(w));
    pivots_.push_back(piv);
    return true;
}

bool MutableSpan::contains(const std::vector<std::uint32_t>& v) const {
    auto w = reduce(v);
    for (auto x : w)
        if (x != 0) return false;
    return true;
}

bool same_rowspace(const FpMat& a, const FpMat& b) {
    if (a.cols() != b.cols() || a.prime() != b.prime()) return false;
    std::size_t ra = a.rank(), rb = b.rank();
    if (ra != rb) return false;
    return a.vstack(b).rank() == ra;
}

std::size_t rank_fp(const FpMat& m) { return m.rank(); }
std::vector<std::vector<std::uint32_t>> kernel_fp(const FpMat& m) { return m.kernel_basis(); }
std::optional<std::vector<std::uint32_t>> solve_fp(const FpMat& m, const std::vector<std::uint32_t>& b) {
    return m.solve(b);
}
bool in_rowspace(const FpMat& m, const std::vector<std::uint32_t>& v) {
    return RowSpan(m).contains(v);
}

}  // namespace fracode

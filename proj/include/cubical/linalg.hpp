#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace cubical {

/// Dense matrix over the rationals, row major.
struct QMat {
    int rows = 0;
    int cols = 0;
    std::vector<Rat> a;

    QMat() = default;
    QMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Rat(0)) {}

    Rat& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Rat& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static QMat identity(int n)
    {
        QMat m(n, n);
        for (int i = 0; i < n; ++i)
            m.at(i, i) = 1;
        return m;
    }

    QMat transposed() const
    {
        QMat t(cols, rows);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                t.at(c, r) = at(r, c);
        return t;
    }

    friend QMat operator*(const QMat& x, const QMat& y)
    {
        if (x.cols != y.rows)
            throw std::invalid_argument("matrix product: shape mismatch");
        QMat z(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                const Rat& v = x.at(i, k);
                if (v == 0)
                    continue;
                for (int j = 0; j < y.cols; ++j)
                    z.at(i, j) += v * y.at(k, j);
            }
        return z;
    }

    std::vector<Rat> apply(const std::vector<Rat>& v) const
    {
        if (static_cast<int>(v.size()) != cols)
            throw std::invalid_argument("matrix apply: shape mismatch");
        std::vector<Rat> out(rows, Rat(0));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                if (at(r, c) != 0)
                    out[r] += at(r, c) * v[c];
        return out;
    }

    bool is_zero() const
    {
        for (const auto& v : a)
            if (v != 0)
                return false;
        return true;
    }
};

/// Row echelon reduction (in place) with first-nonzero-column pivoting.
/// Returns the pivot columns.
inline std::vector<int> rref(QMat& m)
{
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int p = -1;
        for (int r = row; r < m.rows; ++r)
            if (m.at(r, col) != 0) {
                p = r;
                break;
            }
        if (p < 0)
            continue;
        if (p != row)
            for (int c = 0; c < m.cols; ++c)
                std::swap(m.at(p, c), m.at(row, c));
        Rat inv = Rat(1) / m.at(row, col);
        for (int c = col; c < m.cols; ++c)
            m.at(row, c) *= inv;
        for (int r = 0; r < m.rows; ++r) {
            if (r == row || m.at(r, col) == 0)
                continue;
            Rat f = m.at(r, col);
            for (int c = col; c < m.cols; ++c)
                m.at(r, c) -= f * m.at(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

/// Rank by fraction-free (Bareiss) elimination on the denominator-cleared
/// integer matrix; deterministic first-nonzero pivoting.
inline int rank(const QMat& m)
{
    if (m.rows == 0 || m.cols == 0)
        return 0;
    std::vector<std::vector<Int>> w(m.rows, std::vector<Int>(m.cols));
    for (int r = 0; r < m.rows; ++r) {
        Int lcm = 1;
        for (int c = 0; c < m.cols; ++c) {
            Int den = denominator(m.at(r, c));
            lcm = lcm / gcd(lcm, den) * den;
        }
        for (int c = 0; c < m.cols; ++c) {
            const Rat& q = m.at(r, c);
            w[r][c] = numerator(q) * (lcm / denominator(q));
        }
    }
    int rk = 0;
    Int prev = 1;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int p = -1;
        for (int r = row; r < m.rows; ++r)
            if (w[r][col] != 0) {
                p = r;
                break;
            }
        if (p < 0)
            continue;
        if (p != row)
            std::swap(w[p], w[row]);
        for (int r = row + 1; r < m.rows; ++r) {
            for (int c = col + 1; c < m.cols; ++c)
                w[r][c] = (w[row][col] * w[r][c] - w[r][col] * w[row][c]) / prev;
            w[r][col] = 0;
        }
        prev = w[row][col];
        ++rk;
        ++row;
    }
    return rk;
}

/// Basis of the null space of m (as column vectors).
inline std::vector<std::vector<Rat>> kernel_basis(const QMat& m)
{
    QMat w = m;
    std::vector<int> pivots = rref(w);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivots)
        is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free])
            continue;
        std::vector<Rat> v(m.cols, Rat(0));
        v[free] = 1;
        for (size_t k = 0; k < pivots.size(); ++k)
            v[pivots[k]] = -w.at(static_cast<int>(k), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of m x = b, if any.
inline std::optional<std::vector<Rat>> solve(const QMat& m, const std::vector<Rat>& b)
{
    if (static_cast<int>(b.size()) != m.rows)
        throw std::invalid_argument("solve: rhs length mismatch");
    QMat aug(m.rows, m.cols + 1);
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c)
            aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols) = b[r];
    }
    std::vector<int> pivots = rref(aug);
    for (int c : pivots)
        if (c == m.cols)
            return std::nullopt;  // inconsistent
    std::vector<Rat> x(m.cols, Rat(0));
    for (size_t k = 0; k < pivots.size(); ++k)
        x[pivots[k]] = aug.at(static_cast<int>(k), m.cols);
    return x;
}

/// Matrix whose columns are the given vectors.
inline QMat columns(const std::vector<std::vector<Rat>>& vecs, int dim)
{
    QMat m(dim, static_cast<int>(vecs.size()));
    for (size_t j = 0; j < vecs.size(); ++j)
        for (int i = 0; i < dim; ++i)
            m.at(i, static_cast<int>(j)) = vecs[j][i];
    return m;
}

/// Indices of a maximal independent subset of `candidates` modulo the span
/// of `base` (greedy, in order).
inline std::vector<int> extend_basis(const std::vector<std::vector<Rat>>& base,
                                     const std::vector<std::vector<Rat>>& candidates, int dim)
{
    std::vector<std::vector<Rat>> cur = base;
    std::vector<int> chosen;
    int r = rank(columns(cur, dim));
    for (size_t j = 0; j < candidates.size(); ++j) {
        cur.push_back(candidates[j]);
        int r2 = rank(columns(cur, dim));
        if (r2 > r) {
            chosen.push_back(static_cast<int>(j));
            r = r2;
        } else {
            cur.pop_back();
        }
    }
    return chosen;
}

}  // namespace cubical

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "exterior.hpp"
#include "polynomial.hpp"

namespace cubical {

/// Differential p-form on the n-cube with polynomial coefficients.
///
/// Coefficients are indexed by strictly increasing multi-indices of length p;
/// the zero form stores nothing.
class PolyForm {
public:
    PolyForm() : n_(0), p_(0) {}
    PolyForm(int n, int p) : n_(n), p_(p) {}

    static PolyForm zero(int n, int p) { return PolyForm(n, p); }

    /// Monomial form c(x) dx_{i1}^...^dx_{ip}. The index need not be sorted;
    /// the sign of the sorting permutation is absorbed into the coefficient.
    static PolyForm term(int n, const MultiIndex& idx, const Polynomial& coeff)
    {
        PolyForm w(n, static_cast<int>(idx.size()));
        MultiIndex sorted;
        int sign = 1;
        for (int v : idx) {
            auto [s, merged] = exterior::wedge_basis(sorted, MultiIndex{v});
            if (s == 0)
                return PolyForm(n, static_cast<int>(idx.size()));
            sign *= s;
            sorted = merged;
        }
        if (!exterior::valid_multi_index(sorted, n))
            throw std::invalid_argument("form term: index out of range");
        w.add(sorted, sign > 0 ? coeff : -coeff);
        return w;
    }

    int dim() const { return n_; }
    int degree() const { return p_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<MultiIndex, Polynomial>& coeffs() const { return coeffs_; }

    Polynomial coeff(const MultiIndex& idx) const
    {
        auto it = coeffs_.find(idx);
        return it == coeffs_.end() ? Polynomial(n_) : it->second;
    }

    void add(const MultiIndex& idx, const Polynomial& c)
    {
        if (c.is_zero())
            return;
        if (static_cast<int>(idx.size()) != p_)
            throw std::invalid_argument("form: wrong index length");
        auto it = coeffs_.find(idx);
        if (it == coeffs_.end()) {
            coeffs_.emplace(idx, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                coeffs_.erase(it);
        }
    }

    PolyForm operator-() const
    {
        PolyForm r(n_, p_);
        for (const auto& [i, c] : coeffs_)
            r.coeffs_.emplace(i, -c);
        return r;
    }

    PolyForm& operator+=(const PolyForm& o)
    {
        if (n_ != o.n_ || p_ != o.p_)
            throw std::invalid_argument("form sum: shape mismatch");
        for (const auto& [i, c] : o.coeffs_)
            add(i, c);
        return *this;
    }

    PolyForm& operator-=(const PolyForm& o) { return *this += -o; }

    friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
    friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }

    friend PolyForm operator*(const Polynomial& f, const PolyForm& w)
    {
        PolyForm r(w.n_, w.p_);
        for (const auto& [i, c] : w.coeffs_)
            r.add(i, f * c);
        return r;
    }

    friend bool operator==(const PolyForm& a, const PolyForm& b)
    {
        return a.n_ == b.n_ && a.p_ == b.p_ && a.coeffs_ == b.coeffs_;
    }

private:
    int n_;
    int p_;
    std::map<MultiIndex, Polynomial> coeffs_;
};

/// d(sum a_I dx_I) = sum da/dx_i dx_i ^ dx_I, degree p+1, exact.
inline PolyForm exterior_derivative(const PolyForm& w)
{
    PolyForm r(w.dim(), w.degree() + 1);
    for (const auto& [idx, c] : w.coeffs()) {
        for (int i = 1; i <= w.dim(); ++i) {
            Polynomial dc = c.derivative(i);
            if (dc.is_zero())
                continue;
            auto [sign, merged] = exterior::wedge_basis(MultiIndex{i}, idx);
            if (sign == 0)
                continue;
            r.add(merged, sign > 0 ? dc : -dc);
        }
    }
    return r;
}

/// Pullback along f: coefficients compose with f and pick up the p x p
/// Jacobian minors. Degrees above the source dimension collapse to zero.
inline PolyForm pullback(const PolyMap& f, const PolyForm& w)
{
    if (w.dim() != f.target_dim)
        throw std::invalid_argument("pullback: form lives on the wrong cube");
    int m = f.source_dim;
    int p = w.degree();
    PolyForm r(m, p);
    if (p > m)
        return r;
    if (p == 0) {
        for (const auto& [idx, c] : w.coeffs())
            r.add(idx, c.compose(f.components));
        return r;
    }
    // jac[i][j] = d f_{i+1} / d y_{j+1}
    std::vector<std::vector<Polynomial>> jac(f.target_dim, std::vector<Polynomial>(m));
    for (int i = 0; i < f.target_dim; ++i)
        for (int j = 0; j < m; ++j)
            jac[i][j] = f.components[i].derivative(j + 1);

    auto minor_det = [&](const MultiIndex& rows, const MultiIndex& cols) {
        // Laplace expansion; p is small here.
        auto rec = [&](auto&& self, std::vector<int> rs, std::vector<int> cs) -> Polynomial {
            if (rs.empty())
                return Polynomial::constant(m, 1);
            Polynomial det(m);
            int sign = 1;
            for (size_t k = 0; k < cs.size(); ++k) {
                const Polynomial& e = jac[rs[0] - 1][cs[k] - 1];
                if (!e.is_zero()) {
                    std::vector<int> rs2(rs.begin() + 1, rs.end());
                    std::vector<int> cs2;
                    for (size_t t = 0; t < cs.size(); ++t)
                        if (t != k)
                            cs2.push_back(cs[t]);
                    Polynomial sub = self(self, rs2, cs2);
                    det += (sign > 0) ? e * sub : -(e * sub);
                }
                sign = -sign;
            }
            return det;
        };
        return rec(rec, rows, cols);
    };

    for (const auto& target_idx : exterior::basis(m, p)) {
        Polynomial b(m);
        for (const auto& [src_idx, c] : w.coeffs()) {
            Polynomial det = minor_det(src_idx, target_idx);
            if (det.is_zero())
                continue;
            b += c.compose(f.components) * det;
        }
        if (!b.is_zero())
            r.add(target_idx, b);
    }
    return r;
}

inline PolyForm wedge(const PolyForm& a, const PolyForm& b)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("wedge: ambient dimension mismatch");
    PolyForm r(a.dim(), a.degree() + b.degree());
    for (const auto& [ia, ca] : a.coeffs())
        for (const auto& [ib, cb] : b.coeffs()) {
            auto [sign, merged] = exterior::wedge_basis(ia, ib);
            if (sign == 0)
                continue;
            Polynomial c = ca * cb;
            r.add(merged, sign > 0 ? c : -c);
        }
    return r;
}

/// Exact evaluation at a rational point; returns only nonzero entries.
inline std::map<MultiIndex, Rat> evaluate(const PolyForm& w, const Point& x)
{
    if (static_cast<int>(x.size()) != w.dim())
        throw std::invalid_argument("evaluate: wrong point length");
    std::map<MultiIndex, Rat> out;
    for (const auto& [idx, c] : w.coeffs()) {
        Rat v = c.eval(x);
        if (v != 0)
            out[idx] = v;
    }
    return out;
}

/// Integration over the first coordinate of I x cube: keeps only the part
/// with a dt factor, integrates its coefficients over t in [0,1], and
/// returns a (p-1)-form on the remaining cube.
inline PolyForm fiber_integrate(const PolyForm& w)
{
    if (w.dim() < 1)
        throw std::invalid_argument("fiber_integrate: no fiber coordinate");
    int n = w.dim() - 1;
    PolyForm r(n, w.degree() - 1);
    if (w.degree() < 1)
        return r;  // degree -1: identically zero
    for (const auto& [idx, c] : w.coeffs()) {
        if (idx.empty() || idx[0] != 1)
            continue;  // no dt factor
        MultiIndex rest;
        for (size_t k = 1; k < idx.size(); ++k)
            rest.push_back(idx[k] - 1);
        r.add(rest, c.integrate01(1));
    }
    return r;
}

/// Homotopy operator of a polynomial homotopy F : I x cube -> target.
/// Equals fiber integration of the pulled-back form.
inline PolyForm homotopy_operator(const PolyMap& F, const PolyForm& w)
{
    return fiber_integrate(pullback(F, w));
}

/// True iff pullback commutes with d for this pair, exactly.
inline bool check_naturality(const PolyMap& f, const PolyForm& w)
{
    return pullback(f, exterior_derivative(w)) == exterior_derivative(pullback(f, w));
}

}  // namespace cubical

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace cubical {

/// Face inclusion: inserts eps at slot i, sending the n-cube into the
/// (n+1)-cube. 1 <= i <= n+1.
inline Point apply_boundary(int n, int i, int eps, const Point& t)
{
    if (static_cast<int>(t.size()) != n)
        throw std::invalid_argument("apply_boundary: wrong point length");
    if (i < 1 || i > n + 1)
        throw std::invalid_argument("apply_boundary: index out of range");
    if (eps != 0 && eps != 1)
        throw std::invalid_argument("apply_boundary: eps must be 0 or 1");
    Point out;
    out.reserve(n + 1);
    for (int k = 0; k < i - 1; ++k)
        out.push_back(t[k]);
    out.push_back(eps);
    for (int k = i - 1; k < n; ++k)
        out.push_back(t[k]);
    return out;
}

/// Projection deleting slot i, sending the (n+1)-cube onto the n-cube.
inline Point apply_degeneracy(int n, int i, const Point& t)
{
    if (static_cast<int>(t.size()) != n + 1)
        throw std::invalid_argument("apply_degeneracy: wrong point length");
    if (i < 1 || i > n + 1)
        throw std::invalid_argument("apply_degeneracy: index out of range");
    Point out;
    out.reserve(n);
    for (int k = 0; k < n + 1; ++k)
        if (k != i - 1)
            out.push_back(t[k]);
    return out;
}

/// One generator of the cube category.
struct CubeGenerator {
    bool is_boundary;  // otherwise degeneracy
    int index;         // 1-based slot
    int eps;           // only for boundaries

    friend bool operator==(const CubeGenerator& a, const CubeGenerator& b)
    {
        return a.is_boundary == b.is_boundary && a.index == b.index &&
               (!a.is_boundary || a.eps == b.eps);
    }
};

/// Morphism of the cube category as a word of generators.
///
/// The word is stored outermost-first: word[0] is applied last. Equality is
/// decided by rewriting to a normal form (faces outside, projections inside,
/// with canonical index order) and, as a cross-check, pointwise on a
/// rational sample grid.
class CubeMorphism {
public:
    CubeMorphism(int source_dim, int target_dim, std::vector<CubeGenerator> word)
        : source_(source_dim), target_(target_dim), word_(std::move(word))
    {
        int d = source_;
        for (auto it = word_.rbegin(); it != word_.rend(); ++it) {
            if (it->is_boundary) {
                if (it->index < 1 || it->index > d + 1)
                    throw std::invalid_argument("cube morphism: face index out of range");
                ++d;
            } else {
                if (it->index < 1 || it->index > d)
                    throw std::invalid_argument("cube morphism: projection index out of range");
                --d;
            }
            if (d < 0)
                throw std::invalid_argument("cube morphism: negative dimension");
        }
        if (d != target_)
            throw std::invalid_argument("cube morphism: word does not reach target dimension");
    }

    static CubeMorphism identity(int n) { return CubeMorphism(n, n, {}); }

    static CubeMorphism boundary(int n, int i, int eps)
    {
        return CubeMorphism(n, n + 1, {CubeGenerator{true, i, eps}});
    }

    static CubeMorphism degeneracy(int n, int i)
    {
        return CubeMorphism(n + 1, n, {CubeGenerator{false, i, 0}});
    }

    int source_dim() const { return source_; }
    int target_dim() const { return target_; }
    const std::vector<CubeGenerator>& word() const { return word_; }

    Point apply(const Point& t) const
    {
        if (static_cast<int>(t.size()) != source_)
            throw std::invalid_argument("cube morphism: wrong point length");
        Point cur = t;
        int d = source_;
        for (auto it = word_.rbegin(); it != word_.rend(); ++it) {
            if (it->is_boundary) {
                cur = apply_boundary(d, it->index, it->eps, cur);
                ++d;
            } else {
                cur = apply_degeneracy(d - 1, it->index, cur);
                --d;
            }
        }
        return cur;
    }

    /// this after other.
    CubeMorphism after(const CubeMorphism& other) const
    {
        if (other.target_ != source_)
            throw std::invalid_argument("cube morphism compose: dimension mismatch");
        std::vector<CubeGenerator> w = word_;
        w.insert(w.end(), other.word_.begin(), other.word_.end());
        return CubeMorphism(other.source_, target_, std::move(w));
    }

    /// Normal form under the defining relations: all faces outermost with
    /// strictly decreasing slots (outer to inner), all projections innermost
    /// with strictly increasing slots.
    CubeMorphism normal_form() const
    {
        std::vector<CubeGenerator> w = word_;
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t k = 0; k + 1 < w.size(); ++k) {
                CubeGenerator& a = w[k];      // outer
                CubeGenerator& b = w[k + 1];  // inner, applied first
                if (!a.is_boundary && b.is_boundary) {
                    // projection after face
                    if (a.index == b.index) {
                        w.erase(w.begin() + k, w.begin() + k + 2);
                        changed = true;
                        break;
                    }
                    CubeGenerator face = b, proj = a;
                    if (b.index > a.index)
                        face.index = b.index - 1;
                    else
                        proj.index = a.index - 1;
                    w[k] = face;
                    w[k + 1] = proj;
                    changed = true;
                    break;
                }
                if (a.is_boundary && b.is_boundary && a.index <= b.index) {
                    // sort faces: make the outer slot strictly larger
                    CubeGenerator outer = b, inner = a;
                    outer.index = b.index + 1;
                    w[k] = outer;
                    w[k + 1] = inner;
                    changed = true;
                    break;
                }
                if (!a.is_boundary && !b.is_boundary && a.index >= b.index) {
                    // sort projections: make the outer slot strictly smaller
                    CubeGenerator outer = b, inner = a;
                    inner.index = a.index + 1;
                    w[k] = outer;
                    w[k + 1] = inner;
                    changed = true;
                    break;
                }
            }
        }
        return CubeMorphism(source_, target_, std::move(w));
    }

    /// Extensional equality on the full denominator-8 grid of the source cube.
    bool agrees_on_grid(const CubeMorphism& other, int denominator = 8) const;

    friend bool operator==(const CubeMorphism& a, const CubeMorphism& b)
    {
        if (a.source_ != b.source_ || a.target_ != b.target_)
            return false;
        return a.normal_form().word() == b.normal_form().word();
    }

private:
    int source_;
    int target_;
    std::vector<CubeGenerator> word_;
};

/// All points of the n-cube with coordinates k/denominator.
inline std::vector<Point> sample_grid(int n, int denominator)
{
    std::vector<Point> pts;
    Point cur(n);
    auto rec = [&](auto&& self, int k) -> void {
        if (k == n) {
            pts.push_back(cur);
            return;
        }
        for (int v = 0; v <= denominator; ++v) {
            cur[k] = Rat(v, denominator);
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    return pts;
}

inline bool CubeMorphism::agrees_on_grid(const CubeMorphism& other, int denominator) const
{
    if (source_ != other.source_ || target_ != other.target_)
        return false;
    for (const Point& t : sample_grid(source_, denominator))
        if (apply(t) != other.apply(t))
            return false;
    return true;
}

/// Result of sweeping the four defining relations through all instances
/// with every dimension <= max_dim.
struct RelationReport {
    long instances = 0;
    long violations = 0;
    std::vector<std::string> failures;

    bool ok() const { return violations == 0; }
};

/// Checks relations (face-face, proj-proj, face-proj, proj-face) pointwise on
/// the denominator-8 grid, exhaustively over index ranges.
inline RelationReport check_relations(int max_dim, int denominator = 8)
{
    if (max_dim < 1)
        throw std::invalid_argument("check_relations: max_dim must be >= 1");
    RelationReport rep;
    auto record = [&](bool ok, const std::string& what) {
        ++rep.instances;
        if (!ok) {
            ++rep.violations;
            if (rep.failures.size() < 32)
                rep.failures.push_back(what);
        }
    };

    // face after face: both composites n -> n+2
    for (int n = 0; n + 2 <= max_dim; ++n)
        for (int i = 1; i <= n + 1; ++i)
            for (int j = 1; j <= n + 2; ++j)
                for (int ei = 0; ei <= 1; ++ei)
                    for (int ej = 0; ej <= 1; ++ej) {
                        auto lhs = CubeMorphism::boundary(n + 1, j, ej)
                                       .after(CubeMorphism::boundary(n, i, ei));
                        CubeMorphism rhs = (i < j)
                            ? CubeMorphism::boundary(n + 1, i, ei)
                                  .after(CubeMorphism::boundary(n, j - 1, ej))
                            : CubeMorphism::boundary(n + 1, i + 1, ei)
                                  .after(CubeMorphism::boundary(n, j, ej));
                        record(lhs.agrees_on_grid(rhs, denominator),
                               "face-face n=" + std::to_string(n) + " i=" + std::to_string(i) +
                                   " j=" + std::to_string(j));
                    }

    // projection after projection: both composites n+2 -> n
    for (int n = 0; n + 2 <= max_dim; ++n)
        for (int i = 1; i <= n + 2; ++i)
            for (int j = 1; j <= n + 1; ++j) {
                auto lhs = CubeMorphism::degeneracy(n, j).after(CubeMorphism::degeneracy(n + 1, i));
                CubeMorphism rhs = (i <= j)
                    ? CubeMorphism::degeneracy(n, i).after(CubeMorphism::degeneracy(n + 1, j + 1))
                    : CubeMorphism::degeneracy(n, i - 1).after(CubeMorphism::degeneracy(n + 1, j));
                record(lhs.agrees_on_grid(rhs, denominator),
                       "proj-proj n=" + std::to_string(n) + " i=" + std::to_string(i) +
                           " j=" + std::to_string(j));
            }

    // face after projection: n+1 -> n+1 (right side passes through n+2)
    for (int n = 0; n + 2 <= max_dim; ++n)
        for (int i = 1; i <= n + 1; ++i)
            for (int j = 1; j <= n + 1; ++j)
                for (int ej = 0; ej <= 1; ++ej) {
                    auto lhs = CubeMorphism::boundary(n, j, ej)
                                   .after(CubeMorphism::degeneracy(n, i));
                    CubeMorphism rhs = (i >= j)
                        ? CubeMorphism::degeneracy(n + 1, i + 1)
                              .after(CubeMorphism::boundary(n + 1, j, ej))
                        : CubeMorphism::degeneracy(n + 1, i)
                              .after(CubeMorphism::boundary(n + 1, j + 1, ej));
                    record(lhs.agrees_on_grid(rhs, denominator),
                           "face-proj n=" + std::to_string(n) + " i=" + std::to_string(i) +
                               " j=" + std::to_string(j));
                }

    // projection after face: n -> n, including the identity case
    for (int n = 0; n + 1 <= max_dim; ++n)
        for (int i = 1; i <= n + 1; ++i)
            for (int j = 1; j <= n + 1; ++j)
                for (int ei = 0; ei <= 1; ++ei) {
                    auto lhs = CubeMorphism::degeneracy(n, j).after(CubeMorphism::boundary(n, i, ei));
                    CubeMorphism rhs = CubeMorphism::identity(n);
                    if (i > j)
                        rhs = CubeMorphism::boundary(n - 1, i - 1, ei)
                                  .after(CubeMorphism::degeneracy(n - 1, j));
                    else if (i < j)
                        rhs = CubeMorphism::boundary(n - 1, i, ei)
                                  .after(CubeMorphism::degeneracy(n - 1, j - 1));
                    record(lhs.agrees_on_grid(rhs, denominator),
                           "proj-face n=" + std::to_string(n) + " i=" + std::to_string(i) +
                               " j=" + std::to_string(j));
                }

    return rep;
}

}  // namespace cubical

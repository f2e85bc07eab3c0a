#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace cubical {

/// Affine map x -> M x + offset with rational entries.
struct AffMap {
    QMat linear;
    Point offset;

    AffMap() = default;
    AffMap(QMat m, Point o) : linear(std::move(m)), offset(std::move(o)) {}

    static AffMap identity(int n) { return AffMap(QMat::identity(n), Point(n, Rat(0))); }

    static AffMap translation(const Point& v)
    {
        return AffMap(QMat::identity(static_cast<int>(v.size())), v);
    }

    int source_dim() const { return linear.cols; }
    int target_dim() const { return linear.rows; }

    Point apply(const Point& x) const
    {
        Point y = linear.apply(std::vector<Rat>(x.begin(), x.end()));
        for (size_t i = 0; i < y.size(); ++i)
            y[i] += offset[i];
        return y;
    }

    /// this after other.
    AffMap after(const AffMap& other) const
    {
        AffMap r;
        r.linear = linear * other.linear;
        r.offset = linear.apply(other.offset);
        for (size_t i = 0; i < r.offset.size(); ++i)
            r.offset[i] += offset[i];
        return r;
    }

    PolyMap as_polymap() const
    {
        std::vector<Polynomial> comps;
        for (int r = 0; r < linear.rows; ++r) {
            Polynomial p = Polynomial::constant(linear.cols, offset[r]);
            for (int c = 0; c < linear.cols; ++c)
                if (linear.at(r, c) != 0)
                    p += linear.at(r, c) * Polynomial::variable(linear.cols, c + 1);
            comps.push_back(p);
        }
        return PolyMap(linear.cols, linear.rows, std::move(comps));
    }
};

/// Inverse of a square invertible affine map.
inline AffMap inverse(const AffMap& g)
{
    int n = g.linear.rows;
    if (n != g.linear.cols)
        throw std::invalid_argument("affine inverse: not square");
    QMat aug(n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c)
            aug.at(r, c) = g.linear.at(r, c);
        aug.at(r, n + r) = 1;
    }
    auto pivots = rref(aug);
    if (static_cast<int>(pivots.size()) != n)
        throw std::invalid_argument("affine inverse: singular linear part");
    QMat inv(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            inv.at(r, c) = aug.at(r, n + c);
    Point off = inv.apply(g.offset);
    for (auto& v : off)
        v = -v;
    return AffMap(inv, off);
}

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

class CubicSet;
using Cell = std::shared_ptr<const CubicSet>;

/// A cubic set: an axis-aligned (possibly degenerate) box, a cone over a
/// cubic set from an apex outside its hyperplane, or a prism raised from a
/// cubic set lying in a coordinate hyperplane. Nodes are immutable; all
/// metric queries go through vertices and the chart.
class CubicSet {
public:
    enum class Kind { Box, Cone, Prism };

    struct Interval {
        Rat lo, hi;
        bool degenerate() const { return lo == hi; }
        friend bool operator==(const Interval& a, const Interval& b)
        {
            return a.lo == b.lo && a.hi == b.hi;
        }
    };

    Kind kind = Kind::Box;
    std::vector<Interval> intervals;  // Box
    Cell base;                        // Cone and Prism
    Point apex;                       // Cone
    int axis = 0;                     // Prism: 1-based ambient axis
    Rat lo, hi;                       // Prism extent along axis

    int dim = 0;
    int ambient = 0;
    std::vector<Point> verts;  // sorted

    Point barycenter() const
    {
        Point c(ambient, Rat(0));
        for (const auto& v : verts)
            for (int i = 0; i < ambient; ++i)
                c[i] += v[i];
        for (int i = 0; i < ambient; ++i)
            c[i] /= Rat(static_cast<long long>(verts.size()));
        return c;
    }
};

/// Canonical identity of a cell: dimension plus sorted vertex set. Two
/// constructions of the same convex polytope share a key.
struct CellKey {
    int dim = 0;
    std::vector<Point> verts;

    friend bool operator<(const CellKey& a, const CellKey& b)
    {
        if (a.dim != b.dim)
            return a.dim < b.dim;
        return a.verts < b.verts;
    }
    friend bool operator==(const CellKey& a, const CellKey& b)
    {
        return a.dim == b.dim && a.verts == b.verts;
    }
};

inline CellKey key_of(const Cell& c) { return CellKey{c->dim, c->verts}; }

inline Cell make_box(const std::vector<CubicSet::Interval>& intervals)
{
    auto node = std::make_shared<CubicSet>();
    node->kind = CubicSet::Kind::Box;
    node->intervals = intervals;
    node->ambient = static_cast<int>(intervals.size());
    for (const auto& iv : intervals) {
        if (iv.lo > iv.hi)
            throw GeometryError("box: empty interval");
        if (!iv.degenerate())
            ++node->dim;
    }
    Point cur(node->ambient);
    auto rec = [&](auto&& self, int k) -> void {
        if (k == node->ambient) {
            node->verts.push_back(cur);
            return;
        }
        cur[k] = intervals[k].lo;
        self(self, k + 1);
        if (!intervals[k].degenerate()) {
            cur[k] = intervals[k].hi;
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    std::sort(node->verts.begin(), node->verts.end());
    return node;
}

inline Cell make_vertex(const Point& p)
{
    std::vector<CubicSet::Interval> iv;
    for (const auto& v : p)
        iv.push_back({v, v});
    return make_box(iv);
}

/// Orthonormal-free affine hull data: base vertex plus an independent set of
/// edge directions spanning the hull.
struct AffineHull {
    Point origin;
    std::vector<Point> span;  // independent directions

    int dim() const { return static_cast<int>(span.size()); }
};

inline AffineHull affine_hull(const std::vector<Point>& verts)
{
    AffineHull h;
    h.origin = verts.at(0);
    int n = static_cast<int>(h.origin.size());
    std::vector<std::vector<Rat>> dirs;
    for (size_t k = 1; k < verts.size(); ++k)
        dirs.push_back(sub(verts[k], h.origin));
    auto chosen = extend_basis({}, dirs, n);
    for (int j : chosen)
        h.span.push_back(Point(dirs[j].begin(), dirs[j].end()));
    return h;
}

/// Orthogonal projection of x onto the hull; second component is the
/// squared distance from x to the hull.
inline std::pair<Point, Rat> project_to_hull(const AffineHull& h, const Point& x)
{
    if (h.span.empty())
        return {h.origin, dist2(x, h.origin)};
    int k = h.dim();
    QMat gram(k, k);
    std::vector<Rat> rhs(k);
    Point d = sub(x, h.origin);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            gram.at(i, j) = dot(h.span[i], h.span[j]);
        rhs[i] = dot(h.span[i], d);
    }
    auto sol = solve(gram, rhs);
    Point p = h.origin;
    for (int i = 0; i < k; ++i)
        for (size_t c = 0; c < p.size(); ++c)
            p[c] += (*sol)[i] * h.span[i][c];
    return {p, dist2(x, p)};
}

inline bool in_hull(const AffineHull& h, const Point& x)
{
    auto [p, d2] = project_to_hull(h, x);
    return d2 == 0;
}

std::vector<Cell> proper_faces(const Cell& c);

/// Facets = proper faces of codimension one.
inline std::vector<Cell> facets_of(const Cell& c)
{
    std::vector<Cell> out;
    for (const auto& f : proper_faces(c))
        if (f->dim == c->dim - 1)
            out.push_back(f);
    return out;
}

/// Exact membership test for a point in the closed cell.
inline bool cell_contains(const Cell& c, const Point& x)
{
    if (static_cast<int>(x.size()) != c->ambient)
        throw std::invalid_argument("cell_contains: wrong point length");
    if (c->dim == 0)
        return x == c->verts[0];
    AffineHull hull = affine_hull(c->verts);
    if (!in_hull(hull, x))
        return false;
    Point centroid = c->barycenter();
    for (const auto& f : facets_of(c)) {
        AffineHull fh = affine_hull(f->verts);
        auto [pc, dc] = project_to_hull(fh, centroid);
        Point normal = sub(centroid, pc);  // inward
        if (dot(sub(x, f->verts[0]), normal) < 0)
            return false;
    }
    return true;
}

/// Exact squared Euclidean distance from a point to the closed cell.
inline Rat cell_dist2(const Cell& c, const Point& x)
{
    if (c->dim == 0)
        return dist2(x, c->verts[0]);
    AffineHull hull = affine_hull(c->verts);
    auto [proj, d2] = project_to_hull(hull, x);
    if (cell_contains(c, proj))
        return d2;
    Rat best = -1;
    for (const auto& f : facets_of(c)) {
        Rat d = cell_dist2(f, proj);
        if (best < 0 || d < best)
            best = d;
    }
    return d2 + best;
}

inline Rat cell_cell_dist2_vertexwise(const Cell& a, const Cell& b)
{
    // max over nothing here: this is the min distance sampled at vertices of
    // a against the full cell b; exact when a is a point, conservative above.
    Rat best = -1;
    for (const auto& v : a->verts) {
        Rat d = cell_dist2(b, v);
        if (best < 0 || d < best)
            best = d;
    }
    return best;
}

inline Cell make_cone(const Cell& base, const Point& apex)
{
    if (!base)
        return make_vertex(apex);
    if (static_cast<int>(apex.size()) != base->ambient)
        throw std::invalid_argument("cone: apex dimension mismatch");
    if (in_hull(affine_hull(base->verts), apex))
        throw GeometryError("cone: apex lies in the base hyperplane");
    auto node = std::make_shared<CubicSet>();
    node->kind = CubicSet::Kind::Cone;
    node->base = base;
    node->apex = apex;
    node->ambient = base->ambient;
    node->dim = base->dim + 1;
    node->verts = base->verts;
    node->verts.push_back(apex);
    std::sort(node->verts.begin(), node->verts.end());
    node->verts.erase(std::unique(node->verts.begin(), node->verts.end()), node->verts.end());
    return node;
}

inline Cell make_prism(const Cell& base, int axis, const Rat& lo, const Rat& hi)
{
    if (axis < 1 || axis > base->ambient)
        throw std::invalid_argument("prism: axis out of range");
    if (lo >= hi)
        throw std::invalid_argument("prism: empty extent");
    for (const auto& v : base->verts)
        if (v[axis - 1] != lo)
            throw std::invalid_argument("prism: base not in the starting hyperplane");
    auto node = std::make_shared<CubicSet>();
    node->kind = CubicSet::Kind::Prism;
    node->base = base;
    node->axis = axis;
    node->lo = lo;
    node->hi = hi;
    node->ambient = base->ambient;
    node->dim = base->dim + 1;
    node->verts = base->verts;
    for (const auto& v : base->verts) {
        Point w = v;
        w[axis - 1] = hi;
        node->verts.push_back(w);
    }
    std::sort(node->verts.begin(), node->verts.end());
    return node;
}

/// Translation of a cell; folds into the constructor tree.
inline Cell shift_cell(const Cell& c, const Point& v)
{
    switch (c->kind) {
    case CubicSet::Kind::Box: {
        std::vector<CubicSet::Interval> iv = c->intervals;
        for (size_t i = 0; i < iv.size(); ++i) {
            iv[i].lo += v[i];
            iv[i].hi += v[i];
        }
        return make_box(iv);
    }
    case CubicSet::Kind::Cone:
        return make_cone(shift_cell(c->base, v), add(c->apex, v));
    case CubicSet::Kind::Prism:
    default:
        return make_prism(shift_cell(c->base, v), c->axis, c->lo + v[c->axis - 1],
                          c->hi + v[c->axis - 1]);
    }
}

/// Raises a cell into one more ambient dimension by inserting coordinate
/// `axis` (1-based in the new ambient space) with a fixed value.
inline Cell embed_cell(const Cell& c, int axis, const Rat& value)
{
    switch (c->kind) {
    case CubicSet::Kind::Box: {
        std::vector<CubicSet::Interval> iv;
        for (int i = 0, src = 0; i < c->ambient + 1; ++i) {
            if (i == axis - 1)
                iv.push_back({value, value});
            else
                iv.push_back(c->intervals[src++]);
        }
        return make_box(iv);
    }
    case CubicSet::Kind::Cone: {
        Point a = c->apex;
        a.insert(a.begin() + (axis - 1), value);
        return make_cone(embed_cell(c->base, axis, value), a);
    }
    case CubicSet::Kind::Prism:
    default: {
        int new_axis = c->axis + (axis <= c->axis ? 1 : 0);
        return make_prism(embed_cell(c->base, axis, value), new_axis, c->lo, c->hi);
    }
    }
}

/// Image of a cell under an affine map whose linear part is a signed
/// permutation (the identification maps of cell models).
inline Cell transform_cell(const Cell& c, const AffMap& g)
{
    int n = c->ambient;
    // column image: g maps e_j to sgn * e_row
    std::vector<int> row_of(n, -1);
    std::vector<int> sgn(n, 1);
    for (int j = 0; j < n; ++j) {
        int found = -1;
        for (int r = 0; r < n; ++r) {
            const Rat& v = g.linear.at(r, j);
            if (v == 0)
                continue;
            if (found >= 0 || (v != 1 && v != -1))
                throw GeometryError("transform_cell: not a signed permutation");
            found = r;
            sgn[j] = (v == 1) ? 1 : -1;
        }
        if (found < 0)
            throw GeometryError("transform_cell: singular linear part");
        row_of[j] = found;
    }
    switch (c->kind) {
    case CubicSet::Kind::Box: {
        std::vector<CubicSet::Interval> iv(n);
        for (int j = 0; j < n; ++j) {
            Rat a = Rat(sgn[j]) * c->intervals[j].lo + g.offset[row_of[j]];
            Rat b = Rat(sgn[j]) * c->intervals[j].hi + g.offset[row_of[j]];
            iv[row_of[j]] = {std::min(a, b), std::max(a, b)};
        }
        return make_box(iv);
    }
    case CubicSet::Kind::Cone:
        return make_cone(transform_cell(c->base, g), g.apply(c->apex));
    case CubicSet::Kind::Prism:
    default: {
        int j = c->axis - 1;
        Rat a = Rat(sgn[j]) * c->lo + g.offset[row_of[j]];
        Rat b = Rat(sgn[j]) * c->hi + g.offset[row_of[j]];
        return make_prism(transform_cell(c->base, g), row_of[j] + 1, std::min(a, b),
                          std::max(a, b));
    }
    }
}

/// Characteristic map of the cell: affine for boxes, the join map for
/// cones (cone parameter first, 1 at the base), base-then-height for prisms.
inline PolyMap char_map(const Cell& c)
{
    int q = c->dim;
    int n = c->ambient;
    switch (c->kind) {
    case CubicSet::Kind::Box: {
        std::vector<Polynomial> comps;
        int var = 0;
        for (int i = 0; i < n; ++i) {
            const auto& iv = c->intervals[i];
            if (iv.degenerate()) {
                comps.push_back(Polynomial::constant(q, iv.lo));
            } else {
                ++var;
                comps.push_back(Polynomial::constant(q, iv.lo) +
                                (iv.hi - iv.lo) * Polynomial::variable(q, var));
            }
        }
        return PolyMap(q, n, std::move(comps));
    }
    case CubicSet::Kind::Cone: {
        PolyMap base = char_map(c->base);
        // (t, x) -> t * base(x) + (1 - t) * apex
        Polynomial t = Polynomial::variable(q, 1);
        std::vector<Polynomial> lifted;  // base components in the cone chart vars
        for (const auto& comp : base.components) {
            lifted.push_back(comp.insert_var(1));
        }
        std::vector<Polynomial> comps;
        for (int i = 0; i < n; ++i) {
            Polynomial one_minus_t = Polynomial::constant(q, 1) - t;
            comps.push_back(t * lifted[i] + c->apex[i] * one_minus_t);
        }
        return PolyMap(q, n, std::move(comps));
    }
    case CubicSet::Kind::Prism:
    default: {
        PolyMap base = char_map(c->base);
        std::vector<Polynomial> comps;
        for (int i = 0; i < n; ++i) {
            Polynomial comp = base.components[i].insert_var(q);  // height var last
            if (i == c->axis - 1)
                comp += (c->hi - c->lo) * Polynomial::variable(q, q);
            comps.push_back(comp);
        }
        return PolyMap(q, n, std::move(comps));
    }
    }
}

/// Geometric image of the chart facet {x_k = eps}; its dimension may drop
/// (cone tips), in which case it is not a boundary facet.
inline Cell facet_image(const Cell& c, int k, int eps)
{
    switch (c->kind) {
    case CubicSet::Kind::Box: {
        int var = 0;
        for (int i = 0; i < c->ambient; ++i) {
            if (c->intervals[i].degenerate())
                continue;
            ++var;
            if (var == k) {
                auto iv = c->intervals;
                Rat v = eps == 0 ? iv[i].lo : iv[i].hi;
                iv[i] = {v, v};
                return make_box(iv);
            }
        }
        throw std::invalid_argument("facet_image: chart axis out of range");
    }
    case CubicSet::Kind::Cone: {
        if (k == 1)
            return eps == 0 ? make_vertex(c->apex) : c->base;
        return make_cone(facet_image(c->base, k - 1, eps), c->apex);
    }
    case CubicSet::Kind::Prism:
    default: {
        if (k == c->dim) {
            if (eps == 0)
                return c->base;
            Point v(c->ambient, Rat(0));
            v[c->axis - 1] = c->hi - c->lo;
            return shift_cell(c->base, v);
        }
        return make_prism(facet_image(c->base, k, eps), c->axis, c->lo, c->hi);
    }
    }
}

inline std::vector<Cell> dedup_cells(std::vector<Cell> cells)
{
    std::sort(cells.begin(), cells.end(),
              [](const Cell& a, const Cell& b) { return key_of(a) < key_of(b); });
    cells.erase(std::unique(cells.begin(), cells.end(),
                            [](const Cell& a, const Cell& b) { return key_of(a) == key_of(b); }),
                cells.end());
    return cells;
}

/// All proper faces (every codimension, no empty set).
inline std::vector<Cell> proper_faces(const Cell& c)
{
    std::vector<Cell> out;
    switch (c->kind) {
    case CubicSet::Kind::Box: {
        // fix any nonempty subset of free axes at an endpoint
        std::vector<int> free_axes;
        for (int i = 0; i < c->ambient; ++i)
            if (!c->intervals[i].degenerate())
                free_axes.push_back(i);
        int m = static_cast<int>(free_axes.size());
        std::vector<int> choice(m, 0);  // 0 free, 1 lo, 2 hi
        auto rec = [&](auto&& self, int k) -> void {
            if (k == m) {
                bool all_free = true;
                auto iv = c->intervals;
                for (int t = 0; t < m; ++t) {
                    if (choice[t] == 0)
                        continue;
                    all_free = false;
                    auto& slot = iv[free_axes[t]];
                    Rat v = choice[t] == 1 ? slot.lo : slot.hi;
                    slot = {v, v};
                }
                if (!all_free)
                    out.push_back(make_box(iv));
                return;
            }
            for (int v = 0; v <= 2; ++v) {
                choice[k] = v;
                self(self, k + 1);
            }
        };
        rec(rec, 0);
        break;
    }
    case CubicSet::Kind::Cone: {
        out.push_back(c->base);
        out.push_back(make_vertex(c->apex));
        for (const auto& f : proper_faces(c->base)) {
            out.push_back(f);
            out.push_back(make_cone(f, c->apex));
        }
        break;
    }
    case CubicSet::Kind::Prism:
    default: {
        Point v(c->ambient, Rat(0));
        v[c->axis - 1] = c->hi - c->lo;
        out.push_back(c->base);
        out.push_back(shift_cell(c->base, v));
        for (const auto& f : proper_faces(c->base)) {
            out.push_back(f);
            out.push_back(shift_cell(f, v));
            out.push_back(make_prism(f, c->axis, c->lo, c->hi));
        }
        break;
    }
    }
    return dedup_cells(std::move(out));
}

/// The q-dimensional measure of a q-cell in ambient dimension q, via the
/// chart Jacobian; exact.
inline Rat cell_volume(const Cell& c)
{
    int q = c->dim;
    if (q == 0)
        return 1;
    if (q != c->ambient)
        throw std::invalid_argument("cell_volume: cell is not full-dimensional");
    PolyMap chart = char_map(c);
    // symbolic Jacobian determinant
    std::vector<std::vector<Polynomial>> jac(q, std::vector<Polynomial>(q));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            jac[i][j] = chart.components[i].derivative(j + 1);
    auto det = [&](auto&& self, std::vector<int> rows, std::vector<int> cols) -> Polynomial {
        if (rows.empty())
            return Polynomial::constant(q, 1);
        Polynomial d(q);
        int sign = 1;
        for (size_t k = 0; k < cols.size(); ++k) {
            const Polynomial& e = jac[rows[0]][cols[k]];
            if (!e.is_zero()) {
                std::vector<int> rs(rows.begin() + 1, rows.end());
                std::vector<int> cs;
                for (size_t t = 0; t < cols.size(); ++t)
                    if (t != k)
                        cs.push_back(cols[t]);
                Polynomial sub = self(self, rs, cs);
                d += (sign > 0) ? e * sub : -(e * sub);
            }
            sign = -sign;
        }
        return d;
    };
    std::vector<int> idx(q);
    for (int i = 0; i < q; ++i)
        idx[i] = i;
    Polynomial jd = det(det, idx, idx);
    Point center(q, Rat(1, 2));
    bool negative = jd.eval(center) < 0;
    Polynomial cur = negative ? -jd : jd;
    for (int v = q; v >= 1; --v)
        cur = cur.integrate01(v);
    return cur.constant_value();
}

}  // namespace cubical

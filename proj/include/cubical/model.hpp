#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "complex.hpp"

namespace cubical {

struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Result of transporting a cell along a signed-permutation affine map:
/// the image cell plus the orientation sign of the induced chart transition
/// (char_map(image) o R = g o char_map(cell) with det R of this sign).
struct TransformedCell {
    Cell cell;
    int sign = 1;
};

inline TransformedCell transform_cell_signed(const Cell& c, const AffMap& g)
{
    int n = c->ambient;
    std::vector<int> row_of(n, -1);
    std::vector<int> sgn(n, 1);
    for (int j = 0; j < n; ++j) {
        int found = -1;
        for (int r = 0; r < n; ++r) {
            const Rat& v = g.linear.at(r, j);
            if (v == 0)
                continue;
            if (found >= 0 || (v != 1 && v != -1))
                throw ModelError("identification is not a signed permutation");
            found = r;
            sgn[j] = (v == 1) ? 1 : -1;
        }
        if (found < 0)
            throw ModelError("identification has a singular linear part");
        row_of[j] = found;
    }
    switch (c->kind) {
    case CubicSet::Kind::Box: {
        std::vector<CubicSet::Interval> iv(n);
        std::vector<int> free_axes;
        int flips = 0;
        for (int j = 0; j < n; ++j) {
            Rat a = Rat(sgn[j]) * c->intervals[j].lo + g.offset[row_of[j]];
            Rat b = Rat(sgn[j]) * c->intervals[j].hi + g.offset[row_of[j]];
            iv[row_of[j]] = {std::min(a, b), std::max(a, b)};
            if (!c->intervals[j].degenerate()) {
                free_axes.push_back(row_of[j]);
                if (sgn[j] < 0)
                    ++flips;
            }
        }
        // parity of the induced permutation of chart variables
        int inversions = 0;
        for (size_t i = 0; i < free_axes.size(); ++i)
            for (size_t j = i + 1; j < free_axes.size(); ++j)
                if (free_axes[i] > free_axes[j])
                    ++inversions;
        int sign = ((inversions + flips) % 2 == 0) ? 1 : -1;
        return {make_box(iv), sign};
    }
    case CubicSet::Kind::Cone: {
        TransformedCell b = transform_cell_signed(c->base, g);
        return {make_cone(b.cell, g.apply(c->apex)), b.sign};
    }
    case CubicSet::Kind::Prism:
    default: {
        TransformedCell b = transform_cell_signed(c->base, g);
        int j = c->axis - 1;
        Rat a = Rat(sgn[j]) * c->lo + g.offset[row_of[j]];
        Rat bb = Rat(sgn[j]) * c->hi + g.offset[row_of[j]];
        Cell out = make_prism(b.cell, row_of[j] + 1, std::min(a, bb), std::max(a, bb));
        return {out, sgn[j] < 0 ? -b.sign : b.sign};
    }
    }
}

/// Affine chart data A x + c of a cell whose characteristic map is affine.
struct AffineChart {
    QMat linear;  // ambient x dim
    Point offset;
};

inline std::optional<AffineChart> affine_chart(const Cell& c)
{
    PolyMap chart = char_map(c);
    if (!chart.is_affine())
        return std::nullopt;
    AffineChart out;
    out.linear = QMat(c->ambient, c->dim);
    out.offset = Point(c->ambient, Rat(0));
    for (int i = 0; i < c->ambient; ++i) {
        Point zero(c->dim, Rat(0));
        out.offset[i] = chart.components[i].eval(zero);
        for (int j = 0; j < c->dim; ++j) {
            Point e(c->dim, Rat(0));
            e[j] = 1;
            out.linear.at(i, j) = chart.components[i].eval(e) - out.offset[i];
        }
    }
    return out;
}

/// Left inverse of an injective affine chart: chart coordinates of an
/// ambient point on the cell, via normal equations.
inline AffMap chart_left_inverse(const AffineChart& ch)
{
    int q = ch.linear.cols;
    QMat gram = ch.linear.transposed() * ch.linear;
    QMat aug(q, q + ch.linear.rows);
    for (int r = 0; r < q; ++r) {
        for (int c = 0; c < q; ++c)
            aug.at(r, c) = gram.at(r, c);
        for (int c = 0; c < ch.linear.rows; ++c)
            aug.at(r, q + c) = ch.linear.transposed().at(r, c);
    }
    auto pivots = rref(aug);
    if (static_cast<int>(pivots.size()) != q)
        throw ModelError("chart is not injective");
    QMat pinv(q, ch.linear.rows);
    for (int r = 0; r < q; ++r)
        for (int c = 0; c < ch.linear.rows; ++c)
            pinv.at(r, c) = aug.at(r, q + c);
    Point off = pinv.apply(ch.offset);
    for (auto& v : off)
        v = -v;
    return AffMap(pinv, off);
}

/// True when the two constructor trees are structurally identical.
inline bool tree_equal(const Cell& a, const Cell& b)
{
    if (a->kind != b->kind || a->ambient != b->ambient)
        return false;
    switch (a->kind) {
    case CubicSet::Kind::Box:
        return a->intervals == b->intervals;
    case CubicSet::Kind::Cone:
        return a->apex == b->apex && tree_equal(a->base, b->base);
    case CubicSet::Kind::Prism:
    default:
        return a->axis == b->axis && a->lo == b->lo && a->hi == b->hi &&
               tree_equal(a->base, b->base);
    }
}

/// Orientation sign of the chart transition between two constructions of
/// the same polytope. Identical trees are the fast path; otherwise both
/// charts must be affine and the transition is solved and verified exactly.
inline int chart_transition_sign(const Cell& from, const Cell& to)
{
    if (tree_equal(from, to))
        return 1;
    if (from->dim == 0)
        return 1;
    auto cf = affine_chart(from);
    auto ct = affine_chart(to);
    if (!cf || !ct)
        throw ModelError("chart transition between distinct non-affine constructions");
    AffMap inv = chart_left_inverse(*ct);
    // T = inv o chart_from
    QMat tlin = inv.linear * cf->linear;
    Point toff = inv.apply(cf->offset);
    // verify chart_to o T == chart_from
    AffMap T(tlin, toff);
    PolyMap check = compose(char_map(to), T.as_polymap());
    if (!(check == char_map(from)))
        throw ModelError("inconsistent chart transition");
    // determinant sign of the square transition
    QMat m = tlin;
    int n = m.rows;
    int sign = 1;
    for (int col = 0; col < n; ++col) {
        int p = -1;
        for (int r = col; r < n; ++r)
            if (m.at(r, col) != 0) {
                p = r;
                break;
            }
        if (p < 0)
            throw ModelError("singular chart transition");
        if (p != col) {
            for (int c2 = 0; c2 < n; ++c2)
                std::swap(m.at(p, c2), m.at(col, c2));
            sign = -sign;
        }
        if (m.at(col, col) < 0)
            sign = -sign;
        for (int r = col + 1; r < n; ++r) {
            if (m.at(r, col) == 0)
                continue;
            Rat f = m.at(r, col) / m.at(col, col);
            for (int c2 = col; c2 < n; ++c2)
                m.at(r, c2) -= f * m.at(col, c2);
        }
    }
    return sign;
}

/// Generator of the identification relation: an affine gluing of one cell
/// onto another.
struct Identification {
    CellKey src;
    CellKey dst;
    AffMap map;
};

/// Finite cubical complex with affine face identifications: the cell models
/// (circle, torus, projective plane, ...) whose chain complexes the
/// cohomology engine consumes.
class Model {
public:
    Complex complex;
    std::vector<Identification> glues;
    std::map<std::string, CellKey> names;  // optional labels from input files

    void add_glue(const CellKey& src, const CellKey& dst, const AffMap& g)
    {
        glues.push_back({src, dst, g});
        finalized_ = false;
    }

    /// Closes the identification relation under faces and transitivity,
    /// chooses class representatives, and validates bijectivity.
    void finalize()
    {
        parent_.clear();
        to_parent_.clear();
        for (const auto& c : complex.cells()) {
            CellKey k = key_of(c);
            parent_[k] = k;
            to_parent_[k] = AffMap::identity(complex.ambient_dim());
        }
        for (const auto& glue : glues) {
            Cell src = complex.find(glue.src);
            Cell dst = complex.find(glue.dst);
            if (!src || !dst)
                throw ModelError("identification references a missing cell");
            TransformedCell image = transform_cell_signed(src, glue.map);
            if (!(key_of(image.cell) == glue.dst))
                throw ModelError("identification does not map the source cell onto the target");
            if (src->dim != dst->dim)
                throw ModelError("identification changes dimension");
            // glue every face along with the cell
            std::vector<Cell> closure{src};
            for (const auto& f : proper_faces(src))
                closure.push_back(f);
            for (const auto& f : closure) {
                Cell img = transform_cell_signed(f, glue.map).cell;
                if (!complex.contains_key(key_of(img)))
                    throw ModelError("identification image leaves the complex");
                unite(key_of(f), key_of(img), glue.map);
            }
        }
        // canonical representative: minimal key per class
        std::map<CellKey, CellKey> best;
        for (const auto& c : complex.cells()) {
            CellKey k = key_of(c);
            CellKey root = find_root(k);
            auto it = best.find(root);
            if (it == best.end() || k < it->second)
                best.insert_or_assign(root, it == best.end() ? k : std::min(k, it->second));
        }
        rep_of_.clear();
        to_rep_.clear();
        for (const auto& c : complex.cells()) {
            CellKey k = key_of(c);
            CellKey root = find_root(k);
            CellKey rep = best.at(root);
            rep_of_[k] = rep;
            // map k -> root -> rep
            AffMap k_to_root = path_to_root(k);
            AffMap rep_to_root = path_to_root(rep);
            to_rep_[k] = inverse(rep_to_root).after(k_to_root);
        }
        finalized_ = true;
    }

    bool finalized() const { return finalized_; }

    CellKey rep_key(const CellKey& k) const { return rep_of_.at(k); }
    const AffMap& to_rep(const CellKey& k) const { return to_rep_.at(k); }

    /// Representatives in deterministic order, optionally one dimension.
    std::vector<Cell> class_reps() const
    {
        std::vector<Cell> out;
        std::set<CellKey> seen;
        for (const auto& c : complex.cells()) {
            CellKey r = rep_of_.at(key_of(c));
            if (seen.insert(r).second)
                out.push_back(complex.find(r));
        }
        return out;
    }

    std::vector<Cell> class_reps_of_dim(int q) const
    {
        std::vector<Cell> out;
        for (const auto& c : class_reps())
            if (c->dim == q)
                out.push_back(c);
        return out;
    }

    /// Ambient affine group generated by the identifications, up to the
    /// given word length (always contains the identity). Used for quotient
    /// metric and quotient point equality.
    std::vector<AffMap> metric_group(int word_len = 3) const
    {
        std::vector<AffMap> gens;
        for (const auto& g : glues) {
            gens.push_back(g.map);
            gens.push_back(inverse(g.map));
        }
        std::vector<AffMap> out{AffMap::identity(complex.ambient_dim())};
        auto seen_key = [](const AffMap& g) {
            std::string s;
            for (const auto& v : g.linear.a)
                s += rat_str(v) + ",";
            s += "|";
            for (const auto& v : g.offset)
                s += rat_str(v) + ",";
            return s;
        };
        std::set<std::string> seen{seen_key(out[0])};
        std::vector<AffMap> frontier = out;
        for (int l = 0; l < word_len; ++l) {
            std::vector<AffMap> next;
            for (const auto& f : frontier)
                for (const auto& g : gens) {
                    AffMap h = g.after(f);
                    if (seen.insert(seen_key(h)).second) {
                        next.push_back(h);
                        out.push_back(h);
                    }
                }
            frontier = std::move(next);
        }
        return out;
    }

    bool same_point(const Point& a, const Point& b) const
    {
        for (const auto& g : metric_group())
            if (g.apply(b) == a)
                return true;
        return false;
    }

    /// Squared quotient distance between points (minimum over unfoldings).
    Rat qdist2(const Point& a, const Point& b) const
    {
        Rat best = -1;
        for (const auto& g : metric_group()) {
            Rat d = dist2(a, g.apply(b));
            if (best < 0 || d < best)
                best = d;
        }
        return best;
    }

    /// Squared quotient distance from a point to a cell class.
    Rat qdist2_cell(const Point& p, const Cell& c) const
    {
        Rat best = -1;
        for (const auto& g : metric_group()) {
            Rat d = cell_dist2(c, g.apply(p));
            if (best < 0 || d < best)
                best = d;
        }
        return best;
    }

    /// Highest-dimensional cell containing the point, searching unfoldings;
    /// returns the cell together with the group element g used (g(p) lies in
    /// the cell).
    std::optional<std::pair<Cell, AffMap>> locate(const Point& p) const
    {
        std::vector<Cell> all = complex.cells();
        std::sort(all.begin(), all.end(), [](const Cell& a, const Cell& b) {
            if (a->dim != b->dim)
                return a->dim > b->dim;
            return key_of(a) < key_of(b);
        });
        for (const auto& g : metric_group()) {
            Point q = g.apply(p);
            for (const auto& c : all)
                if (cell_contains(c, q))
                    return std::make_pair(c, g);
        }
        return std::nullopt;
    }

private:
    CellKey find_root(const CellKey& k) const
    {
        CellKey cur = k;
        while (!(parent_.at(cur) == cur))
            cur = parent_.at(cur);
        return cur;
    }

    /// Composite affine map sending the cell at key k onto its root cell.
    AffMap path_to_root(const CellKey& k) const
    {
        AffMap acc = AffMap::identity(complex.ambient_dim());
        CellKey cur = k;
        while (!(parent_.at(cur) == cur)) {
            acc = to_parent_.at(cur).after(acc);
            cur = parent_.at(cur);
        }
        return acc;
    }

    void unite(const CellKey& a, const CellKey& b, const AffMap& g_ab)
    {
        CellKey ra = find_root(a);
        CellKey rb = find_root(b);
        AffMap ma = path_to_root(a);
        AffMap mb = path_to_root(b);
        if (ra == rb) {
            // consistency: both routes a -> root must agree on the cell
            // itself (ambient maps may differ away from it)
            AffMap via_b = mb.after(g_ab);
            Cell cell_a = complex.find(a);
            for (const auto& v : cell_a->verts)
                if (via_b.apply(v) != ma.apply(v))
                    throw ModelError("inconsistent identification orientation");
            return;
        }
        // ra -> a -> b -> rb
        parent_[ra] = rb;
        to_parent_[ra] = mb.after(g_ab).after(inverse(ma));
    }

    bool finalized_ = false;
    std::map<CellKey, CellKey> parent_;
    std::map<CellKey, AffMap> to_parent_;
    std::map<CellKey, CellKey> rep_of_;
    std::map<CellKey, AffMap> to_rep_;
};

}  // namespace cubical

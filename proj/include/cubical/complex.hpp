#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubicset.hpp"

namespace cubical {

struct CoverageError : std::runtime_error {
    explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

struct NonTerminationError : std::runtime_error {
    explicit NonTerminationError(const std::string& what) : std::runtime_error(what) {}
};

/// Face- and intersection-closed finite family of cubic sets.
class Complex {
public:
    explicit Complex(int ambient = 0) : ambient_(ambient) {}

    int ambient_dim() const { return ambient_; }
    size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    bool contains_key(const CellKey& k) const { return cells_.count(k) != 0; }

    Cell find(const CellKey& k) const
    {
        auto it = cells_.find(k);
        return it == cells_.end() ? nullptr : it->second;
    }

    /// Canonical stored representative of a geometrically equal cell.
    Cell canonical(const Cell& c) const
    {
        Cell r = find(key_of(c));
        if (!r)
            throw std::invalid_argument("complex: cell not present");
        return r;
    }

    void insert_closure(const Cell& c)
    {
        if (ambient_ == 0)
            ambient_ = c->ambient;
        if (c->ambient != ambient_)
            throw std::invalid_argument("complex: ambient dimension mismatch");
        if (cells_.emplace(key_of(c), c).second)
            for (const auto& f : proper_faces(c))
                insert_closure(f);
    }

    /// Cells in deterministic order (dimension, then vertex key).
    std::vector<Cell> cells() const
    {
        std::vector<Cell> out;
        out.reserve(cells_.size());
        for (const auto& [k, c] : cells_)
            out.push_back(c);
        return out;
    }

    std::vector<Cell> cells_of_dim(int q) const
    {
        std::vector<Cell> out;
        for (const auto& [k, c] : cells_)
            if (c->dim == q)
                out.push_back(c);
        return out;
    }

    int top_dim() const
    {
        int d = -1;
        for (const auto& [k, c] : cells_)
            d = std::max(d, c->dim);
        return d;
    }

    /// Cells that are not proper faces of other cells.
    std::vector<Cell> maximal_cells() const
    {
        std::set<CellKey> faces;
        for (const auto& [k, c] : cells_)
            for (const auto& f : proper_faces(c))
                faces.insert(key_of(f));
        std::vector<Cell> out;
        for (const auto& [k, c] : cells_)
            if (!faces.count(k))
                out.push_back(c);
        return out;
    }

    bool is_subcomplex_of(const Complex& other) const
    {
        for (const auto& [k, c] : cells_)
            if (!other.contains_key(k))
                return false;
        return true;
    }

    struct AuditReport {
        bool face_closed = true;
        bool intersections_closed = true;
        std::vector<std::string> failures;
        bool ok() const { return face_closed && intersections_closed; }
    };

    /// Checks the defining closure conditions: every face of a member is a
    /// member, and pairwise intersections are common faces. The second check
    /// combines exact shared-vertex reasoning with membership sampling.
    AuditReport audit(int sample_denominator = 2) const
    {
        AuditReport rep;
        for (const auto& [k, c] : cells_)
            for (const auto& f : proper_faces(c))
                if (!contains_key(key_of(f))) {
                    rep.face_closed = false;
                    rep.failures.push_back("missing face of a member cell");
                }
        std::vector<Cell> all = cells();
        for (size_t i = 0; i < all.size(); ++i) {
            for (size_t j = i + 1; j < all.size(); ++j) {
                const Cell& a = all[i];
                const Cell& b = all[j];
                if (!boxes_touch(a, b))
                    continue;
                std::vector<Point> common;
                std::set_intersection(a->verts.begin(), a->verts.end(), b->verts.begin(),
                                      b->verts.end(), std::back_inserter(common));
                Cell expected = nullptr;
                if (!common.empty()) {
                    // the common face must be a stored cell spanning exactly
                    // the shared vertices
                    for (const auto& [k2, c2] : cells_)
                        if (c2->verts == common) {
                            expected = c2;
                            break;
                        }
                    if (!expected) {
                        rep.intersections_closed = false;
                        rep.failures.push_back("shared vertices do not span a member cell");
                        continue;
                    }
                    bool face_of_a = key_of(expected) == key_of(a) || is_face_of(expected, a);
                    bool face_of_b = key_of(expected) == key_of(b) || is_face_of(expected, b);
                    if (!face_of_a || !face_of_b) {
                        rep.intersections_closed = false;
                        rep.failures.push_back("intersection cell is not a common face");
                        continue;
                    }
                }
                // sampled sufficiency: points of a inside b must lie in the
                // expected common face
                for (const Point& x : chart_samples(a, sample_denominator)) {
                    if (!cell_contains(b, x))
                        continue;
                    if (!expected || !cell_contains(expected, x)) {
                        rep.intersections_closed = false;
                        rep.failures.push_back("sampled intersection point outside common face");
                        break;
                    }
                }
            }
        }
        return rep;
    }

    static bool is_face_of(const Cell& f, const Cell& c)
    {
        CellKey fk = key_of(f);
        for (const auto& g : proper_faces(c))
            if (key_of(g) == fk)
                return true;
        return false;
    }

    static std::vector<Point> chart_samples(const Cell& c, int denominator)
    {
        std::vector<Point> pts;
        PolyMap chart = char_map(c);
        Point cur(c->dim);
        auto rec = [&](auto&& self, int k) -> void {
            if (k == c->dim) {
                pts.push_back(chart.eval(cur));
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

private:
    static bool boxes_touch(const Cell& a, const Cell& b)
    {
        for (int i = 0; i < a->ambient; ++i) {
            Rat alo = a->verts[0][i], ahi = a->verts[0][i];
            Rat blo = b->verts[0][i], bhi = b->verts[0][i];
            for (const auto& v : a->verts) {
                alo = std::min(alo, v[i]);
                ahi = std::max(ahi, v[i]);
            }
            for (const auto& v : b->verts) {
                blo = std::min(blo, v[i]);
                bhi = std::max(bhi, v[i]);
            }
            if (ahi < blo || bhi < alo)
                return false;
        }
        return true;
    }

    int ambient_;
    std::map<CellKey, Cell> cells_;
};

/// One named open set of a cover: a union of open metric balls, the whole
/// space, or the interior of a union of model cells (the latter is used by
/// the cohomology and partition-of-unity layers).
struct CoverSet {
    enum class Kind { Whole, Balls, Cells };

    std::string name;
    Kind kind = Kind::Whole;
    struct Ball {
        Point center;
        Rat radius;
    };
    std::vector<Ball> balls;
    std::vector<std::string> cell_names;  // resolved by the model layer

    static CoverSet whole(std::string name)
    {
        CoverSet s;
        s.name = std::move(name);
        return s;
    }
};

struct Cover {
    std::vector<CoverSet> sets;
};

/// Interval range of a polynomial over the unit cube; crude but sound.
inline std::pair<Rat, Rat> range_on_cube(const Polynomial& p)
{
    Rat lo = 0, hi = 0;
    for (const auto& [e, c] : p.terms()) {
        bool constant = true;
        for (unsigned k : e)
            if (k) {
                constant = false;
                break;
            }
        if (constant) {
            lo += c;
            hi += c;
        } else if (c > 0) {
            hi += c;
        } else {
            lo += c;
        }
    }
    return {lo, hi};
}

/// Sound containment test for the image of a cell under a plot in one cover
/// set: exact vertex reasoning for affine data, interval enclosure otherwise,
/// and a conservative "no" when neither certifies.
inline bool subordinate(const PolyMap& plot, const Cell& cell, const CoverSet& u)
{
    if (u.kind == CoverSet::Kind::Whole)
        return true;
    if (u.kind != CoverSet::Kind::Balls)
        return false;  // cell-interior covers are resolved by the model layer
    if (plot.is_affine()) {
        for (const auto& ball : u.balls) {
            bool inside = true;
            for (const auto& v : cell->verts) {
                Point y = plot.eval(v);
                if (dist2(y, ball.center) >= ball.radius * ball.radius) {
                    inside = false;
                    break;
                }
            }
            if (inside)
                return true;
        }
        return false;
    }
    // polynomial plot: enclose plot(chart(cube)) against each ball
    PolyMap composed = compose(plot, char_map(cell));
    for (const auto& ball : u.balls) {
        Rat upper = 0;
        for (int i = 0; i < composed.target_dim; ++i) {
            Polynomial diff =
                composed.components[i] - Polynomial::constant(cell->dim, ball.center[i]);
            auto [lo, hi] = range_on_cube(diff);
            Rat m = std::max(lo < 0 ? -lo : lo, hi < 0 ? -hi : hi);
            upper += m * m;
        }
        if (upper < ball.radius * ball.radius)
            return true;
    }
    return false;
}

/// A cubical subdivision of the unit cube together with the plot it carries.
struct SubdivPair {
    Complex complex;
    PolyMap plot;
};

/// Keys of the subcomplex of cells subordinate to the cover, closed under
/// faces (a cell inherits subordination from any containing cell).
inline std::set<CellKey> subordinate_cells(const SubdivPair& pair, const Cover& cover)
{
    std::set<CellKey> sub;
    std::vector<Cell> all = pair.complex.cells();
    std::sort(all.begin(), all.end(), [](const Cell& a, const Cell& b) {
        return a->dim > b->dim;  // top-down
    });
    for (const auto& c : all) {
        if (sub.count(key_of(c)))
            continue;
        bool ok = false;
        for (const auto& u : cover.sets)
            if (subordinate(pair.plot, c, u)) {
                ok = true;
                break;
            }
        if (ok) {
            sub.insert(key_of(c));
            for (const auto& f : proper_faces(c))
                sub.insert(key_of(f));
        }
    }
    return sub;
}

namespace detail {

/// Same-dimension cells covering each original cell after one subdivision
/// round. Subordinate cells stay whole; the rest are coned from their
/// vertex barycenter over the subdivided boundary.
inline std::map<CellKey, std::vector<Cell>> subdivision_pieces(const Complex& K,
                                                               const std::set<CellKey>& sub)
{
    std::map<CellKey, std::vector<Cell>> pieces;
    for (int q = 0; q <= K.top_dim(); ++q) {
        for (const auto& c : K.cells_of_dim(q)) {
            CellKey k = key_of(c);
            if (sub.count(k) || q == 0) {
                pieces[k] = {c};
                continue;
            }
            Point b = c->barycenter();
            std::vector<Cell> out;
            for (const auto& f : proper_faces(c)) {
                if (f->dim != q - 1)
                    continue;
                for (const auto& piece : pieces.at(key_of(f)))
                    out.push_back(make_cone(piece, b));
            }
            pieces[k] = dedup_cells(std::move(out));
        }
    }
    return pieces;
}

}  // namespace detail

/// One round of cover-directed subdivision; fixes subordinate pairs.
inline SubdivPair subdivide_sd(const SubdivPair& pair, const Cover& cover)
{
    auto sub = subordinate_cells(pair, cover);
    auto pieces = detail::subdivision_pieces(pair.complex, sub);
    Complex out(pair.complex.ambient_dim());
    for (const auto& c : pair.complex.cells())
        for (const auto& piece : pieces.at(key_of(c)))
            out.insert_closure(piece);
    return SubdivPair{std::move(out), pair.plot};
}

inline bool all_subordinate(const SubdivPair& pair, const Cover& cover)
{
    auto sub = subordinate_cells(pair, cover);
    return sub.size() == pair.complex.size();
}

/// Verifies on a sample grid that the plot image is covered at all; balls
/// only (exact arithmetic).
inline void check_coverage(const SubdivPair& pair, const Cover& cover, int denominator = 8)
{
    int n = pair.complex.ambient_dim();
    Point cur(n);
    auto covered = [&](const Point& x) {
        Point y = pair.plot.eval(x);
        for (const auto& u : cover.sets) {
            if (u.kind == CoverSet::Kind::Whole)
                return true;
            for (const auto& ball : u.balls)
                if (dist2(y, ball.center) < ball.radius * ball.radius)
                    return true;
        }
        return false;
    };
    auto rec = [&](auto&& self, int k) -> void {
        if (k == n) {
            if (!covered(cur))
                throw CoverageError("cover misses the plot image at " + point_str(cur));
            return;
        }
        for (int v = 0; v <= denominator; ++v) {
            cur[k] = Rat(v, denominator);
            self(self, k + 1);
        }
    };
    rec(rec, 0);
}

struct IterationResult {
    SubdivPair pair;
    int rounds = 0;
};

/// Subdivides until every cell is subordinate; throws when the budget runs
/// out (reporting the current mesh data is left to the caller).
inline IterationResult sd_iterate_until_subordinate(const SubdivPair& start, const Cover& cover,
                                                    int max_iters)
{
    check_coverage(start, cover);
    SubdivPair cur = start;
    for (int r = 0; r <= max_iters; ++r) {
        if (all_subordinate(cur, cover))
            return IterationResult{std::move(cur), r};
        if (r == max_iters)
            break;
        cur = subdivide_sd(cur, cover);
    }
    throw NonTerminationError("subdivision did not reach a subordinate pair within " +
                              std::to_string(max_iters) + " rounds");
}

struct MeshMetrics {
    bool epsilon_defined = false;
    Rat epsilon2;   // squared separation of subordinate cells from uncovered points
    Rat diameter2;  // squared reach of cells meeting maximal subordinate cells
};

/// Distance data of the subordinate subcomplex per the subdivision argument:
/// epsilon is sampled on a grid of uncovered points (exact distances to the
/// sampled set), the diameter term is exact via convexity.
inline MeshMetrics mesh_metrics(const SubdivPair& pair, const Cover& cover,
                                int grid_denominator = 16)
{
    auto sub = subordinate_cells(pair, cover);
    MeshMetrics mm;
    mm.epsilon2 = 0;
    mm.diameter2 = 0;

    // maximal subordinate cells
    std::set<CellKey> nonmax;
    for (const auto& k : sub) {
        Cell c = pair.complex.find(k);
        if (!c)
            continue;
        for (const auto& f : proper_faces(c))
            nonmax.insert(key_of(f));
    }
    std::vector<Cell> maximal;
    for (const auto& k : sub) {
        Cell c = pair.complex.find(k);
        if (c && !nonmax.count(k))
            maximal.push_back(c);
    }
    if (maximal.empty())
        return mm;

    // epsilon: distance from each maximal cell to sampled points outside the
    // preimage of a covering set
    int n = pair.complex.ambient_dim();
    std::vector<Point> grid;
    {
        Point cur(n);
        auto rec = [&](auto&& self, int k) -> void {
            if (k == n) {
                grid.push_back(cur);
                return;
            }
            for (int v = 0; v <= grid_denominator; ++v) {
                cur[k] = Rat(v, grid_denominator);
                self(self, k + 1);
            }
        };
        rec(rec, 0);
    }
    bool have_eps = false;
    Rat eps2 = 0;
    for (const auto& tau : maximal) {
        for (const auto& u : cover.sets) {
            if (u.kind == CoverSet::Kind::Whole)
                continue;
            if (!subordinate(pair.plot, tau, u))
                continue;
            for (const Point& x : grid) {
                Point y = pair.plot.eval(x);
                bool in_u = false;
                for (const auto& ball : u.balls)
                    if (dist2(y, ball.center) < ball.radius * ball.radius) {
                        in_u = true;
                        break;
                    }
                if (in_u)
                    continue;
                Rat d2 = cell_dist2(tau, x);
                if (!have_eps || d2 < eps2) {
                    eps2 = d2;
                    have_eps = true;
                }
            }
        }
    }
    mm.epsilon_defined = have_eps;
    mm.epsilon2 = eps2;

    // diameter: farthest vertex of any cell meeting a maximal subordinate cell
    Rat best = 0;
    for (const auto& tau : maximal) {
        for (const auto& sigma : pair.complex.cells()) {
            std::vector<Point> shared;
            std::set_intersection(tau->verts.begin(), tau->verts.end(), sigma->verts.begin(),
                                  sigma->verts.end(), std::back_inserter(shared));
            if (shared.empty())
                continue;
            for (const auto& v : sigma->verts) {
                Rat d2 = cell_dist2(tau, v);
                if (d2 > best)
                    best = d2;
            }
        }
    }
    mm.diameter2 = best;
    return mm;
}

/// Homotopy prism between a subdivision pair and its one-round subdivision:
/// slice 0 carries the input complex, slice 1 its subdivision. The prism
/// coordinate is the first ambient axis of the result.
inline SubdivPair prism_td(const SubdivPair& pair, const Cover& cover)
{
    const Complex& K = pair.complex;
    auto sub = subordinate_cells(pair, cover);
    auto sd_pieces = detail::subdivision_pieces(K, sub);

    std::map<CellKey, std::vector<Cell>> td_pieces;
    for (int q = 0; q <= K.top_dim(); ++q) {
        for (const auto& c : K.cells_of_dim(q)) {
            CellKey k = key_of(c);
            if (sub.count(k)) {
                td_pieces[k] = {make_prism(embed_cell(c, 1, 0), 1, 0, 1)};
                continue;
            }
            if (q == 0)
                throw CoverageError("prism subdivision: uncovered vertex plot");
            Point apex = c->barycenter();
            apex.insert(apex.begin(), Rat(1));
            std::vector<Cell> out;
            out.push_back(make_cone(embed_cell(c, 1, 0), apex));
            for (const auto& f : proper_faces(c)) {
                if (f->dim != q - 1)
                    continue;
                for (const auto& piece : td_pieces.at(key_of(f)))
                    out.push_back(make_cone(piece, apex));
            }
            td_pieces[k] = dedup_cells(std::move(out));
        }
    }

    Complex out(K.ambient_dim() + 1);
    for (const auto& c : K.cells())
        for (const auto& piece : td_pieces.at(key_of(c)))
            out.insert_closure(piece);
    // slice-1 cells of lower-dimensional maximal cells
    for (const auto& [k, pieces] : sd_pieces)
        for (const auto& piece : pieces)
            out.insert_closure(embed_cell(piece, 1, 1));

    std::vector<Polynomial> comps;
    for (const auto& comp : pair.plot.components)
        comps.push_back(comp.insert_var(1));
    PolyMap lifted(pair.plot.source_dim + 1, pair.plot.target_dim, std::move(comps));
    return SubdivPair{std::move(out), std::move(lifted)};
}

inline Cell drop_first_coordinate(const Cell& c)
{
    switch (c->kind) {
    case CubicSet::Kind::Box: {
        std::vector<CubicSet::Interval> iv(c->intervals.begin() + 1, c->intervals.end());
        return make_box(iv);
    }
    case CubicSet::Kind::Cone: {
        Point a(c->apex.begin() + 1, c->apex.end());
        return make_cone(drop_first_coordinate(c->base), a);
    }
    case CubicSet::Kind::Prism:
    default:
        if (c->axis == 1)
            throw std::invalid_argument("drop_first_coordinate: prism spans the slice axis");
        return make_prism(drop_first_coordinate(c->base), c->axis - 1, c->lo, c->hi);
    }
}

/// Cells lying in the slice {first coordinate == value}, with that
/// coordinate removed.
inline Complex slice_complex(const Complex& K, const Rat& value)
{
    Complex out(K.ambient_dim() - 1);
    for (const auto& c : K.cells()) {
        bool in_slice = true;
        for (const auto& v : c->verts)
            if (v[0] != value) {
                in_slice = false;
                break;
            }
        if (in_slice)
            out.insert_closure(drop_first_coordinate(c));
    }
    return out;
}

}  // namespace cubical

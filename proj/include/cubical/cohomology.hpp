#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "model.hpp"

namespace cubical {

/// Chain complex of finite-rank free modules over the rationals.
struct RationalChainComplex {
    std::vector<int> dims;       // rank of C_q, q = 0..top
    std::vector<QMat> boundary;  // boundary[q] : C_q -> C_{q-1}; boundary[0] is 0 x dims[0]

    int top() const { return static_cast<int>(dims.size()) - 1; }

    void verify_dd_zero() const
    {
        for (int q = 1; q + 1 <= top(); ++q) {
            QMat prod = boundary[q] * boundary[q + 1];
            if (!prod.is_zero())
                throw ModelError("chain complex: boundary of boundary is nonzero in degree " +
                                 std::to_string(q + 1));
        }
    }
};

inline std::vector<int> betti(const RationalChainComplex& cc)
{
    std::vector<int> out;
    for (int q = 0; q <= cc.top(); ++q) {
        int rank_q = rank(cc.boundary[q]);
        int rank_q1 = q + 1 <= cc.top() ? rank(cc.boundary[q + 1]) : 0;
        out.push_back(cc.dims[q] - rank_q - rank_q1);
    }
    while (!out.empty() && out.back() == 0)
        out.pop_back();
    return out;
}

inline std::vector<int> disjoint_union_betti(const std::vector<std::vector<int>>& pieces)
{
    std::vector<int> out;
    for (const auto& b : pieces) {
        if (b.size() > out.size())
            out.resize(b.size(), 0);
        for (size_t i = 0; i < b.size(); ++i)
            out[i] += b[i];
    }
    return out;
}

/// Chain data of a model (or a class-closed part of one): one generator per
/// identification class, boundaries transported through the gluing signs.
struct ChainData {
    RationalChainComplex cc;
    std::vector<std::vector<CellKey>> gens;        // per degree: rep keys
    std::map<CellKey, std::pair<int, int>> index;  // rep key -> (degree, position)
};

namespace detail {

/// Signed boundary entries of one representative cell: class rep key ->
/// incidence coefficient.
inline std::map<CellKey, int> boundary_of_rep(const Model& m, const Cell& sigma)
{
    std::map<CellKey, int> out;
    for (int k = 1; k <= sigma->dim; ++k) {
        for (int eps = 0; eps <= 1; ++eps) {
            Cell img = facet_image(sigma, k, eps);
            if (img->dim != sigma->dim - 1)
                continue;  // degenerate facet (cone tip)
            Cell stored = m.complex.find(key_of(img));
            if (!stored)
                throw ModelError("facet image is not a cell of the complex");
            int s_tree = chart_transition_sign(img, stored);
            CellKey rep = m.rep_key(key_of(stored));
            int s_glue = 1;
            if (!(rep == key_of(stored))) {
                TransformedCell t = transform_cell_signed(stored, m.to_rep(key_of(stored)));
                if (!(key_of(t.cell) == rep))
                    throw ModelError("class transition does not reach the representative");
                s_glue = t.sign * chart_transition_sign(t.cell, m.complex.find(rep));
            }
            int face_sign = (k % 2 == 0 ? 1 : -1) * (eps == 1 ? 1 : -1);
            out[rep] += face_sign * s_tree * s_glue;
            if (out[rep] == 0)
                out.erase(rep);
        }
    }
    return out;
}

}  // namespace detail

/// Chain complex over the class representatives listed in `classes`; the set
/// must be closed under faces (class-wise).
inline ChainData chain_complex_on(const Model& m, const std::set<CellKey>& classes)
{
    if (!m.finalized())
        throw ModelError("model must be finalized");
    ChainData cd;
    int top = -1;
    for (const auto& k : classes)
        top = std::max(top, m.complex.find(k)->dim);
    if (top < 0)
        throw ModelError("chain complex of an empty family");
    cd.gens.assign(top + 1, {});
    for (const auto& k : classes) {
        Cell c = m.complex.find(k);
        if (!c)
            throw ModelError("unknown class key");
        if (!(m.rep_key(k) == k))
            throw ModelError("chain generators must be class representatives");
        cd.index[k] = {c->dim, static_cast<int>(cd.gens[c->dim].size())};
        cd.gens[c->dim].push_back(k);
    }
    cd.cc.dims.resize(top + 1);
    for (int q = 0; q <= top; ++q)
        cd.cc.dims[q] = static_cast<int>(cd.gens[q].size());
    cd.cc.boundary.resize(top + 1);
    cd.cc.boundary[0] = QMat(0, cd.cc.dims[0]);
    for (int q = 1; q <= top; ++q) {
        QMat b(cd.cc.dims[q - 1], cd.cc.dims[q]);
        for (int j = 0; j < cd.cc.dims[q]; ++j) {
            Cell sigma = m.complex.find(cd.gens[q][j]);
            for (const auto& [rep, coeff] : detail::boundary_of_rep(m, sigma)) {
                auto it = cd.index.find(rep);
                if (it == cd.index.end())
                    throw ModelError("family is not closed under faces");
                b.at(it->second.second, j) = coeff;
            }
        }
        cd.cc.boundary[q] = std::move(b);
    }
    cd.cc.verify_dd_zero();
    return cd;
}

inline std::set<CellKey> all_classes(const Model& m)
{
    std::set<CellKey> s;
    for (const auto& c : m.class_reps())
        s.insert(key_of(c));
    return s;
}

inline ChainData chain_complex(const Model& m) { return chain_complex_on(m, all_classes(m)); }

/// Closes a set of class keys under faces (class-wise) and returns it.
inline std::set<CellKey> close_classes(const Model& m, const std::set<CellKey>& seed)
{
    std::set<CellKey> out;
    for (const auto& k : seed) {
        CellKey rep = m.rep_key(k);
        if (out.insert(rep).second) {
            Cell c = m.complex.find(rep);
            for (const auto& f : proper_faces(c))
                out.insert(m.rep_key(key_of(f)));
        }
    }
    // repeat until stable (faces of added reps)
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<CellKey> add;
        for (const auto& k : out) {
            Cell c = m.complex.find(k);
            for (const auto& f : proper_faces(c)) {
                CellKey r = m.rep_key(key_of(f));
                if (!out.count(r))
                    add.insert(r);
            }
        }
        if (!add.empty()) {
            out.insert(add.begin(), add.end());
            changed = true;
        }
    }
    return out;
}

/// Cocycle/coboundary structure of the dual cochain complex, with chosen
/// representatives for a cohomology basis in every degree.
struct CohomologyBasis {
    std::vector<int> betti;                               // per degree 0..top
    std::vector<QMat> delta;                              // delta[q] : C^q -> C^{q+1}
    std::vector<std::vector<std::vector<Rat>>> cob;       // independent coboundaries per degree
    std::vector<std::vector<std::vector<Rat>>> reps;      // cohomology representatives per degree

    int top() const { return static_cast<int>(betti.size()) - 1; }

    bool is_cocycle(int q, const std::vector<Rat>& z) const
    {
        if (q >= top())
            return true;
        for (const auto& v : delta[q].apply(z))
            if (v != 0)
                return false;
        return true;
    }

    /// Coordinates of a cocycle in the chosen cohomology basis.
    std::vector<Rat> reduce(int q, const std::vector<Rat>& z) const
    {
        int dim = delta[q].cols;
        std::vector<std::vector<Rat>> stack = cob[q];
        for (const auto& r : reps[q])
            stack.push_back(r);
        QMat m = columns(stack, dim);
        auto sol = solve(m, z);
        if (!sol)
            throw ModelError("cocycle reduction failed: vector is not a cocycle");
        std::vector<Rat> coords(reps[q].size());
        for (size_t i = 0; i < reps[q].size(); ++i)
            coords[i] = (*sol)[cob[q].size() + i];
        return coords;
    }
};

inline CohomologyBasis cohomology_basis(const ChainData& cd)
{
    CohomologyBasis cb;
    int top = cd.cc.top();
    cb.delta.resize(top + 1);
    for (int q = 0; q <= top; ++q)
        cb.delta[q] = (q + 1 <= top) ? cd.cc.boundary[q + 1].transposed() : QMat(0, cd.cc.dims[q]);
    cb.cob.resize(top + 1);
    cb.reps.resize(top + 1);
    cb.betti.resize(top + 1);
    for (int q = 0; q <= top; ++q) {
        int dim = cd.cc.dims[q];
        // coboundaries: image of delta[q-1]
        std::vector<std::vector<Rat>> cob_candidates;
        if (q > 0) {
            const QMat& d = cb.delta[q - 1];
            for (int j = 0; j < d.cols; ++j) {
                std::vector<Rat> col(dim);
                for (int i = 0; i < dim; ++i)
                    col[i] = d.at(i, j);
                cob_candidates.push_back(std::move(col));
            }
        }
        auto chosen_cob = extend_basis({}, cob_candidates, dim);
        for (int j : chosen_cob)
            cb.cob[q].push_back(cob_candidates[j]);
        // cocycles
        auto zs = kernel_basis(cb.delta[q]);
        auto chosen_reps = extend_basis(cb.cob[q], zs, dim);
        for (int j : chosen_reps)
            cb.reps[q].push_back(zs[j]);
        cb.betti[q] = static_cast<int>(cb.reps[q].size());
    }
    return cb;
}

/// Unconditional one-round subdivision of a model: every positive-dimensional
/// cell is coned from its barycenter, and the identifications are transported
/// to the pieces (affine gluings map barycenters to barycenters).
inline Model subdivide_model(const Model& m)
{
    Cover empty_cover;  // nothing is subordinate
    SubdivPair pair{m.complex, PolyMap::identity(m.complex.ambient_dim())};
    auto sub = subordinate_cells(pair, empty_cover);
    auto pieces = detail::subdivision_pieces(m.complex, sub);

    Model out;
    for (const auto& c : m.complex.cells())
        for (const auto& piece : pieces.at(key_of(c)))
            out.complex.insert_closure(piece);
    for (const auto& glue : m.glues) {
        for (const auto& piece : pieces.at(glue.src)) {
            Cell img = transform_cell_signed(piece, glue.map).cell;
            if (!out.complex.contains_key(key_of(img)))
                throw ModelError("subdivided identification leaves the complex");
            out.add_glue(key_of(piece), key_of(img), glue.map);
        }
    }
    out.finalize();
    return out;
}

/// One degree of the Mayer-Vietoris ladder.
struct LESRow {
    int q = 0;
    int b_union = 0, b_a = 0, b_b = 0, b_int = 0;
    int rank_restrict = 0;    // H^q(X) -> H^q(A) + H^q(B)
    int rank_difference = 0;  // H^q(A) + H^q(B) -> H^q(A int B)
    int rank_connecting = 0;  // H^q(A int B) -> H^{q+1}(X)
    bool exact_at_union = false;
    bool exact_at_sum = false;
    bool exact_at_intersection = false;
};

struct LESTable {
    std::vector<LESRow> rows;
    std::vector<int> assembled;  // Betti of the union from pieces + difference ranks
    std::vector<int> direct;     // Betti computed on the whole model
    bool exact = true;
    bool assembled_matches = true;

    bool ok() const { return exact && assembled_matches; }
};

struct CoverDecompositionError : std::runtime_error {
    explicit CoverDecompositionError(const std::string& what) : std::runtime_error(what) {}
};

/// Mayer-Vietoris long exact sequence of a two-subcomplex cover, computed at
/// cochain level with exact arithmetic. The subcomplex pair must cover the
/// model's classes.
inline LESTable mayer_vietoris(const Model& m, const std::set<CellKey>& cover_a,
                               const std::set<CellKey>& cover_b)
{
    std::set<CellKey> A = close_classes(m, cover_a);
    std::set<CellKey> B = close_classes(m, cover_b);
    std::set<CellKey> all = all_classes(m);
    std::set<CellKey> uni;
    std::set_union(A.begin(), A.end(), B.begin(), B.end(), std::inserter(uni, uni.begin()));
    if (!(uni == all))
        throw CoverDecompositionError("subcomplex pair does not cover the model");
    std::set<CellKey> I;
    std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::inserter(I, I.begin()));
    if (I.empty())
        throw CoverDecompositionError("subcomplex pair has empty intersection");

    ChainData cdK = chain_complex(m);
    ChainData cdA = chain_complex_on(m, A);
    ChainData cdB = chain_complex_on(m, B);
    ChainData cdI = chain_complex_on(m, I);
    CohomologyBasis hK = cohomology_basis(cdK);
    CohomologyBasis hA = cohomology_basis(cdA);
    CohomologyBasis hB = cohomology_basis(cdB);
    CohomologyBasis hI = cohomology_basis(cdI);

    int top = cdK.cc.top();
    auto betti_of = [&](const CohomologyBasis& h, int q) {
        return (q >= 0 && q <= h.top()) ? h.betti[q] : 0;
    };
    auto gens_of = [&](const ChainData& cd, int q) -> const std::vector<CellKey>& {
        static const std::vector<CellKey> empty;
        return (q >= 0 && q <= cd.cc.top()) ? cd.gens[q] : empty;
    };

    // restriction of a cochain from one family to a subfamily
    auto restrict_to = [&](const std::vector<Rat>& z, const ChainData& from, const ChainData& to,
                           int q) {
        std::vector<Rat> out(gens_of(to, q).size(), Rat(0));
        for (size_t i = 0; i < gens_of(to, q).size(); ++i) {
            auto it = from.index.find(gens_of(to, q)[i]);
            if (it != from.index.end())
                out[i] = z[it->second.second];
        }
        return out;
    };
    // zero-extension of a cochain from a subfamily
    auto extend_to = [&](const std::vector<Rat>& z, const ChainData& from, const ChainData& to,
                         int q) {
        std::vector<Rat> out(gens_of(to, q).size(), Rat(0));
        for (size_t i = 0; i < gens_of(from, q).size(); ++i)
            out[to.index.at(gens_of(from, q)[i]).second] = z[i];
        return out;
    };

    LESTable table;
    std::vector<QMat> psi(top + 2), phi(top + 2), con(top + 2);
    for (int q = 0; q <= top; ++q) {
        int bK = betti_of(hK, q), bA = betti_of(hA, q), bB = betti_of(hB, q),
            bI = betti_of(hI, q);
        // restriction H^q(K) -> H^q(A) + H^q(B)
        QMat mpsi(bA + bB, bK);
        for (int j = 0; j < bK; ++j) {
            const auto& u = hK.reps[q][j];
            auto za = restrict_to(u, cdK, cdA, q);
            auto zb = restrict_to(u, cdK, cdB, q);
            auto ca = bA ? hA.reduce(q, za) : std::vector<Rat>{};
            auto cb2 = bB ? hB.reduce(q, zb) : std::vector<Rat>{};
            for (int i = 0; i < bA; ++i)
                mpsi.at(i, j) = ca[i];
            for (int i = 0; i < bB; ++i)
                mpsi.at(bA + i, j) = cb2[i];
        }
        // difference H^q(A) + H^q(B) -> H^q(I)
        QMat mphi(bI, bA + bB);
        for (int j = 0; j < bA; ++j) {
            auto zi = restrict_to(hA.reps[q][j], cdA, cdI, q);
            auto ci = bI ? hI.reduce(q, zi) : std::vector<Rat>{};
            for (int i = 0; i < bI; ++i)
                mphi.at(i, j) = ci[i];
        }
        for (int j = 0; j < bB; ++j) {
            auto zi = restrict_to(hB.reps[q][j], cdB, cdI, q);
            auto ci = bI ? hI.reduce(q, zi) : std::vector<Rat>{};
            for (int i = 0; i < bI; ++i)
                mphi.at(i, bA + j) = -ci[i];
        }
        // connecting H^q(I) -> H^{q+1}(K)
        int bK1 = betti_of(hK, q + 1);
        QMat mcon(bK1, bI);
        for (int j = 0; j < bI; ++j) {
            const auto& z = hI.reps[q][j];
            auto a = extend_to(z, cdI, cdA, q);
            std::vector<Rat> da = hA.delta[q].apply(a);
            // w on K: da on A's (q+1)-cells, 0 on the rest
            std::vector<Rat> w(gens_of(cdK, q + 1).size(), Rat(0));
            for (size_t i = 0; i < gens_of(cdA, q + 1).size(); ++i)
                w[cdK.index.at(gens_of(cdA, q + 1)[i]).second] = da[i];
            if (!hK.is_cocycle(q + 1, w))
                throw ModelError("connecting homomorphism produced a non-cocycle");
            auto cw = bK1 ? hK.reduce(q + 1, w) : std::vector<Rat>{};
            for (int i = 0; i < bK1; ++i)
                mcon.at(i, j) = cw[i];
        }

        psi[q] = std::move(mpsi);
        phi[q] = std::move(mphi);
        con[q] = std::move(mcon);
    }

    for (int q = 0; q <= top; ++q) {
        LESRow row;
        row.q = q;
        row.b_union = betti_of(hK, q);
        row.b_a = betti_of(hA, q);
        row.b_b = betti_of(hB, q);
        row.b_int = betti_of(hI, q);
        row.rank_restrict = rank(psi[q]);
        row.rank_difference = rank(phi[q]);
        row.rank_connecting = rank(con[q]);
        int ker_psi = row.b_union - row.rank_restrict;
        int ker_phi = row.b_a + row.b_b - row.rank_difference;
        int ker_con = row.b_int - row.rank_connecting;
        int im_prev_con = q == 0 ? 0 : rank(con[q - 1]);
        row.exact_at_union = (ker_psi == im_prev_con);
        row.exact_at_sum = (ker_phi == row.rank_restrict);
        row.exact_at_intersection = (ker_con == row.rank_difference);
        table.exact = table.exact && row.exact_at_union && row.exact_at_sum &&
                      row.exact_at_intersection;
        table.rows.push_back(row);
    }

    table.direct = betti(cdK.cc);
    for (int q = 0; q <= top; ++q) {
        int from_connecting =
            q == 0 ? 0
                   : (table.rows[q - 1].b_int - table.rows[q - 1].rank_difference);
        int from_restrict = table.rows[q].b_a + table.rows[q].b_b - table.rows[q].rank_difference;
        table.assembled.push_back(from_connecting + from_restrict);
    }
    while (!table.assembled.empty() && table.assembled.back() == 0)
        table.assembled.pop_back();
    table.assembled_matches = (table.assembled == table.direct);
    return table;
}

}  // namespace cubical

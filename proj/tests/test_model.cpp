#include <catch2/catch_amalgamated.hpp>

#include "cubical/cohomology.hpp"
#include "cubical/io.hpp"

using namespace cubical;

namespace {

Model load(const std::string& name)
{
    return io::load_model(std::string(CUBICAL_DATA_DIR) + "/models/" + name);
}

Cover load_cover_file(const std::string& name)
{
    return io::load_cover(std::string(CUBICAL_DATA_DIR) + "/covers/" + name);
}

std::set<CellKey> cover_classes(const Model& m, const CoverSet& s)
{
    std::set<CellKey> keys;
    for (const auto& ref : s.cell_names)
        keys.insert(key_of(io::resolve_cell(m, ref)));
    return close_classes(m, keys);
}

}  // namespace

TEST_CASE("Betti numbers of the shipped models")
{
    CHECK(betti(chain_complex(load("point.model")).cc) == std::vector<int>{1});
    CHECK(betti(chain_complex(load("interval.model")).cc) == std::vector<int>{1});
    CHECK(betti(chain_complex(load("circle.model")).cc) == std::vector<int>{1, 1});
    CHECK(betti(chain_complex(load("circle4.model")).cc) == std::vector<int>{1, 1});
    CHECK(betti(chain_complex(load("sphere_square.model")).cc) == std::vector<int>{1, 0, 1});
    CHECK(betti(chain_complex(load("sphere_cube.model")).cc) == std::vector<int>{1, 0, 1});
    CHECK(betti(chain_complex(load("torus.model")).cc) == std::vector<int>{1, 2, 1});
    CHECK(betti(chain_complex(load("torus2.model")).cc) == std::vector<int>{1, 2, 1});
    CHECK(betti(chain_complex(load("rp2.model")).cc) == std::vector<int>{1});
    CHECK(betti(chain_complex(load("wedge.model")).cc) == std::vector<int>{1, 2});
}

TEST_CASE("projective plane has rank-one top boundary over the rationals")
{
    Model m = load("rp2.model");
    ChainData cd = chain_complex(m);
    REQUIRE(cd.cc.top() == 2);
    CHECK(cd.cc.dims == std::vector<int>{2, 2, 1});
    CHECK(rank(cd.cc.boundary[2]) == 1);
    CHECK(rank(cd.cc.boundary[1]) == 1);
}

TEST_CASE("disjoint unions add Betti numbers")
{
    auto b_point = betti(chain_complex(load("point.model")).cc);
    auto b_circle = betti(chain_complex(load("circle.model")).cc);
    CHECK(disjoint_union_betti({b_point, b_point}) == std::vector<int>{2});
    CHECK(disjoint_union_betti({b_circle, b_point}) == std::vector<int>{2, 1});
    CHECK(disjoint_union_betti({}).empty());
}

TEST_CASE("inconsistent identifications are rejected")
{
    // glue an edge to itself with a flip: the quotient is not a cell complex
    const char* text =
        "e: [0,1]\n"
        "identify 0..1 -> 0..1 via [[-1]]; offset (1)\n";
    CHECK_THROWS_AS(io::parse_model_string(text), ModelError);
}

TEST_CASE("model file errors carry line information")
{
    CHECK_THROWS_AS(io::parse_model_string("[0,2]\n"), ParseError);
    CHECK_THROWS_AS(io::parse_model_string("identify a -> b via [[1]]; offset (0)\n"),
                    ParseError);
}

TEST_CASE("quotient metric and point identity on the circle")
{
    Model m = load("circle.model");
    CHECK(m.same_point({Rat(0)}, {Rat(1)}));
    CHECK_FALSE(m.same_point({Rat(0)}, {Rat(1, 2)}));
    CHECK(m.qdist2({Rat(1, 10)}, {Rat(9, 10)}) == Rat(1, 25));
    CHECK(m.qdist2({Rat(1, 10)}, {Rat(4, 10)}) == Rat(9, 100));
}

TEST_CASE("Mayer-Vietoris on the square circle: two arcs")
{
    Model m = load("circle4.model");
    Cover cov = load_cover_file("circle4_mv.cover");
    auto A = cover_classes(m, cov.sets[0]);
    auto B = cover_classes(m, cov.sets[1]);
    LESTable t = mayer_vietoris(m, A, B);
    CHECK(t.exact);
    CHECK(t.assembled == std::vector<int>{1, 1});
    CHECK(t.assembled_matches);
    CHECK(t.rows[0].b_a == 1);
    CHECK(t.rows[0].b_b == 1);
    CHECK(t.rows[0].b_int == 2);
}

TEST_CASE("Mayer-Vietoris on the cube sphere: two caps")
{
    Model m = load("sphere_cube.model");
    Cover cov = load_cover_file("sphere_caps.cover");
    LESTable t = mayer_vietoris(m, cover_classes(m, cov.sets[0]), cover_classes(m, cov.sets[1]));
    CHECK(t.exact);
    CHECK(t.assembled == std::vector<int>{1, 0, 1});
    CHECK(t.assembled_matches);
    // pieces: two disks and an annulus
    CHECK(t.rows[0].b_a == 1);
    CHECK(t.rows[1].b_a == 0);
    CHECK(t.rows[1].b_int == 1);
}

TEST_CASE("Mayer-Vietoris on the torus: two cylinders")
{
    Model m = load("torus2.model");
    Cover cov = load_cover_file("torus2_mv.cover");
    LESTable t = mayer_vietoris(m, cover_classes(m, cov.sets[0]), cover_classes(m, cov.sets[1]));
    CHECK(t.exact);
    CHECK(t.assembled == std::vector<int>{1, 2, 1});
    CHECK(t.assembled_matches);
    CHECK(t.rows[1].b_a == 1);   // cylinder circle
    CHECK(t.rows[0].b_int == 2); // two seam circles
    CHECK(t.rows[1].b_int == 2);
}

TEST_CASE("Mayer-Vietoris degenerates gracefully when one set is everything")
{
    Model m = load("circle4.model");
    auto all = all_classes(m);
    std::set<CellKey> small = close_classes(m, {key_of(io::resolve_cell(m, "b"))});
    LESTable t = mayer_vietoris(m, all, small);
    CHECK(t.exact);
    CHECK(t.assembled == std::vector<int>{1, 1});
    CHECK(t.assembled_matches);
    // non-covering pair is refused
    std::set<CellKey> other = close_classes(m, {key_of(io::resolve_cell(m, "t"))});
    CHECK_THROWS_AS(mayer_vietoris(m, small, other), CoverDecompositionError);
}

TEST_CASE("Betti numbers survive one round of barycentric-style subdivision")
{
    for (const char* name : {"interval.model", "circle.model", "circle4.model",
                             "sphere_cube.model", "torus.model", "rp2.model"}) {
        Model m = load(name);
        Model s = subdivide_model(m);
        INFO(name);
        CHECK(s.complex.size() > m.complex.size());
        CHECK(betti(chain_complex(s).cc) == betti(chain_complex(m).cc));
    }
}

TEST_CASE("complex audit accepts the shipped models")
{
    for (const char* name : {"interval.model", "circle4.model", "sphere_cube.model"}) {
        Model m = load(name);
        auto rep = m.complex.audit();
        INFO(name);
        CHECK(rep.ok());
    }
}

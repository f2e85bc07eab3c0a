#include <catch2/catch_amalgamated.hpp>

#include "cubical/cube_cat.hpp"
#include "cubical/rng.hpp"

using namespace cubical;

TEST_CASE("face and projection point maps")
{
    CHECK(apply_boundary(2, 2, 0, {Rat(1, 2), Rat(1, 4)}) ==
          Point{Rat(1, 2), Rat(0), Rat(1, 4)});
    CHECK(apply_boundary(0, 1, 1, {}) == Point{Rat(1)});
    CHECK(apply_degeneracy(1, 1, {Rat(3, 4), Rat(1, 2)}) == Point{Rat(1, 2)});
    CHECK(apply_degeneracy(0, 1, {Rat(2, 5)}) == Point{});
    CHECK_THROWS_AS(apply_boundary(2, 4, 0, {Rat(0), Rat(0)}), std::invalid_argument);
    CHECK_THROWS_AS(apply_degeneracy(1, 3, {Rat(0), Rat(0)}), std::invalid_argument);
}

TEST_CASE("face-face relation instance evaluated both ways")
{
    // both composites insert (1, 0) in front: t -> (1, 0, t)
    Point t{Rat(2, 5)};
    Point a = apply_boundary(1, 1, 0, t);
    Point b = apply_boundary(2, 1, 1, a);
    Point c = apply_boundary(1, 1, 1, t);
    Point e = apply_boundary(2, 2, 0, c);
    CHECK(b == Point{Rat(1), Rat(0), Rat(2, 5)});
    CHECK(b == e);
}

TEST_CASE("projection after face at the same slot is the identity")
{
    Point t{Rat(2, 5)};
    CHECK(apply_degeneracy(1, 1, apply_boundary(1, 1, 0, t)) == t);
}

TEST_CASE("relation sweep has no violations")
{
    for (int d : {1, 3, 5}) {
        auto rep = check_relations(d);
        INFO("max_dim " << d << ", instances " << rep.instances);
        CHECK(rep.instances > 0);
        CHECK(rep.violations == 0);
    }
}

TEST_CASE("normal form agrees with pointwise equality on random words")
{
    Xorshift rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        int dim = static_cast<int>(rng.range(0, 3));
        int len = static_cast<int>(rng.range(0, 5));
        std::vector<CubeGenerator> word;
        int d = dim;
        // build innermost-first, then reverse
        for (int s = 0; s < len; ++s) {
            bool can_down = d > 0;
            bool face = !can_down || rng.range(0, 1) == 0;
            if (face) {
                word.push_back(CubeGenerator{true, static_cast<int>(rng.range(1, d + 1)),
                                             static_cast<int>(rng.range(0, 1))});
                ++d;
            } else {
                word.push_back(CubeGenerator{false, static_cast<int>(rng.range(1, d)), 0});
                --d;
            }
        }
        std::reverse(word.begin(), word.end());
        CubeMorphism m(dim, d, word);
        CubeMorphism nf = m.normal_form();
        CHECK(nf.agrees_on_grid(m, 4));
        // normal form shape: faces first (outermost), then projections
        bool seen_proj = false;
        for (const auto& g : nf.word()) {
            if (!g.is_boundary)
                seen_proj = true;
            else
                CHECK_FALSE(seen_proj);
        }
        CHECK(m == nf);
    }
}

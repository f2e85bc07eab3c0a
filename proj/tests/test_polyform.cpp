#include <catch2/catch_amalgamated.hpp>

#include "cubical/polyform.hpp"
#include "cubical/random.hpp"

using namespace cubical;

namespace {

PolyForm d(const PolyForm& w) { return exterior_derivative(w); }

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

}  // namespace

TEST_CASE("exterior derivative on named examples")
{
    // x1 dx2 on the square
    PolyForm w = PolyForm::term(2, {2}, var(2, 1));
    PolyForm expected = PolyForm::term(2, {1, 2}, Polynomial::constant(2, 1));
    CHECK(d(w) == expected);

    // constant 0-form
    PolyForm c = PolyForm::term(3, {}, Polynomial::constant(3, Rat(5, 7)));
    CHECK(d(c).is_zero());

    // d^2 = 0 on x1^2 x2 dx3
    PolyForm u = PolyForm::term(3, {3}, var(3, 1) * var(3, 1) * var(3, 2));
    CHECK(d(d(u)).is_zero());
}

TEST_CASE("d^2 = 0 on random forms")
{
    Xorshift rng(21);
    for (int i = 0; i < 50; ++i) {
        int n = static_cast<int>(rng.range(1, 4));
        int p = static_cast<int>(rng.range(0, n));
        PolyForm w = random_form(rng, n, p, 3);
        CHECK(d(d(w)).is_zero());
    }
}

TEST_CASE("pullback examples")
{
    // identity pullback
    Xorshift rng(22);
    PolyForm w = random_form(rng, 3, 2, 2);
    CHECK(pullback(PolyMap::identity(3), w) == w);

    // swap map on the square reverses orientation
    PolyMap swap(2, 2, {var(2, 2), var(2, 1)});
    PolyForm area = PolyForm::term(2, {1, 2}, Polynomial::constant(2, 1));
    CHECK(pullback(swap, area) == -area);

    // triangle reparametrization s1 = t1 t2, s2 = t2 pulls ds1 to t2 dt1 + t1 dt2
    PolyMap tri(2, 2, {var(2, 1) * var(2, 2), var(2, 2)});
    PolyForm ds1 = PolyForm::term(2, {1}, Polynomial::constant(2, 1));
    PolyForm expect = PolyForm::term(2, {1}, var(2, 2)) + PolyForm::term(2, {2}, var(2, 1));
    CHECK(pullback(tri, ds1) == expect);

    // degree above source dimension collapses
    PolyMap line(1, 2, {var(1, 1), var(1, 1)});
    CHECK(pullback(line, area).is_zero());
}

TEST_CASE("pullback functoriality and naturality on random data")
{
    Xorshift rng(23);
    for (int i = 0; i < 40; ++i) {
        int k = static_cast<int>(rng.range(1, 3));
        int n = static_cast<int>(rng.range(1, 3));
        int m = static_cast<int>(rng.range(1, 3));
        int p = static_cast<int>(rng.range(0, n));
        PolyMap f = random_map(rng, m, k, 2);
        PolyMap g = random_map(rng, k, n, 2);
        PolyForm w = random_form(rng, n, p, 2);
        CHECK(pullback(f, pullback(g, w)) == pullback(compose(g, f), w));
        CHECK(check_naturality(g, w));
    }
    // constant maps kill positive-degree forms
    PolyMap c = PolyMap::constant(2, {Rat(1, 3), Rat(1, 2)});
    PolyForm w = PolyForm::term(2, {1}, var(2, 2));
    CHECK(pullback(c, w).is_zero());
    CHECK(check_naturality(c, w));
}

TEST_CASE("wedge behaves like an exterior product")
{
    PolyForm dx1 = PolyForm::term(2, {1}, Polynomial::constant(2, 1));
    CHECK(wedge(dx1, dx1).is_zero());

    PolyForm a = PolyForm::term(2, {1}, var(2, 1));
    PolyForm b = PolyForm::term(2, {2}, var(2, 2));
    PolyForm ab = PolyForm::term(2, {1, 2}, var(2, 1) * var(2, 2));
    CHECK(wedge(a, b) == ab);

    PolyForm one = PolyForm::term(2, {}, Polynomial::constant(2, 1));
    Xorshift rng(24);
    PolyForm w = random_form(rng, 2, 1, 3);
    CHECK(wedge(w, one) == w);

    // graded commutativity
    for (int i = 0; i < 30; ++i) {
        int n = static_cast<int>(rng.range(1, 4));
        int p = static_cast<int>(rng.range(0, n));
        int q = static_cast<int>(rng.range(0, n));
        PolyForm u = random_form(rng, n, p, 2);
        PolyForm v = random_form(rng, n, q, 2);
        PolyForm lhs = wedge(u, v);
        PolyForm rhs = wedge(v, u);
        if ((p * q) % 2 == 1)
            rhs = -rhs;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("evaluation returns exact coefficient values")
{
    PolyForm w = PolyForm::term(2, {2}, var(2, 1));
    auto vals = evaluate(w, {Rat(1, 2), Rat(1)});
    REQUIRE(vals.size() == 1);
    CHECK(vals.at(MultiIndex{2}) == Rat(1, 2));

    PolyForm f0 = PolyForm::term(2, {}, var(2, 1) + var(2, 2));
    auto v0 = evaluate(f0, {Rat(1, 3), Rat(1, 3)});
    CHECK(v0.at(MultiIndex{}) == Rat(2, 3));

    PolyForm area = PolyForm::term(2, {1, 2}, Polynomial::constant(2, 1));
    CHECK(evaluate(area, {Rat(1, 7), Rat(6, 7)}).at(MultiIndex{1, 2}) == 1);
}

TEST_CASE("fiber integration over the first axis")
{
    // t dt ^ dx1 on I x I integrates to 1/2 dx1
    PolyForm w = PolyForm::term(2, {1, 2}, var(2, 1));
    PolyForm expect = PolyForm::term(1, {1}, Polynomial::constant(1, Rat(1, 2)));
    CHECK(fiber_integrate(w) == expect);

    // no dt factor: zero
    PolyForm dry = PolyForm::term(2, {2}, var(2, 2));
    CHECK(fiber_integrate(dry).is_zero());

    // t^2 x1 dt integrates to the 0-form x1/3
    PolyForm f = PolyForm::term(2, {1}, var(2, 1) * var(2, 1) * var(2, 2));
    PolyForm expect0 = PolyForm::term(1, {}, Rat(1, 3) * var(1, 1));
    CHECK(fiber_integrate(f) == expect0);
}

TEST_CASE("homotopy operator identity")
{
    // F(t,x) = t*x into the interval, w = dx
    PolyMap F(2, 1, {var(2, 1) * var(2, 2)});
    PolyForm w = PolyForm::term(1, {1}, Polynomial::constant(1, 1));
    PolyForm Fw = pullback(F, w);
    PolyForm expect_Fw =
        PolyForm::term(2, {1}, var(2, 2)) + PolyForm::term(2, {2}, var(2, 1));
    CHECK(Fw == expect_Fw);
    PolyForm Dw = homotopy_operator(F, w);
    CHECK(Dw == PolyForm::term(1, {}, var(1, 1)));

    auto ends_diff = [&](const PolyMap& H, const PolyForm& form) {
        int n = H.source_dim - 1;
        PolyMap in0 = slice_inclusion(n, 0);
        PolyMap in1 = slice_inclusion(n, 1);
        return pullback(compose(H, in1), form) - pullback(compose(H, in0), form);
    };
    CHECK(exterior_derivative(Dw) == ends_diff(F, w));

    // constant homotopy: everything vanishes
    PolyMap C(2, 1, {var(2, 2)});
    CHECK(homotopy_operator(C, w).is_zero());
    CHECK(ends_diff(C, w).is_zero());

    // randomized identity d(Dw) + D(dw) = in1* - in0*
    Xorshift rng(25);
    for (int i = 0; i < 40; ++i) {
        int n = static_cast<int>(rng.range(1, 3));
        int m = static_cast<int>(rng.range(1, 3));
        int p = static_cast<int>(rng.range(0, m));
        PolyMap H = random_map(rng, n + 1, m, 2);
        PolyForm u = random_form(rng, m, p, 2);
        PolyForm lhs =
            exterior_derivative(homotopy_operator(H, u)) + homotopy_operator(H, exterior_derivative(u));
        CHECK(lhs == ends_diff(H, u));
    }
}

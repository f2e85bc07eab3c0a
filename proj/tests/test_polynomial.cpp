#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cubical/polynomial.hpp"
#include "cubical/random.hpp"

using namespace cubical;

namespace {

// independent quadrature oracle: 16-point Gauss-Legendre on [0,1], exact for
// polynomial degree <= 31
double gauss01(const std::function<double(double)>& f)
{
    static const double xs[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double ws[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    double s = 0;
    for (int k = 0; k < 8; ++k) {
        double a = 0.5 + 0.5 * xs[k];
        double b = 0.5 - 0.5 * xs[k];
        s += 0.5 * ws[k] * (f(a) + f(b));
    }
    return s;
}

}  // namespace

TEST_CASE("polynomial arithmetic basics")
{
    Polynomial x = Polynomial::variable(2, 1);
    Polynomial y = Polynomial::variable(2, 2);
    Polynomial p = x * x + Rat(3) * y - Polynomial::constant(2, Rat(1, 2));
    CHECK(p.eval({Rat(2), Rat(1, 3)}) == Rat(4) + Rat(1) - Rat(1, 2));
    CHECK((p - p).is_zero());
    CHECK(p.total_degree() == 2);
    CHECK((x * y).derivative(1) == y);
    CHECK(p.derivative(2) == Polynomial::constant(2, 3));
}

TEST_CASE("composition substitutes polynomials for variables")
{
    // p(x,y) = x^2 y, substitute x = u+v, y = u
    Polynomial p = Polynomial::variable(2, 1) * Polynomial::variable(2, 1) *
                   Polynomial::variable(2, 2);
    Polynomial u = Polynomial::variable(2, 1);
    Polynomial v = Polynomial::variable(2, 2);
    Polynomial q = p.compose({u + v, u});
    for (long long a = -2; a <= 2; ++a)
        for (long long b = -2; b <= 2; ++b) {
            Rat uu(a), vv(b);
            CHECK(q.eval({uu, vv}) == (uu + vv) * (uu + vv) * uu);
        }
}

TEST_CASE("definite integration over [0,1] matches quadrature")
{
    Xorshift rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Polynomial p = random_polynomial(rng, 2, 4, 4);
        Polynomial integrated = p.integrate01(1);  // integrate out x1
        double x2 = 0.37;
        double expected = gauss01([&](double t) { return p.eval_d({t, x2}); });
        double got = integrated.eval_d({x2});
        CHECK(std::abs(expected - got) < 1e-12);
    }
}

TEST_CASE("substitute and insert_var are inverse-ish")
{
    Xorshift rng(12);
    Polynomial p = random_polynomial(rng, 3, 3, 5);
    Polynomial q = p.insert_var(2);
    CHECK(q.nvars() == 4);
    CHECK(q.substitute(2, Rat(7)) == p);
    // substituted variable really is inert
    CHECK(q.derivative(2).is_zero());
}

TEST_CASE("parser-facing printer emits evaluable strings")
{
    Polynomial p = Polynomial::variable(2, 1) - Polynomial::constant(2, Rat(3, 4));
    CHECK(p.str() == "-3/4 + x1");
}

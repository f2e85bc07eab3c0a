#include <catch2/catch_amalgamated.hpp>

#include "cubical/linalg.hpp"
#include "cubical/rng.hpp"

using namespace cubical;

namespace {

// independent rank oracle: plain rational elimination with last-nonzero
// pivoting (different code path and pivot order than the library)
int rank_oracle(QMat m)
{
    int r = 0;
    for (int col = 0; col < m.cols; ++col) {
        int p = -1;
        for (int row = m.rows - 1; row >= r; --row)
            if (m.at(row, col) != 0) {
                p = row;
                break;
            }
        if (p < 0)
            continue;
        for (int c = 0; c < m.cols; ++c)
            std::swap(m.at(p, c), m.at(r, c));
        for (int row = 0; row < m.rows; ++row) {
            if (row == r || m.at(row, col) == 0)
                continue;
            Rat f = m.at(row, col) / m.at(r, col);
            for (int c = 0; c < m.cols; ++c)
                m.at(row, c) -= f * m.at(r, c);
        }
        ++r;
    }
    return r;
}

QMat random_matrix(Xorshift& rng, int r, int c)
{
    QMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (rng.range(0, 2) != 0)
                m.at(i, j) = rng.rational(6, 3);
    return m;
}

}  // namespace

TEST_CASE("rank agrees with an independent elimination")
{
    Xorshift rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        int r = static_cast<int>(rng.range(1, 7));
        int c = static_cast<int>(rng.range(1, 7));
        QMat m = random_matrix(rng, r, c);
        CHECK(rank(m) == rank_oracle(m));
    }
}

TEST_CASE("kernel vectors are killed by the matrix")
{
    Xorshift rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        QMat m = random_matrix(rng, static_cast<int>(rng.range(1, 5)),
                               static_cast<int>(rng.range(1, 6)));
        auto kb = kernel_basis(m);
        CHECK(static_cast<int>(kb.size()) == m.cols - rank(m));
        for (const auto& v : kb) {
            auto img = m.apply(v);
            for (const auto& x : img)
                CHECK(x == 0);
        }
    }
}

TEST_CASE("solve finds witnesses exactly when consistent")
{
    Xorshift rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        QMat m = random_matrix(rng, 4, 3);
        std::vector<Rat> x0{rng.rational(5, 2), rng.rational(5, 2), rng.rational(5, 2)};
        auto b = m.apply(x0);
        auto sol = solve(m, b);
        REQUIRE(sol.has_value());
        auto img = m.apply(*sol);
        CHECK(img == b);
    }
    QMat m(2, 1);
    m.at(0, 0) = 1;
    m.at(1, 0) = 1;
    CHECK_FALSE(solve(m, {Rat(0), Rat(1)}).has_value());
}

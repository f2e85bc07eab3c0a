#include <catch2/catch_amalgamated.hpp>

#include "cubical/exterior.hpp"

using namespace cubical;
using exterior::basis;
using exterior::wedge_basis;

namespace {

long long binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

// brute-force parity oracle: count inversions of the concatenation
int merge_sign_oracle(const MultiIndex& a, const MultiIndex& b)
{
    MultiIndex cat = a;
    cat.insert(cat.end(), b.begin(), b.end());
    long inv = 0;
    for (size_t i = 0; i < cat.size(); ++i)
        for (size_t j = i + 1; j < cat.size(); ++j) {
            if (cat[i] == cat[j])
                return 0;
            if (cat[i] > cat[j])
                ++inv;
        }
    return inv % 2 == 0 ? 1 : -1;
}

}  // namespace

TEST_CASE("basis enumeration")
{
    CHECK(basis(3, 2) == std::vector<MultiIndex>{{1, 2}, {1, 3}, {2, 3}});
    CHECK(basis(4, 0) == std::vector<MultiIndex>{{}});
    CHECK(basis(5, 7).empty());
    CHECK(basis(4, -1).empty());
    for (int n = 0; n <= 6; ++n)
        for (int p = 0; p <= n; ++p) {
            CHECK(static_cast<long long>(basis(n, p).size()) == binomial(n, p));
            CHECK(basis(n, p).size() == basis(n, n - p).size());
        }
}

TEST_CASE("wedge of basis elements")
{
    CHECK(wedge_basis({1}, {2}) == std::make_pair(1, MultiIndex{1, 2}));
    CHECK(wedge_basis({2}, {1}) == std::make_pair(-1, MultiIndex{1, 2}));
    CHECK(wedge_basis({1, 3}, {2}) == std::make_pair(-1, MultiIndex{1, 2, 3}));
    CHECK(wedge_basis({1}, {1}).first == 0);
}

TEST_CASE("wedge sign matches the inversion-count oracle and graded symmetry")
{
    for (int n = 1; n <= 5; ++n)
        for (int p = 0; p <= n; ++p)
            for (int q = 0; q <= n; ++q)
                for (const auto& a : basis(n, p))
                    for (const auto& b : basis(n, q)) {
                        auto [s, merged] = wedge_basis(a, b);
                        CHECK(s == merge_sign_oracle(a, b));
                        auto [s2, merged2] = wedge_basis(b, a);
                        if (s != 0) {
                            int flip = (p * q) % 2 == 0 ? 1 : -1;
                            CHECK(s == flip * s2);
                            CHECK(merged == merged2);
                        } else {
                            CHECK(s2 == 0);
                        }
                    }
}

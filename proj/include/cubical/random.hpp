#pragma once

#include "polyform.hpp"
#include "rng.hpp"

namespace cubical {

/// Random sparse polynomial with total degree <= max_deg and small rational
/// coefficients; the stream depends only on the generator state.
inline Polynomial random_polynomial(Xorshift& rng, int nvars, int max_deg, int terms,
                                    long long num_max = 9, long long den_max = 4)
{
    Polynomial p(nvars);
    for (int t = 0; t < terms; ++t) {
        Polynomial::Exp e(nvars, 0);
        int budget = static_cast<int>(rng.range(0, max_deg));
        for (int b = 0; b < budget && nvars > 0; ++b)
            e[rng.range(0, nvars - 1)] += 1;
        p.add_term(e, rng.rational(num_max, den_max));
    }
    return p;
}

inline PolyForm random_form(Xorshift& rng, int n, int p, int max_deg, int terms_per_coeff = 2)
{
    PolyForm w(n, p);
    for (const auto& idx : exterior::basis(n, p))
        w.add(idx, random_polynomial(rng, n, max_deg, terms_per_coeff));
    return w;
}

inline PolyMap random_map(Xorshift& rng, int m, int n, int max_deg, int terms_per_comp = 2)
{
    std::vector<Polynomial> comps;
    for (int j = 0; j < n; ++j)
        comps.push_back(random_polynomial(rng, m, max_deg, terms_per_comp));
    return PolyMap(m, n, std::move(comps));
}

}  // namespace cubical

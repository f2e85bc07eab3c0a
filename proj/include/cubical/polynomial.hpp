#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace cubical {

/// Sparse multivariate polynomial over the rationals.
///
/// Terms map exponent vectors (length = nvars) to nonzero coefficients; the
/// zero polynomial has an empty term map, so equality is map comparison.
class Polynomial {
public:
    using Exp = std::vector<unsigned>;

    Polynomial() : nvars_(0) {}
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rat& c)
    {
        Polynomial p(nvars);
        if (c != 0)
            p.terms_[Exp(nvars, 0)] = c;
        return p;
    }

    /// The monomial x_var (1-based).
    static Polynomial variable(int nvars, int var)
    {
        Polynomial p(nvars);
        Exp e(nvars, 0);
        e.at(var - 1) = 1;
        p.terms_[e] = 1;
        return p;
    }

    static Polynomial monomial(int nvars, const Exp& e, const Rat& c)
    {
        Polynomial p(nvars);
        if (c != 0)
            p.terms_[e] = c;
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exp, Rat>& terms() const { return terms_; }

    bool is_constant() const
    {
        if (terms_.empty())
            return true;
        return terms_.size() == 1 && total_degree() == 0;
    }

    Rat constant_value() const
    {
        if (terms_.empty())
            return 0;
        return terms_.begin()->second;
    }

    int total_degree() const
    {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int t = 0;
            for (unsigned k : e)
                t += static_cast<int>(k);
            d = std::max(d, t);
        }
        return d;
    }

    int degree_in(int var) const
    {
        int d = 0;
        for (const auto& [e, c] : terms_)
            d = std::max(d, static_cast<int>(e[var - 1]));
        return d;
    }

    void add_term(const Exp& e, const Rat& c)
    {
        if (c == 0)
            return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Polynomial operator-() const
    {
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_)
            r.terms_[e] = -c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        check_vars(o);
        for (const auto& [e, c] : o.terms_)
            add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o)
    {
        check_vars(o);
        for (const auto& [e, c] : o.terms_)
            add_term(e, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        a.check_vars(b);
        Polynomial r(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exp e(ea);
                for (int i = 0; i < a.nvars_; ++i)
                    e[i] += eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    friend Polynomial operator*(const Rat& c, const Polynomial& p)
    {
        Polynomial r(p.nvars_);
        if (c == 0)
            return r;
        for (const auto& [e, k] : p.terms_)
            r.terms_[e] = c * k;
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Polynomial derivative(int var) const
    {
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_) {
            unsigned k = e[var - 1];
            if (k == 0)
                continue;
            Exp d(e);
            d[var - 1] = k - 1;
            r.add_term(d, c * Rat(k));
        }
        return r;
    }

    Rat eval(const Point& x) const
    {
        if (static_cast<int>(x.size()) != nvars_)
            throw std::invalid_argument("polynomial eval: wrong point length");
        Rat s = 0;
        for (const auto& [e, c] : terms_) {
            Rat m = c;
            for (int i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k)
                    m *= x[i];
            s += m;
        }
        return s;
    }

    double eval_d(const std::vector<double>& x) const
    {
        double s = 0;
        for (const auto& [e, c] : terms_) {
            double m = to_double(c);
            for (int i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k)
                    m *= x[i];
            s += m;
        }
        return s;
    }

    /// Substitution x_i := subs[i]; all subs share one variable set.
    Polynomial compose(const std::vector<Polynomial>& subs) const
    {
        if (static_cast<int>(subs.size()) != nvars_)
            throw std::invalid_argument("polynomial compose: wrong substitution count");
        int m = subs.empty() ? 0 : subs[0].nvars();
        for (const auto& s : subs)
            if (s.nvars() != m)
                throw std::invalid_argument("polynomial compose: mixed variable counts");
        // powers[i][k] = subs[i]^k, filled on demand
        std::vector<std::vector<Polynomial>> powers(nvars_);
        for (int i = 0; i < nvars_; ++i)
            powers[i].push_back(Polynomial::constant(m, 1));
        Polynomial r(m);
        for (const auto& [e, c] : terms_) {
            Polynomial t = Polynomial::constant(m, c);
            for (int i = 0; i < nvars_; ++i) {
                while (powers[i].size() <= e[i])
                    powers[i].push_back(powers[i].back() * subs[i]);
                if (e[i] > 0)
                    t = t * powers[i][e[i]];
            }
            r += t;
        }
        return r;
    }

    /// Definite integral of one variable over [0,1]; the variable is removed.
    Polynomial integrate01(int var) const
    {
        Polynomial r(nvars_ - 1);
        for (const auto& [e, c] : terms_) {
            Exp d;
            d.reserve(nvars_ - 1);
            for (int i = 0; i < nvars_; ++i)
                if (i != var - 1)
                    d.push_back(e[i]);
            r.add_term(d, c / Rat(e[var - 1] + 1));
        }
        return r;
    }

    /// Sets one variable to a constant; the variable is removed.
    Polynomial substitute(int var, const Rat& value) const
    {
        Polynomial r(nvars_ - 1);
        for (const auto& [e, c] : terms_) {
            Rat m = c;
            for (unsigned k = 0; k < e[var - 1]; ++k)
                m *= value;
            Exp d;
            d.reserve(nvars_ - 1);
            for (int i = 0; i < nvars_; ++i)
                if (i != var - 1)
                    d.push_back(e[i]);
            r.add_term(d, m);
        }
        return r;
    }

    /// Inserts a fresh (unused) variable at 1-based slot `var`.
    Polynomial insert_var(int var) const
    {
        Polynomial r(nvars_ + 1);
        for (const auto& [e, c] : terms_) {
            Exp d;
            d.reserve(nvars_ + 1);
            for (int i = 0; i < var - 1; ++i)
                d.push_back(e[i]);
            d.push_back(0);
            for (int i = var - 1; i < nvars_; ++i)
                d.push_back(e[i]);
            r.add_term(d, c);
        }
        return r;
    }

    std::string str() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rat a = c;
            if (first) {
                if (a < 0) {
                    out += "-";
                    a = -a;
                }
            } else {
                out += (a < 0) ? " - " : " + ";
                if (a < 0)
                    a = -a;
            }
            first = false;
            std::string mono;
            for (int i = 0; i < nvars_; ++i) {
                if (e[i] == 0)
                    continue;
                if (!mono.empty())
                    mono += "*";
                mono += "x" + std::to_string(i + 1);
                if (e[i] > 1)
                    mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty())
                out += rat_str(a);
            else if (a == 1)
                out += mono;
            else
                out += rat_str(a) + "*" + mono;
        }
        return out;
    }

private:
    void check_vars(const Polynomial& o) const
    {
        if (nvars_ != o.nvars_)
            throw std::invalid_argument("polynomial arity mismatch");
    }

    int nvars_;
    std::map<Exp, Rat> terms_;
};

/// Polynomial map between cubes/domains: `components[j]` gives target
/// coordinate j+1 as a polynomial in the source variables.
struct PolyMap {
    int source_dim = 0;
    int target_dim = 0;
    std::vector<Polynomial> components;

    PolyMap() = default;
    PolyMap(int m, int n, std::vector<Polynomial> comps)
        : source_dim(m), target_dim(n), components(std::move(comps))
    {
        if (static_cast<int>(components.size()) != target_dim)
            throw std::invalid_argument("polymap: component count != target dim");
        for (const auto& c : components)
            if (c.nvars() != source_dim)
                throw std::invalid_argument("polymap: component arity != source dim");
    }

    static PolyMap identity(int n)
    {
        std::vector<Polynomial> comps;
        for (int i = 1; i <= n; ++i)
            comps.push_back(Polynomial::variable(n, i));
        return PolyMap(n, n, std::move(comps));
    }

    static PolyMap constant(int m, const Point& value)
    {
        std::vector<Polynomial> comps;
        for (const auto& v : value)
            comps.push_back(Polynomial::constant(m, v));
        return PolyMap(m, static_cast<int>(value.size()), std::move(comps));
    }

    Point eval(const Point& x) const
    {
        Point y(target_dim);
        for (int j = 0; j < target_dim; ++j)
            y[j] = components[j].eval(x);
        return y;
    }

    std::vector<double> eval_d(const std::vector<double>& x) const
    {
        std::vector<double> y(target_dim);
        for (int j = 0; j < target_dim; ++j)
            y[j] = components[j].eval_d(x);
        return y;
    }

    bool is_affine() const
    {
        for (const auto& c : components)
            if (c.total_degree() > 1)
                return false;
        return true;
    }

    friend bool operator==(const PolyMap& a, const PolyMap& b)
    {
        return a.source_dim == b.source_dim && a.target_dim == b.target_dim &&
               a.components == b.components;
    }
};

/// g after f (so source of f, target of g).
inline PolyMap compose(const PolyMap& g, const PolyMap& f)
{
    if (f.target_dim != g.source_dim)
        throw std::invalid_argument("polymap compose: dimension mismatch");
    std::vector<Polynomial> comps;
    comps.reserve(g.target_dim);
    for (const auto& c : g.components)
        comps.push_back(c.compose(f.components));
    return PolyMap(f.source_dim, g.target_dim, std::move(comps));
}

/// The slice inclusion x -> (t0, x) of a cube into I x cube.
inline PolyMap slice_inclusion(int n, const Rat& t0)
{
    std::vector<Polynomial> comps;
    comps.push_back(Polynomial::constant(n, t0));
    for (int i = 1; i <= n; ++i)
        comps.push_back(Polynomial::variable(n, i));
    return PolyMap(n, n + 1, std::move(comps));
}

}  // namespace cubical

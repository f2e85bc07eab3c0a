#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubical {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Point with exact rational coordinates.
using Point = std::vector<Rat>;

inline Rat rat(long long num, long long den = 1) { return Rat(Int(num), Int(den)); }

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline std::string rat_str(const Rat& q)
{
    std::ostringstream os;
    os << q;
    return os.str();
}

/// Parses "p", "p/q" or a plain decimal like "0.25" into an exact rational.
inline Rat parse_rat(const std::string& text)
{
    std::string s = text;
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + text + "'");
        return Rat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos)
        return Rat(Int(s));
    std::string head = s.substr(0, dot);
    std::string tail = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head.empty())
        head = "0";
    Int scale = 1;
    for (size_t i = 0; i < tail.size(); ++i)
        scale *= 10;
    Int whole(head);
    if (neg && whole < 0)
        whole = -whole;
    Int frac = tail.empty() ? Int(0) : Int(tail);
    Rat value = Rat(whole) + Rat(frac, scale);
    return neg ? -value : value;
}

inline std::string point_str(const Point& p)
{
    std::string out = "(";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i)
            out += ",";
        out += rat_str(p[i]);
    }
    return out + ")";
}

inline Rat dot(const Point& a, const Point& b)
{
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline Point sub(const Point& a, const Point& b)
{
    Point r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

inline Point add(const Point& a, const Point& b)
{
    Point r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

inline Point scale(const Point& a, const Rat& c)
{
    Point r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] * c;
    return r;
}

inline Rat dist2(const Point& a, const Point& b)
{
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        Rat d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace cubical

#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "complex.hpp"
#include "model.hpp"

namespace cubical {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line ? ("line " + std::to_string(line) + ": " + what) : what),
          line_number(line)
    {
    }
    int line_number;
};

namespace io {

inline void skip_ws(const std::string& s, size_t& pos)
{
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t'))
        ++pos;
}

inline bool eat(const std::string& s, size_t& pos, char c)
{
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

inline void expect(const std::string& s, size_t& pos, char c)
{
    if (!eat(s, pos, c))
        throw ParseError(std::string("expected '") + c + "' in '" + s + "'");
}

inline Rat parse_rat_at(const std::string& s, size_t& pos)
{
    skip_ws(s, pos);
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+'))
        ++pos;
    while (pos < s.size() && (isdigit(s[pos]) || s[pos] == '.'))
        ++pos;
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        while (pos < s.size() && isdigit(s[pos]))
            ++pos;
    }
    if (start == pos)
        throw ParseError("expected a number in '" + s + "'");
    return parse_rat(s.substr(start, pos - start));
}

inline Point parse_point(const std::string& s, size_t& pos)
{
    expect(s, pos, '(');
    Point p;
    skip_ws(s, pos);
    if (!eat(s, pos, ')')) {
        while (true) {
            p.push_back(parse_rat_at(s, pos));
            if (eat(s, pos, ')'))
                break;
            expect(s, pos, ',');
        }
    }
    return p;
}

/// Polynomial expression over +, -, *, ^ with rational literals and
/// variables x1..xN (t, t1.. accepted as aliases for the same slots).
class PolyParser {
public:
    PolyParser(const std::string& text, int nvars) : s_(text), nvars_(nvars) {}

    Polynomial parse()
    {
        Polynomial p = expression();
        skip_ws(s_, pos_);
        if (pos_ != s_.size())
            throw ParseError("trailing input in polynomial '" + s_ + "'");
        return p;
    }

private:
    Polynomial expression()
    {
        Polynomial acc = term();
        while (true) {
            skip_ws(s_, pos_);
            if (pos_ < s_.size() && s_[pos_] == '+') {
                ++pos_;
                acc += term();
            } else if (pos_ < s_.size() && s_[pos_] == '-') {
                ++pos_;
                acc -= term();
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial term()
    {
        Polynomial acc = factor();
        while (true) {
            skip_ws(s_, pos_);
            if (pos_ < s_.size() && s_[pos_] == '*') {
                ++pos_;
                acc = acc * factor();
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial factor()
    {
        Polynomial base = atom();
        skip_ws(s_, pos_);
        if (pos_ < s_.size() && s_[pos_] == '^') {
            ++pos_;
            skip_ws(s_, pos_);
            size_t start = pos_;
            while (pos_ < s_.size() && isdigit(s_[pos_]))
                ++pos_;
            if (start == pos_)
                throw ParseError("expected exponent in '" + s_ + "'");
            int e = std::stoi(s_.substr(start, pos_ - start));
            Polynomial acc = Polynomial::constant(nvars_, 1);
            for (int i = 0; i < e; ++i)
                acc = acc * base;
            return acc;
        }
        return base;
    }

    Polynomial atom()
    {
        skip_ws(s_, pos_);
        if (pos_ >= s_.size())
            throw ParseError("unexpected end of polynomial '" + s_ + "'");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expression();
            expect(s_, pos_, ')');
            return p;
        }
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (c == 'x' || c == 't') {
            ++pos_;
            size_t start = pos_;
            while (pos_ < s_.size() && isdigit(s_[pos_]))
                ++pos_;
            int idx = (start == pos_) ? 1 : std::stoi(s_.substr(start, pos_ - start));
            if (idx < 1 || idx > nvars_)
                throw ParseError("variable index out of range in '" + s_ + "'");
            return Polynomial::variable(nvars_, idx);
        }
        return Polynomial::constant(nvars_, parse_rat_at(s_, pos_));
    }

    std::string s_;
    size_t pos_ = 0;
    int nvars_;
};

inline Polynomial parse_polynomial(const std::string& text, int nvars)
{
    return PolyParser(text, nvars).parse();
}

/// Canonical printable id of a box cell: intervals joined by 'x', each
/// "a..b" or just "a" when degenerate.
inline std::string box_id(const Cell& c)
{
    if (c->kind != CubicSet::Kind::Box)
        throw std::invalid_argument("box_id: not a box");
    std::string out;
    for (size_t i = 0; i < c->intervals.size(); ++i) {
        if (i)
            out += "x";
        const auto& iv = c->intervals[i];
        out += rat_str(iv.lo);
        if (!iv.degenerate())
            out += ".." + rat_str(iv.hi);
    }
    return out;
}

inline Cell parse_box_id(const std::string& id)
{
    std::vector<CubicSet::Interval> ivs;
    size_t pos = 0;
    while (pos < id.size()) {
        size_t next = id.find('x', pos);
        std::string part = id.substr(pos, next == std::string::npos ? next : next - pos);
        size_t dots = part.find("..");
        if (dots == std::string::npos) {
            Rat v = parse_rat(part);
            ivs.push_back({v, v});
        } else {
            ivs.push_back({parse_rat(part.substr(0, dots)), parse_rat(part.substr(dots + 2))});
        }
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    if (ivs.empty())
        throw ParseError("empty cell id");
    return make_box(ivs);
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    return s.substr(a, b - a + 1);
}

/// Resolves a cell reference: a declared name first, else a canonical box id.
inline Cell resolve_cell(const Model& m, const std::string& ref)
{
    auto it = m.names.find(ref);
    if (it != m.names.end()) {
        Cell c = m.complex.find(it->second);
        if (c)
            return c;
    }
    Cell probe = parse_box_id(ref);
    Cell c = m.complex.find(key_of(probe));
    if (!c)
        throw ParseError("unknown cell '" + ref + "'");
    return c;
}

inline QMat parse_matrix(const std::string& s, size_t& pos)
{
    expect(s, pos, '[');
    std::vector<std::vector<Rat>> rows;
    while (true) {
        expect(s, pos, '[');
        std::vector<Rat> row;
        if (!eat(s, pos, ']')) {
            while (true) {
                row.push_back(parse_rat_at(s, pos));
                if (eat(s, pos, ']'))
                    break;
                expect(s, pos, ',');
            }
        }
        rows.push_back(row);
        if (eat(s, pos, ']'))
            break;
        expect(s, pos, ',');
    }
    QMat m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            throw ParseError("ragged matrix in '" + s + "'");
        for (size_t c = 0; c < rows[r].size(); ++c)
            m.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
    return m;
}

/// Model file: lattice-cube lines (optionally "name: [a,b] x [c,d] ...")
/// whose downward closure forms the complex, plus reload lines for
/// subdivision output (vertex/cone/prism) and identifications
///   identify <cell> -> <cell> via [[..],[..]]; offset (..)
inline Model parse_model(std::istream& in)
{
    Model m;
    struct PendingGlue {
        std::string src, dst;
        AffMap g;
        int line;
    };
    std::vector<PendingGlue> pending;
    std::string line;
    int lineno = 0;
    auto register_name = [&](const std::string& name, const Cell& c) {
        if (!name.empty())
            m.names[name] = key_of(c);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        try {
            if (s.rfind("identify", 0) == 0) {
                std::string rest = trim(s.substr(8));
                size_t arrow = rest.find("->");
                if (arrow == std::string::npos)
                    throw ParseError("identify: missing '->'");
                std::string src = trim(rest.substr(0, arrow));
                rest = trim(rest.substr(arrow + 2));
                size_t via = rest.find("via");
                if (via == std::string::npos)
                    throw ParseError("identify: missing 'via'");
                std::string dst = trim(rest.substr(0, via));
                rest = trim(rest.substr(via + 3));
                size_t pos = 0;
                QMat mat = parse_matrix(rest, pos);
                expect(rest, pos, ';');
                skip_ws(rest, pos);
                if (rest.compare(pos, 6, "offset") != 0)
                    throw ParseError("identify: missing 'offset'");
                pos += 6;
                Point off = parse_point(rest, pos);
                pending.push_back({src, dst, AffMap(mat, off), lineno});
                continue;
            }
            if (s.rfind("box", 0) == 0) {
                // general (non-lattice) box, used when reloading subdivisions
                std::string rest = trim(s.substr(3));
                size_t sp = rest.find(' ');
                std::string name = trim(rest.substr(0, sp));
                std::string body = trim(rest.substr(sp + 1));
                std::vector<CubicSet::Interval> ivs;
                size_t pos = 0;
                while (true) {
                    expect(body, pos, '[');
                    Rat a = parse_rat_at(body, pos);
                    Rat b = a;
                    if (eat(body, pos, ','))
                        b = parse_rat_at(body, pos);
                    expect(body, pos, ']');
                    ivs.push_back({a, b});
                    skip_ws(body, pos);
                    if (pos < body.size() && body[pos] == 'x') {
                        ++pos;
                        continue;
                    }
                    break;
                }
                Cell c = make_box(ivs);
                m.complex.insert_closure(c);
                register_name(name, c);
                continue;
            }
            if (s.rfind("vertex", 0) == 0) {
                std::string rest = trim(s.substr(6));
                size_t sp = rest.find(' ');
                std::string name = trim(rest.substr(0, sp));
                size_t pos = sp;
                Point p = parse_point(rest, pos);
                Cell c = make_vertex(p);
                m.complex.insert_closure(c);
                register_name(name, c);
                continue;
            }
            if (s.rfind("cone", 0) == 0) {
                std::string rest = trim(s.substr(4));
                size_t sp = rest.find(' ');
                std::string name = trim(rest.substr(0, sp));
                rest = trim(rest.substr(sp + 1));
                if (rest.rfind("base=", 0) != 0)
                    throw ParseError("cone: missing base=");
                rest = rest.substr(5);
                size_t sp2 = rest.find(' ');
                std::string base_ref = trim(rest.substr(0, sp2));
                rest = trim(rest.substr(sp2 + 1));
                if (rest.rfind("apex=", 0) != 0)
                    throw ParseError("cone: missing apex=");
                size_t pos = 5;
                Point apex = parse_point(rest, pos);
                Cell base = resolve_cell(m, base_ref);
                Cell c = make_cone(base, apex);
                m.complex.insert_closure(c);
                register_name(name, c);
                continue;
            }
            if (s.rfind("prism", 0) == 0) {
                std::string rest = trim(s.substr(5));
                size_t sp = rest.find(' ');
                std::string name = trim(rest.substr(0, sp));
                rest = trim(rest.substr(sp + 1));
                if (rest.rfind("base=", 0) != 0)
                    throw ParseError("prism: missing base=");
                rest = rest.substr(5);
                size_t sp2 = rest.find(' ');
                std::string base_ref = trim(rest.substr(0, sp2));
                rest = trim(rest.substr(sp2 + 1));
                if (rest.rfind("axis=", 0) != 0)
                    throw ParseError("prism: missing axis=");
                rest = rest.substr(5);
                size_t sp3 = rest.find(' ');
                int axis = std::stoi(trim(rest.substr(0, sp3)));
                Rat lo = 0, hi = 1;
                if (sp3 != std::string::npos) {
                    std::string range = trim(rest.substr(sp3 + 1));
                    if (range.rfind("range=[", 0) != 0)
                        throw ParseError("prism: bad range");
                    size_t pos = 7;
                    lo = parse_rat_at(range, pos);
                    expect(range, pos, ',');
                    hi = parse_rat_at(range, pos);
                    expect(range, pos, ']');
                }
                Cell base = resolve_cell(m, base_ref);
                Cell c = make_prism(base, axis, lo, hi);
                m.complex.insert_closure(c);
                register_name(name, c);
                continue;
            }
            // lattice cube line, optional leading "name:"
            std::string name;
            std::string body = s;
            size_t colon = s.find(':');
            if (colon != std::string::npos && s.find('[') != std::string::npos &&
                colon < s.find('[')) {
                name = trim(s.substr(0, colon));
                body = trim(s.substr(colon + 1));
            }
            std::vector<CubicSet::Interval> ivs;
            size_t pos = 0;
            while (true) {
                expect(body, pos, '[');
                Rat a = parse_rat_at(body, pos);
                Rat b = a;
                if (eat(body, pos, ','))
                    b = parse_rat_at(body, pos);
                expect(body, pos, ']');
                if (b != a && b - a != 1)
                    throw ParseError("lattice interval must have length 0 or 1");
                ivs.push_back({a, b});
                skip_ws(body, pos);
                if (pos < body.size() && body[pos] == 'x') {
                    ++pos;
                    continue;
                }
                break;
            }
            skip_ws(body, pos);
            if (pos != body.size())
                throw ParseError("trailing input after lattice cube");
            Cell c = make_box(ivs);
            m.complex.insert_closure(c);
            register_name(name, c);
        } catch (ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    for (const auto& pg : pending) {
        try {
            Cell src = resolve_cell(m, pg.src);
            Cell dst = resolve_cell(m, pg.dst);
            m.add_glue(key_of(src), key_of(dst), pg.g);
        } catch (ParseError& e) {
            throw ParseError(e.what(), pg.line);
        }
    }
    m.finalize();
    return m;
}

inline Model parse_model_string(const std::string& text)
{
    std::istringstream in(text);
    return parse_model(in);
}

inline Model load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    return parse_model(in);
}

/// Cover file: lines "cover <name> = <component> | <component> | ..." with
/// components "all", "ball((..), r)" or "cells(id, id, ...)".
inline Cover parse_cover(std::istream& in)
{
    Cover cover;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        try {
            if (s.rfind("cover", 0) != 0)
                throw ParseError("expected 'cover'");
            s = trim(s.substr(5));
            size_t eq = s.find('=');
            if (eq == std::string::npos)
                throw ParseError("cover: missing '='");
            CoverSet set;
            set.name = trim(s.substr(0, eq));
            std::string rest = trim(s.substr(eq + 1));
            bool has_balls = false, has_cells = false, has_whole = false;
            for (const std::string& comp_raw : split(rest, '|')) {
                std::string comp = trim(comp_raw);
                if (comp == "all") {
                    has_whole = true;
                } else if (comp.rfind("ball", 0) == 0) {
                    size_t pos = 4;
                    expect(comp, pos, '(');
                    Point center = parse_point(comp, pos);
                    expect(comp, pos, ',');
                    Rat r = parse_rat_at(comp, pos);
                    expect(comp, pos, ')');
                    set.balls.push_back({center, r});
                    has_balls = true;
                } else if (comp.rfind("cells", 0) == 0) {
                    size_t open = comp.find('(');
                    size_t close = comp.rfind(')');
                    if (open == std::string::npos || close == std::string::npos)
                        throw ParseError("cells: missing parentheses");
                    for (const auto& id : split(comp.substr(open + 1, close - open - 1), ','))
                        set.cell_names.push_back(trim(id));
                    has_cells = true;
                } else {
                    throw ParseError("unknown cover component '" + comp + "'");
                }
            }
            if (has_whole)
                set.kind = CoverSet::Kind::Whole;
            else if (has_cells && !has_balls)
                set.kind = CoverSet::Kind::Cells;
            else if (has_balls && !has_cells)
                set.kind = CoverSet::Kind::Balls;
            else
                throw ParseError("cover set mixes cells(..) and ball(..) components");
            cover.sets.push_back(std::move(set));
        } catch (ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return cover;
}

inline Cover parse_cover_string(const std::string& text)
{
    std::istringstream in(text);
    return parse_cover(in);
}

inline Cover load_cover(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    return parse_cover(in);
}

/// Serializes a complex: boxes as lattice lines, then vertices, cones and
/// prisms in dependency order with generated names.
inline std::string serialize_complex(const Complex& K)
{
    std::ostringstream out;
    std::map<CellKey, std::string> named;
    int counter = 0;
    auto name_of = [&](auto&& self, const Cell& c) -> std::string {
        CellKey k = key_of(c);
        auto it = named.find(k);
        if (it != named.end())
            return it->second;
        std::string name;
        if (c->kind == CubicSet::Kind::Box) {
            name = box_id(c);
            if (c->dim == 0) {
                out << "vertex " << name << " " << point_str(c->verts[0]) << "\n";
            } else {
                bool lattice = true;
                for (const auto& iv : c->intervals)
                    if (!iv.degenerate() && iv.hi - iv.lo != 1)
                        lattice = false;
                std::string line;
                for (size_t i = 0; i < c->intervals.size(); ++i) {
                    if (i)
                        line += " x ";
                    line += "[" + rat_str(c->intervals[i].lo);
                    if (!c->intervals[i].degenerate())
                        line += "," + rat_str(c->intervals[i].hi);
                    line += "]";
                }
                if (lattice)
                    out << name << ": " << line << "\n";
                else
                    out << "box " << name << " " << line << "\n";
            }
        } else if (c->kind == CubicSet::Kind::Cone) {
            std::string base = self(self, c->base);
            name = "k" + std::to_string(counter++);
            out << "cone " << name << " base=" << base << " apex=" << point_str(c->apex)
                << "\n";
        } else {
            std::string base = self(self, c->base);
            name = "p" + std::to_string(counter++);
            out << "prism " << name << " base=" << base << " axis=" << c->axis
                << " range=[" << rat_str(c->lo) << "," << rat_str(c->hi) << "]\n";
        }
        named[k] = name;
        return name;
    };
    for (const auto& c : K.cells())
        name_of(name_of, c);
    return out.str();
}

}  // namespace io

}  // namespace cubical

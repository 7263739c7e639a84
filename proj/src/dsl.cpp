// Copyright 2026 The qert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qert/dsl.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace qert::dsl {

ParseError::ParseError(std::size_t line, std::size_t column, std::string message,
                       std::string expected)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message +
                         (expected.empty() ? "" : " (expected " + expected + ")")),
      line_(line),
      column_(column),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

namespace {

bool is_keyword(std::string_view w) {
    static const char* const kw[] = {"skip", "if", "while", "do", "od", "prog", "var", "gate", "meas"};
    for (const char* k : kw)
        if (w == k)
            return true;
    return false;
}

struct Position {
    std::size_t offset = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ProgramUnit parse_file() {
        skip_ws();
        while (peek_word("var") || peek_word("gate") || peek_word("meas")) {
            if (peek_word("var"))
                parse_var();
            else if (peek_word("gate"))
                parse_gate();
            else
                parse_meas();
            skip_ws();
        }
        layout_ = Layout(vars_);
        if (!peek_word("prog"))
            fail("expected a declaration or the program block", "'var', 'gate', 'meas' or 'prog'");
        expect_word("prog");
        expect("{");
        Program body = parse_stmt();
        expect("}");
        skip_ws();
        if (pos_.offset != src_.size())
            fail("unexpected text after the program block", "end of input");

        auto report = validate(body, layout_);
        if (!report.ok())
            throw ParseError(1, 1, report.summary());
        return {std::move(body), layout_};
    }

    Complex complex_literal() {
        Complex z = parse_complex();
        skip_ws();
        if (!at_end())
            fail("unexpected text after the number", "end of input");
        return z;
    }

private:
    // --- scanning -------------------------------------------------------

    char cur() const { return pos_.offset < src_.size() ? src_[pos_.offset] : '\0'; }
    bool at_end() const { return pos_.offset >= src_.size(); }

    void advance() {
        if (at_end())
            return;
        if (src_[pos_.offset] == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        ++pos_.offset;
    }

    void skip_ws() {
        while (!at_end()) {
            char c = cur();
            if (c == '#') {
                while (!at_end() && cur() != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    // At end of input the error is reported on the last character.
    [[noreturn]] void fail(const std::string& msg, const std::string& expected = {}) const {
        if (!at_end() || src_.empty())
            fail_at(pos_, msg, expected);
        Position last;
        for (std::size_t i = 0; i + 1 < src_.size(); ++i) {
            if (src_[i] == '\n') {
                ++last.line;
                last.column = 1;
            } else {
                ++last.column;
            }
        }
        fail_at(last, msg, expected);
    }

    [[noreturn]] static void fail_at(const Position& at, const std::string& msg,
                                     const std::string& expected = {}) {
        throw ParseError(at.line, at.column, msg, expected);
    }

    bool peek(std::string_view tok) {
        skip_ws();
        return src_.substr(pos_.offset, tok.size()) == tok;
    }

    bool accept(std::string_view tok) {
        if (!peek(tok))
            return false;
        for (std::size_t i = 0; i < tok.size(); ++i)
            advance();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok))
            fail(at_end() ? "unexpected end of input" : "unexpected character '" + std::string(1, cur()) + "'",
                 "'" + std::string(tok) + "'");
    }

    std::string_view word_at_cursor() {
        skip_ws();
        std::size_t end = pos_.offset;
        if (end < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
                ++end;
        }
        return src_.substr(pos_.offset, end - pos_.offset);
    }

    bool peek_word(std::string_view w) { return word_at_cursor() == w; }

    void expect_word(std::string_view w) {
        if (!peek_word(w))
            fail("unexpected token", "'" + std::string(w) + "'");
        for (std::size_t i = 0; i < w.size(); ++i)
            advance();
    }

    std::string parse_ident() {
        auto w = word_at_cursor();
        if (w.empty())
            fail(at_end() ? "unexpected end of input" : "unexpected character '" + std::string(1, cur()) + "'",
                 "identifier");
        if (is_keyword(w))
            fail("'" + std::string(w) + "' is a keyword", "identifier");
        std::string out(w);
        for (std::size_t i = 0; i < w.size(); ++i)
            advance();
        return out;
    }

    long parse_int() {
        skip_ws();
        const Position start = pos_;
        bool neg = false;
        if (cur() == '-') {
            neg = true;
            advance();
        }
        if (!std::isdigit(static_cast<unsigned char>(cur())))
            fail("expected an integer", "integer");
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
            v = v * 10 + (cur() - '0');
            if (v > 1'000'000'000)
                fail_at(start, "integer out of range");
            advance();
        }
        return neg ? -v : v;
    }

    std::size_t parse_dim() {
        const Position start = (skip_ws(), pos_);
        long v = parse_int();
        if (v < 1)
            fail_at(start, "dimension must be a positive integer");
        return static_cast<std::size_t>(v);
    }

    std::vector<std::size_t> parse_dims() {
        expect("(");
        std::vector<std::size_t> dims{parse_dim()};
        while (accept(","))
            dims.push_back(parse_dim());
        expect(")");
        return dims;
    }

    // [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
    double parse_real() {
        skip_ws();
        const Position start = pos_;
        std::size_t end = pos_.offset;
        auto digit = [&](std::size_t i) {
            return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
        };
        if (end < src_.size() && (src_[end] == '+' || src_[end] == '-'))
            ++end;
        std::size_t mantissa = 0;
        while (digit(end)) {
            ++end;
            ++mantissa;
        }
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (digit(end)) {
                ++end;
                ++mantissa;
            }
        }
        if (mantissa == 0)
            fail("expected a number", "number");
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < src_.size() && (src_[e] == '+' || src_[e] == '-'))
                ++e;
            if (digit(e)) {
                while (digit(e))
                    ++e;
                end = e;
            }
        }
        std::size_t first = pos_.offset;
        if (src_[first] == '+')
            ++first;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + first, src_.data() + end, value);
        if (ec != std::errc() || ptr != src_.data() + end)
            fail_at(start, "malformed number");
        while (pos_.offset < end)
            advance();
        return value;
    }

    Complex parse_complex() {
        double re = parse_real();
        if (accept("i"))
            return {0.0, re};
        skip_ws();
        if (cur() == '+' || cur() == '-') {
            const bool neg = cur() == '-';
            advance();
            skip_ws();
            if (cur() == '+' || cur() == '-')
                fail("unexpected sign", "number");
            double im = parse_real();
            expect("i");
            return {re, neg ? -im : im};
        }
        return {re, 0.0};
    }

    CMatrix parse_matrix() {
        const Position start = (skip_ws(), pos_);
        expect("[");
        std::vector<std::vector<Complex>> rows;
        do {
            expect("[");
            std::vector<Complex> row{parse_complex()};
            while (accept(","))
                row.push_back(parse_complex());
            expect("]");
            rows.push_back(std::move(row));
        } while (accept(","));
        expect("]");
        const std::size_t cols = rows.front().size();
        for (const auto& r : rows)
            if (r.size() != cols)
                fail_at(start, "matrix rows have different lengths");
        CMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        return m;
    }

    // --- declarations ----------------------------------------------------

    void check_new_name(const Position& at, const std::string& name) {
        if (is_builtin_name(name))
            fail_at(at, "'" + name + "' is a built-in and cannot be redeclared");
        if (gates_.count(name) || meas_.count(name))
            fail_at(at, "'" + name + "' is already declared");
    }

    void parse_var() {
        expect_word("var");
        skip_ws();
        const Position at = pos_;
        std::string name = parse_ident();
        for (const auto& v : vars_)
            if (v.name == name)
                fail_at(at, "variable '" + name + "' is already declared");
        expect(":");
        std::size_t dim = parse_dim();
        expect(";");
        vars_.push_back({std::move(name), dim});
    }

    void parse_gate() {
        expect_word("gate");
        skip_ws();
        const Position at = pos_;
        std::string name = parse_ident();
        check_new_name(at, name);
        auto dims = parse_dims();
        expect("=");
        CMatrix m = parse_matrix();
        expect(";");
        UnitaryDecl decl{name, std::move(m), std::move(dims), false};
        auto report = validate(decl);
        if (!report.ok())
            fail_at(at, report.summary());
        gates_.emplace(name, std::make_shared<const UnitaryDecl>(std::move(decl)));
    }

    void parse_meas() {
        expect_word("meas");
        skip_ws();
        const Position at = pos_;
        std::string name = parse_ident();
        check_new_name(at, name);
        auto dims = parse_dims();
        expect("{");
        MeasurementDecl decl{name, {}, std::move(dims), false};
        do {
            skip_ws();
            const Position lat = pos_;
            const int label = static_cast<int>(parse_int());
            if (decl.outcome(label))
                fail_at(lat, "outcome " + std::to_string(label) + " listed twice");
            expect(":");
            CMatrix m = parse_matrix();
            expect(";");
            decl.outcomes.push_back({label, std::move(m)});
        } while (!peek("}"));
        expect("}");
        accept(";");
        std::sort(decl.outcomes.begin(), decl.outcomes.end(),
                  [](const auto& a, const auto& b) { return a.label < b.label; });
        auto report = validate(decl);
        if (!report.ok())
            fail_at(at, report.summary());
        meas_.emplace(name, std::make_shared<const MeasurementDecl>(std::move(decl)));
    }

    // --- statements ------------------------------------------------------

    QuantumVariable lookup_var(const Position& at, const std::string& name) const {
        const auto* v = layout_.find(name);
        if (!v)
            fail_at(at, "undeclared variable '" + name + "'");
        return *v;
    }

    std::vector<QuantumVariable> parse_var_list(std::string_view close) {
        std::vector<QuantumVariable> out;
        do {
            skip_ws();
            const Position at = pos_;
            const auto name = parse_ident();
            auto v = lookup_var(at, name);
            for (const auto& o : out)
                if (o.name == v.name)
                    fail_at(at, "variable '" + v.name + "' listed twice");
            out.push_back(std::move(v));
        } while (accept(","));
        expect(close);
        return out;
    }

    static std::vector<std::size_t> dims_of(const std::vector<QuantumVariable>& vars) {
        std::vector<std::size_t> d;
        for (const auto& v : vars)
            d.push_back(v.dim);
        return d;
    }

    MeasurementRef resolve_meas(const Position& at, const std::string& name,
                                const std::vector<QuantumVariable>& targets) {
        MeasurementRef m;
        if (auto it = meas_.find(name); it != meas_.end())
            m = it->second;
        else if (!(m = builtin_measurement(name, dims_of(targets))))
            fail_at(at, "unknown measurement '" + name + "'");
        if (m->arity != dims_of(targets))
            fail_at(at, "measurement '" + name + "' does not fit the dimensions of its targets");
        return m;
    }

    UnitaryRef resolve_gate(const Position& at, const std::string& name,
                            const std::vector<QuantumVariable>& targets) {
        UnitaryRef g;
        if (auto it = gates_.find(name); it != gates_.end())
            g = it->second;
        else if (is_builtin_name(name) && !(g = builtin_gate(name, dims_of(targets))))
            fail_at(at, "built-in gate '" + name + "' does not fit the dimensions of its targets");
        if (!g)
            fail_at(at, "unknown gate '" + name + "'");
        if (g->arity != dims_of(targets))
            fail_at(at, "gate '" + name + "' does not fit the dimensions of its targets");
        return g;
    }

    Program parse_stmt() {
        std::vector<Program> parts{parse_simple()};
        while (accept(";"))
            parts.push_back(parse_simple());
        return Program::seq(parts);
    }

    Program parse_simple() {
        skip_ws();
        const Position at = pos_;
        if (peek_word("skip")) {
            expect_word("skip");
            return Program::skip();
        }
        if (peek_word("if"))
            return parse_if();
        if (peek_word("while"))
            return parse_while();
        if (word_at_cursor().empty() || is_keyword(word_at_cursor()))
            fail(at_end() ? "unexpected end of input" : "expected a statement", "statement");

        std::vector<QuantumVariable> lhs;
        std::vector<Position> lhs_at;
        do {
            skip_ws();
            const Position vat = pos_;
            lhs_at.push_back(vat);
            auto name = parse_ident();
            lhs.push_back(lookup_var(vat, name));
        } while (accept(","));
        expect(":=");
        if (accept("|0>")) {
            if (lhs.size() != 1)
                fail_at(at, "initialization takes a single variable");
            return Program::init(lhs.front());
        }
        skip_ws();
        const Position gat = pos_;
        std::string gname = parse_ident();
        expect("[");
        auto targets = parse_var_list("]");
        if (targets != lhs)
            fail_at(at, "the assigned variables must match the gate's targets");
        auto gate = resolve_gate(gat, gname, targets);
        return Program::unitary(std::move(gate), std::move(targets));
    }

    Program parse_if() {
        skip_ws();
        const Position at = pos_;
        expect_word("if");
        skip_ws();
        const Position mat = pos_;
        std::string mname = parse_ident();
        expect("[");
        auto targets = parse_var_list("]");
        auto meas = resolve_meas(mat, mname, targets);
        expect("{");
        std::map<int, Program> branches;
        do {
            if (peek("}"))
                break;
            skip_ws();
            const Position lat = pos_;
            const int label = static_cast<int>(parse_int());
            if (!meas->outcome(label))
                fail_at(lat, "measurement '" + mname + "' has no outcome " + std::to_string(label));
            if (branches.count(label))
                fail_at(lat, "duplicate branch for outcome " + std::to_string(label));
            expect("->");
            branches.emplace(label, parse_stmt());
        } while (accept(","));
        expect("}");
        for (const auto& o : meas->outcomes)
            if (!branches.count(o.label))
                fail_at(at, "missing branch for outcome " + std::to_string(o.label));
        return Program::cases(std::move(meas), std::move(targets), std::move(branches));
    }

    Program parse_while() {
        expect_word("while");
        skip_ws();
        const Position mat = pos_;
        std::string mname = parse_ident();
        expect("[");
        auto targets = parse_var_list("]");
        auto meas = resolve_meas(mat, mname, targets);
        std::vector<int> labels;
        for (const auto& o : meas->outcomes)
            labels.push_back(o.label);
        if (labels != std::vector<int>{0, 1})
            fail_at(mat, "while guard '" + mname + "' must have exactly the outcomes 0 and 1");
        expect("==");
        skip_ws();
        const Position one = pos_;
        if (parse_int() != 1)
            fail_at(one, "loop guard must test for outcome 1", "'1'");
        expect_word("do");
        Program body = parse_stmt();
        expect_word("od");
        return Program::loop(std::move(meas), std::move(targets), std::move(body));
    }

    std::string_view src_;
    Position pos_;
    std::vector<QuantumVariable> vars_;
    Layout layout_;
    std::unordered_map<std::string, UnitaryRef> gates_;
    std::unordered_map<std::string, MeasurementRef> meas_;
};

std::string format_real(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc())
        throw Error("format_real: conversion failed");
    return std::string(buf, ptr);
}

std::string dims_text(const std::vector<std::size_t>& dims) {
    std::string out = "(";
    for (std::size_t i = 0; i < dims.size(); ++i)
        out += (i ? "," : "") + std::to_string(dims[i]);
    return out + ")";
}

std::string names(const std::vector<QuantumVariable>& vars) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i)
        out += (i ? ", " : "") + vars[i].name;
    return out;
}

class Printer {
public:
    std::string out;

    void stmt(const Program& p, int indent) {
        if (p.is<ast::Seq>()) {
            const auto& s = p.as<ast::Seq>();
            stmt(s.first, indent);
            out += ";\n";
            stmt(s.second, indent);
            return;
        }
        pad(indent);
        if (p.is<ast::Skip>()) {
            out += "skip";
        } else if (p.is<ast::Init>()) {
            out += p.as<ast::Init>().var.name + " := |0>";
        } else if (p.is<ast::Unitary>()) {
            const auto& u = p.as<ast::Unitary>();
            out += names(u.targets) + " := " + u.gate->name + "[" + names(u.targets) + "]";
        } else if (p.is<ast::Case>()) {
            const auto& c = p.as<ast::Case>();
            out += "if " + c.meas->name + "[" + names(c.targets) + "] {\n";
            std::size_t i = 0;
            for (const auto& [label, branch] : c.branches) {
                pad(indent + 1);
                out += std::to_string(label) + " ->\n";
                stmt(branch, indent + 2);
                out += (++i < c.branches.size()) ? ",\n" : "\n";
            }
            pad(indent);
            out += "}";
        } else {
            const auto& w = p.as<ast::While>();
            out += "while " + w.meas->name + "[" + names(w.targets) + "] == 1 do\n";
            stmt(w.body, indent + 1);
            out += "\n";
            pad(indent);
            out += "od";
        }
    }

private:
    void pad(int indent) { out.append(static_cast<std::size_t>(indent) * 2, ' '); }
};

}  // namespace

ProgramUnit parse(std::string_view source) {
    return Parser(source).parse_file();
}

Complex parse_complex_literal(std::string_view text) {
    return Parser(text).complex_literal();
}

std::string format_complex(Complex z) {
    if (z.imag() == 0.0)
        return format_real(z.real());
    std::string out = format_real(z.real());
    out += std::signbit(z.imag()) ? "-" : "+";
    out += format_real(std::abs(z.imag()));
    out += "i";
    return out;
}

std::string format_matrix(const CMatrix& m) {
    std::string out = "[";
    for (Index i = 0; i < m.rows(); ++i) {
        out += (i ? ", [" : "[");
        for (Index j = 0; j < m.cols(); ++j)
            out += (j ? ", " : "") + format_complex(m(i, j));
        out += "]";
    }
    return out + "]";
}

std::string pretty_print(const Program& program, const Layout& layout) {
    std::string out;
    for (const auto& v : layout.variables())
        out += "var " + v.name + ":" + std::to_string(v.dim) + ";\n";
    for (const auto& g : gates(program)) {
        if (g->builtin)
            continue;
        out += "gate " + g->name + dims_text(g->arity) + " = " + format_matrix(g->matrix) + ";\n";
    }
    for (const auto& m : measurements(program)) {
        if (m->builtin)
            continue;
        out += "meas " + m->name + dims_text(m->arity) + " {\n";
        for (const auto& o : m->outcomes)
            out += "  " + std::to_string(o.label) + ": " + format_matrix(o.op) + ";\n";
        out += "}\n";
    }
    Printer p;
    p.stmt(program, 1);
    out += "prog {\n" + p.out + "\n}\n";
    return out;
}

std::string pretty_print(const ProgramUnit& unit) {
    return pretty_print(unit.program, unit.layout);
}

}  // namespace qert::dsl

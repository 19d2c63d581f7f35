#include <cctype>
#include <climits>

#include "psskit/errors.hpp"
#include "psskit/parse.hpp"

namespace psskit {

void SymbolTable::bind(const std::string& name, const Expr& value) { symbols[name] = value; }

SymbolTable SymbolTable::from_registry(DepNames names) {
    SymbolTable t;
    t.names = std::move(names);
    for (std::size_t i = 0; i < param_count(); ++i) {
        ParamId id = static_cast<ParamId>(i);
        t.bind(param_name(id), Expr::param(id));
    }
    return t;
}

std::optional<JetVar> parse_jet_name(const std::string& ident, const DepNames& names) {
    for (std::size_t d = 0; d < names.names.size(); ++d) {
        const std::string& base = names.names[d];
        if (ident.compare(0, base.size(), base) != 0) continue;
        std::size_t i = base.size();
        int x = 0;
        while (i < ident.size() && std::isdigit(static_cast<unsigned char>(ident[i]))) {
            x = x * 10 + (ident[i] - '0');
            if (x > 64) break;
            ++i;
        }
        int t = 0;
        while (i < ident.size() && ident[i] == 't') {
            ++t;
            ++i;
        }
        if (i == ident.size() && x <= 64 && t <= 8) return jet(x, static_cast<int>(d), t);
    }
    return std::nullopt;
}

namespace {

class Parser {
public:
    Parser(const std::string& src, const SymbolTable& table) : s_(src), table_(table) {}

    Expr run() {
        Expr e = sum();
        skip();
        if (pos_ != s_.size()) fail("operator or end of input");
        return e;
    }

private:
    const std::string& s_;
    const SymbolTable& table_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) const { throw SyntaxError(pos_, expected); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("'") + c + "'");
    }

    Expr sum() {
        Expr acc = product();
        for (;;) {
            if (accept('+')) acc += product();
            else if (accept('-')) acc -= product();
            else return acc;
        }
    }

    Expr product() {
        Expr acc = unary();
        for (;;) {
            if (accept('*')) {
                acc *= unary();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Expr d = unary();
                acc *= reciprocal(d, at);
            } else {
                return acc;
            }
        }
    }

    Expr reciprocal(const Expr& d, std::size_t at) {
        if (d.is_zero()) throw SyntaxError(at, "nonzero divisor");
        if (is_unit(d)) return inverse(d);
        return make_pow(d, -1);
    }

    Expr unary() {
        if (accept('-')) return -unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        int n = exponent();
        if (n >= 0) return pow(base, n);
        if (base.is_zero()) fail("nonzero base for a negative exponent");
        return is_unit(base) ? pow(base, n) : make_pow(base, n);
    }

    long integer() {
        skip();
        std::size_t start = pos_;
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > INT_MAX) {
                pos_ = start;
                fail("integer exponent of reasonable size");
            }
            ++pos_;
        }
        if (pos_ == start) fail("integer exponent");
        return v;
    }

    int exponent() {
        bool paren = accept('(');
        bool neg = accept('-');
        long v = integer();
        if (paren) expect(')');
        if (accept('^')) {
            int e = exponent();
            if (e < 0) fail("nonnegative integer exponent");
            long r = 1;
            for (int i = 0; i < e; ++i) {
                r *= v;
                if (r > INT_MAX) fail("integer exponent of reasonable size");
            }
            v = r;
        }
        return static_cast<int>(neg ? -v : v);
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) fail("expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("expression");
    }

    Expr number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(s_[pos_]))))
            fail("integer literal");
        return Expr(Rational(s_.substr(start, pos_ - start)));
    }

    Expr identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') return call(name, start);
        if (auto j = parse_jet_name(name, table_.names)) return Expr::var(*j);
        auto it = table_.symbols.find(name);
        if (it == table_.symbols.end())
            throw UnknownIdentifier("'" + name + "' at offset " + std::to_string(start) + " is not a declared parameter");
        return it->second;
    }

    Expr call(const std::string& name, std::size_t start) {
        expect('(');
        if (name == "pow") {
            Expr b = sum();
            expect(',');
            bool neg = accept('-');
            long n = integer();
            expect(')');
            int e = static_cast<int>(neg ? -n : n);
            if (e >= 0) return pow(b, e);
            return is_unit(b) ? pow(b, e) : make_pow(b, e);
        }
        Expr arg = sum();
        expect(')');
        if (name == "exp") return make_exp(arg);
        if (name == "sin") return make_sin(arg);
        if (name == "cos") return make_cos(arg);
        if (name == "sqrt") return sqrt_of(arg);
        throw UnknownIdentifier("'" + name + "' at offset " + std::to_string(start) + " is not a known function");
    }
};

}  // namespace

Expr parse_expr(const std::string& src, const SymbolTable& table) { return Parser(src, table).run(); }

Expr parse_expr(const std::string& src) { return parse_expr(src, SymbolTable::from_registry()); }

}  // namespace psskit

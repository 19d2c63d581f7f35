#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "psskit/errors.hpp"
#include "psskit/manifest.hpp"

namespace psskit {

std::string class_name(EqClass c) {
    switch (c) {
    case EqClass::Evolution: return "evolution";
    case EqClass::ChType: return "ch";
    case EqClass::XtType: return "xt";
    }
    return "?";
}

namespace {

std::optional<EqClass> parse_class(const std::string& s) {
    for (EqClass c : {EqClass::Evolution, EqClass::ChType, EqClass::XtType})
        if (class_name(c) == s) return c;
    return std::nullopt;
}

std::optional<Assumption> parse_assumption(const std::string& s) {
    if (s == "real") return Assumption::Real;
    if (s == "nonzero") return Assumption::Nonzero;
    if (s == "positive") return Assumption::Positive;
    return std::nullopt;
}

std::string assumption_name(Assumption a) {
    switch (a) {
    case Assumption::Real: return "real";
    case Assumption::Nonzero: return "nonzero";
    case Assumption::Positive: return "positive";
    }
    return "?";
}

class Reader {
public:
    Reader(Manifest& m, std::string source) : m_(m), source_(std::move(source)) {}

    [[noreturn]] void error(const std::string& where, const std::string& what) const {
        throw ManifestError(source_ + ": " + where + ": " + what);
    }

    std::string string_at(const toml::node_view<const toml::node>& n, const std::string& where) const {
        if (!n) error(where, "missing");
        auto v = n.value<std::string>();
        if (!v || !n.is_string()) error(where, "expected a string");
        return *v;
    }

    std::int64_t int_at(const toml::node_view<const toml::node>& n, const std::string& where) const {
        if (!n.is_integer()) error(where, n ? "expected an integer" : "missing");
        return *n.value<std::int64_t>();
    }

    int delta_at(const toml::node_view<const toml::node>& n, const std::string& where) const {
        std::int64_t d = int_at(n, where);
        if (d != 1 && d != -1) error(where, "delta must be 1 or -1");
        return static_cast<int>(d);
    }

    Expr expr(const std::string& src, const std::string& where) const {
        try {
            return parse_expr(src, m_.symbols);
        } catch (const Error& e) {
            error(where, e.what());
        }
    }

    Expr expr_at(const toml::node_view<const toml::node>& n, const std::string& where) const {
        return expr(string_at(n, where), where);
    }

    void params(const toml::table* t) {
        if (!t) return;
        std::vector<std::pair<std::string, std::string>> radicals;
        for (auto&& [key, node] : *t) {
            std::string name(key.str());
            std::string where = "[params] " + name;
            auto decl = node.value<std::string>();
            if (!decl || !node.is_string()) error(where, "expected a string");
            if (!valid_param_name(name) || parse_jet_name(name, m_.symbols.names))
                error(where, "not usable as a parameter name");
            m_.params.push_back(ParamDecl{name, *decl});
            if (decl->rfind("sqrt(", 0) == 0) {
                radicals.emplace_back(name, *decl);
                continue;
            }
            auto a = parse_assumption(*decl);
            if (!a) error(where, "expected real, nonzero, positive or sqrt(...)");
            try {
                m_.symbols.bind(name, Expr::param(declare_param(name, *a)));
            } catch (const Error& e) {
                error(where, e.what());
            }
        }
        for (auto& [name, decl] : radicals) {
            Expr r = expr(decl, "[params] " + name);
            if (!jets_of(r).empty()) error("[params] " + name, "a radical cannot depend on jets");
            m_.symbols.bind(name, r);
            for (ParamId id : params_of(r)) m_.symbols.bind(param_name(id), Expr::param(id));
        }
    }

    void equation(const toml::table& doc) {
        auto eqn = doc["equation"];
        if (!eqn) return;
        if (!eqn.is_table()) error("[equation]", "expected a table");
        auto cls = parse_class(string_at(eqn["class"], "[equation] class"));
        if (!cls) error("[equation] class", "expected ch, xt or evolution");
        std::vector<std::string> rhs;
        if (auto arr = eqn["rhs"].as_array()) {
            for (std::size_t i = 0; i < arr->size(); ++i) {
                auto s = (*arr)[i].value<std::string>();
                if (!s) error("[equation] rhs", "expected strings");
                rhs.push_back(*s);
            }
        } else {
            rhs.push_back(string_at(eqn["rhs"], "[equation] rhs"));
        }
        if (rhs.empty()) error("[equation] rhs", "empty");
        if (*cls != EqClass::Evolution && rhs.size() != 1) error("[equation] rhs", "only evolution systems take several");
        if (rhs.size() > m_.symbols.names.names.size()) error("[equation] vars", "fewer names than equations");
        std::vector<EquationRule> rules;
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rules.push_back(EquationRule{*cls, expr(rhs[i], "[equation] rhs")});
        try {
            m_.eq = EquationSpec(std::move(rules), m_.symbols.names);
        } catch (const Error& e) {
            error("[equation]", e.what());
        }
        if (auto lam = eqn["lambda"]) {
            Expr want = expr_at(lam, "[equation] lambda");
            Expr got;
            try {
                got = split_lambda(*m_.eq).lambda;
            } catch (const Error& e) {
                error("[equation] lambda", e.what());
            }
            if (!(want == got)) error("[equation] lambda", "does not match the u^2 u3 coefficient " + render(got));
        }
    }

    void triad(const toml::table& doc) {
        auto t = doc["triad"];
        if (!t) return;
        if (!m_.eq) error("[triad]", "needs an [equation] table");
        int delta = delta_at(t["delta"], "[triad] delta");
        Expr f[3][2];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 2; ++j) {
                std::string key = "f" + std::to_string(i + 1) + std::to_string(j + 1);
                f[i][j] = expr_at(t[key], "[triad] " + key);
            }
        try {
            m_.triad = Triad({f[0][0], f[0][1]}, {f[1][0], f[1][1]}, {f[2][0], f[2][1]}, delta, *m_.eq);
        } catch (const Error& e) {
            error("[triad]", e.what());
        }
    }

    void family(const toml::table& doc) {
        auto f = doc["family"];
        if (!f) return;
        FamilySpec s;
        std::string th = string_at(f["theorem"], "[family] theorem");
        auto t = parse_theorem(th);
        if (!t) error("[family] theorem", "unknown theorem tag '" + th + "'");
        s.theorem = *t;
        if (f["delta"]) s.delta = delta_at(f["delta"], "[family] delta");
        auto exprs = [&](const char* sub, std::map<std::string, Expr>& out) {
            auto tab = f[sub].as_table();
            if (!tab) return;
            for (auto&& [key, node] : *tab) {
                std::string where = std::string("[family.") + sub + "] " + std::string(key.str());
                auto v = node.value<std::string>();
                if (!v || !node.is_string()) error(where, "expected a string");
                out[std::string(key.str())] = expr(*v, where);
            }
        };
        exprs("params", s.params);
        exprs("slots", s.slots);
        if (auto signs = f["signs"].as_table()) {
            for (auto&& [key, node] : *signs) {
                std::string where = "[family.signs] " + std::string(key.str());
                auto v = node.value<std::int64_t>();
                if (!node.is_integer() || (*v != 1 && *v != -1)) error(where, "expected 1 or -1");
                s.signs[std::string(key.str())] = static_cast<int>(*v);
            }
        }
        m_.family = std::move(s);
    }

    void expected(const toml::table& doc) {
        auto e = doc["expected"];
        if (!e) return;
        Expected x;
        auto v = e["verifies"].value<bool>();
        if (!v) error("[expected] verifies", "expected a boolean");
        x.verifies = *v;
        if (e["delta"]) x.delta = delta_at(e["delta"], "[expected] delta");
        if (e["lemma31"]) {
            auto l = e["lemma31"].value<bool>();
            if (!l) error("[expected] lemma31", "expected a boolean");
            x.lemma31 = *l;
        }
        if (e["family"]) x.family = string_at(e["family"], "[expected] family");
        m_.expected = x;
    }

private:
    Manifest& m_;
    std::string source_;
};

}  // namespace

Manifest read_manifest(const std::string& text, const std::string& source) {
    toml::table doc;
    try {
        doc = toml::parse(std::string_view(text), std::string_view(source));
    } catch (const toml::parse_error& e) {
        throw ManifestError(source + ":" + std::to_string(e.source().begin.line) + ": " + std::string(e.description()));
    }
    const toml::table& cdoc = doc;
    Manifest m;
    Reader r(m, source);
    auto fmt = cdoc["format"];
    if (!fmt) r.error("format", "missing format header");
    if (r.int_at(fmt, "format") != kManifestFormat) r.error("format", "unsupported format version");
    if (auto t = cdoc["title"]) m.title = r.string_at(t, "title");
    if (auto vars = doc["equation"]["vars"].as_array()) {
        m.symbols.names.names.clear();
        for (std::size_t i = 0; i < vars->size(); ++i) {
            auto s = (*vars)[i].value<std::string>();
            if (!s || !valid_param_name(*s)) r.error("[equation] vars", "expected identifiers");
            m.symbols.names.names.push_back(*s);
        }
    }
    r.params(doc["params"].as_table());
    r.equation(doc);
    r.triad(doc);
    r.family(doc);
    r.expected(doc);
    if (!m.eq && !m.family) r.error("manifest", "needs an [equation] or a [family] table");
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_manifest(ss.str(), path);
}

std::vector<ParamDecl> param_decls_for(const std::vector<Expr>& exprs) {
    std::set<ParamId> ids;
    for (const Expr& e : exprs)
        for (ParamId id : params_of(e)) {
            ids.insert(id);
            ParamInfo info = param_info(id);
            if (info.radical == RadicalKind::Shift) ids.insert(info.base);
        }
    std::vector<ParamDecl> plain, radicals;
    for (ParamId id : ids) {
        ParamInfo info = param_info(id);
        switch (info.radical) {
        case RadicalKind::None: plain.push_back({info.name, assumption_name(info.assumption)}); break;
        case RadicalKind::Shift:
            radicals.push_back({info.name, "sqrt(" + render(info.value) + " + " + param_name(info.base) + "^2)"});
            break;
        case RadicalKind::Const: radicals.push_back({info.name, "sqrt(" + render(info.value) + ")"}); break;
        }
    }
    plain.insert(plain.end(), radicals.begin(), radicals.end());
    return plain;
}

std::string write_manifest(const ManifestContent& c) {
    toml::table doc;
    doc.insert("format", kManifestFormat);
    if (!c.title.empty()) doc.insert("title", c.title);
    std::vector<Expr> all;
    const EquationSpec* eq = c.triad ? &c.triad->eq() : c.eq;
    DepNames names;
    if (eq) {
        names = eq->names();
        toml::table e;
        e.insert("class", class_name(eq->rule(0).cls));
        toml::array vars;
        for (int i = 0; i < eq->nvars(); ++i) vars.push_back(names.names.at(static_cast<std::size_t>(i)));
        e.insert("vars", vars);
        if (eq->nvars() == 1) {
            e.insert("rhs", render(eq->rule(0).rhs, names));
        } else {
            toml::array rhs;
            for (const EquationRule& r : eq->rules()) rhs.push_back(render(r.rhs, names));
            e.insert("rhs", rhs);
        }
        for (const EquationRule& r : eq->rules()) all.push_back(r.rhs);
        if (eq->nvars() == 1 && eq->rule(0).cls == EqClass::ChType) {
            Expr lam = split_lambda(*eq).lambda;
            e.insert("lambda", render(lam, names));
        }
        doc.insert("equation", e);
    }
    if (c.triad) {
        toml::table t;
        t.insert("delta", c.triad->delta());
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 2; ++j) {
                t.insert("f" + std::to_string(i) + std::to_string(j), render(c.triad->f(i, j), names));
                all.push_back(c.triad->f(i, j));
            }
        doc.insert("triad", t);
    }
    if (c.family) {
        toml::table f;
        f.insert("theorem", theorem_name(c.family->theorem));
        f.insert("delta", c.family->delta);
        toml::table params, slots, signs;
        for (auto& [k, v] : c.family->params) {
            params.insert(k, render(v, names));
            all.push_back(v);
        }
        for (auto& [k, v] : c.family->slots) {
            slots.insert(k, render(v, names));
            all.push_back(v);
        }
        for (auto& [k, v] : c.family->signs) signs.insert(k, v);
        if (!params.empty()) f.insert("params", params);
        if (!slots.empty()) f.insert("slots", slots);
        if (!signs.empty()) f.insert("signs", signs);
        doc.insert("family", f);
    }
    std::vector<ParamDecl> decls = param_decls_for(all);
    if (!decls.empty()) {
        toml::table p;
        for (const ParamDecl& d : decls) p.insert(d.name, d.decl);
        doc.insert("params", p);
    }
    if (c.expected) {
        toml::table x;
        x.insert("verifies", c.expected->verifies);
        x.insert("delta", c.expected->delta);
        if (c.expected->lemma31) x.insert("lemma31", *c.expected->lemma31);
        if (c.expected->family) x.insert("family", *c.expected->family);
        doc.insert("expected", x);
    }
    std::ostringstream os;
    os << doc << '\n';
    return os.str();
}

std::string manifest_for_entry(const CatalogEntry& e) {
    ManifestContent c;
    c.title = e.name + ": " + e.title;
    c.eq = &e.eq;
    if (e.triad) c.triad = &*e.triad;
    if (e.family) c.family = &*e.family;
    c.expected = &e.expected;
    return write_manifest(c);
}

std::string manifest_for_generated(const GeneratedFamily& g, const FamilySpec& spec, const std::string& title) {
    ManifestContent c;
    c.title = title;
    c.triad = &g.triad;
    c.family = &spec;
    return write_manifest(c);
}

}  // namespace psskit

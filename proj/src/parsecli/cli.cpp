#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "psskit/cli.hpp"
#include "psskit/errors.hpp"
#include "psskit/manifest.hpp"
#include "psskit/zcr.hpp"

namespace psskit {

using Json = nlohmann::ordered_json;

std::uint64_t default_seed() {
    const char* env = std::getenv("PSSKIT_SEED");
    if (!env || !*env) return 1;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    return *end == '\0' ? static_cast<std::uint64_t>(v) : 1;
}

namespace {

struct Report {
    std::ostringstream text;
    Json json;

    explicit Report(const std::string& command) {
        json["command"] = command;
        json["format"] = kManifestFormat;
    }

    void emit(std::ostream& out) const {
        out << text.str() << "--- json ---\n" << json.dump(2) << '\n';
    }
};

std::string slurp(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Manifest open_manifest(const std::string& path, std::istream& in) {
    if (path == "-") return read_manifest(slurp(in), "<stdin>");
    return load_manifest(path);
}

std::string describe_equation(const EquationSpec& eq) {
    const DepNames& n = eq.names();
    std::ostringstream os;
    for (int i = 0; i < eq.nvars(); ++i) {
        const EquationRule& r = eq.rule(i);
        std::string v = n.jet_name(jet(0, i));
        if (i) os << "; ";
        switch (r.cls) {
        case EqClass::Evolution: os << v << "_t = "; break;
        case EqClass::ChType: os << v << "_t - " << v << "_xxt = "; break;
        case EqClass::XtType: os << v << "_xt = "; break;
        }
        os << render(r.rhs, n);
    }
    return os.str();
}

void header(Report& r, const std::string& title, const std::vector<Expr>& exprs, const EquationSpec* eq) {
    if (!title.empty()) {
        r.text << "title: " << title << '\n';
        r.json["title"] = title;
    }
    if (eq) {
        r.text << "equation: " << describe_equation(*eq) << '\n';
        r.json["equation"] = describe_equation(*eq);
    }
    Json rel = Json::object();
    for (const ParamDecl& d : param_decls_for(exprs)) {
        if (d.decl.rfind("sqrt(", 0) != 0) continue;
        r.text << "where " << d.name << " = " << d.decl << '\n';
        rel[d.name] = d.decl;
    }
    if (!rel.empty()) r.json["radicals"] = rel;
}

std::vector<Expr> triad_exprs(const Triad& t) {
    std::vector<Expr> out;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 2; ++j) out.push_back(t.f(i, j));
    for (const EquationRule& r : t.eq().rules()) out.push_back(r.rhs);
    return out;
}

Triad triad_of(const Manifest& m) {
    if (m.triad) return *m.triad;
    if (m.family) return generate(*m.family).triad;
    throw ManifestError("the manifest has no [triad] or [family] table");
}

int cmd_verify(const Manifest& m, std::uint64_t seed, std::ostream& out) {
    Triad t = triad_of(m);
    const DepNames& names = t.eq().names();
    Report r("verify");
    header(r, m.title, triad_exprs(t), &t.eq());
    Residuals res = structure_residuals(t);
    std::vector<std::string> rs{render(res.r1.c, names), render(res.r2.c, names), render(res.r3.c, names)};
    r.text << "delta = " << t.delta() << '\n';
    for (int i = 0; i < 3; ++i) r.text << "residual " << i + 1 << ": " << rs[static_cast<std::size_t>(i)] << '\n';
    r.text << "residuals: " << rs[0] << ", " << rs[1] << ", " << rs[2] << '\n';
    r.json["delta"] = t.delta();
    r.json["residuals"] = rs;
    bool ok = res.all_zero();
    if (ok) {
        Nondegeneracy nd = nondegenerate(t, seed);
        Expr K = gaussian_curvature(t);
        bool k_ok = K == Expr(static_cast<long>(-t.delta()));
        r.text << "nondegenerate: " << (nd.ok ? "yes" : "no") << '\n';
        r.text << "K = " << render(K, names) << '\n';
        r.json["nondegenerate"] = nd.ok;
        r.json["determinant"] = render(nd.det, names);
        r.json["K"] = render(K, names);
        ok = nd.ok && k_ok;
    }
    r.text << "result: " << (ok ? "verified" : "not verified") << '\n';
    r.json["verified"] = ok;
    r.emit(out);
    return ok ? kExitOk : kExitFailed;
}

int cmd_check_lemma(const Manifest& m, std::uint64_t seed, std::ostream& out) {
    Triad t = triad_of(m);
    const DepNames& names = t.eq().names();
    Report r("check-lemma");
    header(r, m.title, triad_exprs(t), &t.eq());
    Lemma31Report rep = lemma31_check(t, 2, seed);
    r.text << "lambda = " << render(rep.lambda, names) << '\n';
    r.text << "G = " << render(rep.G, names) << '\n';
    r.json["lambda"] = render(rep.lambda, names);
    r.json["G"] = render(rep.G, names);
    if (rep.mu_eta) {
        const MuEta& me = *rep.mu_eta;
        r.text << "mu2 = " << render(me.mu2) << ", eta2 = " << render(me.eta2) << ", mu3 = " << render(me.mu3)
               << ", eta3 = " << render(me.eta3) << '\n';
        r.json["mu2"] = render(me.mu2);
        r.json["eta2"] = render(me.eta2);
        r.json["mu3"] = render(me.mu3);
        r.json["eta3"] = render(me.eta3);
    }
    Json conds = Json::array();
    for (const Condition& c : rep.conditions) {
        r.text << "condition " << c.name << ": " << (!c.evaluated ? "skipped" : c.ok ? "pass" : "FAIL");
        if (!c.detail.empty()) r.text << " (" << c.detail << ')';
        r.text << '\n';
        conds.push_back({{"name", c.name}, {"evaluated", c.evaluated}, {"ok", c.ok}, {"detail", c.detail}});
    }
    r.json["conditions"] = conds;
    bool ok = rep.passed();
    if (ok) {
        ClassifierQuantities q = quantities(t);
        r.text << "Q = " << render(q.Q, names) << "\nL2 = " << render(q.L2, names) << "\ngamma = " << render(q.gamma)
               << "\ncase: " << q.pattern << '\n';
        r.json["Q"] = render(q.Q, names);
        r.json["L2"] = render(q.L2, names);
        r.json["gamma"] = render(q.gamma);
        r.json["case"] = q.pattern;
    }
    r.text << "result: " << (ok ? "all conditions hold" : "conditions fail") << '\n';
    r.json["passed"] = ok;
    r.emit(out);
    return ok ? kExitOk : kExitFailed;
}

int cmd_generate(const std::optional<Manifest>& m, const std::string& draw, std::uint64_t seed, const std::string& out_path,
                 std::ostream& out) {
    FamilySpec spec;
    std::string title;
    if (!draw.empty()) {
        auto th = parse_theorem(draw);
        if (!th) throw ManifestError("unknown theorem tag '" + draw + "'");
        std::mt19937_64 rng(seed);
        spec = draw_family(*th, rng);
        title = "random " + draw + " draw, seed " + std::to_string(seed);
    } else {
        if (!m || !m->family) throw ManifestError("the manifest has no [family] table");
        spec = *m->family;
        title = m->title.empty() ? "generated " + theorem_name(spec.theorem) : m->title;
    }
    GeneratedFamily g = generate(spec);
    bool ok = true;
    for (const ConstraintEntry& c : g.constraints) ok = ok && c.holds();
    std::string text = manifest_for_generated(g, spec, title);
    if (out_path.empty()) {
        out << text;
        return ok ? kExitOk : kExitFailed;
    }
    std::ofstream f(out_path);
    if (!f) throw ManifestError(out_path + ": cannot write");
    f << text;
    const DepNames& names = g.triad.eq().names();
    Report r("generate");
    header(r, title, triad_exprs(g.triad), &g.triad.eq());
    r.text << "theorem: " << theorem_name(g.theorem) << '\n';
    r.json["theorem"] = theorem_name(g.theorem);
    Json cons = Json::array();
    for (const ConstraintEntry& c : g.constraints) {
        r.text << "constraint " << c.name << (c.expect_zero ? " = 0" : " != 0") << ": " << (c.holds() ? "holds" : "FAILS")
               << " (" << render(c.value, names) << ")\n";
        cons.push_back({{"name", c.name}, {"expect_zero", c.expect_zero}, {"value", render(c.value, names)}, {"holds", c.holds()}});
    }
    r.json["constraints"] = cons;
    Json der = Json::object();
    for (auto& [k, v] : g.derived) {
        r.text << k << " = " << render(v, names) << '\n';
        der[k] = render(v, names);
    }
    r.json["derived"] = der;
    r.text << "wrote " << out_path << '\n';
    r.json["output"] = out_path;
    r.emit(out);
    return ok ? kExitOk : kExitFailed;
}

int cmd_match(const Manifest& m, int degree, std::ostream& out) {
    if (!m.eq) throw ManifestError("the manifest has no [equation] table");
    const DepNames& names = m.eq->names();
    Report r("match");
    std::vector<Expr> exprs;
    for (const EquationRule& rule : m.eq->rules()) exprs.push_back(rule.rhs);
    header(r, m.title, exprs, &*m.eq);
    LambdaSplit sp = split_lambda(*m.eq);
    r.text << "lambda = " << render(sp.lambda, names) << "\nG = " << render(sp.G, names) << '\n';
    r.json["lambda"] = render(sp.lambda, names);
    r.json["G"] = render(sp.G, names);
    r.json["degree"] = degree;
    MatchReport rep = match_family(sp.lambda, sp.G, degree);
    Json verdicts = Json::array();
    for (const FamilyVerdict& v : rep.verdicts) {
        Json jv{{"theorem", theorem_name(v.theorem)}, {"matched", v.matched}, {"reason", v.reason}};
        r.text << theorem_name(v.theorem) << ": " << (v.matched ? "matched" : "no match");
        if (!v.reason.empty()) r.text << " (" << v.reason << ')';
        r.text << '\n';
        if (v.matched && v.spec) {
            Json params = Json::object();
            for (auto& [k, e] : v.spec->params) {
                r.text << "  " << k << " = " << render(e) << '\n';
                params[k] = render(e);
            }
            Json slots = Json::object();
            for (auto& [k, e] : v.spec->slots) {
                r.text << "  " << k << " = " << render(e) << '\n';
                slots[k] = render(e);
            }
            for (auto& [k, s] : v.spec->signs) r.text << "  " << k << " = " << s << '\n';
            jv["params"] = params;
            jv["slots"] = slots;
        }
        verdicts.push_back(jv);
    }
    r.json["verdicts"] = verdicts;
    bool any = rep.any();
    if (!any) r.text << "no family matched within ansatz (degree " << degree << ")\n";
    r.json["matched"] = any;
    r.emit(out);
    return any ? kExitOk : kExitFailed;
}

int cmd_zcr(const Manifest& m, const std::string& algebra, std::ostream& out) {
    Triad t = triad_of(m);
    const DepNames& names = t.eq().names();
    Algebra a = parse_algebra(algebra);
    MatrixForm form;
    switch (a) {
    case Algebra::sl2r: form = omega_sl2(t); break;
    case Algebra::su2: form = omega_su2(t); break;
    case Algebra::so21:
    case Algebra::so3:
        form = omega_so(t);
        if (form.algebra != a)
            throw ManifestError("algebra " + algebra + " does not fit delta = " + std::to_string(t.delta()));
        break;
    }
    Report r("zcr");
    std::vector<Expr> exprs = triad_exprs(t);
    for (const OneForm& e : form.entries) {
        exprs.push_back(e.cx);
        exprs.push_back(e.ct);
    }
    header(r, m.title, exprs, &t.eq());
    r.text << "algebra: " << algebra_name(form.algebra) << '\n';
    r.json["algebra"] = algebra_name(form.algebra);
    Json entries = Json::array();
    for (int i = 0; i < form.n; ++i)
        for (int j = 0; j < form.n; ++j) {
            const OneForm& e = form.at(i, j);
            r.text << "Omega[" << i + 1 << "," << j + 1 << "] = (" << render(e.cx, names) << ") dx + (" << render(e.ct, names)
                   << ") dt\n";
            entries.push_back({{"dx", render(e.cx, names)}, {"dt", render(e.ct, names)}});
        }
    r.json["omega"] = entries;
    MatrixTwoForm res = zc_residual(form, t.eq());
    Json rs = Json::array();
    for (int i = 0; i < res.n; ++i)
        for (int j = 0; j < res.n; ++j) {
            std::string s = render(res.at(i, j).c, names);
            r.text << "residual[" << i + 1 << "," << j + 1 << "] = " << s << '\n';
            rs.push_back(s);
        }
    r.json["residuals"] = rs;
    bool ok = res.all_zero();
    r.text << "result: " << (ok ? "zero curvature holds" : "zero curvature fails") << '\n';
    r.json["zero_curvature"] = ok;
    r.emit(out);
    return ok ? kExitOk : kExitFailed;
}

int cmd_catalog(bool run, const std::string& export_dir, std::uint64_t seed, std::ostream& out) {
    const auto& entries = load_catalog();
    Report r("catalog");
    Json list = Json::array();
    int passed = 0;
    if (!export_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(export_dir, ec);
        if (ec) throw ManifestError(export_dir + ": " + ec.message());
    }
    for (const CatalogEntry& e : entries) {
        Json je{{"name", e.name}, {"title", e.title}};
        if (!export_dir.empty()) {
            std::string path = export_dir + "/" + e.name + ".toml";
            std::ofstream f(path);
            if (!f) throw ManifestError(path + ": cannot write");
            f << manifest_for_entry(e);
        }
        if (run) {
            EntryCheck c = check_entry(e, seed);
            passed += c.pass ? 1 : 0;
            r.text << (c.pass ? "PASS " : "FAIL ") << e.name;
            for (const std::string& mm : c.mismatches) r.text << " | " << mm;
            r.text << '\n';
            je["pass"] = c.pass;
            je["observations"] = c.observations;
            je["mismatches"] = c.mismatches;
        } else {
            r.text << e.name << "  " << e.title << '\n';
        }
        list.push_back(je);
    }
    r.json["entries"] = list;
    if (!export_dir.empty()) r.text << "exported " << entries.size() << " manifests to " << export_dir << '\n';
    bool ok = true;
    if (run) {
        ok = passed == static_cast<int>(entries.size());
        r.text << passed << "/" << entries.size() << " entries matched their expected verdicts\n";
        r.json["passed"] = passed;
        r.json["total"] = entries.size();
    }
    r.emit(out);
    return ok ? kExitOk : kExitFailed;
}

int cmd_eval(const Manifest& m, int samples, std::uint64_t seed, std::ostream& out) {
    Triad t = triad_of(m);
    Report r("eval");
    header(r, m.title, triad_exprs(t), &t.eq());
    CrossCheck cc = cross_check_structure(t, samples, seed);
    std::ostringstream worst;
    worst << std::scientific << std::setprecision(3) << cc.worst;
    r.text << "samples: " << cc.samples << " (seed " << seed << ")\nworst relative deviation: " << worst.str() << '\n';
    if (!cc.detail.empty()) r.text << "detail: " << cc.detail << '\n';
    r.text << "result: " << (cc.ok ? "numeric check passed" : "numeric check failed") << '\n';
    r.json["samples"] = cc.samples;
    r.json["seed"] = seed;
    r.json["worst"] = worst.str();
    r.json["ok"] = cc.ok;
    r.emit(out);
    return cc.ok ? kExitOk : kExitFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pseudospherical-surface toolkit: verify, classify and generate structure-equation triads"};
    app.require_subcommand(1);
    std::uint64_t seed = default_seed();
    std::string path, out_path, draw, algebra = "sl2r", export_dir;
    int samples = 50, degree = 4;
    bool run = false;

    auto* verify = app.add_subcommand("verify", "structure residuals, nondegeneracy and curvature");
    auto* lemma = app.add_subcommand("check-lemma", "check the CH-type triad conditions");
    auto* gen = app.add_subcommand("generate", "build a family member and print it as a manifest");
    auto* match = app.add_subcommand("match", "match a bare CH-type equation against the families");
    auto* zcr = app.add_subcommand("zcr", "matrix zero-curvature form and its residuals");
    auto* cat = app.add_subcommand("catalog", "list, run or export the built-in catalog");
    auto* ev = app.add_subcommand("eval", "numeric cross-check of the structure equations");
    for (auto* s : {verify, lemma, match, zcr, ev}) s->add_option("manifest", path, "manifest file, or - for stdin")->required();
    for (auto* s : {verify, lemma, gen, cat, ev}) s->add_option("--seed", seed, "sampling seed");
    gen->add_option("manifest", path, "family manifest, or - for stdin");
    gen->add_option("-o,--output", out_path, "write the manifest here and print a report");
    gen->add_option("--draw", draw, "draw a random member of this family (T32, T33, T34, T35i, T35ii)");
    match->add_option("--degree", degree, "ansatz degree")->check(CLI::Range(1, 8));
    zcr->add_option("--algebra", algebra, "sl2r, su2, so21 or so3")->check(CLI::IsMember({"sl2r", "su2", "so21", "so3"}));
    cat->add_flag("--run", run, "check every entry against its expected verdict");
    cat->add_option("--export", export_dir, "write every entry as a manifest into this directory");
    ev->add_option("--samples", samples, "number of sample points")->check(CLI::Range(1, 100000));

    std::vector<std::string> argv_store{"psskit"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (verify->parsed()) return cmd_verify(open_manifest(path, in), seed, out);
        if (lemma->parsed()) return cmd_check_lemma(open_manifest(path, in), seed, out);
        if (gen->parsed()) {
            if (draw.empty() && path.empty()) throw ManifestError("generate needs a manifest or --draw");
            std::optional<Manifest> m;
            if (draw.empty()) m = open_manifest(path, in);
            return cmd_generate(m, draw, seed, out_path, out);
        }
        if (match->parsed()) return cmd_match(open_manifest(path, in), degree, out);
        if (zcr->parsed()) return cmd_zcr(open_manifest(path, in), algebra, out);
        if (cat->parsed()) return cmd_catalog(run, export_dir, seed, out);
        if (ev->parsed()) return cmd_eval(open_manifest(path, in), samples, seed, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace psskit

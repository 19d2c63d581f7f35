#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "psskit/catalog.hpp"
#include "psskit/cli.hpp"
#include "psskit/manifest.hpp"

using namespace psskit;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string entry_manifest(const char* name) { return manifest_for_entry(*find_entry(name)); }

fs::path scratch_dir() {
    fs::path p = fs::temp_directory_path() / ("psskit_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("verify") {
    Run r = cli({"verify", "-"}, entry_manifest("gch"));
    CHECK(r.code == kExitOk);
    CHECK(has(r.out, "residuals: 0, 0, 0"));
    CHECK(has(r.out, "K = -1"));
    CHECK(has(r.out, "where s_mu = sqrt(1 + mu^2)"));
    CHECK(has(r.out, "--- json ---"));

    Run nls = cli({"verify", "-"}, entry_manifest("nls_plus"));
    CHECK(nls.code == kExitOk);
    CHECK(has(nls.out, "K = 1"));

    Run bad = cli({"verify", "-"}, entry_manifest("ch_plus_alt"));
    CHECK(bad.code == kExitFailed);
    CHECK(has(bad.out, "result: not verified"));

    Run none = cli({"verify", "-"}, entry_manifest("novikov"));
    CHECK(none.code == kExitInput);
}

TEST_CASE("verify from a file and input errors") {
    fs::path dir = scratch_dir();
    fs::path f = dir / "sg.toml";
    std::ofstream(f) << entry_manifest("sg");
    CHECK(cli({"verify", f.string()}).code == kExitOk);
    CHECK(cli({"verify", (dir / "missing.toml").string()}).code == kExitInput);
    Run garbage = cli({"verify", "-"}, "x");
    CHECK(garbage.code == kExitInput);
    CHECK(has(garbage.err, "ManifestError"));
    CHECK(cli({}).code == kExitInput);
    CHECK(cli({"frobnicate"}).code == kExitInput);
    CHECK(cli({"zcr", "-", "--algebra", "gl2"}, entry_manifest("sg")).code == kExitInput);
    CHECK(cli({"--help"}).code == kExitOk);
    fs::remove_all(dir);
}

TEST_CASE("check-lemma") {
    Run r = cli({"check-lemma", "-"}, entry_manifest("gch"));
    CHECK(r.code == kExitOk);
    CHECK(has(r.out, "condition shift_invariance: pass"));
    CHECK(has(r.out, "condition coframe: pass"));
}

TEST_CASE("match") {
    Run nov = cli({"match", "-"}, entry_manifest("novikov"));
    CHECK(nov.code == kExitFailed);
    CHECK(has(nov.out, "no family matched within ansatz"));
    Run g = cli({"match", "-", "--degree", "4"}, entry_manifest("gch"));
    CHECK(g.code == kExitOk);
    CHECK(has(g.out, "T34: match"));
}

TEST_CASE("zcr") {
    for (const char* alg : {"sl2r", "su2", "so21"}) {
        Run r = cli({"zcr", "-", "--algebra", alg}, entry_manifest("sg"));
        CHECK_MESSAGE(r.code == kExitOk, alg);
        CHECK(has(r.out, "residual[1,1] = 0"));
    }
    CHECK(cli({"zcr", "-", "--algebra", "so3"}, entry_manifest("nls_plus")).code == kExitOk);
}

TEST_CASE("generate piped into verify") {
    for (const char* th : {"T32", "T33", "T34", "T35i", "T35ii"}) {
        Run g = cli({"generate", "--draw", th, "--seed", "3"});
        REQUIRE_MESSAGE(g.code == kExitOk, th << g.err);
        CHECK(has(g.out, "format = 1"));
        Run v = cli({"verify", "-"}, g.out);
        CHECK_MESSAGE(v.code == kExitOk, th << v.out);
    }
    Run fam = cli({"generate", "-"}, "format = 1\ntitle = 'f'\n[family]\ntheorem = 'T34'\n"
                                     "[family.params]\nlambda = '1'\nmu2 = '0'\neta2 = '1'\nC1 = '0'\n"
                                     "[family.slots]\nf = 'u - u2'\nphi1 = 'u*u1'\n[family.signs]\neps = 1\n");
    CHECK(fam.code == kExitOk);
    CHECK(cli({"verify", "-"}, fam.out).code == kExitOk);
    CHECK(cli({"generate", "--draw", "T99"}).code == kExitInput);
}

TEST_CASE("generate writes a file with -o") {
    fs::path dir = scratch_dir();
    fs::path f = dir / "drawn.toml";
    Run g = cli({"generate", "--draw", "T33", "--seed", "2", "-o", f.string()});
    CHECK(g.code == kExitOk);
    CHECK(fs::exists(f));
    CHECK(cli({"verify", f.string()}).code == kExitOk);
    fs::remove_all(dir);
}

TEST_CASE("catalog") {
    Run list = cli({"catalog"});
    CHECK(list.code == kExitOk);
    CHECK(has(list.out, "gch"));
    Run run = cli({"catalog", "--run"});
    CHECK(run.code == kExitOk);
    std::size_t n = load_catalog().size();
    CHECK(has(run.out, std::to_string(n) + "/" + std::to_string(n) + " entries matched"));
}

TEST_CASE("eval") {
    Run r = cli({"eval", "-", "--samples", "20", "--seed", "4"}, entry_manifest("ch_plus"));
    CHECK(r.code == kExitOk);
    CHECK(has(r.out, "samples: 20 (seed 4)"));
    Run bad = cli({"eval", "-", "--samples", "20"}, entry_manifest("nls_plus_alt"));
    CHECK(bad.code == kExitFailed);
}

TEST_CASE("reports are deterministic") {
    for (std::vector<std::string> args : std::vector<std::vector<std::string>>{
             {"generate", "--draw", "T35ii", "--seed", "8"}, {"catalog", "--run", "--seed", "5"}}) {
        CHECK(cli(args).out == cli(args).out);
    }
    std::string m = entry_manifest("dp_plus");
    CHECK(cli({"eval", "-", "--seed", "6"}, m).out == cli({"eval", "-", "--seed", "6"}, m).out);
}

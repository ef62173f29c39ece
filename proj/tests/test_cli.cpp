#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hirz/serialize.hpp"

namespace fs = std::filesystem;
using namespace hirz;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

fs::path scratch() {
    static fs::path dir = [] {
        std::string tmpl = (fs::temp_directory_path() / "hirz-cli-XXXXXX").string();
        if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
        return fs::path(tmpl);
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the CLI with a private cache directory unless args say otherwise.
Run run(const std::string& args, const std::string& env = "") {
    fs::path err = scratch() / "stderr.txt";
    std::string cmd = "HIRZ_CACHE='" + (scratch() / "cache").string() + "' " + env + " '" HIRZ_BIN "' " + args +
                      " 2>'" + err.string() + "'";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exceptional tables are byte-identical across runs and cache states") {
    Run a = run("exceptional --e 0 --max-rank 19");
    REQUIRE(a.code == 0);
    Run b = run("exceptional --e 0 --max-rank 19");
    Run c = run("--no-cache exceptional --e 0 --max-rank 19");
    Run d = run("--jobs 3 --no-cache exceptional --e 0 --max-rank 19");
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out == d.out);
    json rows = json::parse(a.out);
    CHECK(rows["records"].size() == 13);
    CHECK(fs::exists(scratch() / "cache" / "exceptional-e0.jsonl"));
}

TEST_CASE("corrupt cache is rebuilt") {
    fs::path dir = scratch() / "corrupt";
    fs::create_directories(dir);
    std::ofstream(dir / "exceptional-e1.jsonl") << "not json\n";
    Run r = run("--cache '" + dir.string() + "' exceptional --e 1 --max-rank 20");
    CHECK(r.code == 0);
    CHECK(r.err.find("corrupt cache") != std::string::npos);
    CHECK(json::parse(r.out)["records"].size() == 15);
    Run again = run("--cache '" + dir.string() + "' exceptional --e 1 --max-rank 20");
    CHECK(again.out == r.out);
    CHECK(again.err.empty());
}

TEST_CASE("unusable cache location is a cache error") {
    fs::path file = scratch() / "plain-file";
    std::ofstream(file) << "x";
    Run r = run("--cache '" + file.string() + "' exceptional --e 0 --max-rank 5");
    CHECK(r.code == 4);
}

TEST_CASE("decisions") {
    Run r = run("exists --e 0 --v 15,3,5,-8 --m 2519/900");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["verdict"] == "EMPTY");
    DecisionCertificate c = certificate_from_json(j);
    REQUIRE(c.hn);
    CHECK(c.hn->factors == std::vector<Character>{{2, 1, -1, Rational(-2)}, {13, 2, 6, Rational(-6)}});

    CHECK(json::parse(run("exists --e 1 --v 1,0,0,0 --m 1/9").out)["verdict"] == "NONEMPTY");

    Run f4 = run("exists --e 4 --v 3,1,3,-1 --m 1");
    REQUIRE(f4.code == 0);
    json jf = json::parse(f4.out);
    CHECK(jf["verdict"] == "EMPTY");
    CHECK(jf["trace"]["final_character"]["b"] == 1);
    CHECK(jf["trace"]["final_e"] == 0);
    CHECK(f4.err.find("reduc") != std::string::npos);
}

TEST_CASE("numeric outputs") {
    CHECK(json::parse(run("dlp --e 0 --m 25/9 --nu 1/5,1/3 --below-rank 15").out)["value"] == "19/35");
    CHECK(json::parse(run("dlp --e 1 --m 12/7 --nu 3/13,6/13 --below-rank 13").out)["value"] == "523/1014");
    json d = json::parse(run("delta --e 1 --m 12/7 --nu 3/13,6/13 --max-rank 13").out);
    CHECK(d["upper"] == "98/169");
    json k = json::parse(run("kronecker --e 0 --ell 3 --params 1,1,2,15").out);
    CHECK(k["m_V"] == "25/9");
    Run g = run("grid --e 0 --m 1 --square 0,1,0,1 --steps 3 --below-rank 8");
    REQUIRE(g.code == 0);
    std::istringstream lines(g.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "eps,phi,delta");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 2);
    }
    CHECK(rows == 16);
    Run red = run("reduce --e 3 --interval 1/5,7/3");
    REQUIRE(red.code == 0);
    CHECK(red.out.find("4/3") != std::string::npos);
}

TEST_CASE("exit codes") {
    Run flt = run("exists --e 0 --v 1,0,0,0 --m 0.25");
    CHECK(flt.code == 2);
    CHECK(flt.err.find("1/4") != std::string::npos);
    CHECK(run("exists --e 0 --v 2,1,0,1/3 --m 1").code == 2);
    CHECK(run("exists --e 0 --v 1,0,0 --m 1").code == 2);
    CHECK(run("exists --e 0 --v 1,0,0,0 --m 0").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("hn --e 0 --v 2,1,1,1 --m 1").code == 3);
    CHECK(run("kronecker --e 0 --ell 3 --params 1,1,1,8").code == 3);
    CHECK(run("--help").code == 0);
}

}  // TEST_SUITE

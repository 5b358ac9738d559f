#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(WDGOPT_EXE) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run("verify --problem quadratic2d --wdg avf --samples 2000") == 0);
    CHECK(run("verify --problem quartic2d --wdg gonzalez --mode chain --samples 2000") == 0);
    CHECK(run("verify --problem plsine --wdg itohabe --samples 2000") == 0);
    CHECK(run("run --problem quadratic2d --wdg mid --iters 100") == 0);
    CHECK(run("rates --L 0.4 --mu 0.004 --d 2") == 0);
    // step beyond the theorem's bound: certificate fails
    CHECK(run("run --problem quadratic2d --wdg ee --h 6 --iters 100 --theorem gf-sc") == 1);
    CHECK(run("verify --problem quadratic2d --wdg nope") == 2);
    CHECK(run("run --problem nowhere") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("run --problem quadratic2d --iters -3") == 2);
}

TEST_CASE("run CSV is reproducible") {
    const fs::path a = "cli_a.csv", b = "cli_b.csv";
    REQUIRE(run("run --problem quartic2d --wdg avf --scheme accel-convex --iters 300 --csv --out " + a.string()) == 0);
    REQUIRE(run("run --problem quartic2d --wdg avf --scheme accel-convex --iters 300 --csv --out " + b.string()) == 0);
    const std::string ta = slurp(a);
    CHECK(ta.rfind("k,t,f_gap,bound,lyapunov,inner_iters", 0) == 0);
    CHECK(ta == slurp(b));
    std::istringstream in(ta);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    CHECK(n == 302);
}

TEST_CASE("verify JSON honours the seed") {
    const std::string base = "verify --problem quartic2d --wdg mid --samples 3000 --json --out ";
    REQUIRE(run(base + "v1.json --seed 9") == 0);
    REQUIRE(run(base + "v2.json --seed 9") == 0);
    REQUIRE(run(base + "v3.json --seed 10") == 0);
    CHECK(slurp("v1.json") == slurp("v2.json"));
    CHECK(slurp("v1.json") != slurp("v3.json"));
    REQUIRE(setenv("WDG_OPT_SEED", "9", 1) == 0);
    REQUIRE(run(base + "v4.json") == 0);
    unsetenv("WDG_OPT_SEED");
    CHECK(slurp("v1.json") == slurp("v4.json"));
}

TEST_CASE("bench writes one CSV per run plus a summary") {
    const fs::path dir = "bench_sc";
    fs::remove_all(dir);
    CHECK(run("bench --which sc --out " + dir.string() + " --iters 300") == 0);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "wDG-sc_hopt.csv"));
    CHECK(fs::exists(dir / "NAG-sc_h0.4.csv"));
    const std::string csv = slurp(dir / "wDG2-sc_hopt.csv");
    CHECK(csv.rfind("k,f_gap,x1,x2", 0) == 0);
    // record 0 is the start (2,3)
    CHECK(csv.find("\n0,") != std::string::npos);
    CHECK(csv.find(",2,3\n") != std::string::npos);
    CHECK(run("bench --which convex --out bench_cvx --iters 200") == 0);
    CHECK(slurp("bench_cvx/summary.json").find("\"NAG-c\"") != std::string::npos);
    CHECK(run("bench --which nope --out x") == 2);
}

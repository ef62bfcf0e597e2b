#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {
struct Outcome {
    int code;
    std::string output;
};

Outcome cli(const std::string& args) {
    const fs::path log = fs::current_path() / "cli_test_output.txt";
    const std::string cmd = std::string("\"") + RATCLUST_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(log);
    std::ostringstream s;
    s << in.rdbuf();
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, s.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh(const std::string& name) {
    const fs::path p = fs::current_path() / ("cli_" + name);
    fs::remove_all(p);
    return p;
}
}  // namespace

TEST_CASE("newman sweep writes one row per n") {
    const fs::path dir = fresh("sweep");
    const auto r = cli("approx sweep --family newman --nmax 20 --out " + dir.string());
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(dir / "sweep_newman.csv"));
    std::string header, line;
    std::getline(csv, header);
    CHECK(header == "n,error");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 20);
}

TEST_CASE("help lists every figure subcommand") {
    const auto r = cli("--help");
    CHECK(r.code == 0);
    for (const char* f : {"fig1", "fig4", "fig6", "fig10", "fig12", "fig13", "fig14"})
        CHECK(r.output.find(std::string(f) + " ") != std::string::npos);
    for (const char* g : {"approx", "cluster", "potential", "quad", "lightning", "replay"})
        CHECK(r.output.find(g) != std::string::npos);
}

TEST_CASE("exit codes for bad invocations") {
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("approx").code == 2);
    CHECK(cli("approx sweep --nmax banana --out " + fresh("bad").string()).code == 3);
    CHECK(cli("approx sweep --family pade --out " + fresh("bad").string()).code == 3);
    CHECK(cli("approx sweep --colour red").code == 3);
    std::ofstream(fs::current_path() / "cli_blocker") << "x";
    CHECK(cli("approx sweep --nmax 3 --out " + (fs::current_path() / "cli_blocker" / "x").string()).code == 4);
    CHECK(cli("replay --manifest /nonexistent/manifest.json").code == 4);
}

TEST_CASE("manifest replay reproduces identical bytes") {
    const fs::path a = fresh("replay_a"), b = fresh("replay_b");
    REQUIRE(cli("lightning solve --polygon lshape --nmax 8 --seed 11 --out " + a.string()).code == 0);
    REQUIRE(cli("replay --manifest " + (a / "manifest.json").string() + " --out " + b.string()).code == 0);
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        if (name == "manifest.json") continue;
        CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name.string());
    }
}

TEST_CASE("figure aliases run") {
    const fs::path dir = fresh("aliases");
    CHECK(cli("fig13 --nmax 20 --csv-only --out " + dir.string()).code == 0);
    CHECK(fs::exists(dir / "quad_sweep.csv"));
    CHECK_FALSE(fs::exists(dir / "quad_sweep.gp"));
    CHECK(cli("fig6 --n 20 --out " + dir.string()).code == 0);
    CHECK(fs::exists(dir / "cluster_summary.csv"));
}

TEST_CASE("fig12 check passes on the slope-squared ratio") {
    const fs::path dir = fresh("fig12");
    const auto r = cli("approx fig12 --nmax 50 --check --out " + dir.string());
    CHECK(r.code == 0);
    CHECK(r.output.find("ratio") != std::string::npos);
    std::istringstream csv(slurp(dir / "fig12.csv"));
    std::string line;
    int rows = -1;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 25);
}

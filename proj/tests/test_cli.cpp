#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const fs::path kCli = RWALK_CLI_PATH;

struct RunResult {
    int exit_code = 0;
    std::string output_file;
};

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "rwalk_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run(const std::string& args, const fs::path& out_file) {
    const std::string cmd = kCli.string() + " " + args + " --output-path " + out_file.string() +
                            " > /dev/null 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

int run_plain(const std::string& args) {
    const std::string cmd = kCli.string() + " " + args + " > /dev/null 2> /dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

} // namespace

TEST_CASE("rho-diag writes a parameter echo followed by the table") {
    const auto out = scratch_dir() / "rho.csv";
    REQUIRE(run("rho-diag --d 2 --lambda 0.5 --n-max 8 --seed 7", out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("# command=rho-diag") == 0);
    CHECK(text.find("# lambda=0.5") != std::string::npos);
    CHECK(text.find("n,p2n,root_estimate,corrected_ratio,hk_ratio") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') >= 9);
}

TEST_CASE("identical configs give byte-identical outputs, and workers do not matter") {
    const auto a = scratch_dir() / "wsf_a.csv";
    const auto b = scratch_dir() / "wsf_b.csv";
    const auto c = scratch_dir() / "wsf_c.csv";
    REQUIRE(run("wsf-z1 --lambda 0.5 --n 6 --trials 4000 --seed 11", a) == 0);
    REQUIRE(run("wsf-z1 --lambda 0.5 --n 6 --trials 4000 --seed 11", b) == 0);
    REQUIRE(run("wsf-z1 --lambda 0.5 --n 6 --trials 4000 --seed 11 --workers 3", c) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == slurp(c));

    const auto d = scratch_dir() / "wsf_d.csv";
    REQUIRE(run("wsf-z1 --lambda 0.5 --n 6 --trials 4000 --seed 12", d) == 0);
    CHECK(slurp(a) != slurp(d));
}

TEST_CASE("domain, budget and empty-region errors map to stable exit codes without output files") {
    const auto out = scratch_dir() / "should_not_exist.csv";
    std::error_code ec;
    fs::remove(out, ec);
    CHECK(run("rho-diag --lambda 1.5", out) == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(run("speed --lambda 0", out) == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(run("bnk --n 14 --mode brute", out) == 3);
    CHECK_FALSE(fs::exists(out));
    CHECK(run("llt-diag --n 10 --sigma 0.05", out) == 4);
    CHECK_FALSE(fs::exists(out));
    CHECK(run_plain("no-such-command") == 2);
}

TEST_CASE("json output carries the config record on the first line") {
    const auto out = scratch_dir() / "er.jsonl";
    REQUIRE(run("empirical-return --d 2 --lambda 0.5 --n 2 --trials 2000 --seed 3 --output json", out) == 0);
    const std::string text = slurp(out);
    CHECK(text.rfind("{\"config\":", 0) == 0);
    CHECK(text.find("\"estimate\"") != std::string::npos);
}

TEST_CASE("config file values are applied and flags override them") {
    const auto cfg = scratch_dir() / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "lambda=0.4\nn-max=5\n";
    }
    const auto a = scratch_dir() / "cfg_a.csv";
    REQUIRE(run("rho-diag --config " + cfg.string(), a) == 0);
    CHECK(slurp(a).find("# lambda=0.4") != std::string::npos);

    const auto b = scratch_dir() / "cfg_b.csv";
    REQUIRE(run("rho-diag --config " + cfg.string() + " --lambda 0.6", b) == 0);
    CHECK(slurp(b).find("# lambda=0.6") != std::string::npos);
}

TEST_CASE("box and ust emit the documented line formats") {
    const auto g = scratch_dir() / "box.txt";
    REQUIRE(run("box --d 1 --n 2 --lambda 0.5 --boundary wired", g) == 0);
    std::istringstream is(slurp(g));
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "1 2 0.5 wired");
    int edges = 0;
    while (std::getline(is, line)) {
        CHECK(line.rfind("edge ", 0) == 0);
        ++edges;
    }
    CHECK(edges == 6);

    const auto f = scratch_dir() / "forest.txt";
    REQUIRE(run("ust --d 1 --n 2 --lambda 0.5 --boundary wired --trials 4 --seed 5", f) == 0);
    std::istringstream fs_in(slurp(f));
    int lines = 0;
    while (std::getline(fs_in, line)) {
        std::istringstream row(line);
        std::vector<long long> tags;
        long long t;
        while (row >> t) tags.push_back(t);
        CHECK(tags.size() == 5);  // 6 vertices -> 5 tree edges
        CHECK(std::is_sorted(tags.begin(), tags.end()));
        ++lines;
    }
    CHECK(lines == 4);
}

TEST_CASE("alpha and expected-intersections run end to end") {
    const auto a = scratch_dir() / "alpha.csv";
    REQUIRE(run("alpha --d 2 --lambda 0.5 --k 2 --horizon 400 --trials 500 --seed 2", a) == 0);
    CHECK(slurp(a).find("estimate") != std::string::npos);

    const auto e = scratch_dir() / "ei.csv";
    REQUIRE(run("expected-intersections --d 3 --lambda 0.5 --m 20 --n 20", e) == 0);
    CHECK(slurp(e).find("partial_sum") != std::string::npos);
}

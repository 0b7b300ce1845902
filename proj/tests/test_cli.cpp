#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ltail/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "ltail");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    return ltail::run_cli(static_cast<int>(args.size()), argv.data());
}

std::string out_path(const std::string& name) {
    auto dir = fs::temp_directory_path() / "ltail_cli_test";
    fs::create_directories(dir);
    return (dir / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string header(const std::string& text) { return text.substr(0, text.find('\n')); }

std::vector<std::vector<std::string>> rows(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        out.push_back(cells);
    }
    return out;
}

}  // namespace

TEST_CASE("sieve") {
    auto p = out_path("sieve.csv");
    REQUIRE(run({"sieve", "-X", "50", "--out", p}) == 0);
    auto t = slurp(p);
    CHECK(header(t) == "p,A_p,a_p,reduction,constants");
    auto r = rows(t);
    CHECK(r.size() == 15);
    CHECK(r[0][0] == "2");
    CHECK(r[0][1] == "-2");
    CHECK(r[4][0] == "11");
    CHECK(r[4][3] != "good");
}

TEST_CASE("lvalues, tails and barrier schemas are stable") {
    auto a = out_path("lv_a.csv"), b = out_path("lv_b.csv");
    REQUIRE(run({"lvalues", "-X", "20000", "--out", a}) == 0);
    REQUIRE(run({"lvalues", "-X", "20000", "--out", b}) == 0);
    CHECK(header(slurp(a)) == "d,value,n_max,tail_bound,constants");
    CHECK(slurp(a) == slurp(b));
    CHECK(rows(slurp(a)).size() == 3700);

    auto t1 = out_path("tails_a.csv"), t2 = out_path("tails_b.csv");
    REQUIRE(run({"tails", "-X", "20000", "--out", t1}) == 0);
    REQUIRE(run({"tails", "-X", "20000", "--out", t2}) == 0);
    CHECK(slurp(t1) == slurp(t2));
    CHECK(header(slurp(t1)) ==
          "X,alpha,V,family,count_H,family_size,vanishing,empirical_prob,gaussian_rhs,ratio,logpow_rhs,logpow_ratio,"
          "frac_moment,frac_shape,frac_ratio,constants");
    auto tr = rows(slurp(t1));
    REQUIRE(tr.size() == 4);
    for (auto& row : tr) {
        CHECK(row[5] == "3700");
        CHECK(row.back().find("s=2") != std::string::npos);  // effective constants on every row
    }

    auto bar = out_path("barrier.csv");
    REQUIRE(run({"barrier", "-X", "20000", "--alpha", "0.3", "--out", bar}) == 0);
    CHECK(header(slurp(bar)) == "r,count,probability,asymptotic_bound_rhs,constants");
}

TEST_CASE("tails contracts") {
    CHECK(run({"tails", "-X", "20000", "--alpha", "0.6", "--out", out_path("bad.csv")}) == 2);
    CHECK(run({"tails", "-X", "20000", "--alpha", "0", "--out", out_path("bad.csv")}) == 2);
    auto p = out_path("hugeV.csv");
    REQUIRE(run({"tails", "-X", "20000", "--alpha", "0.2", "--V", "1000", "--out", p}) == 0);
    auto r = rows(slurp(p));
    REQUIRE(r.size() == 1);
    CHECK(r[0][4] == "0");
    CHECK(r[0][9] == "0");
}

TEST_CASE("moments report at X=1e5") {
    auto a = out_path("mom_a.csv"), b = out_path("mom_b.csv");
    REQUIRE(run({"moments", "-X", "100000", "--seed", "4", "--out", a}) == 0);
    REQUIRE(run({"moments", "-X", "100000", "--seed", "4", "--out", b}) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(header(slurp(a)) == "quantity,params,empirical,reference,ratio,constants");
    int twisted_mean = 0;
    for (auto& r : rows(slurp(a)))
        if (r[0] == "twisted_mean") ++twisted_mean;
    CHECK(twisted_mean == 20);
}

TEST_CASE("quadform and verify exit codes") {
    CHECK(run({"quadform", "--out", out_path("qf.csv")}) == 0);
    CHECK(header(slurp(out_path("qf.csv"))) == "check,value,bound,margin,pass,constants");
    CHECK(run({"quadform", "--theta", "1,0.5,0.6,0.6", "--out", out_path("qf_bad.csv")}) != 0);
    CHECK(run({"verify", "quadform"}) == 0);
    CHECK(run({"verify", "quadform", "--theta", "1,0.5,0.6,0.6"}) != 0);
}

TEST_CASE("argument errors") {
    CHECK(run({}) != 0);
    CHECK(run({"nosuch"}) != 0);
    CHECK(run({"verify", "nosuite"}) != 0);
    CHECK(run({"lvalues", "--curve", "99z9", "-X", "100"}) == 2);
    CHECK(run({"barrier", "-X", "1e6", "--preset", "paper"}) == 2);  // degenerate schedule
}

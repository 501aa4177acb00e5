#include <cstdlib>
#include <filesystem>
#include <unistd.h>
#include <sys/wait.h>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "wmh/error.hpp"
#include "wmh/redgreen.hpp"

using namespace wmh;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("wmh_cli_" + std::to_string(std::rand()) + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void write(const std::string& p, const std::string& text) { std::ofstream(p) << text; }

const char* kData =
    "# three histograms\n"
    "a 0:1.5 3:2.0 4:0.25\n"
    "b 0:1.0 1:0.5 3:1.0\n"
    "c 2:3.25 4:1\n"
    "d 0:1.5 3:2.0 4:0.25\n";

int run_cli(const std::string& args) {
    std::string cmd = std::string(WMH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("layout command") {
    TempDir tmp;
    write(tmp.file("ints.txt"), "x 0:2 1:3\ny 0:1 2:4\n");
    cli::LayoutOptions opts;
    opts.data_path = tmp.file("ints.txt");
    opts.out_path = tmp.file("l.bin");
    opts.alpha = "1";
    std::ostringstream out;
    cli::cmd_layout(opts, out);
    auto l = RedGreenLayout::load_file(opts.out_path);
    CHECK(l.total() == 2 + 3 + 4);
    CHECK(out.str().find("M = 9") != std::string::npos);

    opts.alpha = "auto";
    opts.json = true;
    std::ostringstream js;
    cli::cmd_layout(opts, js);
    CHECK(js.str().find("\"alpha_auto\": true") != std::string::npos);

    opts.data_path = tmp.file("missing.txt");
    CHECK_THROWS_AS(cli::cmd_layout(opts, out), IoError);

    write(tmp.file("zeros.txt"), "x 0:0\n");
    opts.data_path = tmp.file("zeros.txt");
    CHECK_THROWS_AS(cli::cmd_layout(opts, out), UsageError);
}

TEST_CASE("sketch command: determinism, shape, threads") {
    TempDir tmp;
    write(tmp.file("d.txt"), kData);
    cli::LayoutOptions lo;
    lo.data_path = tmp.file("d.txt");
    lo.out_path = tmp.file("l.bin");
    lo.alpha = "auto";
    std::ostringstream sink;
    cli::cmd_layout(lo, sink);

    for (auto scheme : {Scheme::RedGreen, Scheme::Ioffe, Scheme::Reduction}) {
        cli::SketchOptions so;
        so.data_path = lo.data_path;
        so.layout_path = lo.out_path;
        so.config.scheme = scheme;
        so.config.k = 500;
        so.config.master_seed = 99;
        so.out_path = tmp.file("a.bin");
        cli::cmd_sketch(so, sink);
        so.out_path = tmp.file("b.bin");
        so.threads = 3;
        cli::cmd_sketch(so, sink);
        CHECK(slurp(tmp.file("a.bin")) == slurp(tmp.file("b.bin")));

        std::ifstream in(tmp.file("a.bin"), std::ios::binary);
        auto sk = read_sketches(in);
        REQUIRE(sk.size() == 4);
        for (const auto& s : sk) {
            CHECK(s.k() == 500);
            CHECK(s.scheme == scheme);
            CHECK(s.levels.size() == (scheme == Scheme::Ioffe ? 500u : 0u));
        }
        CHECK(sk[0] == sk[3]);  // identical input lines
    }
}

TEST_CASE("sketch command rejects data above the layout bounds") {
    TempDir tmp;
    write(tmp.file("d.txt"), "a 0:1 1:1\n");
    write(tmp.file("e.txt"), "a 0:1 1:1\n\nb 0:0.5 1:3.5\n");
    cli::LayoutOptions lo;
    lo.data_path = tmp.file("d.txt");
    lo.out_path = tmp.file("l.bin");
    std::ostringstream sink;
    cli::cmd_layout(lo, sink);

    cli::SketchOptions so;
    so.data_path = tmp.file("e.txt");
    so.layout_path = lo.out_path;
    so.out_path = tmp.file("s.bin");
    try {
        cli::cmd_sketch(so, sink);
        FAIL("expected MismatchError");
    } catch (const MismatchError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("coordinate 1") != std::string::npos);
    }
    so.layout_path.clear();
    CHECK_THROWS_AS(cli::cmd_sketch(so, sink), UsageError);
}

TEST_CASE("estimate command") {
    TempDir tmp;
    write(tmp.file("d.txt"), kData);
    std::ostringstream sink;
    cli::LayoutOptions lo;
    lo.data_path = tmp.file("d.txt");
    lo.out_path = tmp.file("l.bin");
    cli::cmd_layout(lo, sink);
    cli::SketchOptions so;
    so.data_path = lo.data_path;
    so.layout_path = lo.out_path;
    so.out_path = tmp.file("s.bin");
    so.config.k = 500;
    cli::cmd_sketch(so, sink);

    cli::EstimateOptions eo;
    eo.sketch_path = so.out_path;
    eo.pairs = {{0, 0}, {0, 2}, {1, 3}};
    eo.exact_path = lo.data_path;
    std::ostringstream out;
    cli::cmd_estimate(eo, out);
    std::istringstream rows(out.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(rows, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "i,j,j_hat,std_err,exact,abs_error");
    CHECK(lines[1] == "0,0,1,0,1,0");
    CHECK(lines[2].rfind("0,2,", 0) == 0);

    write(tmp.file("pairs.txt"), "0 1\n# skip\n2,3\n");
    eo.pairs.clear();
    eo.pairs_file = tmp.file("pairs.txt");
    eo.json = true;
    std::ostringstream js;
    cli::cmd_estimate(eo, js);
    CHECK(js.str().find("\"abs_error\"") != std::string::npos);

    eo.pairs = {{0, 9}};
    eo.pairs_file.clear();
    CHECK_THROWS_AS(cli::cmd_estimate(eo, js), UsageError);
}

TEST_CASE("bench and stats commands") {
    TempDir tmp;
    write(tmp.file("d.txt"), kData);
    cli::BenchOptions bo;
    bo.data_path = tmp.file("d.txt");
    bo.k = 50;
    bo.reps = 2;
    bo.json_path = tmp.file("bench.json");
    std::ostringstream out;
    cli::cmd_bench(bo, out);
    CHECK(out.str().find("redgreen") != std::string::npos);
    CHECK(slurp(bo.json_path).find("ms_per_vector") != std::string::npos);
    bo.reps = 0;
    CHECK_THROWS_AS(cli::cmd_bench(bo, out), UsageError);

    cli::StatsOptions st;
    st.data_path = tmp.file("d.txt");
    st.pair = {0, 1};
    st.k_max = 5;
    st.reps = 10;
    std::ostringstream csv;
    cli::cmd_stats(st, csv);
    CHECK(csv.str().rfind("k,mae_redgreen,mae_ioffe,mae_reduction\n1,", 0) == 0);
}

TEST_CASE("alpha flag parsing") {
    CHECK_FALSE(cli::parse_alpha("auto").has_value());
    CHECK(cli::parse_alpha("2.5") == 2.5);
    CHECK_THROWS_AS(cli::parse_alpha("0"), UsageError);
    CHECK_THROWS_AS(cli::parse_alpha("x"), UsageError);
}

TEST_CASE("exit codes") {
    TempDir tmp;
    write(tmp.file("neg.txt"), "a 0:1 1:-2\n");
    write(tmp.file("ok.txt"), "a 0:1 1:2\n");
    CHECK(run_cli("layout " + tmp.file("missing.txt") + " -o " + tmp.file("l.bin")) == 2);
    CHECK(run_cli("layout " + tmp.file("neg.txt") + " -o " + tmp.file("l.bin")) == 1);
    CHECK(run_cli("layout " + tmp.file("ok.txt") + " -o " + tmp.file("l.bin")) == 0);
    CHECK(run_cli("bench " + tmp.file("ok.txt") + " --reps 0") == 2);
    CHECK(run_cli("sketch " + tmp.file("ok.txt") + " -o " + tmp.file("s.bin") + " --k 0 --scheme ioffe") == 2);
    CHECK(run_cli("frobnicate") == 2);
}

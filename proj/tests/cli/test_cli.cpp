#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qpl/io/json.hpp"
#include "qpl/orthopoly/orthopoly.hpp"
#include "qpl/painleve/painleve.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

namespace fs = std::filesystem;
using namespace qpl;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("qpl_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QPL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

Json load(const fs::path& p) { return Json::parse(read_text_file(p)); }

}  // namespace

TEST_CASE("usage errors exit with 2") {
    const auto dir = scratch("usage");
    CHECK(run_cli("moments --N=16 --out-dir=" + dir.string()) == 2);
    CHECK(run_cli("moments --t=abc --out-dir=" + dir.string()) == 2);
    CHECK(run_cli("moments --t=-1/24 --alpha=0.5+xi --out-dir=" + dir.string()) == 2);
    CHECK(run_cli("moments --t=-1/24 --digits=10 --out-dir=" + dir.string()) == 2);
    CHECK(run_cli("freud --t=-1/24 --alpha=0.7 --beta=0.3 --out-dir=" + dir.string()) == 2);
    CHECK(run_cli("contours --figure=nope --out-dir=" + dir.string()) == 2);
    CHECK(run_cli("nosuchcommand") == 2);
    CHECK_FALSE(fs::exists(dir / "moments.json"));
}

TEST_CASE("moments: even form and asymmetric form") {
    const auto dir = scratch("moments");
    REQUIRE(run_cli("moments --t=-0.0417 --N=16 --alpha=0.5 --beta=0.5 --kmax=36 --digits=120 --out-dir=" +
                dir.string()) == 0);
    const auto j = load(dir / "moments.json");
    PrecisionGuard g(120);
    const auto m = complex_vector(j.at("moments"));
    REQUIRE(m.size() == 37);
    CHECK(abs(m[1]) < pow10(-100) * abs(m[0]));
    CHECK(abs(m[2]) > pow10(-5));

    const auto dir2 = scratch("moments_asym");
    REQUIRE(run_cli("moments --t=-0.0417 --alpha=1 --beta=0 --kmax=8 --out-dir=" + dir2.string()) == 0);
    const auto m2 = complex_vector(load(dir2 / "moments.json").at("moments"));
    CHECK(abs(m2[1]) > pow10(-60));
    CHECK(abs(m2[3]) > pow10(-60));
}

TEST_CASE("recurrence JSON round trip and manifest rerun") {
    const auto dir = scratch("recurrence");
    REQUIRE(run_cli("recurrence --t=-1/24 --nmax=10 --out-dir=" + dir.string()) == 0);
    const std::string text = read_text_file(dir / "recurrence.json");
    const auto rec = recurrence_from_json(Json::parse(text));
    CHECK(rec.digits == 120);
    PrecisionGuard g(rec.digits);
    CHECK(to_json(rec).dump(1) + "\n" == text);
    CHECK(rec.t == Real(-1) / 24);

    const auto again = scratch("recurrence_rerun");
    CHECK(run_cli("--out-dir=" + again.string() + " rerun --manifest=" + (dir / "recurrence.manifest.json").string()) == 0);
    CHECK(read_text_file(again / "recurrence.json") == text);
    CHECK(read_text_file(again / "recurrence.csv") == read_text_file(dir / "recurrence.csv"));

    // a tampered manifest is reported
    auto man = load(dir / "recurrence.manifest.json");
    man["outputs"][0]["sha256"] = std::string(64, '0');
    write_text_file(dir / "tampered.json", man.dump());
    CHECK(run_cli("--out-dir=" + again.string() + " rerun --manifest=" + (dir / "tampered.json").string()) == 1);
}

TEST_CASE("output directory from the environment") {
    const auto dir = scratch("env");
    const std::string cmd = "QPL_OUTPUT_DIR=" + dir.string() + " " + QPL_CLI_PATH +
                            " --threads=1 moments --t=-1/24 --kmax=2 >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(dir / "moments.json"));
    CHECK(fs::exists(dir / "moments.manifest.json"));
}

TEST_CASE("painleve: real solution and pole exit") {
    const auto dir = scratch("painleve");
    REQUIRE(run_cli("painleve --alpha=0.5 --x=-8 --out-dir=" + dir.string()) == 0);
    const auto s = painleve_from_json(load(dir / "solution.json"));
    PrecisionGuard g(s.digits);
    REQUIRE_FALSE(s.y.empty());
    Real worst = 0;
    for (const auto& y : s.y) worst = std::max(worst, abs(y.im));
    CHECK(worst < pow10(-60));
    CHECK(s.grid.back() == -8);

    const auto dir2 = scratch("painleve_pole");
    CHECK(run_cli("painleve --alpha=0.5 --x=4 --out-dir=" + dir2.string()) == 5);
    const auto s2 = painleve_from_json(load(dir2 / "solution.json"));
    CHECK(s2.halted());
}

TEST_CASE("contours and verification reports") {
    const auto dir = scratch("contours");
    REQUIRE(run_cli("contours --figure=regions --resolution=17 --out=fig.svg --out-dir=" + dir.string()) == 0);
    const std::string svg = read_text_file(dir / "fig.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("id=\"gamma4\"") != std::string::npos);
    CHECK(read_text_file(dir / "gamma1.csv").rfind("s,re_z,im_z,re_phi,im_phi\n", 0) == 0);

    const auto vr = scratch("verify_regular");
    REQUIRE(run_cli("verify-regular --n=8,12,16 --out-dir=" + vr.string()) == 0);
    CHECK(load(vr / "report.json").at("pass") == true);

    // exit code follows the report
    const auto vc = scratch("verify_critical");
    const int code = run_cli("verify-critical --n=8,12,16 --digits=120 --out-dir=" + vc.string());
    const auto rep = load(vc / "report.json");
    CHECK(code == (rep.at("pass").get<bool>() ? 0 : 1));
    CHECK(rep.at("experiment").at("digits") == 120);
}

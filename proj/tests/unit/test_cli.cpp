#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = DFRC_CLI_PATH;
const std::string kFixtures = DFRC_FIXTURE_DIR;

int run(const std::string& args) {
    const int rc = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "dfrc_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    const auto p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const std::string kBase = R"({"geometry": {"n_tx": 4, "n_rx": 4},
  "scene": {"target": {"angle_deg": 0, "power_db": 10}, "interferers": [{"angle_deg": 40, "power_db": 30}]},
  "p0_dbm": 20, "channels": {"explicit": [["1", "1j", "-1", "-1j"]]}, "gammas_db": GAMMAS})";

std::string with_gammas(const std::string& g) {
    std::string s = kBase;
    s.replace(s.find("GAMMAS"), 6, g);
    return s;
}

}  // namespace

TEST_CASE("successful runs exit 0 and write the requested format") {
    const auto out = scratch() / "fig2.csv";
    CHECK(run("tradeoff --config " + kFixtures + "/fig2_tradeoff.json --out " + out.string()) == 0);
    const auto text = slurp(out);
    CHECK(text.rfind("scenario,series,mode,K,", 0) == 0);

    const auto js = scratch() / "small.json";
    CHECK(run("convergence --format json --config " + write("ok.json", with_gammas("[10]")) + " --out " + js.string()) == 0);
    CHECK(slurp(js).find("\"columns\"") != std::string::npos);

    const auto again = scratch() / "fig2_again.csv";
    CHECK(run("tradeoff --config " + kFixtures + "/fig2_tradeoff.json --out " + again.string()) == 0);
    CHECK(slurp(again) == text);
}

TEST_CASE("config problems exit 2") {
    CHECK(run("tradeoff --config /nonexistent.json") == 2);
    CHECK(run("tradeoff --config " + write("broken.json", "{\"geometry\":")) == 2);
    CHECK(run("tradeoff --config " + write("unknown.json", with_gammas("[10], \"extra\": 1"))) == 2);
    CHECK(run("mc-sweep --config " + write("explicit.json", with_gammas("[10]"))) == 2);
    CHECK(run("tradeoff") == 2);
    CHECK(run("frobnicate --config x") == 2);
    CHECK(run("tradeoff --format xml --config " + kFixtures + "/fig2_tradeoff.json") == 2);
}

TEST_CASE("every point infeasible exits 3") {
    // |h|^2 P0 = 400, so 30 dB and above cannot be met
    CHECK(run("tradeoff --config " + write("hopeless.json", with_gammas("[30, 40]"))) == 3);
    CHECK(run("tradeoff --config " + write("partial.json", with_gammas("[10, 40]"))) == 0);
}

TEST_CASE("seed override changes Monte Carlo draws deterministically") {
    std::string cfg = slurp(kFixtures + "/remark1_gain.json");
    const auto small = write("mc.json", [&] {
        auto j = cfg;
        j.replace(j.find("\"mc_trials\": 1000"), 17, "\"mc_trials\": 3");
        return j;
    }());
    const auto a = scratch() / "a.csv", b = scratch() / "b.csv", c = scratch() / "c.csv";
    CHECK(run("mc-sweep --config " + small + " --seed 7 --out " + a.string()) == 0);
    CHECK(run("mc-sweep --config " + small + " --seed 7 --workers 2 --out " + b.string()) == 0);
    CHECK(run("mc-sweep --config " + small + " --seed 8 --out " + c.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
}

#include "doctest.h"

#include "dfrc/config.hpp"
#include "dfrc/errors.hpp"
#include "dfrc/result_table.hpp"

#include <filesystem>
#include <sstream>

using namespace dfrc;

namespace {

const std::string kMinimal = R"({
  "geometry": {"n_tx": 2, "n_rx": 3},
  "scene": {"target": {"angle_deg": 0, "power_db": 10},
            "interferers": [{"angle_deg": 30, "power_db": 30}]},
  "p0_dbm": 20,
  "channels": {"explicit": [["1+2j", "-0.5-0.25i"]]},
  "gammas_db": {"start": 0, "stop": 10, "step": 2.5}
})";

std::string fixture(const std::string& name) { return std::string(DFRC_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("complex literals") {
    CHECK(parse_complex("0.21 - 0.02i") == cplx(0.21, -0.02));
    CHECK(parse_complex("-0.56+0.65j") == cplx(-0.56, 0.65));
    CHECK(parse_complex("3") == cplx(3.0, 0.0));
    CHECK(parse_complex("-2j") == cplx(0.0, -2.0));
    CHECK(parse_complex("j") == cplx(0.0, 1.0));
    CHECK(parse_complex("1e-3-2.5e+2j") == cplx(1e-3, -250.0));
    CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
    CHECK_THROWS_AS(parse_complex(""), ConfigError);
    CHECK_THROWS_AS(parse_complex("1+2k"), ConfigError);
    for (cplx z : {cplx(0.1, -0.3), cplx(-1e-17, 4e300), cplx(1.0 / 3.0, 2.0 / 7.0)})
        CHECK(parse_complex(format_complex(z)) == z);
}

TEST_CASE("dB fields are converted once at load") {
    const auto c = parse_config(kMinimal);
    CHECK(c.p0() == doctest::Approx(100.0));
    CHECK(c.scene().target_power() == doctest::Approx(10.0));
    CHECK(c.scene().interferers()[0].power == doctest::Approx(1000.0));
    CHECK(c.scene().interferers()[0].angle == doctest::Approx(kPi / 6));
    CHECK(c.gammas_db_list() == std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0});
    CHECK(c.geometry.spacing_rx == 0.5);
    CHECK(c.channels.explicit_channels[0][1] == cplx(-0.5, -0.25));
    CHECK(c.mode == ModeSelect::NonDedicated);
}

TEST_CASE("load, emit, load is the identity") {
    const auto a = parse_config(kMinimal);
    CHECK(parse_config(emit_config(a)) == a);
    CHECK(emit_config(parse_config(emit_config(a))) == emit_config(a));
    std::size_t n = 0;
    for (const auto& e : std::filesystem::directory_iterator(DFRC_FIXTURE_DIR)) {
        if (e.path().extension() != ".json") continue;
        const auto c = load_config(e.path().string());
        CHECK(parse_config(emit_config(c)) == c);
        ++n;
    }
    CHECK(n >= 6);
}

TEST_CASE("fixtures carry the reference channels") {
    const auto c = load_config(fixture("fig2_tradeoff.json"));
    REQUIRE(c.channels.explicit_channels.size() == 1);
    CHECK(c.channels.explicit_channels[0][0] == cplx(0.21, -0.02));
    CHECK(c.channels.explicit_channels[0][7] == cplx(1.02, -0.35));
    const auto f4 = load_config(fixture("fig4_beampattern_antennas.json"));
    CHECK(f4.explicit_channels_for(10, 1)[0].head(8) == f4.explicit_channels_for(8, 1)[0]);
    CHECK(f4.explicit_channels_for(8, 1)[0].head(6) == f4.explicit_channels_for(6, 1)[0]);
    CHECK_THROWS_AS(f4.explicit_channels_for(12, 1), ConfigError);
}

TEST_CASE("bad configs are rejected") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[]"), ConfigError);
    auto with = [&](const std::string& from, const std::string& to) {
        std::string s = kMinimal;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    CHECK_THROWS_AS(parse_config(with("\"n_tx\": 2", "\"n_tx\": 0")), ConfigError);
    CHECK_THROWS_AS(parse_config(with("\"n_tx\": 2", "\"n_tx\": \"two\"")), ConfigError);
    CHECK_THROWS_AS(parse_config(with("\"angle_deg\": 30", "\"angle_deg\": 90")), ConfigError);
    CHECK_THROWS_AS(parse_config(with("\"p0_dbm\": 20", "\"p0_dbm\": 20, \"colour\": 1")), ConfigError);
    CHECK_THROWS_AS(parse_config(with("\"step\": 2.5", "\"step\": 0")), ConfigError);
    CHECK_THROWS_AS(parse_config(with("\"1+2j\"", "\"1+2q\"")), ConfigError);
    CHECK_THROWS_AS(parse_config(with("{\"explicit\": [[\"1+2j\", \"-0.5-0.25i\"]]}", "{}")), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("result table formatting") {
    ResultTable t({"name", "x", "x_db", "k", "note"});
    t.new_row();
    t.set("name", std::string("a,b"));
    t.set_db("x", 100.0);
    t.set("k", 3L);
    t.new_row();
    t.set("name", std::string("q\"uote"));
    t.set_db("x", 0.1);
    t.set("note", std::nan(""));
    std::ostringstream csv;
    t.write_csv(csv);
    CHECK(csv.str() == "name,x,x_db,k,note\n\"a,b\",100,20,3,\n\"q\"\"uote\",0.1,-10,,\n");

    std::ostringstream js;
    t.write_json(js);
    CHECK(js.str().find("\"x_db\": -10") != std::string::npos);
    CHECK(js.str().find("\"note\": null") != std::string::npos);
    CHECK(js.str().find("\"name\": \"q\\\"uote\"") != std::string::npos);

    CHECK(t.number(0, "x_db") == doctest::Approx(10 * std::log10(t.number(0, "x"))));
    CHECK_THROWS_AS(t.set("missing", 1.0), InvalidArgument);

    t.sort_by({"x"});
    CHECK(t.text(0, "name") == "q\"uote");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
    CHECK(std::strtod(format_number(2.0 / 3.0).c_str(), nullptr) == 2.0 / 3.0);
    CHECK(format_list({1.0, 2.5}) == "1;2.5");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moirepw/config.hpp"
#include "moirepw/io.hpp"

using namespace moirepw;

namespace {

const char* kMinimal1d = R"(
dim = 1
[lattice1]
length = 2
[lattice2]
length = 1.236
[potential1]
type = gaussian
s = 3
gamma = 0.05
[potential2]
type = gaussian
s = 2
gamma = 0.05
[basis]
w = 6
l = 12
[grid]
lo = 0
hi = 10
)";

} // namespace

TEST_CASE("parse grammar") {
    FlatConfig flat = parse_config_text("a = 1\n[sec]\nx = 2  # comment\n\ny = hello world\n");
    CHECK(flat.at("a") == "1");
    CHECK(flat.at("sec.x") == "2");
    CHECK(flat.at("sec.y") == "hello world");

    CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[never closed\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
}

TEST_CASE("validate a minimal 1D config") {
    ExperimentConfig cfg = validate_config(parse_config_text(kMinimal1d));
    CHECK(cfg.dim == 1);
    CHECK(cfg.l1_length == 2.0);
    CHECK(cfg.w == 6.0);
    CHECK(cfg.pot1.s == 3.0);
    CHECK(cfg.grid_hi(0) == 10.0);
    CHECK(cfg.convention == KineticConvention::full);
    CHECK(cfg.seed == 12345);
}

TEST_CASE("unknown and missing keys are named") {
    FlatConfig flat = parse_config_text(kMinimal1d);
    flat["nonsense.key"] = "1";
    try {
        validate_config(flat);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("nonsense.key") != std::string::npos);
    }

    FlatConfig missing = parse_config_text(kMinimal1d);
    missing.erase("basis.w");
    try {
        validate_config(missing);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("basis.w") != std::string::npos);
    }
}

TEST_CASE("overrides") {
    FlatConfig flat = parse_config_text(kMinimal1d);
    apply_override(flat, "potential1.s=4.5");
    apply_override(flat, "weyl.convention=half");
    ExperimentConfig cfg = validate_config(flat);
    CHECK(cfg.pot1.s == 4.5);
    CHECK(cfg.convention == KineticConvention::half);
    CHECK_THROWS_AS(apply_override(flat, "no-equals-sign"), ConfigError);
}

TEST_CASE("mode-list potentials and dim checks") {
    FlatConfig flat = parse_config_text(kMinimal1d);
    flat["potential1.type"] = "modes";
    flat["potential1.modes"] = "0 3 0; 1 0.5 0.25";
    flat.erase("potential1.s");
    flat.erase("potential1.gamma");
    ExperimentConfig cfg = validate_config(flat);
    REQUIRE(cfg.pot1.mode_entries.size() == 2);
    CHECK(cfg.pot1.mode_entries[1].second == Complex(0.5, 0.25));

    SUBCASE("2D keys rejected in 1D") {
        FlatConfig bad = parse_config_text(kMinimal1d);
        bad["lattice1.matrix"] = "1 0 0 1";
        CHECK_THROWS_AS(validate_config(bad), ConfigError);
    }
}

TEST_CASE("recipes validate") {
    ExperimentConfig e1 = validate_config(example1_recipe());
    CHECK(e1.dim == 1);
    CHECK(e1.w == 50.0);
    CHECK(e1.l == 200.0);
    CHECK(e1.has_mu);
    CHECK(e1.mu == 3.8);
    CHECK(e1.has_weyl_window);

    ExperimentConfig e2 = validate_config(example2_recipe());
    CHECK(e2.dim == 2);
    CHECK(e2.w == 5.0);
    CHECK(e2.l == 20.0);
    CHECK(e2.lattice2_from_1);
    CHECK(e2.angle2_deg == 5.0);
    CHECK(e2.a1(1, 0) == doctest::Approx(-std::sqrt(3.0)));
}

TEST_CASE("format_double round trips") {
    for (double v : {0.2, 1.0 / 3.0, 5.083203692315259, -1e-17, 12345.0}) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

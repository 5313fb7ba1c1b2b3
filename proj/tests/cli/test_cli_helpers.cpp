#include "doctest.h"

#include <cmath>
#include <sstream>

#include "cli/app.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "isofield/error.hpp"

using namespace isofield;
using namespace isofield::cli;

TEST_SUITE("cli") {

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("numbers round trip exactly") {
    for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 1.0})
        CHECK(parse_double(format_number(v), "v") == v);
    CHECK(format_number(-0.0) == "0");
    CHECK_THROWS_AS(parse_double("1.5x", "v"), Error);
    CHECK_THROWS_AS(parse_int("2.0", "v"), Error);
}

TEST_CASE("csv quoting round trip") {
    std::ostringstream os;
    CsvWriter w(os);
    w.meta({"test", "{}", std::nullopt});
    w.header({"a", "b"});
    w.row(std::string("x,\"y\""), 1.5);
    w.row(std::string("plain"), -2.0);
    const auto t = parse_csv(os.str());
    REQUIRE(t.comments.size() == 1);
    CHECK(t.comments[0].find("config_hash=") != std::string::npos);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][t.column("a")] == "x,\"y\"");
    CHECK(t.rows[1][t.column("b")] == "-2");
    CHECK_THROWS_AS(t.column("missing"), Error);
    CHECK(data_lines(os.str()).size() == 3);
}

TEST_CASE("unknown keys are rejected with their path") {
    json resolved;
    const json in = json::parse(R"({"kind":"scalar","points":[[0,0,0]],"spectral":[[1,1]],"extra":1})");
    try {
        parse_plan(in, resolved, FieldKind::scalar);
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
        CHECK(std::string(e.what()).find("'plan.extra'") != std::string::npos);
    }
}

TEST_CASE("defaults are recorded in the resolved config") {
    json resolved;
    const json in = json::parse(R"({"points":[[0,0,0]],"spectral":[[1,1]]})");
    const auto plan = parse_plan(in, resolved, FieldKind::scalar);
    CHECK(plan.ell_max == 16);
    CHECK(plan.realizations == 1);
    CHECK(resolved.at("ell_max") == 16);
    CHECK(resolved.at("realizations") == 1);
}

TEST_CASE("spectrum table ignores ells above ell_max") {
    json resolved;
    bool parity = false;
    const json in = json::parse(R"({"model":"table","cells":[
        {"ell":2,"C":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]},
        {"ell":9,"C":[[5,0,0,0],[0,5,0,0],[0,0,5,0],[0,0,0,5]]}]})");
    const auto s = parse_spectrum(in, resolved, 4, parity);
    CHECK(s.ell_max == 4);
    CHECK(s.C[2](0, 0) == 1.0);
    CHECK(s.C[3](0, 0) == 0.0);
}

TEST_CASE("exit codes") {
    std::ostringstream out, err;
    const char* ok[] = {"isofield", "gg", "check", "--ell-max", "3"};
    CHECK(run(5, ok, out, err) == 0);
    const char* bad_flag[] = {"isofield", "gg", "check", "--bogus"};
    CHECK(run(4, bad_flag, out, err) == 1);
    const char* missing[] = {"isofield", "simulate", "scalar", "--plan", "/nonexistent/plan.json", "--seed", "1"};
    CHECK(run(7, missing, out, err) == 1);
}

}

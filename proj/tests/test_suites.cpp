#include "qgroup/suites.hpp"

#include <doctest.h>

using namespace qgroup;

namespace {

nlohmann::json without_ms(nlohmann::json j) {
    for (auto& c : j["checks"]) c.erase("ms");
    return j;
}

}  // namespace

TEST_CASE("config json round trip and unknown fields") {
    RunConfig c;
    c.grid = "0,1/2,1";
    c.suites = {"jacobi"};
    c.depth = 3;
    const RunConfig d = RunConfig::from_json(c.to_json());
    CHECK(d.to_json() == c.to_json());
    CHECK_THROWS_AS(RunConfig::from_json({{"grid", "0,1"}, {"bogus", 1}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"presentation", "Nope"}}), ConfigError);
}

TEST_CASE("config validation") {
    RunConfig c;
    c.suites = {"nope"};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(run(c), ConfigError);

    RunConfig big;
    big.grid = "0,1,2,3,4,5,6";
    CHECK_THROWS_AS(big.validate(), ConfigError);

    RunConfig shallow;
    shallow.suites = {"qdp-membership"};
    shallow.order = 4;
    shallow.depth = 4;
    CHECK_THROWS_AS(shallow.validate(), ConfigError);

    RunConfig bad_element;
    bad_element.suites = {"qdp-membership"};
    bad_element.elements = {"X+[0,9)"};
    CHECK_THROWS(bad_element.validate());

    RunConfig all;
    all.validate();
    CHECK(all.suites == suite_names());
}

TEST_CASE("quiver-audit and jacobi suites pass") {
    RunConfig c;
    c.suites = {"quiver-audit", "jacobi"};
    const Report r = run(c);
    CHECK(r.ok());
    CHECK(r.passed == static_cast<int>(r.checks.size()));
    for (const auto& rec : r.checks) CHECK_FALSE(rec.anchor.empty());
    CHECK(std::is_sorted(r.checks.begin(), r.checks.end(),
                         [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; }));
}

TEST_CASE("reports are deterministic up to timings") {
    RunConfig c;
    c.suites = {"confluence"};
    c.grid = "0,1";
    CHECK(without_ms(run(c).json()) == without_ms(run(c).json()));
}

TEST_CASE("a non-member element is recorded as a failure with a witness") {
    RunConfig c;
    c.suites = {"qdp-membership"};
    c.grid = "0,1";
    c.elements = {"H[0,1)", "(q-1)*H[0,1)"};
    const Report r = run(c);
    CHECK_FALSE(r.ok());
    CHECK(r.failed == 1);
    const auto j = r.json();
    CHECK(j["summary"]["fail"] == 1);
    bool seen = false;
    for (const auto& rec : r.checks)
        if (rec.name == "qdp-membership/element-000 H[0,1)") {
            seen = true;
            CHECK(rec.status == "fail");
            CHECK(rec.witness.find("\"n\":1") != std::string::npos);
        }
    CHECK(seen);
}

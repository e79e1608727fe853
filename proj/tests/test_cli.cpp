#include <catch_amalgamated.hpp>

#include "oligocat/cli.hpp"

using oligocat::cli::runCommand;
using Json = nlohmann::json;

namespace {

struct RunResult {
    int code;
    std::string out, err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = runCommand(args, out, err);
    return {code, out.str(), err.str()};
}

Json parsed(const RunResult& r) { return Json::parse(r.out); }

const std::string kFinset = "scenarios/finset.json";
const std::string kZ2 = "scenarios/z2.json";
const std::string kParts = "scenarios/partitions.json";

}  // namespace

TEST_CASE("exit codes") {
    SECTION("missing scenario file") {
        auto r = run({"oddness", "scenarios/nope.json"});
        CHECK(r.code == 2);
        CHECK(r.err.find("error") != std::string::npos);
    }
    SECTION("unknown command") {
        CHECK(run({"frobnicate", kFinset}).code == 2);
    }
    SECTION("unknown flag") {
        CHECK(run({"oddness", kFinset, "--bogus"}).code == 2);
    }
    SECTION("bad object spec") {
        CHECK(run({"subobjects", kFinset, "--object", "nope"}).code == 2);
    }
    SECTION("bound error surfaces as exit 2") {
        CHECK(run({"subobjects", kFinset, "--object", "[13]"}).code == 2);
    }
}

TEST_CASE("oddness command") {
    SECTION("trivial group is odd") {
        auto r = run({"oddness", kFinset});
        CHECK(r.code == 0);
        Json j = parsed(r);
        CHECK(j["odd"] == true);
        CHECK(j["pass"] == true);
    }
    SECTION("two-element group fails with a two-atom witness") {
        auto r = run({"oddness", kZ2});
        CHECK(r.code == 1);
        Json j = parsed(r);
        CHECK(j["odd"] == false);
        std::string w = j["witness"];
        CHECK(w.find("2 atoms") != std::string::npos);
    }
}

TEST_CASE("mobius command") {
    auto r = run({"mobius", kFinset, "--object", "[3]"});
    REQUIRE(r.code == 0);
    Json j = parsed(r);
    CHECK(j["bottom-to-top"] == "-1");
    // the table contains the full-interval entry explicitly
    bool found = false;
    for (const auto& row : j["table"])
        if (row["from"] == "0,0,0," && row["to"] == "1,1,1,") {
            CHECK(row["value"] == "-1");
            found = true;
        }
    CHECK(found);
}

TEST_CASE("subobjects and atom products") {
    SECTION("subobjects of a 2-point set") {
        auto r = run({"subobjects", kFinset, "--object", "[2]"});
        REQUIRE(r.code == 0);
        CHECK(parsed(r)["count"] == 4);
    }
    SECTION("the square of the 2-point set has seven ample atoms") {
        auto r = run({"atom-product", kFinset, "--object", "[2]"});
        REQUIRE(r.code == 0);
        CHECK(parsed(r)["atom-count"] == 7);
    }
    SECTION("regular orbit squared under the flip has three atoms") {
        auto r = run({"atom-product", kZ2, "--object", "reg"});
        REQUIRE(r.code == 0);
        CHECK(parsed(r)["atom-count"] == 3);
    }
}

TEST_CASE("measure commands") {
    SECTION("derive-measure reports the power base") {
        auto r = run({"derive-measure", kFinset});
        REQUIRE(r.code == 0);
        Json j = parsed(r);
        CHECK(j["power-base"] == "-1");
        for (const auto& row : j["values"]) {
            std::string v = row["value"];
            CHECK((v == "1" || v == "-1"));
        }
    }
    SECTION("check-degree and check-measure pass on both instances") {
        CHECK(run({"check-degree", kFinset}).code == 0);
        CHECK(run({"check-measure", kFinset}).code == 0);
        CHECK(run({"check-degree", kParts}).code == 0);
        CHECK(run({"check-measure", kParts}).code == 0);
    }
    SECTION("regular-solve finds the two roots") {
        auto r = run({"regular-solve", kFinset, "--max-points", "2"});
        REQUIRE(r.code == 0);
        Json j = parsed(r);
        REQUIRE(j["roots"].size() == 2);
        CHECK(j["roots"][0] == "-2");
        CHECK(j["roots"][1] == "-1");
    }
}

TEST_CASE("morphism algebra commands") {
    SECTION("knop-compose of full relations") {
        auto r = run({"knop-compose", kFinset, "--object", "[2]"});
        REQUIRE(r.code == 0);
        Json j = parsed(r);
        REQUIRE(j["terms"].size() == 1);
        CHECK(j["terms"][0]["relation"] == "1,1,1,1,");
        CHECK(j["terms"][0]["coeff"] == "1");
    }
    SECTION("knop-compose with the singleton partitions gives t") {
        auto r = run({"knop-compose", kParts, "--object", "[1]", "--rel-b", "01", "--rel-a",
                      "01"});
        REQUIRE(r.code == 0);
        Json j = parsed(r);
        REQUIRE(j["terms"].size() == 1);
        CHECK(j["terms"][0]["coeff"] == "t");
    }
    SECTION("perm-compose reports a cyclic trace") {
        auto r = run({"perm-compose", kFinset, "--object", "[2]", "--seed", "9"});
        REQUIRE(r.code == 0);
        Json j = parsed(r);
        CHECK(j["dim"] == "1");
        CHECK(j["trace-cyclic"] == true);
        CHECK(j["trace-mn"] == j["trace-nm"]);
    }
    SECTION("deterministic output for a fixed seed") {
        auto r1 = run({"perm-compose", kFinset, "--object", "[2]", "--seed", "4"});
        auto r2 = run({"perm-compose", kFinset, "--object", "[2]", "--seed", "4"});
        CHECK(r1.out == r2.out);
    }
}

TEST_CASE("verification commands") {
    SECTION("phi-verify passes at small bounds") {
        auto r = run({"phi-verify", kFinset, "--max-points", "2"});
        CHECK(r.code == 0);
        Json j = parsed(r);
        CHECK(j["report"]["failures"].empty());
    }
    SECTION("phi-verify on the partition instance") {
        CHECK(run({"phi-verify", kParts, "--max-elements", "2"}).code == 0);
    }
    SECTION("deligne-compare") {
        auto r = run({"deligne-compare", kParts, "--max-elements", "2"});
        REQUIRE(r.code == 0);
        CHECK(parsed(r)["checked"] == 449);
    }
    SECTION("deligne-compare rejects the exact instance") {
        CHECK(run({"deligne-compare", kFinset}).code == 2);
    }
    SECTION("nilpotent-search exhausts on the 2-point atom union") {
        auto r = run({"nilpotent-search", kFinset, "--object", "[2]"});
        REQUIRE(r.code == 0);
        CHECK(parsed(r)["found"] == false);
    }
    SECTION("dichotomy on the 2-point set gives the symmetric group") {
        auto r = run({"dichotomy", kFinset, "--object", "[2]"});
        REQUIRE(r.code == 0);
        Json j = parsed(r);
        CHECK(j["kind"] == "subgroup");
        CHECK(j["group-order"] == 2);
    }
}

TEST_CASE("aggregate report") {
    SECTION("exact instance") {
        auto r = run({"report-all", kFinset, "--max-points", "2"});
        CHECK(r.code == 0);
        Json j = parsed(r);
        for (const auto& row : j["checks"]) CHECK(row["pass"] == true);
    }
    SECTION("partition instance") {
        CHECK(run({"report-all", kParts, "--max-elements", "2"}).code == 0);
    }
    SECTION("text mode emits flat lines") {
        auto r = run({"oddness", kFinset, "--text"});
        CHECK(r.code == 0);
        CHECK(r.out.find("odd: true") != std::string::npos);
    }
}

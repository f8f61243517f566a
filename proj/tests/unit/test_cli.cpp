#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "valkey/error.hpp"
#include "valkey/json_io.hpp"

using namespace valkey;
using oracle::P;

namespace {

const char* kExample = R"J({"ground":{"type":"tadic","coefficients":"rationals"},
 "chain":[{"type":"monomial","gamma":"1"},{"type":"augmented","key":"x - t - t^2","gamma":"4"}]})J";

const char* kLimit = R"J({"ground":{"type":"tadic","coefficients":"rationals"},
 "chain":[{"type":"monomial","gamma":"1"},
  {"type":"limit","prefix":[{"key":"x - t","gamma":"2"},{"key":"x - t - t^2","gamma":"3"},{"key":"x - t - t^2 - t^3","gamma":"4"}],
   "key":"x - t/(1 - t)","gamma":"inf"},
  {"type":"truncation","key":"x - t/(1 - t)"}]})J";

const char* kPrefix = R"J({"base":{"ground":{"type":"tadic","coefficients":"rationals"},"chain":[{"type":"monomial","gamma":"1"}]},
 "members":[{"key":"x - t","gamma":"2"},{"key":"x - t - t^2","gamma":"3"},{"key":"x - t - t^2 - t^3","gamma":"4"},
            {"key":"x - t - t^2 - t^3 - t^4","gamma":"5"},{"key":"x - t - t^2 - t^3 - t^4 - t^5","gamma":"6"}]})J";

struct Run {
    int code;
    std::string out;
    Json json() const { return parse_json_text(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str()};
}

}  // namespace

TEST_CASE("descriptor documents round-trip") {
    for (const char* text : {kExample, kLimit}) {
        Descriptor d = parse_descriptor(parse_json_text(text));
        std::string once = dump(to_json(d));
        Descriptor again = parse_descriptor(parse_json_text(once));
        CHECK(dump(to_json(again)) == once);
        for (const auto& f : enumerate_polys(d.field(), 1, 2)) CHECK(eval(again.valuation, f) == eval(d.valuation, f));
    }
    auto d = parse_descriptor(parse_json_text(kLimit));
    CHECK(d.truncation);
    CHECK(d.valuation.kind() == Valuation::Kind::Truncation);
    CHECK(d.chain.is_limit_step(1));
}

TEST_CASE("prefix documents round-trip") {
    FamilyPrefix p = parse_prefix(parse_json_text(kPrefix));
    CHECK(p.size() == 5);
    std::string once = dump(to_json(p));
    CHECK(dump(to_json(parse_prefix(parse_json_text(once)))) == once);
}

TEST_CASE("document errors") {
    try {
        parse_json_text("{\n  \"ground\": [1,\n  }");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_descriptor(parse_json_text(R"J({"ground":{"type":"padic","p":2},"chain":[]})J")), Error);
    CHECK_THROWS_AS(parse_descriptor(parse_json_text(R"J({"ground":{"type":"padic","p":4},"chain":[{"type":"monomial","gamma":"0"}]})J")), Error);
    CHECK_THROWS_AS(parse_descriptor(parse_json_text(
                        R"J({"ground":{"type":"padic","p":2},"chain":[{"type":"monomial","gamma":"0"},{"type":"truncation","key":"x"},{"type":"augmented","key":"x - 1","gamma":"3"}]})J")),
                    Error);
    CHECK(parse_ground_field(parse_json_text(R"J({"type":"tadic","coefficients":"prime","p":3})J")) == GroundField::tadic_prime(3));
    CHECK(parse_value(parse_json_text("\"inf\"")).is_infinite());
    CHECK(parse_value(parse_json_text("7")) == Value(7));
}

TEST_CASE("cli examples") {
    auto e = run({"eval", "-d", kExample, "-f", "x - t"});
    CHECK(e.code == cli::kOk);
    CHECK(e.out == "{\"schemaVersion\":\"1\",\"value\":\"2\"}\n");
    auto x = run({"expand", "-q", "x", "-f", "x^2 + 1"});
    CHECK(x.code == cli::kOk);
    CHECK(x.json()["parts"] == Json::array({"1", "0", "1"}));
    auto arr = run({"expand", "-q", "x", "-f", R"J(["1","0","1"])J", "--ground", "padic:3"});
    CHECK(arr.json()["parts"] == Json::array({"1", "0", "1"}));
    auto c = run({"check", "axioms", "-d", kExample, "--trials", "100", "--seed", "7"});
    CHECK(c.code == cli::kOk);
    CHECK(c.json()["pass"] == true);
    CHECK(c.json()["suite"] == "axioms");
    CHECK(run({"version"}).json()["version"].is_string());
}

TEST_CASE("cli exit codes") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"eval", "-d", kExample}).code == cli::kUsage);
    auto parse = run({"eval", "-d", kExample, "-f", "x +* 1"});
    CHECK(parse.code == cli::kUsage);
    CHECK(parse.json()["error"]["kind"] == "Parse");
    CHECK(parse.json()["error"]["column"] == 4);
    CHECK(run({"eval", "-d", "/nonexistent/file.json", "-f", "x"}).code == cli::kUsage);
    CHECK(run({"family", "stabilize", "-p", kPrefix, "-f", "x - t/(1 - t)"}).code == cli::kNotStabilized);
    CHECK(run({"family", "stabilize", "-p", kPrefix, "-f", "x + 1"}).code == cli::kOk);
    auto bad_key = R"J({"ground":{"type":"tadic","coefficients":"rationals"},
      "chain":[{"type":"monomial","gamma":"1"},{"type":"augmented","key":"x - t","gamma":"3"},{"type":"truncation","key":"x^2"}]})J";
    CHECK(run({"check", "axioms", "-d", bad_key, "--trials", "50"}).code == cli::kCheckFailed);
    CHECK(run({"family", "limit-check", "-p", kPrefix, "-f", "x", "--gamma", "10"}).code == cli::kCheckFailed);
}

TEST_CASE("cli subcommands emit re-parsable values") {
    auto a = run({"alpha", "-d", kExample, "-i", "0"});
    CHECK(a.json()["alpha"] == 1);
    auto k = run({"check-key", "-d", kLimit});
    CHECK(k.code == cli::kOk);
    CHECK(k.json()["verdicts"][1]["kind"] == "LimitKey");
    auto key_text = k.json()["verdicts"][1]["key"].get<std::string>();
    CHECK(P(oracle::tq(), key_text.c_str()) == P(oracle::tq(), "x - t/(1 - t)"));
    auto f = run({"initial-form", "-d", kExample, "-i", "1", "-f", "x^2"});
    CHECK(f.json()["value"] == "2");
    for (const auto& term : f.json()["terms"]) CHECK_NOTHROW(P(oracle::tq(), term["coefficient"].get<std::string>().c_str()));
    CHECK(run({"equivalent", "-d", kExample, "-f", "x - t", "-g", "x - t + t^3"}).json()["equivalent"] == true);
    CHECK(run({"psi", "-d", kExample, "-i", "0", "-f", "x - t - t^2"}).json()["member"] == true);
    CHECK(run({"divides", "-d", kExample, "-i", "1", "-f", "x - t - t^2"}).json()["divides"] == true);
    auto eps = run({"epsilon", "-d", kExample, "-f", "x^2 - t"});
    CHECK(parse_value(eps.json()["epsilon"]) == Value(1, 2));
    auto cmp = run({"compare-keys", "-d", kExample, "-f", "x", "-g", "x - t - t^2"});
    CHECK(cmp.code == cli::kOk);
    CHECK(cmp.json()["pass"] == true);
    auto cl = run({"family", "classify", "-p", kPrefix, "-f", "x - t/(1 - t)"});
    CHECK(cl.json()["kind"] == "PresumedUnbounded");
}

TEST_CASE("cli output is byte-identical across reruns and honours VALKEY_OUTPUT") {
    std::vector<std::string> args{"check", "keys", "-d", kExample, "--trials", "60", "--seed", "3"};
    CHECK(run(args).out == run(args).out);
    auto compact = run({"eval", "-d", kExample, "-f", "x"}).out;
    auto pretty = run({"--output", "pretty", "eval", "-d", kExample, "-f", "x"}).out;
    CHECK(pretty != compact);
    CHECK(parse_json_text(pretty) == parse_json_text(compact));
    setenv("VALKEY_OUTPUT", "json", 1);
    CHECK(run({"--output", "pretty", "eval", "-d", kExample, "-f", "x"}).out == compact);
    setenv("VALKEY_OUTPUT", "bogus", 1);
    CHECK(run({"eval", "-d", kExample, "-f", "x"}).code == cli::kUsage);
    unsetenv("VALKEY_OUTPUT");
}

#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "lpcorr/cli.hpp"
#include "lpcorr/errors.hpp"

using namespace lpcorr;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);)
        if (l == line) return true;
    return false;
}

bool contains(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

} // namespace

TEST_CASE("density command") {
    CHECK(invoke({"density", "-p", "2", "-H", "0,4,6"}).out == "eta=1/6 decimal=0.166666666667\n");
    CHECK(invoke({"density", "-p", "3", "-H", "0,4,6"}).out == "eta=5/12 decimal=0.416666666667\n");
    CHECK(contains(invoke({"density", "-p", "5", "-H", "7"}).out, "eta=1/6 "));

    const Result t = invoke({"density", "-p", "2", "-H", "0,4,6", "--trace"});
    CHECK(t.code == 0);
    CHECK(has_line(t.out, "[3] H={0,2} rescale: (H-0)/2 -> [2] / 2 = 1/3"));
    CHECK(has_line(t.out, "[6] H={0,4,6} rescale: (H-0)/2 -> (1 - [5]) / 2 = 1/6"));
}

TEST_CASE("kappa command") {
    CHECK(has_line(invoke({"kappa", "-P", "3", "-H", "1,2"}).out, "kappa=0/1 decimal=0"));
    CHECK(contains(invoke({"kappa", "-P", "2", "-H", "0"}).out, "kappa=1/3 "));
    CHECK(contains(invoke({"kappa", "-P", "2,3", "-H", "0,4,6"}).out, "kappa=1/9 "));
    CHECK(contains(invoke({"kappa", "-P", "", "-H", "0,1"}).out, "kappa=1/1 "));
    const Result tail = invoke({"kappa", "-P", "2", "-H", "0", "--tail", "1/100"});
    CHECK(contains(tail.out, "center=1/3 radius=1/50 interval=[47/150,53/150]"));
}

TEST_CASE("verify command") {
    CHECK(invoke({"verify", "-P", "2", "-H", "0", "-x", "10000000", "--tol", "0.01"}).code == cli::kOk);
    CHECK(invoke({"verify", "-P", "2,3", "-H", "0,4,6", "-x", "1e7", "--tol", "0.01"}).code == cli::kOk);
    const Result empty = invoke({"verify", "-P", "", "-H", "0,5", "-x", "1000", "--tol", "0"});
    CHECK(empty.code == cli::kOk);
    CHECK(contains(empty.out, "exact=1/1 sieve=1/1 difference=0/1"));
    const Result fail = invoke({"verify", "-P", "2", "-H", "0", "-x", "1000", "--tol", "0"});
    CHECK(fail.code == cli::kVerificationFailed);
    CHECK(contains(fail.out, "status=FAIL"));
}

TEST_CASE("series command") {
    const Result r = invoke({"series", "-P", "2", "-H", "0", "-x", "100", "--stride", "25"});
    CHECK(r.code == 0);
    CHECK(r.out == "x,sum,average\n25,9,0.36\n50,16,0.32\n75,25,0.333333333333\n100,34,0.34\n");
}

TEST_CASE("spectrum, construct and closure commands") {
    CHECK(invoke({"spectrum", "-H", "0,1"}).out == "alpha=-1/3 witness=2 interval=[-1/3,1]\n");
    CHECK(contains(invoke({"spectrum", "-H", "0,4,6"}).out, "alpha=0 witness=5 interval=[0,1]"));

    const Result c = invoke({"construct", "-H", "0", "--target", "1/2", "--eps", "1e-3"});
    CHECK(c.code == 0);
    CHECK(has_line(c.out, "P={3}"));
    CHECK(contains(c.out, "status=pass"));
    CHECK(contains(invoke({"construct", "-H", "0,1", "--target", "-1/4", "--eps", "0.001"}).out, "status=pass"));

    const Result g = invoke({"closure", "-G", "0,1,2"});
    CHECK(has_line(g.out, "member={0,3} r=2 m=1 n=0"));
    CHECK(has_line(g.out, "certificate: 1+t^3 = (1+t+t^2)*(1+t)"));
    CHECK(has_line(invoke({"closure", "-G", "0,1,2", "-G", "0,3"}).out, "generator=1+t+t^2"));
    CHECK(has_line(invoke({"closure", "-G", "0,2"}).out, "member={0,2} r=1 m=2 n=1"));
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == cli::kUsage);
    CHECK(invoke({"bogus"}).code == cli::kUsage);
    CHECK(invoke({"density", "-p", "2"}).code == cli::kUsage);
    CHECK(invoke({"density", "-p", "4", "-H", "1"}).code == cli::kUsage);
    CHECK(invoke({"density", "-p", "2", "-H", "3,3"}).code == cli::kUsage);
    CHECK(invoke({"density", "-p", "2", "-H", "-1"}).code == cli::kUsage);
    CHECK(invoke({"construct", "-H", "0", "--target", "2", "--eps", "0.1"}).code == cli::kUsage);
    CHECK(invoke({"construct", "-H", "0", "--target", "1/100", "--eps", "1e-3", "--budget", "5"}).code ==
          cli::kResourceLimit);
    CHECK(invoke({"closure", "-G", "0,2000000"}).code == cli::kResourceLimit);
    CHECK(invoke({"closure", "-G", ""}).code == cli::kUsage);
    CHECK(invoke({"verify", "-P", "2", "-H", "0", "-x", "0", "--tol", "0"}).code == cli::kUsage);
}

TEST_CASE("parse errors name the offending token") {
    const Result r = invoke({"kappa", "-P", "2", "-H", "1,x"});
    CHECK(r.code == cli::kUsage);
    CHECK(contains(r.err, "'x'"));
    CHECK(r.out.empty());
    CHECK_THROWS_WITH_AS(cli::parse_int_list("3,,4", "-H"), doctest::Contains("''"), InvalidArgument);
    CHECK(cli::parse_int_list("", "-H").empty());
    CHECK(cli::parse_int_list("4,0,17", "-H") == std::vector<Int>{4, 0, 17});
    CHECK(cli::parse_int("1e7", "-x") == 10'000'000);
    CHECK(cli::parse_int("250", "-x") == 250);
    CHECK_THROWS_AS(cli::parse_int("1.5", "-x"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_int("99999999999999999999", "-x"), InvalidArgument);
}

TEST_CASE("outputs are deterministic and independent of the thread count") {
    const std::vector<std::string> base{"series", "-P", "2,3,5", "-H", "0,1,3", "-x", "300000", "--stride", "50000",
                                        "--segment", "4096"};
    const Result one = invoke(base);
    auto threaded = base;
    threaded.insert(threaded.end(), {"--threads", "4"});
    CHECK(invoke(base).out == one.out);
    CHECK(invoke(threaded).out == one.out);
    CHECK(invoke({"density", "-p", "3", "-H", "0,9,27", "--trace"}).out ==
          invoke({"density", "-p", "3", "-H", "0,9,27", "--trace"}).out);
}

TEST_CASE("json output round-trips") {
    const std::vector<std::vector<std::string>> commands{
        {"--json", "density", "-p", "2", "-H", "0,4,6", "--trace"},
        {"--json", "kappa", "-P", "2,3", "-H", "0,4,6", "--tail", "0.01"},
        {"--json", "verify", "-P", "2", "-H", "0", "-x", "100000", "--tol", "0.01"},
        {"--json", "series", "-P", "2", "-H", "0", "-x", "1000", "--stride", "100"},
        {"--json", "spectrum", "-H", "0,1"},
        {"--json", "construct", "-H", "0,1", "--target", "-1/4", "--eps", "1e-3"},
        {"--json", "closure", "-G", "0,1,2", "-G", "0,3"},
    };
    for (const auto& args : commands) {
        CAPTURE(args[1]);
        const Result r = invoke(args);
        REQUIRE(r.code == 0);
        REQUIRE(!r.out.empty());
        CHECK(r.out.back() == '\n');
        const auto parsed = nlohmann::ordered_json::parse(r.out);
        CHECK(parsed.dump() + "\n" == r.out);
        CHECK(parsed["command"] == args[1]);
        CHECK(parsed.contains("inputs"));
        CHECK(parsed.contains("result"));
    }
    const auto k = nlohmann::ordered_json::parse(invoke({"--json", "kappa", "-P", "2,3", "-H", "0,4,6"}).out);
    CHECK(k["result"]["kappa"]["rational"] == "1/9");
}

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "test_util.hpp"
#include "thicksum/cli.hpp"
#include "thicksum/json_io.hpp"

using namespace thicksum;
using testutil::R;
using testutil::U;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "thicksum");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempFile {
public:
    explicit TempFile(const std::string& content) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("thicksum_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json"))
                    .string();
        std::ofstream(path_) << content;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace

TEST_CASE("cli tau") {
    TempFile k(R"({"parts": [["0","4"],["5","9"]]})");
    auto o = cli({"tau", k.path()});
    CHECK(o.code == 0);
    CHECK(o.out == "4\n");

    TempFile bare("[[0, 1], [2, 3], [10, 11]]");
    CHECK(cli({"tau", bare.path()}).out == "1/7\n");
    CHECK(cli({"tau", bare.path(), "--presentation", "brute"}).out == "1/7\n");
}

TEST_CASE("cli sum round trip") {
    TempFile k("[[0, 1], [10, 11]]");
    auto o = cli({"sum", k.path(), k.path()});
    REQUIRE(o.code == 0);
    auto j = Json::parse(o.out);
    CHECK(set_from_json(j) == U({{0, 2}, {10, 12}, {20, 22}}));
}

TEST_CASE("cli errors") {
    TempFile broken("{\"parts\": [[0, 1],\n  [2, }");
    auto o = cli({"tau", broken.path()});
    CHECK(o.code == 2);
    auto j = Json::parse(o.out);
    CHECK(j["error"]["kind"] == "ParseError");
    CHECK(j["error"]["message"].get<std::string>().find(":2:") != std::string::npos);

    TempFile k("[[0, 1]]");
    CHECK(cli({"tau", k.path(), "--precision", "8"}).code == 2);
    CHECK(cli({"tau", "/nonexistent/thicksum.json"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
}

TEST_CASE("cli halfline") {
    TempFile frag(R"({"generator": "FAa", "A": "1", "a": "1", "N": 12})");
    TempFile fn(R"({"kind": "exp", "r": "1"})");
    auto o = cli({"halfline", "--frag", frag.path(), "--fn", fn.path(), "--mode", "refute"});
    REQUIRE(o.code == 0);
    auto v = verdict_from_json(Json::parse(o.out));
    CHECK(v.status == VerdictStatus::CertifiedNoHalfLine);
    CHECK_FALSE(v.gaps.empty());
    CHECK(to_json(v) == Json::parse(o.out));
}

TEST_CASE("cli phase scan") {
    std::vector<std::string> args{"phase-scan", "--A", "10", "--r", "1/2", "--a", "1", "--no-runtime", "--threads", "1"};
    auto first = cli(args);
    REQUIRE(first.code == 0);
    CHECK(first.out.find("CertifiedHalfLine") != std::string::npos);
    CHECK(cli(args).out == first.out);
}

TEST_CASE("cli selftest") {
    auto a = cli({"selftest", "--seed", "7", "--cases", "5", "--only", "interval"});
    auto b = cli({"selftest", "--seed", "7", "--cases", "5", "--only", "interval"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(cli({"selftest", "--cases", "5", "--only", "minkowski_hull", "--inject-fault"}).code == 1);
    CHECK(cli({"selftest", "--only", "no_such_property"}).code == 2);
}

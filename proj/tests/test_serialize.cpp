#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "riemdiff/serialize.hpp"

using namespace riemdiff;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content) {
        path = std::string("/tmp/riemdiff_test_") + name;
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("space descriptions load from JSON") {
    SECTION("euclidean with a constant tensor") {
        const LoadedSpace s = load_space(Json::parse(R"({
            "primitive": "euclidean", "dim": 1, "tensor": [[4.0]]})"));
        REQUIRE(s.kind == LoadedSpace::Kind::finite);
        REQUIRE(s.ms.metric.eval({0, {0.0}, {1.0}, {1.0}}) == 4.0);
    }
    SECTION("glue on an interval builds the two-chart space") {
        const LoadedSpace s = load_space(Json::parse(R"({
            "primitive": "glue",
            "left": {"primitive": "euclidean", "dim": 1},
            "right": {"primitive": "euclidean", "dim": 1},
            "interval": [1, "inf"]})"));
        const DiffeoSpace& sp = s.ms.space();
        REQUIRE(sp.family.size() == 2);
        REQUIRE(points_equal(sp, sp.eval(0, {2.0}), sp.eval(1, {2.0})));
        REQUIRE_FALSE(points_equal(sp, sp.eval(0, {1.0}), sp.eval(1, {1.0})));
    }
    SECTION("degenerate interval glues a single point") {
        const LoadedSpace s = load_space(Json::parse(R"({
            "primitive": "glue", "interval": [0, 0]})"));
        const DiffeoSpace& sp = s.ms.space();
        REQUIRE(points_equal(sp, sp.eval(0, {0.0}), sp.eval(1, {0.0})));
    }
    SECTION("warped selects named warp functions") {
        const LoadedSpace s = load_space(Json::parse(R"({
            "primitive": "warped", "f": "exp2x"})"));
        REQUIRE(s.ms.metric.eval({0, {1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}}) ==
                Catch::Approx(std::exp(2.0)));
        REQUIRE_THROWS_AS(load_space(Json::parse(R"({"primitive":"warped","f":"nope"})")),
                          ConstructionError);
    }
    SECTION("sum and loopspace kinds") {
        const LoadedSpace s = load_space(Json::parse(R"({
            "primitive": "sum",
            "parts": [{"primitive": "euclidean", "dim": 1},
                       {"primitive": "euclidean", "dim": 1}]})"));
        REQUIRE(s.ms.space().family.size() == 2);
        const LoadedSpace l = load_space(Json::parse(R"({
            "primitive": "loopspace", "target": {"primitive": "euclidean", "dim": 2}})"));
        REQUIRE(l.kind == LoadedSpace::Kind::loopspace);
        REQUIRE(l.loop_target->space().plot(0).domain.dim == 2);
        const LoadedSpace w = load_space(Json::parse(R"({"primitive": "wedge_loopspace"})"));
        REQUIRE(w.kind == LoadedSpace::Kind::wedge_loopspace);
    }
    SECTION("unknown primitives are rejected") {
        REQUIRE_THROWS_AS(load_space(Json::parse(R"({"primitive":"sphere"})")),
                          ConstructionError);
    }
}

TEST_CASE("malformed JSON reports line and column") {
    TempFile f("bad.json", "{\n  \"primitive\": \"euclidean\",\n  oops\n}\n");
    try {
        load_space_file(f.path);
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        const std::string msg = e.what();
        REQUIRE(msg.find("line 3") != std::string::npos);
        REQUIRE(msg.find("column") != std::string::npos);
    }
}

TEST_CASE("definiteness reports serialize") {
    MetricSpace e2 = euclidean(2);
    WeakMetric zero;
    zero.space = e2.space().id;
    zero.tensor.push_back([](const Vec&, const Vec&, const Vec&) { return 0.0; });
    const DefinitenessReport rep = definiteness_check(e2.space(), zero, {3, 1.0}, 1e-8);
    const Json j = to_json(rep);
    REQUIRE(j["verdict"] == "indefinite");
    REQUIRE(j["witnesses"].size() > 0);
    REQUIRE(j["tol"] == 1e-8);
    REQUIRE(j["witnesses"][0].contains("min_eigenvalue"));
}

TEST_CASE("witness paths serialize control points") {
    PiecewisePath p;
    p.segments.push_back(chord_segment(0, {0.0, 0.0}, {1.0, 0.0}, 2));
    const Json j = to_json(p);
    REQUIRE(j["segments"].size() == 1);
    REQUIRE(j["segments"][0]["plot"] == 0);
    REQUIRE(j["segments"][0]["control"].size() == 4);
}

TEST_CASE("CSV uses 17 significant digits and an inf sentinel") {
    const std::string csv = distance_trace_csv({5.000000000100004, kInf}, "p");
    REQUIRE(csv.find("level,bound,path_id\n") == 0);
    REQUIRE(csv.find("1,5.0000000001000036,p") != std::string::npos);
    REQUIRE(csv.find("2,inf,p") != std::string::npos);
    REQUIRE(format_real(0.1) == "0.10000000000000001");
}

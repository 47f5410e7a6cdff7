#include "doctest.h"

#include <cstdlib>
#include <filesystem>

#include "ultra/error.hpp"
#include "ultra/io.hpp"

using namespace ultra;
using io::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("ultra_test_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
    CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("config hash is stable and ignores the output directory") {
    io::RunConfig a, b;
    b.out_dir = "elsewhere";
    CHECK(a.hash() == b.hash());
    b.horizon = 2048;
    CHECK(a.hash() != b.hash());
    const auto c = io::RunConfig::from_json(a.to_json());
    CHECK(c.hash() == a.hash());
}

TEST_CASE("config validation") {
    io::RunConfig c;
    c.rel_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    CHECK_THROWS_AS(io::RunConfig::from_json(json{{"horizon", 2}}), InvalidInput);
    CHECK_THROWS_AS(io::RunConfig::from_json(json{{"bogus", 1}}), InvalidInput);
    CHECK_THROWS_AS(io::RunConfig::from_json(json{{"horizon", "many"}}), InvalidInput);
}

TEST_CASE("envelope carries schema and hash") {
    io::RunConfig c;
    const auto e = io::envelope(c, "demo");
    CHECK(e["schema"] == "v1");
    CHECK(e["config_hash"] == c.hash());
    CHECK(e["kind"] == "demo");
}

TEST_CASE("sequence JSON round trip") {
    const auto G = gevrey_sequence(2.0, 64);
    const auto back = io::sequence_from_json(io::to_json(G));
    REQUIRE(back.horizon() == 64);
    for (std::size_t p = 0; p <= 64; ++p) CHECK(back.log_quotient(p) == G.log_quotient(p));
    // quotients may be given without the leading entry
    const auto short_form = io::sequence_from_json(json{{"horizon", 3}, {"log_quotients", {0.5, 1.0, 2.0}}});
    CHECK(short_form.log_quotient(1) == 0.5);
    CHECK(short_form.log_convex());
    CHECK_THROWS_AS(io::sequence_from_json(json{{"horizon", 5}, {"log_quotients", {0.5, 1.0}}}), InvalidInput);
    CHECK_THROWS_AS(io::sequence_from_json(json{{"log_quotients", {0.0, "x"}}}), InvalidInput);
}

TEST_CASE("descriptors") {
    io::RunConfig c;
    c.horizon = 128;
    const auto g = io::sequence_from_descriptor(json{{"kind", "gevrey"}, {"r", 2.0}}, c);
    CHECK(g.horizon() == 128);
    const auto hat = io::sequence_from_descriptor(
        json{{"kind", "transform"}, {"mode", "hat"}, {"base", {{"kind", "gevrey"}, {"r", 1.0}}}}, c);
    CHECK(hat.log_quotient(10) == doctest::Approx(2.0 * std::log(10.0)));
    const auto w = io::weight_from_descriptor(json{{"kind", "power"}, {"s", 2.0}}, c);
    CHECK(w(4.0) == doctest::Approx(2.0));
    const auto ws = io::weight_from_descriptor(
        json{{"kind", "transform"}, {"op", "scale"}, {"c", 3.0}, {"base", {{"kind", "power"}, {"s", 1.0}}}}, c);
    CHECK(ws(2.0) == doctest::Approx(6.0));
    CHECK_THROWS_AS(io::sequence_from_descriptor(json{{"kind", "nope"}}, c), InvalidInput);
    CHECK_THROWS_AS(io::weight_from_descriptor(json{{"kind", "power"}}, c), InvalidInput);
    CHECK_THROWS_AS(io::weight_from_descriptor(json::array(), c), InvalidInput);
}

TEST_CASE("output directory override") {
    const auto dir = scratch("env");
    io::RunConfig c;
    c.out_dir = (dir / "configured").string();
    setenv(io::kOutDirEnv, (dir / "from_env").c_str(), 1);
    CHECK(io::output_dir(c) == dir / "from_env");
    unsetenv(io::kOutDirEnv);
    CHECK(io::output_dir(c) == dir / "configured");
    CHECK(fs::is_directory(dir / "configured"));
}

TEST_CASE("CSV and JSON files") {
    const auto dir = scratch("files");
    io::write_csv(dir / "t.csv", {"a", "b"}, {{1.0, 0.1}, {2.5, 1e-300}});
    std::vector<std::string> header;
    const auto rows = io::read_csv(dir / "t.csv", &header);
    CHECK(header == std::vector<std::string>{"a", "b"});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][1] == 0.1);
    CHECK(rows[1][1] == 1e-300);
    json j{{"x", 1.5}, {"s", "y"}};
    io::write_json(dir / "j.json", j);
    CHECK(io::read_json_file(dir / "j.json") == j);
    CHECK_THROWS_AS(io::read_json_file(dir / "missing.json"), InvalidInput);
}

TEST_CASE("reports serialize non-finite numbers as strings") {
    PropertyReport r;
    r.tag = "t";
    r.verdict = Verdict::fails;
    r.witness = INFINITY;
    const auto j = io::to_json(r);
    CHECK(j["verdict"] == "fails");
    CHECK(j["witness"] == "inf");
}

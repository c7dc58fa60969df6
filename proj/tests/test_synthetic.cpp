#include "pcells/error.hpp"
#include "pcells/ingest.hpp"
#include "pcells/reference.hpp"
#include "pcells/synthetic.hpp"

#include "benchmark_fixture.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace pcells;

namespace {

GeneratorSpec single_cell(std::size_t articles, double mean)
{
    GeneratorSpec spec;
    spec.categories = {{"M", "Mathematics"}};
    CellSpec m;
    m.key = CellKey::parse("M");
    m.cumulative_means = {mean / 3, mean / 2, mean};
    m.articles_by_year = {{2005, articles}};
    spec.cells = {m};
    return spec;
}

ErrorCode spec_error(const std::string& json)
{
    try {
        parse_generator_spec(json);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("spec accepted: " << json);
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("single cell, fixed count, deterministic")
{
    const auto spec = single_cell(10, 3.0);
    const auto a = generate_synthetic_corpus(spec, 42);
    const auto b = generate_synthetic_corpus(spec, 42);
    REQUIRE(a.size() == 10);
    for (const auto& pub : a.publications()) {
        CHECK(pub.cell().str() == "M");
        CHECK(pub.year == 2005);
    }
    CHECK(a == b);
    CHECK(serialize_publications(a, DataFormat::Csv) == serialize_publications(b, DataFormat::Csv));
    CHECK_FALSE(generate_synthetic_corpus(spec, 43) == a);
}

TEST_CASE("cell weights are honoured")
{
    GeneratorSpec spec;
    spec.categories = {{"M", "Mathematics"}, {"MA", "Mathematics, Applied"}};
    CellSpec m;
    m.key = CellKey::parse("M");
    m.weight = 0.8;
    m.cumulative_means = {1.0};
    CellSpec mma = m;
    mma.key = CellKey::parse("M;MA");
    mma.weight = 0.2;
    spec.cells = {m, mma};
    spec.articles_per_year = {{2006, 1000}};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto corpus = generate_synthetic_corpus(spec, seed);
        CHECK(corpus.size() == 1000);
        std::size_t in_m = 0;
        for (const auto& pub : corpus.publications()) {
            in_m += pub.cell().str() == "M" ? 1 : 0;
        }
        CHECK(std::abs(static_cast<double>(in_m) / 1000.0 - 0.8) <= 0.03);
    }
}

TEST_CASE("calibration hits the requested mean")
{
    const auto corpus = generate_synthetic_corpus(single_cell(10000, 2.8), 5);
    std::vector<std::int64_t> counts;
    for (const auto& pub : corpus.publications()) {
        counts.push_back(citation_count(pub, CitationWindow(3)));
    }
    CHECK(std::abs(mean_expected_citations(counts) - 2.8) <= 0.05);
}

TEST_CASE("uncalibrated means converge as counts grow")
{
    auto spec = single_cell(20000, 4.0);
    spec.calibrate = false;
    const auto corpus = generate_synthetic_corpus(spec, 9);
    for (int w = 1; w <= 3; ++w) {
        std::vector<std::int64_t> counts;
        for (const auto& pub : corpus.publications()) {
            counts.push_back(citation_count(pub, CitationWindow(w)));
        }
        const double target = spec.cells[0].cumulative_means[static_cast<std::size_t>(w - 1)];
        CHECK(std::abs(mean_expected_citations(counts) - target) <= 0.05 * target + 0.02);
    }
}

TEST_CASE("generated corpora satisfy record invariants")
{
    const auto spec = parse_generator_spec(pcells::read_file(fixture::path("benchmark.spec.json")));
    const auto corpus = generate_synthetic_corpus(spec, 7);
    std::map<std::pair<std::string, int>, std::size_t> sizes;
    for (const auto& pub : corpus.publications()) {
        REQUIRE_FALSE(pub.categories.empty());
        for (const auto& [year, n] : pub.citations_by_year) {
            CHECK(year >= pub.year);
            CHECK(n >= 0);
        }
        ++sizes[{pub.cell().str(), pub.year}];
    }
    CHECK(sizes.size() == 18);
    CHECK(sizes.at({"M", 2005}) == 10055);
    CHECK(sizes.at({"AA;PPF", 2007}) == 2545);
    CHECK(corpus.researchers().size() == 35);
}

TEST_CASE("benchmark spec reproduces the mean column")
{
    const auto spec = parse_generator_spec(pcells::read_file(fixture::path("benchmark.spec.json")));
    const auto corpus = generate_synthetic_corpus(spec, 7);
    const auto partition = build_partition(corpus, "article", {2005, 2007});
    const std::vector<int> years{2005, 2006, 2007};
    const std::vector<int> windows{3, 4, 5};
    const auto table = build_reference_table(partition, corpus, years, windows, 3);
    const auto reference = fixture::benchmark_reference();
    REQUIRE(table.size() == reference.size());
    for (const auto& expected : reference.entries()) {
        const auto* got = table.find(expected.cell, expected.year, expected.window);
        REQUIRE(got != nullptr);
        CHECK(got->n == expected.n);
        CHECK(std::abs(got->e - expected.e) <= 0.05);
    }
}

TEST_CASE("invalid specs")
{
    CHECK(spec_error("not json") == ErrorCode::InvalidSpec);
    CHECK(spec_error("[]") == ErrorCode::InvalidSpec);
    CHECK(spec_error(R"({"cells": []})") == ErrorCode::InvalidSpec);
    CHECK(spec_error(R"({"categories":[{"code":"M"}],"cells":[{"key":"M","weight":1,"cumulative_means":[1]}],"articles_per_year":{"2005":0}})") ==
          ErrorCode::InvalidSpec);
    CHECK(spec_error(R"({"categories":[{"code":"M"}],"cells":[{"key":"M","weight":1,"cumulative_means":[1]}]})") ==
          ErrorCode::InvalidSpec);
    CHECK(spec_error(R"({"categories":[{"code":"M"}],"cells":[{"key":"M","cumulative_means":[2,1]}],"articles_per_year":{"2005":3}})") ==
          ErrorCode::InvalidSpec);
    CHECK(spec_error(R"({"categories":[{"code":"M"}],"cells":[{"key":"M;X","weight":1,"cumulative_means":[1]}],"articles_per_year":{"2005":3}})") ==
          ErrorCode::InvalidSpec);

    auto spec = single_cell(5, 1.0);
    spec.cells[0].articles_by_year.clear();
    CHECK_THROWS_AS(validate_generator_spec(spec), Error);
}

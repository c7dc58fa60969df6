#include "pcells/compare.hpp"
#include "pcells/error.hpp"

#include "benchmark_fixture.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace pcells;

namespace {

const std::vector<std::pair<int, int>> year_pairs{{2005, 2006}, {2006, 2007}};
const std::vector<std::pair<int, int>> window_pairs{{3, 4}, {4, 5}};
const std::vector<int> years{2005, 2006, 2007};
const std::vector<int> windows{3, 4, 5};

std::vector<CellKey> six_cells()
{
    std::vector<CellKey> cells;
    for (const char* key : {"M", "M;MA", "MA", "AA", "AA;PPF", "PPF"}) {
        cells.push_back(CellKey::parse(key));
    }
    return cells;
}

std::vector<AdjacentTriple> triples()
{
    return {adjacent_triples("M", "MA"), adjacent_triples("AA", "PPF")};
}

const DifferenceRecord& find(const PairingResult& result, const std::string& left, const std::string& right)
{
    auto it = std::find_if(result.records.begin(), result.records.end(), [&](const DifferenceRecord& r) {
        return (r.left_label == left && r.right_label == right) || (r.left_label == right && r.right_label == left);
    });
    REQUIRE(it != result.records.end());
    return *it;
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected pcells::Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("relative difference")
{
    CHECK(relative_difference(2.0, 2.8) == doctest::Approx(0.3333).epsilon(1e-4));
    CHECK(relative_difference(6.1, 8.3) == doctest::Approx(0.3056).epsilon(1e-3));
    CHECK(relative_difference(4.2, 4.2) == 0.0);
    CHECK(code_of([] { relative_difference(0.0, 1.0); }) == ErrorCode::NonPositiveValue);
    CHECK(code_of([] { relative_difference(1.0, -1.0); }) == ErrorCode::NonPositiveValue);
    CHECK(code_of([] { relative_difference(std::nan(""), 1.0); }) == ErrorCode::NonPositiveValue);
}

TEST_CASE("relative difference properties")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> value(1e-3, 1e3);
    for (int i = 0; i < 2000; ++i) {
        const double x = value(rng);
        const double y = value(rng);
        const double r = relative_difference(x, y);
        CHECK(r == relative_difference(y, x));
        CHECK(r >= 0.0);
        CHECK(r < 2.0);
        CHECK(relative_difference(7.5 * x, 7.5 * y) == doctest::Approx(r).epsilon(1e-12));
        CHECK((r == 0.0) == (x == y));
    }
}

TEST_CASE("benchmark year dimension")
{
    const auto table = fixture::benchmark_reference();
    const auto cells = six_cells();
    for (const auto metric : {Metric::E, Metric::T}) {
        const auto result = year_dimension_pairs(table, year_pairs, cells, windows, metric);
        CHECK(result.records.size() == 36);
        CHECK(result.skipped.empty());
    }
    const auto e = year_dimension_pairs(table, year_pairs, cells, windows, Metric::E);
    const auto& rec = find(e, "M|2005|w5", "M|2006|w5");
    CHECK(rec.x == doctest::Approx(2.8));
    CHECK(rec.y == doctest::Approx(3.0));
    CHECK(rec.r == doctest::Approx(0.0690).epsilon(5e-3));
    CHECK(rec.dimension == Dimension::PublicationYear);
}

TEST_CASE("benchmark window dimension")
{
    const auto table = fixture::benchmark_reference();
    const auto cells = six_cells();
    const auto e = window_dimension_pairs(table, window_pairs, cells, years, Metric::E);
    CHECK(e.records.size() == 36);
    CHECK(find(e, "M|2005|w3", "M|2005|w4").r == doctest::Approx(0.5));
    CHECK(find(e, "M|2005|w4", "M|2005|w5").r == doctest::Approx(0.3333).epsilon(1e-3));
    const auto t = window_dimension_pairs(table, window_pairs, cells, years, Metric::T);
    CHECK(t.records.size() == 36);
    const auto& rec = find(t, "M;MA|2005|w3", "M;MA|2005|w4");
    CHECK(rec.x == doctest::Approx(6.3));
    CHECK(rec.y == doctest::Approx(11.6));
    CHECK(rec.r == doctest::Approx(0.5922).epsilon(1e-3));
}

TEST_CASE("benchmark adjacent-cell dimension")
{
    const auto table = fixture::benchmark_reference();
    const auto e = cell_dimension_pairs(table, triples(), years, windows, Metric::E);
    CHECK(e.records.size() == 36);
    CHECK(find(e, "M;MA|2005|w3", "MA|2005|w3").r == doctest::Approx(0.4242).epsilon(1e-3));
    const auto t = cell_dimension_pairs(table, triples(), years, windows, Metric::T);
    CHECK(t.records.size() == 36);
    CHECK(find(t, "AA;PPF|2005|w5", "AA|2005|w5").r == 0.0);
}

TEST_CASE("summaries over the benchmark records match the reported ranges")
{
    const auto table = fixture::benchmark_reference();
    const auto cells = six_cells();
    struct Range {
        Dimension d;
        Metric m;
        double lo, hi;
    };
    const std::vector<Range> ranges{
        {Dimension::AdjacentCell, Metric::E, 0.00, 0.42},   {Dimension::AdjacentCell, Metric::T, 0.00, 0.36},
        {Dimension::PublicationYear, Metric::E, 0.00, 0.18}, {Dimension::PublicationYear, Metric::T, 0.00, 0.31},
        {Dimension::WindowLength, Metric::E, 0.18, 0.51},   {Dimension::WindowLength, Metric::T, 0.08, 0.59}};
    for (const auto& range : ranges) {
        PairingResult result;
        switch (range.d) {
        case Dimension::PublicationYear: result = year_dimension_pairs(table, year_pairs, cells, windows, range.m); break;
        case Dimension::WindowLength: result = window_dimension_pairs(table, window_pairs, cells, years, range.m); break;
        case Dimension::AdjacentCell: result = cell_dimension_pairs(table, triples(), years, windows, range.m); break;
        }
        const auto summary = summarize_dimension(result.records);
        CHECK(summary.count == 36);
        CHECK(std::abs(summary.min_r - range.lo) <= 0.03);
        CHECK(std::abs(summary.max_r - range.hi) <= 0.03);
    }
}

TEST_CASE("missing contexts are skipped with a reason")
{
    auto entries = fixture::benchmark_reference().entries();
    std::erase_if(entries, [](const ReferenceValues& v) { return v.cell.str() == "M" && v.year == 2006 && v.window.years() == 5; });
    const ReferenceTable table(entries);
    const auto cells = six_cells();
    const auto result = year_dimension_pairs(table, year_pairs, cells, windows, Metric::E);
    CHECK(result.records.size() == 34);
    REQUIRE(result.skipped.size() == 2);
    CHECK(result.skipped[0].find("M|2006|w5") != std::string::npos);

    auto zero = fixture::benchmark_reference().entries();
    for (auto& v : zero) {
        if (v.cell.str() == "PPF" && v.year == 2007 && v.window.years() == 3) {
            v.e = 0.0;
        }
    }
    const auto z = window_dimension_pairs(ReferenceTable(zero), window_pairs, cells, years, Metric::E);
    CHECK(z.records.size() == 35);
    CHECK(z.skipped.size() == 1);
}

TEST_CASE("summaries")
{
    DifferenceRecord one;
    one.dimension = Dimension::PublicationYear;
    one.metric = Metric::E;
    one.r = 0.1;
    const std::vector<DifferenceRecord> single{one};
    const auto s = summarize_dimension(single);
    CHECK(s.count == 1);
    CHECK(s.min_r == 0.1);
    CHECK(s.max_r == 0.1);

    std::vector<DifferenceRecord> three(3, one);
    three[0].r = 0.0;
    three[1].r = 0.5;
    three[2].r = relative_difference(0.1, 1.0);
    const auto t = summarize_dimension(three);
    CHECK(t.min_r == 0.0);
    CHECK(t.max_r == doctest::Approx(1.6364).epsilon(1e-4));

    CHECK(code_of([] { summarize_dimension({}); }) == ErrorCode::EmptyDistribution);
    auto mixed = three;
    mixed[1].metric = Metric::T;
    CHECK(code_of([&] { summarize_dimension(mixed); }) == ErrorCode::MixedDimensions);
    CHECK(summarize_all(mixed).size() == 2);
}

TEST_CASE("records sort deterministically")
{
    const auto table = fixture::benchmark_reference();
    auto records = cell_dimension_pairs(table, triples(), years, windows, Metric::T).records;
    const auto sorted = records;
    std::mt19937_64 rng(1);
    std::shuffle(records.begin(), records.end(), rng);
    sort_records(records);
    REQUIRE(records.size() == sorted.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].left_label == sorted[i].left_label);
        CHECK(records[i].right_label == sorted[i].right_label);
    }
}

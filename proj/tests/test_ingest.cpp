#include "pcells/error.hpp"
#include "pcells/ingest.hpp"
#include "pcells/synthetic.hpp"

#include "csv.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace pcells;

namespace {

const std::string header = std::string(publications_csv_header) + "\n";

IngestResult lenient(const std::string& text, DataFormat format = DataFormat::Csv)
{
    return parse_publications(text, {format, false, std::nullopt});
}

ErrorCode strict_error(const std::string& text, DataFormat format = DataFormat::Csv)
{
    try {
        parse_publications(text, {format, true, std::nullopt});
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("strict parse succeeded");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("single CSV row")
{
    const auto result = lenient(header + "p1,2005,article,M;MA,2005:1|2006:2,r1\n");
    REQUIRE(result.rejected.empty());
    REQUIRE(result.corpus.size() == 1);
    const auto& pub = result.corpus.publications()[0];
    CHECK(pub.pub_id == "p1");
    CHECK(pub.year == 2005);
    CHECK(pub.categories == std::vector<std::string>{"M", "MA"});
    CHECK(pub.citations_by_year.at(2006) == 2);
    CHECK(pub.author_ids == std::vector<std::string>{"r1"});
    CHECK(result.corpus.find_category("MA")->name == "MA");
}

TEST_CASE("header-only input gives an empty corpus")
{
    CHECK(lenient(header).corpus.size() == 0);
    CHECK(lenient(std::string(publications_csv_header)).corpus.size() == 0);
}

TEST_CASE("a wrong header is a parse error")
{
    CHECK(strict_error("id,year\n") == ErrorCode::RowParseError);
    CHECK(strict_error("") == ErrorCode::RowParseError);
}

TEST_CASE("row-level violations are rejected with line numbers")
{
    const std::string text = header +
                             "ok,2005,article,M,,\n"
                             "early,2005,article,M,2003:1,\n"
                             "ok,2006,article,M,,\n"
                             "nocat,2005,article,,,\n"
                             "badyear,20x5,article,M,,\n"
                             "badcite,2005,article,M,2005:-1,\n"
                             "short,2005,article\n"
                             "badcode,2005,article,M A,,\n";
    const auto result = lenient(text);
    CHECK(result.corpus.size() == 1);
    REQUIRE(result.rejected.size() == 7);
    CHECK(result.rejected[0].line == 3);
    CHECK(result.rejected[0].code == ErrorCode::TemporalViolation);
    CHECK(result.rejected[0].subject == "early");
    CHECK(result.rejected[1].code == ErrorCode::DuplicateId);
    CHECK(result.rejected[2].code == ErrorCode::EmptyCategorySet);
    CHECK(result.rejected[3].code == ErrorCode::RowParseError);
    CHECK(result.rejected[4].code == ErrorCode::RowParseError);
    CHECK(result.rejected[5].code == ErrorCode::RowParseError);
    CHECK(result.rejected[6].code == ErrorCode::InvalidCategoryCode);

    CHECK(strict_error(header + "p,2005,article,M,2003:1,\n") == ErrorCode::TemporalViolation);
    CHECK(strict_error(header + "p,2005,article,M,,\np,2005,article,M,,\n") == ErrorCode::DuplicateId);
}

TEST_CASE("strict errors carry the line number")
{
    try {
        parse_publications(header + "\n# note\np,2005,article,M,2003:1,\n", {DataFormat::Csv, true, std::nullopt});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("registry restricts codes")
{
    IngestOptions options;
    options.registry = std::vector<SubjectCategory>{{"M", "Mathematics"}};
    const auto result = parse_publications(header + "a,2005,article,M,,\nb,2005,article,M;MA,,\n", options);
    CHECK(result.corpus.size() == 1);
    REQUIRE(result.rejected.size() == 1);
    CHECK(result.rejected[0].code == ErrorCode::UnknownCategory);
    CHECK(result.corpus.find_category("M")->name == "Mathematics");
}

TEST_CASE("quoted fields and UTF-8")
{
    const auto result = lenient(header + "\"p,1\",2005,Article,\"M;MA\",2005:3,\"r\xC3\xA9;r2\"\n");
    REQUIRE(result.corpus.size() == 1);
    const auto& pub = result.corpus.publications()[0];
    CHECK(pub.pub_id == "p,1");
    CHECK(pub.doc_type == "article");
    CHECK(pub.author_ids.size() == 2);
    CHECK(strict_error(header + "p,2005,article,M,,\xFF\n") == ErrorCode::RowParseError);
    CHECK(strict_error(header + "\"p,2005,article,M,,\n") == ErrorCode::RowParseError);
}

TEST_CASE("JSONL records")
{
    const std::string text =
        R"({"pub_id":"p1","year":2005,"doc_type":"article","categories":["MA","M"],"citations":{"2005":1,"2007":4},"authors":["r1"]})"
        "\n"
        R"({"pub_id":"p2","year":2006,"doc_type":"article","categories":"AA;PPF","citations":"2006:2","authors":""})"
        "\n"
        R"({"pub_id":"p3","year":2006,"doc_type":"article","categories":["AA"],"citations":{"2004":1}})"
        "\n"
        "not json\n";
    const auto result = lenient(text, DataFormat::Jsonl);
    CHECK(result.corpus.size() == 2);
    REQUIRE(result.rejected.size() == 2);
    CHECK(result.rejected[0].code == ErrorCode::TemporalViolation);
    CHECK(result.rejected[1].line == 4);
    CHECK(result.corpus.find("p1")->cell().str() == "M;MA");
    CHECK(result.corpus.find("p2")->citations_by_year.at(2006) == 2);
}

TEST_CASE("serialize then parse reproduces the corpus")
{
    GeneratorSpec spec;
    spec.categories = {{"M", "Mathematics"}, {"MA", "Mathematics, Applied"}};
    CellSpec m;
    m.key = CellKey::parse("M");
    m.weight = 0.7;
    m.cumulative_means = {0.5, 1.0, 2.0};
    CellSpec mma;
    mma.key = CellKey::parse("M;MA");
    mma.weight = 0.3;
    mma.cumulative_means = {0.4, 1.5, 3.0};
    spec.cells = {m, mma};
    spec.articles_per_year = {{2005, 300}, {2006, 300}};
    spec.other_doc_types = {{"review", 0.1}};
    spec.researchers.count = 12;
    const auto corpus = generate_synthetic_corpus(spec, 3);

    for (const auto format : {DataFormat::Csv, DataFormat::Jsonl}) {
        const auto text = serialize_publications(corpus, format);
        IngestOptions options;
        options.format = format;
        options.strict = true;
        options.registry = parse_category_registry(serialize_category_registry(corpus.categories()));
        const auto again = parse_publications(text, options);
        CHECK(again.rejected.empty());
        CHECK(again.corpus == corpus);
        CHECK(serialize_publications(again.corpus, format) == text);
    }
}

TEST_CASE("category registry parsing")
{
    const auto reg = parse_category_registry("code,name\nMA,\"Mathematics, Applied\"\nM,Mathematics\n");
    REQUIRE(reg.size() == 2);
    CHECK(reg[0].name == "Mathematics, Applied");
    CHECK_THROWS_AS(parse_category_registry("code,name\nM,X\nM,Y\n"), Error);
    CHECK_THROWS_AS(parse_category_registry("code,name\nM,X\nMA,X\n"), Error);
    CHECK_THROWS_AS(parse_category_registry("code,name\nM A,X\n"), Error);
    CHECK_THROWS_AS(parse_category_registry("code\nM\n"), Error);
}

TEST_CASE("CSV helper quoting")
{
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    csv::Reader reader("a,\"b\nc\",d\r\n\ne,f\n");
    auto first = reader.next();
    REQUIRE(first);
    CHECK(first->fields == std::vector<std::string>{"a", "b\nc", "d"});
    auto second = reader.next();
    REQUIRE(second);
    CHECK(second->line == 4);
    CHECK_FALSE(reader.next());
}

TEST_CASE("file helpers and digest")
{
    CHECK(content_digest("") == "cbf29ce484222325");
    CHECK(content_digest("a") == "af63dc4c8601ec8c");
    const auto path = std::filesystem::temp_directory_path() / "pcells_ingest_test.txt";
    write_file(path, "hello");
    CHECK(read_file(path) == "hello");
    std::filesystem::remove(path);
    try {
        read_file(path);
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

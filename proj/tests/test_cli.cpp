#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path scratch_root = PCELLS_SCRATCH;

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& path, const std::string& text)
{
    std::ofstream(path, std::ios::binary) << text;
}

fs::path fresh(const std::string& name)
{
    const auto dir = scratch_root / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Result {
    int code = -1;
    std::string err;
};

Result run(const fs::path& dir, const std::string& args)
{
    const auto err = dir / "stderr.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" PCELLS_CLI "' " + args + " > /dev/null 2> '" +
                            err.string() + "'";
    const int raw = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.err = slurp(err);
    return r;
}

// benchmark corpus, written once and shared between cases.
const fs::path& benchmark_dir()
{
    static const fs::path dir = [] {
        auto d = fresh("benchmark");
        const std::string cmd = "'" PCELLS_WRITE_BENCHMARK "' '" + (d / "pubs.csv").string() + "' '" +
                                (d / "cats.csv").string() + "'";
        REQUIRE(std::system(cmd.c_str()) == 0);
        return d;
    }();
    return dir;
}

std::string benchmark_inputs()
{
    return "--pubs '" + (benchmark_dir() / "pubs.csv").string() + "' --cats '" + (benchmark_dir() / "cats.csv").string() +
           "'";
}

std::string profile_inputs()
{
    return "--pubs '" PCELLS_FIXTURE_DIR "/profile_publications.csv' --cats '" PCELLS_FIXTURE_DIR "/categories.csv'";
}

std::vector<std::string> data_lines(const std::string& text)
{
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.starts_with("#")) {
            lines.push_back(line);
        }
    }
    return lines;
}

bool has_line(const std::string& text, const std::string& line)
{
    const auto lines = data_lines(text);
    return std::find(lines.begin(), lines.end(), line) != lines.end();
}

nlohmann::json manifest(const fs::path& dir, const std::string& command)
{
    return nlohmann::json::parse(slurp(dir / (command + "_manifest.json")));
}

const char* const bad_rows =
    "pub_id,year,doc_type,categories,citations,authors\n"
    "a,2005,article,M,2005:1|2006:2,R1\n"
    "b,2005,article,M,2003:1,R1\n"
    "c,2005,article,,2005:1,R1\n";

}  // namespace

TEST_CASE("refvalues reproduces the benchmark row and is byte-stable")
{
    const auto dir = fresh("refvalues");
    REQUIRE(run(dir, "refvalues " + benchmark_inputs() + " --out-dir a").code == 0);
    REQUIRE(run(dir, "refvalues " + benchmark_inputs() + " --out-dir b").code == 0);
    const auto a = slurp(dir / "a/reference_values.csv");
    CHECK(a == slurp(dir / "b/reference_values.csv"));
    CHECK(data_lines(a).size() == 55);
    CHECK(has_line(a, "M,2005,5,10055,2.8,11.8,2.8,7.4,11.8"));

    const auto m = manifest(dir / "a", "refvalues");
    CHECK(m["command"] == "refvalues");
    CHECK(m["exit_code"] == 0);
    CHECK(m["outputs"][0]["path"] == "reference_values.csv");

    REQUIRE(run(dir, "refvalues " + benchmark_inputs() + " --format json --out-dir j").code == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "j/reference_values.json"));
    CHECK(doc["rows"].size() == 54);
}

TEST_CASE("usage and I/O errors map to exit codes")
{
    const auto dir = fresh("errors");
    CHECK(run(dir, "refvalues " + benchmark_inputs() + " --years 2007-2005").code == 1);
    CHECK(run(dir, "refvalues " + benchmark_inputs() + " --format xml").code == 1);
    CHECK(run(dir, "frobnicate").code == 1);
    CHECK(run(dir, "refvalues").code == 1);
    const auto missing = run(dir, "refvalues --pubs nothing.csv --cats nothing.csv --out-dir m");
    CHECK(missing.code == 3);
    CHECK(manifest(dir / "m", "refvalues")["exit_code"] == 3);
    CHECK_FALSE(fs::exists(dir / "refvalues_manifest.json"));
}

TEST_CASE("compare over the benchmark corpus")
{
    const auto dir = fresh("compare");
    const auto r = run(dir, "compare " + benchmark_inputs() + " --triples M:MA,AA:PPF");
    REQUIRE(r.code == 0);
    const auto csv = slurp(dir / "differences.csv");
    CHECK(has_line(csv, "publication_year,e,36,0.0,20.7"));
    CHECK(has_line(csv, "window_length,t,36,7.5,59.2"));
    CHECK(has_line(csv, "adjacent_cell,e,36,0.0,42.4"));
    CHECK(has_line(csv, "adjacent_cell,t,36,0.0,36.1"));
    CHECK(r.err.find("window_length e: 36 records") != std::string::npos);

    REQUIRE(run(dir, "refvalues " + benchmark_inputs()).code == 0);
    REQUIRE(run(dir, "compare --ref-table reference_values.csv --out-dir from_table").code == 0);
    CHECK(slurp(dir / "from_table/differences.csv").find("window_length,e,36,18.7,51.4") != std::string::npos);

    CHECK(run(dir, "compare " + benchmark_inputs() + " --triples M:XX").code == 1);
    CHECK(run(dir, "compare " + benchmark_inputs() + " --triples M:M").code == 1);
    CHECK(run(dir, "compare " + benchmark_inputs() + " --triples M").code == 1);
}

TEST_CASE("compare skips a missing context with a warning")
{
    const auto dir = fresh("compare_missing");
    const auto full = slurp(PCELLS_FIXTURE_DIR "/benchmark_reference.csv");
    std::istringstream in(full);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.starts_with("M,2006,")) {
            out << line << '\n';
        }
    }
    spit(dir / "partial.csv", out.str());
    const auto r = run(dir, "compare --ref-table partial.csv");
    CHECK(r.code == 0);
    CHECK(r.err.find("M|2006") != std::string::npos);
    const auto m = manifest(dir, "compare");
    CHECK_FALSE(m["warnings"].empty());
    CHECK(slurp(dir / "differences.csv").find("publication_year,e,30,") != std::string::npos);
}

TEST_CASE("profile matrix from the researcher fixture")
{
    const auto dir = fresh("profile");
    REQUIRE(run(dir, "profile " + profile_inputs() + " --researchers M1,M2,F1,F2").code == 0);
    const auto csv = slurp(dir / "profile_matrix.csv");
    CHECK(has_line(csv, "layer,cell,M1,M2,F1,F2"));
    CHECK(has_line(csv, "share,PPF,0,0,74,11"));
    CHECK(has_line(csv, "n_articles,,11,6,34,19"));
    CHECK(has_line(csv, "mean_citations,,6,11,23,47"));

    REQUIRE(run(dir, "profile " + profile_inputs() + " --researchers M1 --window 3 --out-dir w3").code == 0);
    const auto w3 = data_lines(slurp(dir / "w3/profile_matrix.csv"));
    CHECK(w3.front() == "layer,cell,M1");
    CHECK(w3.back() != "mean_citations,,6");

    REQUIRE(run(dir, "profile " + profile_inputs() + " --out-dir all").code == 0);
    CHECK(data_lines(slurp(dir / "all/profile_matrix.csv")).front() == "layer,cell,F1,F2,M1,M2");

    const auto partial = run(dir, "profile " + profile_inputs() + " --researchers M1,ghost --out-dir partial");
    CHECK(partial.code == 0);
    CHECK(partial.err.find("ghost") != std::string::npos);
    CHECK(run(dir, "profile " + profile_inputs() + " --researchers ghost --out-dir none").code == 2);
}

TEST_CASE("generate is deterministic and feeds refvalues")
{
    const auto dir = fresh("generate");
    const std::string spec = "--spec '" PCELLS_FIXTURE_DIR "/benchmark.spec.json' --seed 7";
    REQUIRE(run(dir, "generate " + spec + " --out-dir a").code == 0);
    REQUIRE(run(dir, "generate " + spec + " --out-dir b").code == 0);
    CHECK(slurp(dir / "a/publications.csv") == slurp(dir / "b/publications.csv"));
    CHECK(slurp(dir / "a/categories.csv") == slurp(dir / "b/categories.csv"));
    REQUIRE(run(dir, "generate --spec '" PCELLS_FIXTURE_DIR "/benchmark.spec.json' --seed 8 --out-dir c").code == 0);
    CHECK(slurp(dir / "a/publications.csv") != slurp(dir / "c/publications.csv"));

    REQUIRE(run(dir, "generate " + spec + " --format json --out-dir j").code == 0);
    CHECK(fs::exists(dir / "j/publications.jsonl"));

    REQUIRE(run(dir, "refvalues --pubs a/publications.csv --cats a/categories.csv --out-dir r").code == 0);
    REQUIRE(run(dir, "refvalues --pubs j/publications.jsonl --cats j/categories.csv --out-dir rj").code == 0);
    const auto a = data_lines(slurp(dir / "r/reference_values.csv"));
    CHECK(a.size() == 55);
    CHECK(a == data_lines(slurp(dir / "rj/reference_values.csv")));

    spit(dir / "bad.json", R"({"cells": []})");
    CHECK(run(dir, "generate --spec bad.json").code == 1);
    CHECK(run(dir, "generate").code == 1);
}

TEST_CASE("config files fill in options and flags win")
{
    const auto dir = fresh("config");
    spit(dir / "run.ini", "pubs = \"" PCELLS_FIXTURE_DIR "/profile_publications.csv\"\n"
                          "cats = \"" PCELLS_FIXTURE_DIR "/categories.csv\"\n"
                          "researchers = \"F1\"\n"
                          "out-dir = \"cfg\"\n");
    REQUIRE(run(dir, "profile --config run.ini").code == 0);
    CHECK(data_lines(slurp(dir / "cfg/profile_matrix.csv")).front() == "layer,cell,F1");
    REQUIRE(run(dir, "profile --config run.ini --researchers F2").code == 0);
    CHECK(data_lines(slurp(dir / "cfg/profile_matrix.csv")).front() == "layer,cell,F2");
    CHECK(manifest(dir / "cfg", "profile")["parameters"]["researchers"] == "F2");
}

TEST_CASE("invalid rows: validate reports, strict runs fail")
{
    const auto dir = fresh("validate");
    spit(dir / "bad.csv", bad_rows);
    const auto v = run(dir, "validate --pubs bad.csv");
    CHECK(v.code == 2);
    CHECK(v.err.find("line 3") != std::string::npos);
    CHECK(v.err.find("line 4") != std::string::npos);
    CHECK(run(dir, "validate " + profile_inputs()).code == 0);

    CHECK(run(dir, "refvalues --pubs bad.csv --strict").code == 2);
    const auto lenient = run(dir, "refvalues --pubs bad.csv --years 2005-2005 --windows 2");
    CHECK(lenient.code == 0);
    CHECK(has_line(slurp(dir / "reference_values.csv"), "M,2005,2,1,3.0,3.0,3.0,3.0,3.0"));
}

// Writes the benchmark table corpus: write_benchmark_corpus <publications.csv> <categories.csv>
#include "benchmark_fixture.hpp"

#include "pcells/ingest.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    if (argc != 3) {
        std::cerr << "usage: write_benchmark_corpus <publications.csv> <categories.csv>\n";
        return 1;
    }
    try {
        const auto corpus = fixture::benchmark_corpus();
        pcells::write_file(argv[1], pcells::serialize_publications(corpus, pcells::DataFormat::Csv));
        pcells::write_file(argv[2], pcells::serialize_category_registry(corpus.categories()));
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}

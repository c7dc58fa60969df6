#ifndef PCELLS_SYNTHETIC_HPP
#define PCELLS_SYNTHETIC_HPP

#include "pcells/corpus.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pcells {

struct CellSpec {
    CellKey key;
    // Relative frequency when drawing cells for `articles_per_year`.
    double weight = 0.0;
    // Expected cumulative citations per article through windows 1..L.
    std::vector<double> cumulative_means;
    // Per publication year overrides of `cumulative_means`.
    std::map<int, std::vector<double>> cumulative_means_by_year;
    // Exact article counts added on top of the weighted draw.
    std::map<int, std::size_t> articles_by_year;
    // Gamma shape of the latent per-article impact (mean 1); smaller is more skewed.
    double dispersion = 1.0;

    const std::vector<double>& means_for(int year) const;
};

struct ResearcherSpec {
    std::size_t count = 0;
    std::size_t min_articles = 5;
    std::size_t max_articles = 30;
    // Probability that an article is drawn from the researcher's home cell.
    double home_affinity = 0.8;
};

struct GeneratorSpec {
    std::vector<SubjectCategory> categories;
    std::vector<CellSpec> cells;
    std::map<int, std::size_t> articles_per_year;
    // Non-article document types and the fraction of records given each.
    std::map<std::string, double> other_doc_types;
    ResearcherSpec researchers;
    // Adjust drawn citations so each (cell, year) article group hits its
    // expected cumulative totals exactly (up to integer rounding).
    bool calibrate = true;
};

// Throws InvalidSpec on malformed JSON or values violating the generator's
// preconditions.
GeneratorSpec parse_generator_spec(std::string_view json_text);
void validate_generator_spec(const GeneratorSpec& spec);

// Deterministic for (spec, seed) within one build of the library.
Corpus generate_synthetic_corpus(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace pcells

#endif

#include "pcells/synthetic.hpp"

#include "pcells/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

namespace pcells {

const std::vector<double>& CellSpec::means_for(int year) const
{
    auto it = cumulative_means_by_year.find(year);
    return it == cumulative_means_by_year.end() ? cumulative_means : it->second;
}

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& message)
{
    throw Error(ErrorCode::InvalidSpec, message);
}

int parse_year_key(const std::string& key)
{
    try {
        std::size_t used = 0;
        const int year = std::stoi(key, &used);
        if (used == key.size()) {
            return year;
        }
    } catch (const std::exception&) {
    }
    invalid("'" + key + "' is not a year");
}

std::size_t positive_count(const json& value, const std::string& what)
{
    if (!value.is_number_integer() || value.get<long long>() <= 0) {
        invalid(what + " must be a positive integer");
    }
    return value.get<std::size_t>();
}

std::vector<double> parse_means(const json& value, const std::string& what)
{
    if (!value.is_array() || value.empty()) {
        invalid(what + " must be a non-empty list of numbers");
    }
    std::vector<double> means;
    for (const auto& item : value) {
        if (!item.is_number()) {
            invalid(what + " must contain numbers only");
        }
        means.push_back(item.get<double>());
    }
    return means;
}

void check_means(const std::vector<double>& means, const std::string& what)
{
    if (means.empty()) {
        invalid(what + " is empty");
    }
    double previous = 0.0;
    for (double m : means) {
        if (!std::isfinite(m) || m < previous) {
            invalid(what + " must be finite, non-negative and non-decreasing");
        }
        previous = m;
    }
}

struct Article {
    std::size_t cell = 0;
    int year = 0;
    std::string doc_type;
    double impact = 1.0;
    std::vector<std::int64_t> increments;  // citations received in year + offset
};

// Brings the per-offset citation totals of one article group to the rounded
// expected totals, adding citations in proportion to latent impact and
// removing uniformly chosen existing citations.
void calibrate_group(std::vector<Article*>& group, const std::vector<double>& means, std::mt19937_64& rng)
{
    const auto n = static_cast<double>(group.size());
    std::int64_t previous_target = 0;
    std::vector<double> impacts;
    for (const auto* a : group) {
        impacts.push_back(a->impact > 0.0 ? a->impact : 1e-12);
    }
    for (std::size_t offset = 0; offset < means.size(); ++offset) {
        const auto cumulative = static_cast<std::int64_t>(std::llround(means[offset] * n));
        const auto target = std::max<std::int64_t>(0, cumulative - previous_target);
        previous_target += target;

        std::int64_t current = 0;
        for (const auto* a : group) {
            current += a->increments[offset];
        }
        if (current < target) {
            std::discrete_distribution<std::size_t> pick(impacts.begin(), impacts.end());
            for (auto missing = target - current; missing > 0; --missing) {
                ++group[pick(rng)]->increments[offset];
            }
        } else if (current > target) {
            std::vector<std::size_t> citations;
            citations.reserve(static_cast<std::size_t>(current));
            for (std::size_t i = 0; i < group.size(); ++i) {
                citations.insert(citations.end(), static_cast<std::size_t>(group[i]->increments[offset]), i);
            }
            std::shuffle(citations.begin(), citations.end(), rng);
            for (std::int64_t k = 0; k < current - target; ++k) {
                --group[citations[static_cast<std::size_t>(k)]]->increments[offset];
            }
        }
    }
}

}  // namespace

GeneratorSpec parse_generator_spec(std::string_view json_text)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        invalid(std::string("generator spec is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        invalid("generator spec must be a JSON object");
    }

    GeneratorSpec spec;
    try {
        const auto field = [](const json& node, const char* key, json fallback) {
            return node.contains(key) ? node.at(key) : fallback;
        };
        const json categories = field(root, "categories", json::array());
        const json per_year = field(root, "articles_per_year", json::object());
        const json doc_types = field(root, "other_doc_types", json::object());
        const json cells = field(root, "cells", json::array());
        for (const auto& cat : categories) {
            spec.categories.push_back({cat.at("code").get<std::string>(), cat.value("name", cat.at("code").get<std::string>())});
        }
        for (const auto& [year, count] : per_year.items()) {
            spec.articles_per_year[parse_year_key(year)] = positive_count(count, "articles_per_year[" + year + "]");
        }
        for (const auto& [type, fraction] : doc_types.items()) {
            spec.other_doc_types[normalize_doc_type(type)] = fraction.get<double>();
        }
        for (const auto& cell : cells) {
            CellSpec cs;
            try {
                cs.key = CellKey::parse(cell.at("key").get<std::string>());
            } catch (const Error& e) {
                invalid(std::string("bad cell key: ") + e.what());
            }
            cs.weight = cell.value("weight", 0.0);
            cs.dispersion = cell.value("dispersion", 1.0);
            if (cell.contains("cumulative_means")) {
                cs.cumulative_means = parse_means(cell.at("cumulative_means"), cs.key.str() + " cumulative_means");
            }
            const json by_year = field(cell, "cumulative_means_by_year", json::object());
            for (const auto& [year, means] : by_year.items()) {
                cs.cumulative_means_by_year[parse_year_key(year)] =
                    parse_means(means, cs.key.str() + " cumulative_means_by_year[" + year + "]");
            }
            const json counts = field(cell, "articles_by_year", json::object());
            for (const auto& [year, count] : counts.items()) {
                cs.articles_by_year[parse_year_key(year)] =
                    positive_count(count, cs.key.str() + " articles_by_year[" + year + "]");
            }
            spec.cells.push_back(std::move(cs));
        }
        if (root.contains("researchers")) {
            const auto& r = root.at("researchers");
            const auto count = r.value("count", 0LL);
            if (count < 0) {
                invalid("researchers.count must not be negative");
            }
            spec.researchers.count = static_cast<std::size_t>(count);
            if (r.contains("min_articles")) {
                spec.researchers.min_articles = positive_count(r.at("min_articles"), "researchers.min_articles");
            }
            if (r.contains("max_articles")) {
                spec.researchers.max_articles = positive_count(r.at("max_articles"), "researchers.max_articles");
            }
            spec.researchers.home_affinity = r.value("home_affinity", spec.researchers.home_affinity);
        }
        spec.calibrate = root.value("calibrate", true);
    } catch (const json::exception& e) {
        invalid(std::string("generator spec has a bad field: ") + e.what());
    }
    validate_generator_spec(spec);
    return spec;
}

void validate_generator_spec(const GeneratorSpec& spec)
{
    if (spec.cells.empty()) {
        invalid("generator spec declares no cells");
    }
    std::set<std::string> codes;
    for (const auto& cat : spec.categories) {
        if (!is_valid_category_code(cat.code) || !codes.insert(cat.code).second) {
            invalid("category code '" + cat.code + "' is invalid or repeated");
        }
    }
    std::set<CellKey> keys;
    double total_weight = 0.0;
    std::size_t total_articles = 0;
    for (const auto& [year, count] : spec.articles_per_year) {
        if (count == 0) {
            invalid("articles_per_year[" + std::to_string(year) + "] must be positive");
        }
        total_articles += count;
    }
    for (const auto& cell : spec.cells) {
        if (!keys.insert(cell.key).second) {
            invalid("cell '" + cell.key.str() + "' declared twice");
        }
        for (const auto& code : cell.key.codes()) {
            if (!codes.contains(code)) {
                invalid("cell '" + cell.key.str() + "' uses undeclared category '" + code + "'");
            }
        }
        if (!(cell.weight >= 0.0) || !std::isfinite(cell.weight)) {
            invalid("cell '" + cell.key.str() + "' has a negative weight");
        }
        if (!(cell.dispersion > 0.0)) {
            invalid("cell '" + cell.key.str() + "' needs a positive dispersion");
        }
        total_weight += cell.weight;
        for (const auto& [year, count] : cell.articles_by_year) {
            if (count == 0) {
                invalid("cell '" + cell.key.str() + "' articles_by_year must be positive");
            }
            total_articles += count;
        }
        const bool drawn = cell.weight > 0.0 && !spec.articles_per_year.empty();
        if (drawn || !cell.articles_by_year.empty()) {
            if (cell.cumulative_means.empty() && cell.cumulative_means_by_year.empty()) {
                invalid("cell '" + cell.key.str() + "' has no citation rates");
            }
        }
        if (!cell.cumulative_means.empty()) {
            check_means(cell.cumulative_means, cell.key.str() + " cumulative_means");
        }
        for (const auto& [year, means] : cell.cumulative_means_by_year) {
            check_means(means, cell.key.str() + " cumulative_means_by_year");
        }
        if (cell.cumulative_means.empty()) {
            // Every generated year needs rates when there is no default.
            std::set<int> years;
            if (drawn) {
                for (const auto& [year, count] : spec.articles_per_year) {
                    years.insert(year);
                }
            }
            for (const auto& [year, count] : cell.articles_by_year) {
                years.insert(year);
            }
            for (int year : years) {
                if (!cell.cumulative_means_by_year.contains(year)) {
                    invalid("cell '" + cell.key.str() + "' has no citation rates for " + std::to_string(year));
                }
            }
        }
    }
    if (total_articles == 0) {
        invalid("generator spec produces no articles");
    }
    if (!spec.articles_per_year.empty() && !(total_weight > 0.0)) {
        invalid("articles_per_year needs at least one cell with positive weight");
    }
    double other = 0.0;
    for (const auto& [type, fraction] : spec.other_doc_types) {
        if (type.empty() || type == "article" || !(fraction >= 0.0)) {
            invalid("other_doc_types entries need a non-article name and a non-negative fraction");
        }
        other += fraction;
    }
    if (other >= 1.0) {
        invalid("other_doc_types fractions must sum below 1");
    }
    const auto& r = spec.researchers;
    if (r.count > 0 && (r.min_articles == 0 || r.max_articles < r.min_articles)) {
        invalid("researcher article range is empty");
    }
    if (!(r.home_affinity >= 0.0 && r.home_affinity <= 1.0)) {
        invalid("researchers.home_affinity must lie in [0, 1]");
    }
}

Corpus generate_synthetic_corpus(const GeneratorSpec& spec, std::uint64_t seed)
{
    validate_generator_spec(spec);
    std::mt19937_64 rng(seed);

    std::vector<double> weights;
    for (const auto& cell : spec.cells) {
        weights.push_back(cell.weight);
    }
    std::vector<std::string> type_names;
    std::vector<double> type_fractions;
    double other_total = 0.0;
    for (const auto& [type, fraction] : spec.other_doc_types) {
        type_names.push_back(type);
        type_fractions.push_back(fraction);
        other_total += fraction;
    }
    type_names.emplace_back("article");
    type_fractions.push_back(1.0 - other_total);

    std::vector<Article> articles;
    {
        std::discrete_distribution<std::size_t> type_pick(type_fractions.begin(), type_fractions.end());
        std::discrete_distribution<std::size_t> cell_pick;
        if (!spec.articles_per_year.empty()) {
            cell_pick = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
        }
        for (const auto& [year, count] : spec.articles_per_year) {
            for (std::size_t i = 0; i < count; ++i) {
                Article a;
                a.cell = cell_pick(rng);
                a.year = year;
                a.doc_type = type_names[type_pick(rng)];
                articles.push_back(std::move(a));
            }
        }
        for (std::size_t c = 0; c < spec.cells.size(); ++c) {
            for (const auto& [year, count] : spec.cells[c].articles_by_year) {
                for (std::size_t i = 0; i < count; ++i) {
                    Article a;
                    a.cell = c;
                    a.year = year;
                    a.doc_type = "article";
                    articles.push_back(std::move(a));
                }
            }
        }
    }

    // Latent impact and Poisson citation increments per year offset.
    for (auto& a : articles) {
        const auto& cell = spec.cells[a.cell];
        std::gamma_distribution<double> impact(cell.dispersion, 1.0 / cell.dispersion);
        a.impact = impact(rng);
        const auto& means = cell.means_for(a.year);
        a.increments.assign(means.size(), 0);
        double previous = 0.0;
        for (std::size_t t = 0; t < means.size(); ++t) {
            const double rate = a.impact * (means[t] - previous);
            previous = means[t];
            if (rate > 0.0) {
                std::poisson_distribution<std::int64_t> draw(rate);
                a.increments[t] = draw(rng);
            }
        }
    }

    if (spec.calibrate) {
        std::map<std::pair<std::size_t, int>, std::vector<Article*>> groups;
        for (auto& a : articles) {
            if (a.doc_type == "article") {
                groups[{a.cell, a.year}].push_back(&a);
            }
        }
        for (auto& [key, group] : groups) {
            calibrate_group(group, spec.cells[key.first].means_for(key.second), rng);
        }
    }

    std::vector<PublicationRecord> pubs;
    pubs.reserve(articles.size());
    std::map<int, std::size_t> sequence;
    for (const auto& a : articles) {
        PublicationRecord pub;
        char id[32];
        std::snprintf(id, sizeof id, "P%d-%07zu", a.year, ++sequence[a.year]);
        pub.pub_id = id;
        pub.year = a.year;
        pub.doc_type = a.doc_type;
        pub.categories = spec.cells[a.cell].key.codes();
        for (std::size_t t = 0; t < a.increments.size(); ++t) {
            if (a.increments[t] > 0) {
                pub.citations_by_year[a.year + static_cast<int>(t)] = a.increments[t];
            }
        }
        pubs.push_back(std::move(pub));
    }

    const auto& rs = spec.researchers;
    if (rs.count > 0 && !pubs.empty()) {
        std::vector<std::vector<std::size_t>> by_cell(spec.cells.size());
        std::vector<double> cell_sizes(spec.cells.size(), 0.0);
        for (std::size_t i = 0; i < articles.size(); ++i) {
            by_cell[articles[i].cell].push_back(i);
            cell_sizes[articles[i].cell] += 1.0;
        }
        std::discrete_distribution<std::size_t> home_pick(cell_sizes.begin(), cell_sizes.end());
        std::uniform_int_distribution<std::size_t> size_pick(rs.min_articles, rs.max_articles);
        std::uniform_int_distribution<std::size_t> any_pick(0, pubs.size() - 1);
        std::bernoulli_distribution at_home(rs.home_affinity);
        const int width = std::max(4, static_cast<int>(std::to_string(rs.count).size()));
        for (std::size_t r = 0; r < rs.count; ++r) {
            char id[32];
            std::snprintf(id, sizeof id, "R%0*zu", width, r + 1);
            const auto& home = by_cell[home_pick(rng)];
            std::uniform_int_distribution<std::size_t> home_index(0, home.size() - 1);
            const auto wanted = std::min(size_pick(rng), pubs.size());
            std::set<std::size_t> chosen;
            // Bounded retries keep tiny corpora from spinning on duplicates.
            for (std::size_t attempt = 0; chosen.size() < wanted && attempt < wanted * 20; ++attempt) {
                chosen.insert(at_home(rng) ? home[home_index(rng)] : any_pick(rng));
            }
            for (auto i : chosen) {
                pubs[i].author_ids.emplace_back(id);
            }
        }
    }

    return Corpus(std::move(pubs), spec.categories);
}

}  // namespace pcells

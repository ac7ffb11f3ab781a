#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <random>
#include <vector>

#include "slr/gravity.hpp"

namespace slr::test {

inline constexpr std::array<double, 5> kPlantedBeta{1.0, 0.5, 0.5, -2.0, -3.0};

// Gravity samples drawn from a well-conditioned design with the planted
// coefficients above and optional Gaussian noise on the response.
inline std::vector<GravitySample> planted_gravity_samples(std::size_t n, std::uint64_t seed, double sigma = 0.0,
                                                          const std::array<double, 5>& beta = kPlantedBeta) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mass(0.0, 3.0), dist(0.0, 4.0);
    std::bernoulli_distribution border(0.5);
    std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
    std::vector<GravitySample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& s = out[i];
        s.institution_a = "a" + std::to_string(i);
        s.institution_b = "b" + std::to_string(i);
        s.log_pubmass_a = mass(rng);
        s.log_pubmass_b = mass(rng);
        s.log_distance = dist(rng);
        s.cross_border = border(rng) ? 1.0 : 0.0;
        s.intensity = beta[0] + beta[1] * s.log_pubmass_a + beta[2] * s.log_pubmass_b + beta[3] * s.log_distance +
                      beta[4] * s.cross_border;
        if (sigma > 0.0) s.intensity += noise(rng);
    }
    return out;
}

struct CorpusText {
    std::string publications;
    std::string institutions;
};

// Institutions in three national clusters; each pair co-publishes a number of
// papers that falls with log-distance and with a border between them.
inline CorpusText gravity_corpus_text(std::uint64_t seed, std::int64_t first_year = 2010, int n_years = 3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 4.0), noise(0.0, 0.6);
    const char* countries[] = {"CN", "DE", "US"};
    const double centers[][2] = {{30.0, 110.0}, {50.0, 10.0}, {40.0, -90.0}};
    constexpr int kPerCountry = 8;
    CorpusText out;
    out.institutions = "id,name,lat,lon,country\n";
    std::vector<std::array<double, 2>> where;
    std::vector<int> nation;
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < kPerCountry; ++k) {
            const double lat = centers[c][0] + jitter(rng), lon = centers[c][1] + 2.0 * jitter(rng);
            where.push_back({lat, lon});
            nation.push_back(c);
            char line[128];
            std::snprintf(line, sizeof line, "u%02d,University %02d,%.4f,%.4f,%s\n", c * kPerCountry + k,
                          c * kPerCountry + k, lat, lon, countries[c]);
            out.institutions += line;
        }
    int paper = 0;
    for (int y = 0; y < n_years; ++y)
        for (std::size_t i = 0; i < where.size(); ++i)
            for (std::size_t j = i + 1; j < where.size(); ++j) {
                const double k = std::numbers::pi / 180.0;
                const double dlat = (where[j][0] - where[i][0]) * k, dlon = (where[j][1] - where[i][1]) * k;
                const double h = std::pow(std::sin(dlat / 2), 2) +
                                 std::cos(where[i][0] * k) * std::cos(where[j][0] * k) * std::pow(std::sin(dlon / 2), 2);
                const double km = 2.0 * 6371.0 * std::asin(std::sqrt(h));
                const double border = nation[i] != nation[j] ? 1.0 : 0.0;
                const double expected = 9.5 - 1.5 * std::log10(std::max(km, 1.0)) - 1.5 * border + noise(rng);
                const long count = std::lround(std::max(0.0, expected));
                for (long p = 0; p < count; ++p) {
                    char line[256];
                    const bool flip = (paper % 2) == 1;
                    std::snprintf(line, sizeof line,
                                  "{\"id\":\"s%05d\",\"year\":%lld,\"field\":\"%s\",\"citations\":%d,"
                                  "\"altmetrics\":%d,\"affiliations\":[[\"u%02zu\",true],[\"u%02zu\",false]]}\n",
                                  paper, static_cast<long long>(first_year + y), paper % 3 ? "pharma" : "isls",
                                  static_cast<int>(rng() % 40), static_cast<int>(rng() % 60), flip ? j : i, flip ? i : j);
                    out.publications += line;
                    ++paper;
                }
            }
    return out;
}

}  // namespace slr::test

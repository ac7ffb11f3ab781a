#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slr/corpus.hpp"
#include "slr/evaluate.hpp"
#include "slr/geo.hpp"
#include "slr/leadership.hpp"
#include "slr/ranking.hpp"

namespace slr {

/// Parsed inputs plus the validated record set every downstream stage uses.
struct Corpus {
    InstitutionTable institutions;
    std::vector<PublicationRecord> records;  // well-formed records, input order
    std::vector<LineError> publication_errors;
    std::vector<LineError> institution_errors;
    ValidatedCorpus validated;

    const std::vector<PublicationRecord>& accepted() const { return validated.accepted; }
};

Corpus load_corpus(std::string_view publications_text, std::string_view institutions_text);

/// Throws InputError naming the path when a file cannot be read.
Corpus load_corpus_files(const std::filesystem::path& publications, const std::filesystem::path& institutions);

/// Re-validates the records passing `filter`; parse errors are carried over.
Corpus filter_corpus(const Corpus& corpus, const RecordFilter& filter);

std::string validation_report_csv(const Corpus& corpus);
std::string validation_report_json(const Corpus& corpus);

/// Metric names accepted by rank_metric, in evaluation order.
inline const std::vector<std::string> kMetricNames{"spatialleaderrank", "leaderrank", "pagerank", "indegree",
                                                   "betweenness", "closeness", "publication"};

struct RankParams {
    double tol = 1e-10;
    std::size_t max_iter = 10000;
    double damping = 0.85;
};

/// Throws InputError for unknown metric names.
RankingResult rank_metric(const Corpus& corpus, const BuiltNetwork& built, std::string_view metric,
                          const RankParams& params = {});

/// Every metric against both h-indices.
std::vector<EvalRow> evaluate_corpus(const Corpus& corpus, const BuiltNetwork& built, const RankParams& rank,
                                     const EvalParams& eval);

struct YearPowerLaw {
    std::int64_t year = 0;
    std::optional<PowerLawFit> fit;
    std::string reason;
};

struct PowerLawReport {
    double x_min = 0.0;
    std::optional<PowerLawFit> overall;
    std::string overall_reason;
    std::vector<YearPowerLaw> yearly;
    std::vector<DistanceStats> summary;
};

/// Fits flow distances overall and per year with one shared x_min (the
/// smallest positive distance unless given).
PowerLawReport powerlaw_report(const Corpus& corpus, std::optional<double> x_min = std::nullopt);
std::string powerlaw_report_text(const PowerLawReport& report);
std::string powerlaw_report_json(const PowerLawReport& report);

/// Gaussian KDE of institution locations weighted by leadership mass.
DensityGrid mass_density(const Corpus& corpus, const LeadershipMass& mass, double bandwidth_km,
                         const GridSpec& spec);

}  // namespace slr

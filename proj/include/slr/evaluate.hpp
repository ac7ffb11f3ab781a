#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slr/corpus.hpp"
#include "slr/leadership.hpp"
#include "slr/ranking.hpp"

namespace slr {

/// 1-based ranks in input order; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. Throws InputError on length
/// mismatch, fewer than two values, or a constant input.
double spearman(std::span<const double> x, std::span<const double> y);

using Labels = std::map<InstitutionId, int>;
using ScoreMap = std::map<InstitutionId, double>;
using NamedScores = std::vector<std::pair<std::string, ScoreMap>>;

/// Labels exactly ceil(fraction * N) ids with 1: highest values first, ties
/// by ascending id. Throws InputError for an empty map or fraction outside (0,1).
Labels top_fraction_labels(const ScoreMap& values, double fraction);

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (false-positive rate, true-positive rate)
    double auc = 0.0;
};

/// Threshold sweep in descending score order; one point per distinct score
/// plus (0,0). AUC is the Mann-Whitney statistic with half credit for ties.
/// Throws InputError when only one class is present or the id sets differ.
RocCurve roc_auc(const ScoreMap& scores, const Labels& labels);

/// Similarity of two top-k lists over their union. Each list is extended with
/// its missing items tied at its end; the count of ordered pairs (u, v) that
/// both extended lists order the same way (strictly) is divided by
/// |U|(|U|-1). Throws InputError on duplicates or an empty list.
double ksim(std::span<const InstitutionId> tau1, std::span<const InstitutionId> tau2);

/// Largest h such that at least h values are >= h.
std::int64_t h_index(std::span<const std::int64_t> values);

struct PowerLawFit {
    double alpha = 0.0;
    double x_min = 0.0;
    std::size_t n_tail = 0;
};

/// Continuous maximum-likelihood exponent over samples >= x_min.
/// Throws NumericalError when fewer than two samples reach x_min or all tail
/// samples equal x_min.
PowerLawFit powerlaw_mle(std::span<const double> samples, double x_min);

/// Smallest strictly positive sample; throws InputError when there is none.
double default_x_min(std::span<const double> samples);

struct DistanceStats {
    std::int64_t year = 0;
    std::size_t count = 0;
    double mean = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Per-year order statistics (linear-interpolated quartiles), ascending year.
std::vector<DistanceStats> distance_summary(std::span<const DistanceSample> samples);

inline const std::vector<std::size_t> kDefaultKsimK{5, 10, 20, 50, 100, 200, 500};

struct EvalParams {
    double fraction = 0.05;
    std::vector<std::size_t> ksim_k = kDefaultKsimK;
};

struct EvalRow {
    std::string index;
    std::string impact_metric;
    std::string measure;
    double value = 0.0;  // NaN when the measure is undefined for this pair
};

/// Top-k ids by the tie-break rule of ranked_entries.
std::vector<InstitutionId> top_k(const ScoreMap& scores, std::size_t k);

/// spearman, auc and ksim@k for every (index, impact metric) pair, in input
/// order. Scores are compared over the ids both maps share.
std::vector<EvalRow> evaluate_indices(const NamedScores& indices, const NamedScores& impacts,
                                      const EvalParams& params);

/// h_citation and h_altmetrics per institution.
NamedScores impact_metrics(const std::map<InstitutionId, InstitutionStats>& stats);

std::string evaluation_csv(const std::vector<EvalRow>& rows);
std::string evaluation_json(const std::vector<EvalRow>& rows);

std::string distance_summary_csv(const std::vector<DistanceStats>& rows);
std::string distance_summary_json(const std::vector<DistanceStats>& rows);

}  // namespace slr

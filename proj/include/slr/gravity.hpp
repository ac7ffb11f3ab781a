#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slr/corpus.hpp"

namespace slr {

/// One observed collaborating pair. `institution_a` < `institution_b`
/// lexicographically; the pubmass roles follow that order.
struct GravitySample {
    InstitutionId institution_a;
    InstitutionId institution_b;
    double intensity = 0.0;  // co-publication count
    double log_pubmass_a = 0.0;
    double log_pubmass_b = 0.0;
    double log_distance = 0.0;  // log10 km, distance floored at 1 km
    double cross_border = 0.0;  // 0 or 1
    std::vector<double> extras;  // caller-supplied log10 proximity covariates
};

struct GravityOptions {
    bool log_response = false;  // regress log10(I) instead of I
    std::vector<std::string> extra_names;  // defaults to extra_1, extra_2, ...
};

struct ResidualSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

struct GravityFit {
    std::vector<std::string> names;  // intercept, pubmass_a, pubmass_b, distance, country, extras...
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    double r_squared = 0.0;
    std::size_t n_samples = 0;
    bool log_response = false;
    /// Set when the distance coefficient is non-vanishing.
    std::optional<double> lambda;
    ResidualSummary residuals;

    /// Throws std::out_of_range for unknown names.
    double coefficient(const std::string& name) const;
};

inline constexpr double kConditionLimit = 1e12;
inline constexpr double kVanishingDistanceCoefficient = 1e-9;

/// One sample per unordered pair co-appearing in at least one record inside
/// the window; pubmass counts each institution's records in the same window.
std::vector<GravitySample> build_gravity_samples(
    const std::vector<PublicationRecord>& records, const InstitutionTable& institutions,
    std::optional<std::pair<std::int64_t, std::int64_t>> years = std::nullopt);

/// Least squares on the design [1, pubmass_a, pubmass_b, distance, country,
/// extras]. Throws NumericalError when there are too few samples or the
/// design is rank deficient (condition estimate above kConditionLimit); the
/// message names the collinear columns.
GravityFit ols_fit(const std::vector<GravitySample>& samples, const GravityOptions& options = {});

/// beta_country / beta_distance. Throws NumericalError when the distance
/// coefficient vanishes.
double estimate_lambda(const GravityFit& fit);

struct YearLambda {
    std::int64_t year = 0;
    std::optional<double> lambda;
    std::string reason;  // failure reason when lambda is empty
};

/// Independent fit per calendar year; failures become entries, not errors.
std::vector<YearLambda> lambda_by_year(const std::vector<PublicationRecord>& records,
                                       const InstitutionTable& institutions, const std::vector<std::int64_t>& years,
                                       const GravityOptions& options = {});

std::string gravity_report_text(const GravityFit& fit);
std::string gravity_report_json(const GravityFit& fit);
std::string lambda_series_csv(const std::vector<YearLambda>& series);
std::string lambda_series_json(const std::vector<YearLambda>& series);

}  // namespace slr

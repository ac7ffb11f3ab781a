#include "slr/gravity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <json.hpp>

#include "slr/error.hpp"
#include "slr/format.hpp"
#include "slr/geo.hpp"
#include "slr/leadership.hpp"
#include "slr/parallel.hpp"

namespace slr {

namespace {

const std::vector<std::string> kBaseNames{"intercept", "pubmass_a", "pubmass_b", "distance", "country"};

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

}  // namespace

double GravityFit::coefficient(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("no coefficient named '" + name + "'");
    return coefficients[static_cast<std::size_t>(it - names.begin())];
}

std::vector<GravitySample> build_gravity_samples(const std::vector<PublicationRecord>& records,
                                                 const InstitutionTable& institutions,
                                                 std::optional<std::pair<std::int64_t, std::int64_t>> years) {
    std::map<InstitutionId, std::size_t> pubmass;
    std::map<std::pair<InstitutionId, InstitutionId>, std::size_t> intensity;
    for (const auto& rec : records) {
        if (years && (rec.year < years->first || rec.year > years->second)) continue;
        auto ids = distinct_institutions(rec);
        if (ids.size() < 2) continue;
        std::sort(ids.begin(), ids.end());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            ++pubmass[ids[i]];
            for (std::size_t j = i + 1; j < ids.size(); ++j) ++intensity[{ids[i], ids[j]}];
        }
    }

    std::vector<GravitySample> out;
    out.reserve(intensity.size());
    for (const auto& [pair, count] : intensity) {
        const Institution& a = institutions.at(pair.first);
        const Institution& b = institutions.at(pair.second);
        GravitySample s;
        s.institution_a = pair.first;
        s.institution_b = pair.second;
        s.intensity = static_cast<double>(count);
        s.log_pubmass_a = std::log10(static_cast<double>(pubmass[pair.first]));
        s.log_pubmass_b = std::log10(static_cast<double>(pubmass[pair.second]));
        s.log_distance = std::log10(std::max(1.0, haversine_km({a.lat, a.lon}, {b.lat, b.lon})));
        s.cross_border = a.country != b.country ? 1.0 : 0.0;
        out.push_back(std::move(s));
    }
    return out;
}

GravityFit ols_fit(const std::vector<GravitySample>& samples, const GravityOptions& options) {
    const std::size_t n_extra = samples.empty() ? options.extra_names.size() : samples.front().extras.size();
    for (const auto& s : samples)
        if (s.extras.size() != n_extra) throw InputError("gravity samples carry differing numbers of extra covariates");
    if (!options.extra_names.empty() && options.extra_names.size() != n_extra)
        throw InputError("extra covariate names do not match the sample covariates");

    std::vector<std::string> names = kBaseNames;
    for (std::size_t k = 0; k < n_extra; ++k)
        names.push_back(options.extra_names.empty() ? "extra_" + std::to_string(k + 1) : options.extra_names[k]);

    const auto n = static_cast<Eigen::Index>(samples.size());
    const auto p = static_cast<Eigen::Index>(names.size());
    if (n <= p)
        throw NumericalError("too few samples: " + std::to_string(n) + " samples for " + std::to_string(p) +
                             " coefficients");

    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        if (options.log_response && !(s.intensity > 0.0))
            throw InputError("log response requires positive intensities");
        y(i) = options.log_response ? std::log10(s.intensity) : s.intensity;
        x(i, 0) = 1.0;
        x(i, 1) = s.log_pubmass_a;
        x(i, 2) = s.log_pubmass_b;
        x(i, 3) = s.log_distance;
        x(i, 4) = s.cross_border;
        for (std::size_t k = 0; k < n_extra; ++k) x(i, 5 + static_cast<Eigen::Index>(k)) = s.extras[k];
    }

    // Equilibrate columns so the condition estimate reflects collinearity, not units.
    Eigen::VectorXd scale = x.colwise().norm().transpose();
    std::vector<std::string> zero_columns;
    for (Eigen::Index j = 0; j < p; ++j)
        if (scale(j) == 0.0) zero_columns.push_back(names[static_cast<std::size_t>(j)]);
    if (!zero_columns.empty())
        throw NumericalError("rank-deficient design: all-zero columns: " + join_names(zero_columns));
    const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    const auto& perm = qr.colsPermutation().indices();
    const double r00 = std::abs(r(0, 0));
    Eigen::Index rank = 0;
    while (rank < p && std::abs(r(rank, rank)) * kConditionLimit > r00) ++rank;
    if (rank < p) {
        std::string message = "rank-deficient design (condition estimate above 1e12): collinear columns:";
        for (Eigen::Index k = rank; k < p; ++k) {
            // Column k of R expresses the dependent column in terms of the pivots.
            const Eigen::VectorXd c =
                r.topLeftCorner(rank, rank).triangularView<Eigen::Upper>().solve(r.col(k).head(rank));
            std::vector<std::string> partners;
            for (Eigen::Index m = 0; m < rank; ++m)
                if (std::abs(c(m)) > 1e-6) partners.push_back(names[static_cast<std::size_t>(perm(m))]);
            message += " " + names[static_cast<std::size_t>(perm(k))];
            if (!partners.empty()) message += " ~ {" + join_names(partners) + "}";
            if (k + 1 < p) message += ";";
        }
        throw NumericalError(message);
    }

    const Eigen::VectorXd beta_scaled = qr.solve(y);
    const Eigen::VectorXd beta = beta_scaled.cwiseQuotient(scale);
    const Eigen::VectorXd resid = y - x * beta;

    GravityFit fit;
    fit.names = names;
    fit.n_samples = samples.size();
    fit.log_response = options.log_response;
    fit.coefficients.assign(beta.data(), beta.data() + p);

    const double rss = resid.squaredNorm();
    const double sigma2 = rss / static_cast<double>(n - p);
    const Eigen::MatrixXd rinv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    fit.standard_errors.assign(static_cast<std::size_t>(p), 0.0);
    for (Eigen::Index k = 0; k < p; ++k) {
        const auto j = perm(k);
        fit.standard_errors[static_cast<std::size_t>(j)] = std::sqrt(sigma2 * rinv.row(k).squaredNorm()) / scale(j);
    }

    const double tss = (y.array() - y.mean()).matrix().squaredNorm();
    if (tss > 0.0)
        fit.r_squared = std::clamp(1.0 - rss / tss, 0.0, 1.0);
    else
        fit.r_squared = rss == 0.0 ? 1.0 : 0.0;
    fit.residuals = {resid.minCoeff(), resid.maxCoeff(), resid.mean()};

    const double bd = fit.coefficient("distance");
    if (std::abs(bd) > kVanishingDistanceCoefficient) fit.lambda = fit.coefficient("country") / bd;
    return fit;
}

double estimate_lambda(const GravityFit& fit) {
    const double bd = fit.coefficient("distance");
    if (!(std::abs(bd) > kVanishingDistanceCoefficient)) throw NumericalError("distance coefficient vanishes");
    return fit.coefficient("country") / bd;
}

std::vector<YearLambda> lambda_by_year(const std::vector<PublicationRecord>& records,
                                       const InstitutionTable& institutions, const std::vector<std::int64_t>& years,
                                       const GravityOptions& options) {
    std::vector<YearLambda> out(years.size());
    parallel_for_chunks(years.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i].year = years[i];
            try {
                auto samples = build_gravity_samples(records, institutions, std::pair{years[i], years[i]});
                out[i].lambda = estimate_lambda(ols_fit(samples, options));
            } catch (const Error& e) {
                const std::string what = e.what();
                out[i].reason = what.rfind("too few samples", 0) == 0 ? "too few samples" : what;
            }
        }
    });
    return out;
}

std::string gravity_report_text(const GravityFit& fit) {
    std::string out;
    out += "response: " + std::string(fit.log_response ? "log10_intensity" : "intensity") + '\n';
    out += "n_samples: " + std::to_string(fit.n_samples) + '\n';
    out += "r_squared: " + format_number(fit.r_squared) + '\n';
    out += "lambda: " + (fit.lambda ? format_number(*fit.lambda) : std::string("nan")) + '\n';
    out += "lambda_exact: " + (fit.lambda ? format_exact(*fit.lambda) : std::string("nan")) + '\n';
    out += "residual_min: " + format_number(fit.residuals.min) + '\n';
    out += "residual_max: " + format_number(fit.residuals.max) + '\n';
    out += "residual_mean: " + format_number(fit.residuals.mean) + '\n';
    out += "name,estimate,std_error\n";
    for (std::size_t k = 0; k < fit.names.size(); ++k)
        out += fit.names[k] + ',' + format_number(fit.coefficients[k]) + ',' + format_number(fit.standard_errors[k]) +
               '\n';
    return out;
}

std::string gravity_report_json(const GravityFit& fit) {
    nlohmann::ordered_json doc;
    doc["response"] = fit.log_response ? "log10_intensity" : "intensity";
    doc["n_samples"] = fit.n_samples;
    doc["r_squared"] = rounded_number(fit.r_squared);
    doc["lambda"] = fit.lambda ? nlohmann::ordered_json(rounded_number(*fit.lambda)) : nlohmann::ordered_json();
    doc["lambda_exact"] = fit.lambda ? nlohmann::ordered_json(*fit.lambda) : nlohmann::ordered_json();
    doc["residuals"] = {{"min", rounded_number(fit.residuals.min)},
                        {"max", rounded_number(fit.residuals.max)},
                        {"mean", rounded_number(fit.residuals.mean)}};
    auto& coefs = doc["coefficients"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < fit.names.size(); ++k)
        coefs.push_back({{"name", fit.names[k]},
                         {"estimate", rounded_number(fit.coefficients[k])},
                         {"std_error", rounded_number(fit.standard_errors[k])}});
    return doc.dump(2) + '\n';
}

std::string lambda_series_csv(const std::vector<YearLambda>& series) {
    std::string out = "year,lambda,status\n";
    for (const auto& y : series)
        out += std::to_string(y.year) + ',' + (y.lambda ? format_number(*y.lambda) : std::string()) + ',' +
               csv_field(y.lambda ? std::string("ok") : y.reason) + '\n';
    return out;
}

std::string lambda_series_json(const std::vector<YearLambda>& series) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& y : series) {
        nlohmann::ordered_json r;
        r["year"] = y.year;
        r["lambda"] = y.lambda ? nlohmann::ordered_json(rounded_number(*y.lambda)) : nlohmann::ordered_json();
        r["status"] = y.lambda ? std::string("ok") : y.reason;
        rows.push_back(std::move(r));
    }
    return rows.dump(2) + '\n';
}

}  // namespace slr

#include "slr/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "slr/error.hpp"
#include "slr/format.hpp"

namespace slr {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share rank mean((i+1)..(j+1))
        const double r = 0.5 * static_cast<double>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InputError("spearman: length mismatch");
    if (x.size() < 2) throw InputError("spearman: need at least two values");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    // Mean rank of n items is (n+1)/2 whatever the ties.
    const double mean = 0.5 * static_cast<double>(x.size() + 1);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw InputError("spearman: constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Labels top_fraction_labels(const ScoreMap& values, double fraction) {
    if (values.empty()) throw InputError("top_fraction_labels: empty input");
    if (!(fraction > 0.0 && fraction < 1.0)) throw InputError("fraction must lie in (0, 1)");
    const double n = static_cast<double>(values.size());
    // The small offset keeps products like 0.07 * 100 from rounding up past an integer.
    const auto positives = static_cast<std::size_t>(std::ceil(fraction * n - 1e-9));
    Labels labels;
    for (const auto& [id, v] : values) labels[id] = 0;
    for (const auto& id : top_k(values, positives)) labels[id] = 1;
    return labels;
}

RocCurve roc_auc(const ScoreMap& scores, const Labels& labels) {
    if (scores.size() != labels.size()) throw InputError("roc_auc: scores and labels cover different ids");
    std::vector<double> values;
    std::vector<int> classes;
    for (const auto& [id, s] : scores) {
        auto it = labels.find(id);
        if (it == labels.end()) throw InputError("roc_auc: no label for '" + id + "'");
        values.push_back(s);
        classes.push_back(it->second != 0 ? 1 : 0);
    }
    const auto pos = static_cast<double>(std::count(classes.begin(), classes.end(), 1));
    const double neg = static_cast<double>(classes.size()) - pos;
    if (pos == 0.0 || neg == 0.0) throw InputError("roc_auc: both label classes must be present");

    RocCurve curve;
    const auto ranks = average_ranks(values);
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < ranks.size(); ++i)
        if (classes[i]) rank_sum += ranks[i];
    curve.auc = (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);

    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    curve.points.emplace_back(0.0, 0.0);
    double tp = 0.0, fp = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == values[order[i]]) {
            (classes[order[j]] ? tp : fp) += 1.0;
            ++j;
        }
        curve.points.emplace_back(fp / neg, tp / pos);
        i = j;
    }
    return curve;
}

double ksim(std::span<const InstitutionId> tau1, std::span<const InstitutionId> tau2) {
    if (tau1.empty() || tau2.empty()) throw InputError("ksim: lists must be non-empty");
    std::vector<InstitutionId> universe;
    std::map<InstitutionId, std::size_t> pos1, pos2;
    for (std::size_t i = 0; i < tau1.size(); ++i) {
        if (!pos1.emplace(tau1[i], i).second) throw InputError("ksim: duplicate id '" + tau1[i] + "' in first list");
        universe.push_back(tau1[i]);
    }
    for (std::size_t i = 0; i < tau2.size(); ++i) {
        if (!pos2.emplace(tau2[i], i).second) throw InputError("ksim: duplicate id '" + tau2[i] + "' in second list");
        if (!pos1.count(tau2[i])) universe.push_back(tau2[i]);
    }
    const std::size_t u = universe.size();
    if (u < 2) return 1.0;
    std::vector<std::size_t> p1(u), p2(u);
    for (std::size_t i = 0; i < u; ++i) {
        auto a = pos1.find(universe[i]);
        auto b = pos2.find(universe[i]);
        p1[i] = a == pos1.end() ? tau1.size() : a->second;
        p2[i] = b == pos2.end() ? tau2.size() : b->second;
    }
    std::size_t agree = 0;
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j) {
            if (i == j) continue;
            if ((p1[i] < p1[j] && p2[i] < p2[j]) || (p1[i] > p1[j] && p2[i] > p2[j])) ++agree;
        }
    return static_cast<double>(agree) / (static_cast<double>(u) * static_cast<double>(u - 1));
}

std::int64_t h_index(std::span<const std::int64_t> values) {
    std::vector<std::int64_t> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::int64_t h = 0;
    while (h < static_cast<std::int64_t>(sorted.size()) && sorted[static_cast<std::size_t>(h)] >= h + 1) ++h;
    return h;
}

PowerLawFit powerlaw_mle(std::span<const double> samples, double x_min) {
    if (!(x_min > 0.0) || !std::isfinite(x_min)) throw InputError("x_min must be positive and finite");
    std::vector<double> logs;
    for (double x : samples)
        if (x >= x_min) logs.push_back(std::log(x / x_min));
    if (logs.size() < 2)
        throw NumericalError("power-law fit needs at least two samples >= x_min, got " + std::to_string(logs.size()));
    std::sort(logs.begin(), logs.end());
    double log_sum = 0.0;
    for (double l : logs) log_sum += l;
    if (!(log_sum > 0.0)) throw NumericalError("power-law fit: every tail sample equals x_min");
    return {1.0 + static_cast<double>(logs.size()) / log_sum, x_min, logs.size()};
}

double default_x_min(std::span<const double> samples) {
    double best = std::numeric_limits<double>::infinity();
    for (double x : samples)
        if (x > 0.0 && x < best) best = x;
    if (!std::isfinite(best)) throw InputError("no positive samples to choose x_min from");
    return best;
}

std::vector<DistanceStats> distance_summary(std::span<const DistanceSample> samples) {
    std::map<std::int64_t, std::vector<double>> by_year;
    for (const auto& s : samples) by_year[s.year].push_back(s.distance_km);
    std::vector<DistanceStats> out;
    for (auto& [year, values] : by_year) {
        std::sort(values.begin(), values.end());
        DistanceStats st;
        st.year = year;
        st.count = values.size();
        double sum = 0.0;
        for (double v : values) sum += v;
        st.mean = sum / static_cast<double>(values.size());
        st.min = values.front();
        st.max = values.back();
        st.q1 = quantile_sorted(values, 0.25);
        st.median = quantile_sorted(values, 0.5);
        st.q3 = quantile_sorted(values, 0.75);
        out.push_back(st);
    }
    return out;
}

std::vector<InstitutionId> top_k(const ScoreMap& scores, std::size_t k) {
    RankingResult r;
    r.scores = scores;
    auto entries = ranked_entries(r);
    std::vector<InstitutionId> out;
    for (std::size_t i = 0; i < std::min(k, entries.size()); ++i) out.push_back(entries[i].first);
    return out;
}

std::vector<EvalRow> evaluate_indices(const NamedScores& indices, const NamedScores& impacts,
                                      const EvalParams& params) {
    std::vector<EvalRow> rows;
    for (const auto& [index_name, index_scores] : indices) {
        for (const auto& [impact_name, impact_scores] : impacts) {
            ScoreMap idx, imp;
            for (const auto& [id, v] : index_scores) {
                auto it = impact_scores.find(id);
                if (it == impact_scores.end()) continue;
                idx[id] = v;
                imp[id] = it->second;
            }
            auto row = [&](std::string measure, double value) {
                rows.push_back({index_name, impact_name, std::move(measure), value});
            };

            std::vector<double> xs, ys;
            for (const auto& [id, v] : idx) {
                xs.push_back(v);
                ys.push_back(imp.at(id));
            }
            double rho = kNaN;
            try {
                rho = spearman(xs, ys);
            } catch (const InputError&) {
            }
            row("spearman", rho);

            double auc = kNaN;
            try {
                auc = roc_auc(idx, top_fraction_labels(imp, params.fraction)).auc;
            } catch (const InputError&) {
            }
            row("auc", auc);

            for (std::size_t k : params.ksim_k) {
                double value = kNaN;
                if (!idx.empty() && k > 0) value = ksim(top_k(idx, k), top_k(imp, k));
                row("ksim@" + std::to_string(k), value);
            }
        }
    }
    return rows;
}

NamedScores impact_metrics(const std::map<InstitutionId, InstitutionStats>& stats) {
    ScoreMap cit, alt;
    for (const auto& [id, s] : stats) {
        cit[id] = static_cast<double>(h_index(s.citation_list));
        alt[id] = static_cast<double>(h_index(s.altmetrics_list));
    }
    return {{"h_citation", std::move(cit)}, {"h_altmetrics", std::move(alt)}};
}

std::string evaluation_csv(const std::vector<EvalRow>& rows) {
    std::string out = "index,impact_metric,measure,value\n";
    for (const auto& r : rows)
        out += r.index + ',' + r.impact_metric + ',' + r.measure + ',' + format_number(r.value) + '\n';
    return out;
}

std::string evaluation_json(const std::vector<EvalRow>& rows) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["index"] = r.index;
        j["impact_metric"] = r.impact_metric;
        j["measure"] = r.measure;
        j["value"] = std::isnan(r.value) ? nlohmann::ordered_json() : nlohmann::ordered_json(rounded_number(r.value));
        doc.push_back(std::move(j));
    }
    return doc.dump(2) + '\n';
}

std::string distance_summary_csv(const std::vector<DistanceStats>& rows) {
    std::string out = "year,count,mean,min,q1,median,q3,max\n";
    for (const auto& r : rows)
        out += std::to_string(r.year) + ',' + std::to_string(r.count) + ',' + format_number(r.mean) + ',' +
               format_number(r.min) + ',' + format_number(r.q1) + ',' + format_number(r.median) + ',' +
               format_number(r.q3) + ',' + format_number(r.max) + '\n';
    return out;
}

std::string distance_summary_json(const std::vector<DistanceStats>& rows) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["year"] = r.year;
        j["count"] = r.count;
        j["mean"] = rounded_number(r.mean);
        j["min"] = rounded_number(r.min);
        j["q1"] = rounded_number(r.q1);
        j["median"] = rounded_number(r.median);
        j["q3"] = rounded_number(r.q3);
        j["max"] = rounded_number(r.max);
        doc.push_back(std::move(j));
    }
    return doc.dump(2) + '\n';
}

}  // namespace slr

#include "slr/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slr/error.hpp"
#include "slr/format.hpp"

namespace slr {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string summary_line(const Corpus& c) {
    const auto& r = c.validated.report;
    return "records=" + std::to_string(r.record_count) + " accepted=" + std::to_string(c.accepted().size()) +
           " dropped=" + std::to_string(r.dropped.size()) +
           " distinct_institutions=" + std::to_string(r.distinct_institutions) +
           " publication_parse_errors=" + std::to_string(c.publication_errors.size()) +
           " institution_parse_errors=" + std::to_string(c.institution_errors.size());
}

}  // namespace

Corpus load_corpus(std::string_view publications_text, std::string_view institutions_text) {
    Corpus c;
    auto inst = parse_institutions(institutions_text);
    c.institution_errors = std::move(inst.errors);
    c.institutions = InstitutionTable(std::move(inst.items));
    auto pubs = parse_publications(publications_text);
    c.records = std::move(pubs.items);
    c.publication_errors = std::move(pubs.errors);
    c.validated = validate_corpus(c.records, c.institutions);
    return c;
}

Corpus load_corpus_files(const std::filesystem::path& publications, const std::filesystem::path& institutions) {
    return load_corpus(read_file(publications), read_file(institutions));
}

Corpus filter_corpus(const Corpus& corpus, const RecordFilter& filter) {
    Corpus c;
    c.institutions = corpus.institutions;
    c.records = filter_records(corpus.records, filter);
    c.publication_errors = corpus.publication_errors;
    c.institution_errors = corpus.institution_errors;
    c.validated = validate_corpus(c.records, c.institutions);
    return c;
}

std::string validation_report_csv(const Corpus& c) {
    std::string out = "# " + summary_line(c) + '\n';
    out += "kind,ref,reason\n";
    for (const auto& d : c.validated.report.dropped) out += "dropped," + csv_field(d.record_id) + ',' + d.reason + '\n';
    for (const auto& e : c.publication_errors)
        out += "publication_parse_error,line " + std::to_string(e.line) + ',' + csv_field(e.message) + '\n';
    for (const auto& e : c.institution_errors)
        out += "institution_parse_error,line " + std::to_string(e.line) + ',' + csv_field(e.message) + '\n';
    return out;
}

std::string validation_report_json(const Corpus& c) {
    const auto& r = c.validated.report;
    nlohmann::ordered_json doc;
    doc["record_count"] = r.record_count;
    doc["accepted"] = c.accepted().size();
    doc["distinct_institutions"] = r.distinct_institutions;
    auto& dropped = doc["dropped"] = nlohmann::ordered_json::array();
    for (const auto& d : r.dropped) dropped.push_back({{"record_id", d.record_id}, {"reason", d.reason}});
    auto line_errors = [](const std::vector<LineError>& errors) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& e : errors) arr.push_back({{"line", e.line}, {"message", e.message}});
        return arr;
    };
    doc["publication_parse_errors"] = line_errors(c.publication_errors);
    doc["institution_parse_errors"] = line_errors(c.institution_errors);
    return doc.dump(2) + '\n';
}

RankingResult rank_metric(const Corpus& corpus, const BuiltNetwork& built, std::string_view metric,
                          const RankParams& params) {
    const WalkParams walk{params.tol, params.max_iter};
    if (metric == "spatialleaderrank") return spatial_leader_rank(built.network, walk);
    if (metric == "leaderrank") return leader_rank(built.network, walk);
    if (metric == "pagerank") return page_rank(built.network, {params.damping, params.tol, params.max_iter});
    if (metric == "indegree" || metric == "betweenness" || metric == "closeness")
        return centrality(built.network, metric);
    if (metric == "publication") return publication_ranking(institution_stats(corpus.accepted()));
    throw InputError("unknown metric '" + std::string(metric) + "'");
}

std::vector<EvalRow> evaluate_corpus(const Corpus& corpus, const BuiltNetwork& built, const RankParams& rank,
                                     const EvalParams& eval) {
    NamedScores indices;
    for (const auto& name : kMetricNames) indices.emplace_back(name, rank_metric(corpus, built, name, rank).scores);
    return evaluate_indices(indices, impact_metrics(institution_stats(corpus.accepted())), eval);
}

PowerLawReport powerlaw_report(const Corpus& corpus, std::optional<double> x_min) {
    PowerLawReport report;
    const auto samples = flow_distance_samples(corpus.accepted(), corpus.institutions);
    report.summary = distance_summary(samples);

    std::vector<double> all;
    std::map<std::int64_t, std::vector<double>> by_year;
    for (const auto& s : samples) {
        all.push_back(s.distance_km);
        by_year[s.year].push_back(s.distance_km);
    }
    report.x_min = x_min ? *x_min : default_x_min(all);
    try {
        report.overall = powerlaw_mle(all, report.x_min);
    } catch (const NumericalError& e) {
        report.overall_reason = e.what();
    }
    for (const auto& [year, values] : by_year) {
        YearPowerLaw y{year, std::nullopt, {}};
        try {
            y.fit = powerlaw_mle(values, report.x_min);
        } catch (const NumericalError& e) {
            y.reason = e.what();
        }
        report.yearly.push_back(std::move(y));
    }
    return report;
}

std::string powerlaw_report_text(const PowerLawReport& r) {
    std::string out;
    out += "x_min: " + format_number(r.x_min) + '\n';
    out += "alpha: " + (r.overall ? format_number(r.overall->alpha) : std::string("nan")) + '\n';
    out += "n_tail: " + (r.overall ? std::to_string(r.overall->n_tail) : std::string("0")) + '\n';
    if (!r.overall) out += "status: " + r.overall_reason + '\n';
    out += "year,alpha,n_tail,status\n";
    for (const auto& y : r.yearly)
        out += std::to_string(y.year) + ',' + (y.fit ? format_number(y.fit->alpha) : std::string("nan")) + ',' +
               (y.fit ? std::to_string(y.fit->n_tail) : std::string("0")) + ',' +
               csv_field(y.fit ? std::string("ok") : y.reason) + '\n';
    return out;
}

std::string powerlaw_report_json(const PowerLawReport& r) {
    nlohmann::ordered_json doc;
    doc["x_min"] = rounded_number(r.x_min);
    doc["alpha"] = r.overall ? nlohmann::ordered_json(rounded_number(r.overall->alpha)) : nlohmann::ordered_json();
    doc["n_tail"] = r.overall ? r.overall->n_tail : 0;
    doc["status"] = r.overall ? std::string("ok") : r.overall_reason;
    auto& yearly = doc["yearly"] = nlohmann::ordered_json::array();
    for (const auto& y : r.yearly) {
        nlohmann::ordered_json j;
        j["year"] = y.year;
        j["alpha"] = y.fit ? nlohmann::ordered_json(rounded_number(y.fit->alpha)) : nlohmann::ordered_json();
        j["n_tail"] = y.fit ? y.fit->n_tail : 0;
        j["status"] = y.fit ? std::string("ok") : y.reason;
        yearly.push_back(std::move(j));
    }
    return doc.dump(2) + '\n';
}

DensityGrid mass_density(const Corpus& corpus, const LeadershipMass& mass, double bandwidth_km,
                         const GridSpec& spec) {
    std::vector<WeightedPoint> points;
    for (const auto& [id, m] : mass) {
        if (m == 0.0) continue;
        const Institution& inst = corpus.institutions.at(id);
        points.push_back({{inst.lat, inst.lon}, m});
    }
    return kde_grid(points, bandwidth_km, spec);
}

}  // namespace slr

#include "slr/slr.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <string>

#include "slr/error.hpp"
#include "slr/gravity.hpp"
#include "slr/pipeline.hpp"

struct slr_corpus {
    slr::Corpus corpus;
};

struct slr_network {
    slr::BuiltNetwork built;
};

struct slr_gravity_fit {
    slr::GravityFit fit;
};

struct slr_ranking {
    slr::RankingResult result;
    std::vector<std::pair<std::string, double>> entries;
};

namespace {

thread_local std::string last_error;

slr_status fail(slr_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <typename Fn>
slr_status guarded(Fn&& fn) {
    try {
        fn();
        return SLR_OK;
    } catch (const slr::Error& e) {
        return fail(e.kind() == slr::ErrorKind::Numerical ? SLR_ERR_NUMERIC : SLR_ERR_INPUT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SLR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SLR_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SLR_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool bad_format(slr_format f) { return f != SLR_FORMAT_CSV && f != SLR_FORMAT_JSON; }

slr::RankParams rank_params(const slr_rank_params* p) {
    slr::RankParams out;
    if (p) {
        out.tol = p->tol;
        out.max_iter = p->max_iter;
        out.damping = p->damping;
    }
    return out;
}

#define SLR_REQUIRE(cond, what) \
    if (!(cond)) return fail(SLR_ERR_ARGUMENT, what)

}  // namespace

extern "C" {

const char* slr_version(void) { return "1.0.0"; }

const char* slr_last_error(void) { return last_error.c_str(); }

void slr_string_free(char* s) { std::free(s); }

void slr_rank_params_default(slr_rank_params* p) {
    if (!p) return;
    p->tol = 1e-10;
    p->max_iter = 10000;
    p->damping = 0.85;
}

void slr_eval_params_default(slr_eval_params* p) {
    if (!p) return;
    slr_rank_params_default(&p->rank);
    p->fraction = 0.05;
    p->ksim_k = nullptr;
    p->ksim_k_count = 0;
}

void slr_kde_params_default(slr_kde_params* p) {
    if (!p) return;
    const slr::GridSpec g;
    p->bandwidth_km = slr::kDefaultBandwidthKm;
    p->lat_min = g.lat_min;
    p->lat_max = g.lat_max;
    p->lon_min = g.lon_min;
    p->lon_max = g.lon_max;
    p->rows = static_cast<unsigned>(g.rows);
    p->cols = static_cast<unsigned>(g.cols);
}

const char* slr_metric_name(size_t i) {
    return i < slr::kMetricNames.size() ? slr::kMetricNames[i].c_str() : nullptr;
}

slr_status slr_corpus_open(const char* publications_path, const char* institutions_path, slr_corpus** out) {
    SLR_REQUIRE(publications_path && institutions_path && out, "null argument to slr_corpus_open");
    return guarded([&] { *out = new slr_corpus{slr::load_corpus_files(publications_path, institutions_path)}; });
}

slr_status slr_corpus_from_text(const char* publications_text, const char* institutions_text, slr_corpus** out) {
    SLR_REQUIRE(publications_text && institutions_text && out, "null argument to slr_corpus_from_text");
    return guarded([&] { *out = new slr_corpus{slr::load_corpus(publications_text, institutions_text)}; });
}

slr_status slr_corpus_filter(const slr_corpus* corpus, int has_years, long year_min, long year_max,
                             const char* field, slr_corpus** out) {
    SLR_REQUIRE(corpus && out, "null argument to slr_corpus_filter");
    SLR_REQUIRE(!has_years || year_min <= year_max, "year window must satisfy year_min <= year_max");
    return guarded([&] {
        slr::RecordFilter filter;
        if (has_years) filter.years = std::pair<std::int64_t, std::int64_t>{year_min, year_max};
        if (field) filter.field = field;
        *out = new slr_corpus{slr::filter_corpus(corpus->corpus, filter)};
    });
}

void slr_corpus_free(slr_corpus* corpus) { delete corpus; }

size_t slr_corpus_record_count(const slr_corpus* corpus) { return corpus ? corpus->corpus.records.size() : 0; }

size_t slr_corpus_accepted_count(const slr_corpus* corpus) { return corpus ? corpus->corpus.accepted().size() : 0; }

size_t slr_corpus_dropped_count(const slr_corpus* corpus) {
    return corpus ? corpus->corpus.validated.report.dropped.size() : 0;
}

size_t slr_corpus_parse_error_count(const slr_corpus* corpus) {
    return corpus ? corpus->corpus.publication_errors.size() + corpus->corpus.institution_errors.size() : 0;
}

size_t slr_corpus_years(const slr_corpus* corpus, long* years, size_t capacity) {
    if (!corpus) return 0;
    std::set<long> distinct;
    for (const auto& r : corpus->corpus.accepted()) distinct.insert(static_cast<long>(r.year));
    size_t i = 0;
    for (long y : distinct) {
        if (years && i < capacity) years[i] = y;
        ++i;
    }
    return distinct.size();
}

slr_status slr_corpus_report(const slr_corpus* corpus, slr_format format, char** out) {
    SLR_REQUIRE(corpus && out && !bad_format(format), "invalid argument to slr_corpus_report");
    return guarded([&] {
        *out = dup_string(format == SLR_FORMAT_JSON ? slr::validation_report_json(corpus->corpus)
                                                    : slr::validation_report_csv(corpus->corpus));
    });
}

slr_status slr_gravity_fit_corpus(const slr_corpus* corpus, int log_response, slr_gravity_fit** out) {
    SLR_REQUIRE(corpus && out, "null argument to slr_gravity_fit_corpus");
    return guarded([&] {
        slr::GravityOptions options;
        options.log_response = log_response != 0;
        auto samples = slr::build_gravity_samples(corpus->corpus.accepted(), corpus->corpus.institutions);
        *out = new slr_gravity_fit{slr::ols_fit(samples, options)};
    });
}

void slr_gravity_fit_free(slr_gravity_fit* fit) { delete fit; }

slr_status slr_gravity_lambda(const slr_gravity_fit* fit, double* lambda) {
    SLR_REQUIRE(fit && lambda, "null argument to slr_gravity_lambda");
    return guarded([&] { *lambda = slr::estimate_lambda(fit->fit); });
}

slr_status slr_gravity_report(const slr_gravity_fit* fit, slr_format format, char** out) {
    SLR_REQUIRE(fit && out && !bad_format(format), "invalid argument to slr_gravity_report");
    return guarded([&] {
        *out = dup_string(format == SLR_FORMAT_JSON ? slr::gravity_report_json(fit->fit)
                                                    : slr::gravity_report_text(fit->fit));
    });
}

slr_status slr_lambda_series(const slr_corpus* corpus, const long* years, size_t count, int log_response,
                             slr_format format, char** out) {
    SLR_REQUIRE(corpus && out && !bad_format(format), "invalid argument to slr_lambda_series");
    return guarded([&] {
        std::vector<std::int64_t> ys;
        if (years) {
            ys.assign(years, years + count);
        } else {
            std::set<std::int64_t> distinct;
            for (const auto& r : corpus->corpus.accepted()) distinct.insert(r.year);
            ys.assign(distinct.begin(), distinct.end());
        }
        slr::GravityOptions options;
        options.log_response = log_response != 0;
        auto series = slr::lambda_by_year(corpus->corpus.accepted(), corpus->corpus.institutions, ys, options);
        *out = dup_string(format == SLR_FORMAT_JSON ? slr::lambda_series_json(series)
                                                    : slr::lambda_series_csv(series));
    });
}

slr_status slr_network_build(const slr_corpus* corpus, double lambda, slr_network** out) {
    SLR_REQUIRE(corpus && out, "null argument to slr_network_build");
    return guarded([&] {
        *out = new slr_network{slr::build_network(corpus->corpus.accepted(), corpus->corpus.institutions, lambda)};
    });
}

void slr_network_free(slr_network* network) { delete network; }

size_t slr_network_node_count(const slr_network* network) {
    return network ? network->built.network.nodes.size() : 0;
}

size_t slr_network_edge_count(const slr_network* network) {
    return network ? network->built.network.edges.size() : 0;
}

double slr_network_lambda(const slr_network* network) { return network ? network->built.network.lambda_used : 0.0; }

slr_status slr_network_export(const slr_network* network, slr_format format, char** out) {
    SLR_REQUIRE(network && out && !bad_format(format), "invalid argument to slr_network_export");
    return guarded([&] {
        *out = dup_string(format == SLR_FORMAT_JSON ? slr::serialize_network_json(network->built.network)
                                                    : slr::serialize_network_csv(network->built.network));
    });
}

slr_status slr_network_mass_export(const slr_network* network, slr_format format, char** out) {
    SLR_REQUIRE(network && out && !bad_format(format), "invalid argument to slr_network_mass_export");
    return guarded([&] {
        *out = dup_string(format == SLR_FORMAT_JSON ? slr::serialize_mass_json(network->built.mass)
                                                    : slr::serialize_mass_csv(network->built.mass));
    });
}

slr_status slr_rank(const slr_corpus* corpus, const slr_network* network, const char* metric,
                    const slr_rank_params* params, slr_ranking** out) {
    SLR_REQUIRE(corpus && network && metric && out, "null argument to slr_rank");
    return guarded([&] {
        auto* r = new slr_ranking{
            slr::rank_metric(corpus->corpus, network->built, metric, rank_params(params)), {}};
        r->entries = slr::ranked_entries(r->result);
        *out = r;
    });
}

void slr_ranking_free(slr_ranking* ranking) { delete ranking; }

size_t slr_ranking_size(const slr_ranking* ranking) { return ranking ? ranking->entries.size() : 0; }

int slr_ranking_converged(const slr_ranking* ranking) { return ranking && ranking->result.converged ? 1 : 0; }

slr_status slr_ranking_entry(const slr_ranking* ranking, size_t i, const char** id, double* score) {
    SLR_REQUIRE(ranking && id && score, "null argument to slr_ranking_entry");
    SLR_REQUIRE(i < ranking->entries.size(), "ranking index out of range");
    *id = ranking->entries[i].first.c_str();
    *score = ranking->entries[i].second;
    return SLR_OK;
}

slr_status slr_ranking_export(const slr_ranking* ranking, slr_format format, char** out) {
    SLR_REQUIRE(ranking && out && !bad_format(format), "invalid argument to slr_ranking_export");
    return guarded([&] {
        *out = dup_string(format == SLR_FORMAT_JSON ? slr::ranking_json(ranking->result)
                                                    : slr::ranking_csv(ranking->result));
    });
}

slr_status slr_evaluate(const slr_corpus* corpus, const slr_network* network, const slr_eval_params* params,
                        slr_format format, char** out) {
    SLR_REQUIRE(corpus && network && out && !bad_format(format), "invalid argument to slr_evaluate");
    return guarded([&] {
        slr::EvalParams eval;
        slr::RankParams rank;
        if (params) {
            rank = rank_params(&params->rank);
            eval.fraction = params->fraction;
            if (params->ksim_k) eval.ksim_k.assign(params->ksim_k, params->ksim_k + params->ksim_k_count);
        }
        if (!(eval.fraction > 0.0 && eval.fraction < 1.0)) throw slr::InputError("fraction must lie in (0, 1)");
        auto rows = slr::evaluate_corpus(corpus->corpus, network->built, rank, eval);
        *out = dup_string(format == SLR_FORMAT_JSON ? slr::evaluation_json(rows) : slr::evaluation_csv(rows));
    });
}

slr_status slr_powerlaw(const slr_corpus* corpus, double x_min, slr_format format, char** fit_report,
                        char** distance_summary) {
    SLR_REQUIRE(corpus && fit_report && distance_summary && !bad_format(format), "invalid argument to slr_powerlaw");
    return guarded([&] {
        auto report = slr::powerlaw_report(corpus->corpus, x_min > 0.0 ? std::optional<double>(x_min) : std::nullopt);
        const bool json = format == SLR_FORMAT_JSON;
        std::string fit = json ? slr::powerlaw_report_json(report) : slr::powerlaw_report_text(report);
        std::string summary =
            json ? slr::distance_summary_json(report.summary) : slr::distance_summary_csv(report.summary);
        char* a = dup_string(fit);
        try {
            *distance_summary = dup_string(summary);
        } catch (...) {
            std::free(a);
            throw;
        }
        *fit_report = a;
    });
}

slr_status slr_kde(const slr_corpus* corpus, const slr_network* network, const slr_kde_params* params, char** out) {
    SLR_REQUIRE(corpus && network && out, "null argument to slr_kde");
    return guarded([&] {
        slr_kde_params p;
        slr_kde_params_default(&p);
        if (params) p = *params;
        const slr::GridSpec spec{p.lat_min, p.lat_max, p.lon_min, p.lon_max, p.rows, p.cols};
        *out = dup_string(
            slr::serialize_grid(slr::mass_density(corpus->corpus, network->built.mass, p.bandwidth_km, spec)));
    });
}

}  // extern "C"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "slr/slr.h"

namespace {

const char* kPubs =
    "{\"id\":\"pub1\",\"year\":2015,\"field\":\"pharma\",\"citations\":12,\"altmetrics\":30,"
    "\"affiliations\":[[\"a\",true],[\"b\",false],[\"c\",false],[\"d\",false]]}\n"
    "{\"id\":\"pub2\",\"year\":2016,\"field\":\"pharma\",\"citations\":5,\"altmetrics\":8,"
    "\"affiliations\":[[\"c\",true],[\"a\",false],[\"d\",false],[\"b\",false]]}\n"
    "{\"id\":\"pub3\",\"year\":2016,\"field\":\"pharma\",\"citations\":2,\"altmetrics\":4,"
    "\"affiliations\":[[\"a\",true],[\"c\",false]]}\n";

const char* kInst =
    "id,name,lat,lon,country\n"
    "a,Wuhan,30.5434,114.3408,CN\n"
    "b,Hong Kong,22.3364,114.2654,HK\n"
    "c,Amsterdam,52.3560,4.9553,NL\n"
    "d,Cambridge MA,42.3601,-71.0942,US\n";

std::string take(char* s) {
    std::string out = s ? s : "";
    slr_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("corpus, network and ranking round trip through the C interface") {
    slr_corpus* corpus = nullptr;
    REQUIRE(slr_corpus_from_text(kPubs, kInst, &corpus) == SLR_OK);
    CHECK(slr_corpus_record_count(corpus) == 3);
    CHECK(slr_corpus_accepted_count(corpus) == 3);
    CHECK(slr_corpus_dropped_count(corpus) == 0);
    long years[4] = {0, 0, 0, 0};
    CHECK(slr_corpus_years(corpus, years, 4) == 2);
    CHECK(years[0] == 2015);
    CHECK(years[1] == 2016);

    slr_network* net = nullptr;
    REQUIRE(slr_network_build(corpus, 1.32, &net) == SLR_OK);
    CHECK(slr_network_node_count(net) == 4);
    CHECK(slr_network_edge_count(net) == 6);
    CHECK(slr_network_lambda(net) == 1.32);

    char* text = nullptr;
    REQUIRE(slr_network_mass_export(net, SLR_FORMAT_CSV, &text) == SLR_OK);
    CHECK(take(text) == "institution_id,leadership_mass\na,1.25\nb,0\nc,0.75\nd,0\n");

    slr_rank_params params;
    slr_rank_params_default(&params);
    CHECK(params.tol == 1e-10);
    CHECK(params.max_iter == 10000);
    slr_ranking* ranking = nullptr;
    REQUIRE(slr_rank(corpus, net, "spatialleaderrank", &params, &ranking) == SLR_OK);
    CHECK(slr_ranking_size(ranking) == 4);
    CHECK(slr_ranking_converged(ranking) == 1);
    const char* id = nullptr;
    double score = 0.0;
    REQUIRE(slr_ranking_entry(ranking, 0, &id, &score) == SLR_OK);
    CHECK(std::string(id) == "a");
    CHECK(slr_ranking_entry(ranking, 4, &id, &score) == SLR_ERR_ARGUMENT);
    REQUIRE(slr_ranking_export(ranking, SLR_FORMAT_JSON, &text) == SLR_OK);
    CHECK(take(text).find("\"spatialleaderrank\"") != std::string::npos);
    slr_ranking_free(ranking);

    CHECK(slr_rank(corpus, net, "bogus", &params, &ranking) == SLR_ERR_INPUT);
    CHECK(std::string(slr_last_error()).find("bogus") != std::string::npos);

    slr_eval_params eval;
    slr_eval_params_default(&eval);
    CHECK(eval.fraction == 0.05);
    REQUIRE(slr_evaluate(corpus, net, &eval, SLR_FORMAT_CSV, &text) == SLR_OK);
    CHECK(take(text).rfind("index,impact_metric,measure,value\n", 0) == 0);

    char* fit = nullptr;
    char* summary = nullptr;
    REQUIRE(slr_powerlaw(corpus, 0.0, SLR_FORMAT_CSV, &fit, &summary) == SLR_OK);
    take(fit);
    CHECK(take(summary).rfind("year,count,", 0) == 0);

    slr_kde_params kde;
    slr_kde_params_default(&kde);
    kde.rows = 18;
    kde.cols = 36;
    REQUIRE(slr_kde(corpus, net, &kde, &text) == SLR_OK);
    CHECK(!take(text).empty());

    slr_network_free(net);
    slr_corpus_free(corpus);
}

TEST_CASE("errors map to status codes") {
    slr_corpus* corpus = nullptr;
    CHECK(slr_corpus_open("/nonexistent/p.jsonl", "/nonexistent/i.csv", &corpus) == SLR_ERR_INPUT);
    CHECK(corpus == nullptr);
    CHECK(std::string(slr_last_error()).find("cannot read '/nonexistent/") == 0);
    CHECK(slr_corpus_from_text(nullptr, kInst, &corpus) == SLR_ERR_ARGUMENT);

    REQUIRE(slr_corpus_from_text(kPubs, kInst, &corpus) == SLR_OK);
    slr_network* net = nullptr;
    CHECK(slr_network_build(corpus, -1.0, &net) == SLR_ERR_INPUT);

    // Six pairs over four institutions cannot separate the country effect from the intercept.
    slr_gravity_fit* fit = nullptr;
    CHECK(slr_gravity_fit_corpus(corpus, 0, &fit) == SLR_ERR_NUMERIC);
    CHECK(fit == nullptr);
    CHECK(std::string(slr_last_error()).find("rank-deficient") == 0);

    long years[3] = {2015, 2016, 2017};
    char* text = nullptr;
    REQUIRE(slr_lambda_series(corpus, years, 3, 0, SLR_FORMAT_CSV, &text) == SLR_OK);
    const std::string series = take(text);
    CHECK(series.rfind("year,lambda,status\n2015,,", 0) == 0);
    CHECK(series.find("\n2016,,") != std::string::npos);
    CHECK(series.find("\n2017,,too few samples\n") != std::string::npos);

    slr_corpus_free(corpus);
    slr_corpus_free(nullptr);
    CHECK(std::string(slr_version()).size() > 0);
    CHECK(std::string(slr_metric_name(0)) == "spatialleaderrank");
    CHECK(slr_metric_name(100) == nullptr);
}

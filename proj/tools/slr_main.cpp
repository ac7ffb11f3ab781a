// slr: command-line front end over the C API in slr/slr.h.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slr/slr.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumeric = 2;

struct CorpusDeleter {
    void operator()(slr_corpus* p) const { slr_corpus_free(p); }
};
struct NetworkDeleter {
    void operator()(slr_network* p) const { slr_network_free(p); }
};
struct FitDeleter {
    void operator()(slr_gravity_fit* p) const { slr_gravity_fit_free(p); }
};
struct RankingDeleter {
    void operator()(slr_ranking* p) const { slr_ranking_free(p); }
};
struct StringDeleter {
    void operator()(char* p) const { slr_string_free(p); }
};

using CorpusPtr = std::unique_ptr<slr_corpus, CorpusDeleter>;
using NetworkPtr = std::unique_ptr<slr_network, NetworkDeleter>;
using FitPtr = std::unique_ptr<slr_gravity_fit, FitDeleter>;
using RankingPtr = std::unique_ptr<slr_ranking, RankingDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

// Carries an exit status up to main.
struct CommandFailure {
    int status;
};

[[noreturn]] void fail_status(slr_status status, const std::string& context) {
    std::cerr << "slr: " << context << ": " << slr_last_error() << '\n';
    throw CommandFailure{status == SLR_ERR_NUMERIC ? kExitNumeric : kExitInput};
}

void check(slr_status status, const std::string& context) {
    if (status != SLR_OK) fail_status(status, context);
}

[[noreturn]] void fail_input(const std::string& message) {
    std::cerr << "slr: " << message << '\n';
    throw CommandFailure{kExitInput};
}

struct Config {
    std::string pubs;
    std::string inst;
    std::string out = ".";
    std::string lambda;
    std::string years;
    std::string field;
    std::string format = "csv";
    double tol = 1e-10;
    unsigned max_iter = 10000;
    double damping = 0.85;
    double fraction = 0.05;
    std::vector<unsigned> ksim_k;
    double bandwidth_km = 100.0;
    std::string bounds;
    unsigned rows = 180;
    unsigned cols = 360;
    double x_min = 0.0;
    bool by_year = false;
    bool log_response = false;
    std::string metric;
};

slr_format output_format(const Config& cfg) { return cfg.format == "json" ? SLR_FORMAT_JSON : SLR_FORMAT_CSV; }

std::string extension(const Config& cfg, const char* csv_ext = ".csv") {
    return cfg.format == "json" ? ".json" : csv_ext;
}

void write_output(const Config& cfg, const std::string& name, const char* content) {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    const fs::path path = fs::path(cfg.out) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail_input("cannot write '" + path.string() + "'");
    f << content;
    f.close();
    if (!f) fail_input("cannot write '" + path.string() + "'");
    std::cout << "wrote " << path.string() << '\n';
}

CorpusPtr load_corpus(const Config& cfg) {
    if (cfg.pubs.empty() || cfg.inst.empty()) fail_input("--pubs and --inst are required");
    slr_corpus* raw = nullptr;
    check(slr_corpus_open(cfg.pubs.c_str(), cfg.inst.c_str(), &raw), "loading corpus");
    CorpusPtr corpus(raw);

    const bool has_years = !cfg.years.empty();
    long lo = 0, hi = 0;
    if (has_years) {
        const auto colon = cfg.years.find(':');
        try {
            if (colon == std::string::npos) throw std::invalid_argument("no colon");
            std::size_t used = 0;
            lo = std::stol(cfg.years.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument("trailing");
            const std::string rest = cfg.years.substr(colon + 1);
            hi = std::stol(rest, &used);
            if (used != rest.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            fail_input("--years expects A:B, got '" + cfg.years + "'");
        }
    }
    if (has_years || !cfg.field.empty()) {
        slr_corpus* filtered = nullptr;
        check(slr_corpus_filter(corpus.get(), has_years ? 1 : 0, lo, hi, cfg.field.empty() ? nullptr : cfg.field.c_str(),
                                &filtered),
              "filtering corpus");
        corpus.reset(filtered);
    }
    if (slr_corpus_parse_error_count(corpus.get()) > 0)
        std::cerr << "slr: warning: " << slr_corpus_parse_error_count(corpus.get())
                  << " malformed input lines skipped (see `slr validate`)\n";
    return corpus;
}

double estimate_lambda(const Config& cfg, const slr_corpus* corpus) {
    slr_gravity_fit* raw = nullptr;
    check(slr_gravity_fit_corpus(corpus, cfg.log_response ? 1 : 0, &raw), "gravity fit");
    FitPtr fit(raw);
    double lambda = 0.0;
    check(slr_gravity_lambda(fit.get(), &lambda), "estimating lambda");
    return lambda;
}

// Explicit value, "estimate", or (when optional) zero for collaboration-only work.
double resolve_lambda(const Config& cfg, const slr_corpus* corpus, bool required) {
    if (cfg.lambda.empty()) {
        if (required) fail_input("the spatial network needs --lambda <value> or --lambda estimate");
        return 0.0;
    }
    double lambda = 0.0;
    if (cfg.lambda == "estimate") {
        lambda = estimate_lambda(cfg, corpus);
        if (!(lambda >= 0.0)) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", lambda);
            std::cerr << "slr: estimated lambda " << buf << " is negative; cannot weight the network\n";
            throw CommandFailure{kExitNumeric};
        }
    } else {
        char* end = nullptr;
        lambda = std::strtod(cfg.lambda.c_str(), &end);
        if (end == cfg.lambda.c_str() || *end != '\0') fail_input("--lambda expects a number or 'estimate'");
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", lambda);
    std::cout << "lambda_used=" << buf << '\n';
    return lambda;
}

NetworkPtr build_network(const slr_corpus* corpus, double lambda) {
    slr_network* raw = nullptr;
    check(slr_network_build(corpus, lambda, &raw), "building network");
    return NetworkPtr(raw);
}

slr_rank_params rank_params(const Config& cfg) {
    slr_rank_params p;
    slr_rank_params_default(&p);
    p.tol = cfg.tol;
    p.max_iter = cfg.max_iter;
    p.damping = cfg.damping;
    return p;
}

void run_validate(const Config& cfg) {
    auto corpus = load_corpus(cfg);
    char* raw = nullptr;
    check(slr_corpus_report(corpus.get(), output_format(cfg), &raw), "validation report");
    OwnedString report(raw);
    write_output(cfg, "validation" + extension(cfg), report.get());
    std::cout << "records=" << slr_corpus_record_count(corpus.get())
              << " accepted=" << slr_corpus_accepted_count(corpus.get())
              << " dropped=" << slr_corpus_dropped_count(corpus.get())
              << " parse_errors=" << slr_corpus_parse_error_count(corpus.get()) << '\n';
}

void run_lambda(const Config& cfg) {
    auto corpus = load_corpus(cfg);
    char* raw = nullptr;
    if (cfg.by_year) {
        check(slr_lambda_series(corpus.get(), nullptr, 0, cfg.log_response ? 1 : 0, output_format(cfg), &raw),
              "lambda series");
        OwnedString series(raw);
        write_output(cfg, "lambda_by_year" + extension(cfg), series.get());
        return;
    }
    slr_gravity_fit* fit_raw = nullptr;
    check(slr_gravity_fit_corpus(corpus.get(), cfg.log_response ? 1 : 0, &fit_raw), "gravity fit");
    FitPtr fit(fit_raw);
    check(slr_gravity_report(fit.get(), output_format(cfg), &raw), "gravity report");
    OwnedString report(raw);
    write_output(cfg, "gravity_fit" + extension(cfg, ".txt"), report.get());
    double lambda = 0.0;
    check(slr_gravity_lambda(fit.get(), &lambda), "estimating lambda");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", lambda);
    std::cout << "lambda=" << buf << '\n';
}

void run_build(const Config& cfg) {
    auto corpus = load_corpus(cfg);
    auto network = build_network(corpus.get(), resolve_lambda(cfg, corpus.get(), true));
    char* raw = nullptr;
    check(slr_network_export(network.get(), output_format(cfg), &raw), "network export");
    OwnedString edges(raw);
    write_output(cfg, "network" + extension(cfg), edges.get());
    check(slr_network_mass_export(network.get(), output_format(cfg), &raw), "leadership mass export");
    OwnedString mass(raw);
    write_output(cfg, "leadership_mass" + extension(cfg), mass.get());
    std::cout << "nodes=" << slr_network_node_count(network.get())
              << " edges=" << slr_network_edge_count(network.get()) << '\n';
}

void run_rank(const Config& cfg) {
    auto corpus = load_corpus(cfg);
    const bool spatial = cfg.metric == "spatialleaderrank";
    auto network = build_network(corpus.get(), resolve_lambda(cfg, corpus.get(), spatial));
    const auto params = rank_params(cfg);
    slr_ranking* raw = nullptr;
    check(slr_rank(corpus.get(), network.get(), cfg.metric.c_str(), &params, &raw), "ranking");
    RankingPtr ranking(raw);
    char* text = nullptr;
    check(slr_ranking_export(ranking.get(), output_format(cfg), &text), "ranking export");
    OwnedString out(text);
    write_output(cfg, "ranking_" + cfg.metric + extension(cfg), out.get());
    if (!slr_ranking_converged(ranking.get()))
        std::cerr << "slr: warning: " << cfg.metric << " did not converge within " << cfg.max_iter << " iterations\n";
}

void run_eval(const Config& cfg) {
    auto corpus = load_corpus(cfg);
    auto network = build_network(corpus.get(), resolve_lambda(cfg, corpus.get(), true));
    slr_eval_params params;
    slr_eval_params_default(&params);
    params.rank = rank_params(cfg);
    params.fraction = cfg.fraction;
    if (!cfg.ksim_k.empty()) {
        params.ksim_k = cfg.ksim_k.data();
        params.ksim_k_count = cfg.ksim_k.size();
    }
    char* raw = nullptr;
    check(slr_evaluate(corpus.get(), network.get(), &params, output_format(cfg), &raw), "evaluation");
    OwnedString report(raw);
    write_output(cfg, "evaluation" + extension(cfg), report.get());
}

void run_powerlaw(const Config& cfg) {
    auto corpus = load_corpus(cfg);
    char* fit = nullptr;
    char* summary = nullptr;
    check(slr_powerlaw(corpus.get(), cfg.x_min, output_format(cfg), &fit, &summary), "power-law fit");
    OwnedString fit_text(fit), summary_text(summary);
    write_output(cfg, "powerlaw" + extension(cfg, ".txt"), fit_text.get());
    write_output(cfg, "distance_summary" + extension(cfg), summary_text.get());
}

void run_kde(const Config& cfg) {
    auto corpus = load_corpus(cfg);
    auto network = build_network(corpus.get(), resolve_lambda(cfg, corpus.get(), false));
    slr_kde_params params;
    slr_kde_params_default(&params);
    params.bandwidth_km = cfg.bandwidth_km;
    params.rows = cfg.rows;
    params.cols = cfg.cols;
    if (!cfg.bounds.empty()) {
        double v[4];
        char tail = 0;
        if (std::sscanf(cfg.bounds.c_str(), "%lf:%lf:%lf:%lf%c", &v[0], &v[1], &v[2], &v[3], &tail) != 4)
            fail_input("--bounds expects LAT_MIN:LAT_MAX:LON_MIN:LON_MAX");
        params.lat_min = v[0];
        params.lat_max = v[1];
        params.lon_min = v[2];
        params.lon_max = v[3];
    }
    char* raw = nullptr;
    check(slr_kde(corpus.get(), network.get(), &params, &raw), "density grid");
    OwnedString grid(raw);
    write_output(cfg, "kde_grid.csv", grid.get());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial research-leadership networks and SpatialLeaderRank"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;

    app.add_option("--pubs", cfg.pubs, "Publications file (one JSON object per line)");
    app.add_option("--inst", cfg.inst, "Institutions CSV (id,name,lat,lon,country)");
    app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
    app.add_option("--lambda", cfg.lambda, "Cross-border weight: a number or 'estimate'");
    app.add_option("--years", cfg.years, "Inclusive year window A:B");
    app.add_option("--field", cfg.field, "Keep only records of this field");
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--tol", cfg.tol, "Convergence threshold (L1)")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--max-iter", cfg.max_iter, "Iteration cap")->check(CLI::Range(1u, 100000000u))->capture_default_str();
    app.add_option("--damping", cfg.damping, "PageRank damping")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app.add_option("--fraction", cfg.fraction, "Top fraction labelled high-impact")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--bandwidth-km", cfg.bandwidth_km, "KDE bandwidth in km")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--log-response", cfg.log_response, "Regress log10 intensity in the gravity model");

    std::vector<std::string> metrics;
    for (std::size_t i = 0; slr_metric_name(i); ++i) metrics.emplace_back(slr_metric_name(i));

    app.add_subcommand("validate", "Parse and validate the corpus");
    auto* lambda_cmd = app.add_subcommand("lambda", "Fit the gravity model and report lambda");
    lambda_cmd->add_flag("--by-year", cfg.by_year, "One fit per calendar year");
    app.add_subcommand("build", "Build the leadership network and leadership mass");
    auto* rank_cmd = app.add_subcommand("rank", "Rank institutions by one metric");
    rank_cmd->add_option("--metric", cfg.metric, "Ranking metric")->required()->check(CLI::IsMember(metrics));
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate every metric against h-indices");
    eval_cmd->add_option("--ksim-k", cfg.ksim_k, "Cutoffs for KSim (default 5 10 20 50 100 200 500)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    auto* powerlaw_cmd = app.add_subcommand("powerlaw", "Power-law fit and yearly summaries of flow distances");
    powerlaw_cmd->add_option("--x-min", cfg.x_min, "Lower cutoff in km (default: smallest positive distance)")
        ->check(CLI::PositiveNumber);
    auto* kde_cmd = app.add_subcommand("kde", "Density grid of leadership mass");
    kde_cmd->add_option("--bounds", cfg.bounds, "LAT_MIN:LAT_MAX:LON_MIN:LON_MAX");
    kde_cmd->add_option("--rows", cfg.rows, "Grid rows")->check(CLI::PositiveNumber)->capture_default_str();
    kde_cmd->add_option("--cols", cfg.cols, "Grid columns")->check(CLI::PositiveNumber)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "slr: " << e.what() << "\n\n" << app.help();
        return kExitInput;
    }
    if (!(cfg.damping > 0.0 && cfg.damping < 1.0) || !(cfg.fraction > 0.0 && cfg.fraction < 1.0)) {
        std::cerr << "slr: --damping and --fraction must lie strictly between 0 and 1\n\n" << app.help();
        return kExitInput;
    }

    try {
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "validate") run_validate(cfg);
        else if (cmd == "lambda") run_lambda(cfg);
        else if (cmd == "build") run_build(cfg);
        else if (cmd == "rank") run_rank(cfg);
        else if (cmd == "eval") run_eval(cfg);
        else if (cmd == "powerlaw") run_powerlaw(cfg);
        else if (cmd == "kde") run_kde(cfg);
    } catch (const CommandFailure& f) {
        return f.status;
    }
    return kExitOk;
}

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "slr/evaluate.hpp"
#include "slr/geo.hpp"
#include "slr/gravity.hpp"
#include "slr/leadership.hpp"
#include "slr/ranking.hpp"

using namespace slr;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
    if (!ok && o.pass) {
        o.pass = false;
        o.detail = what;
    }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome flow_oracle() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto records = test::toy_records();
    const auto table = test::toy_institutions();
    std::size_t emitted = 0;
    for (const auto& r : records) emitted += collab_flows(extract_roles(r)).size();
    const auto built = build_network(records, table, 1.32);
    require(o, built.mass.at("a") == 1.25, "in-flow of a is not 1.25");
    require(o, built.mass.at("c") == 0.75, "in-flow of c is not 0.75");
    require(o, built.mass.at("b") == 0.0 && built.mass.at("d") == 0.0, "b or d receives flow");
    require(o, emitted == 7, "emitted edge count " + std::to_string(emitted) + " != 7");
    const double secs = seconds_since(t0);
    require(o, secs < 1.0, "runtime " + std::to_string(secs) + " s");
    if (o.pass) o.detail = "a=1.25 c=0.75 edges=7";
    return o;
}

Outcome per_paper_mass() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> lat(-70, 70), lon(-180, 180);
    std::vector<Institution> rows;
    const char* countries[] = {"CN", "US", "DE", "BR", "ZA"};
    for (int i = 0; i < 40; ++i)
        rows.push_back({"i" + std::to_string(i), "x", lat(rng), lon(rng), countries[i % 5]});
    const InstitutionTable table(rows);
    std::uniform_int_distribution<int> n_inst(2, 12), n_lead(1, 4);
    std::uniform_real_distribution<double> lam(0.0, 4.0);
    double worst = 0.0;
    for (int p = 0; p < 1000; ++p) {
        std::vector<int> ids(40);
        for (int i = 0; i < 40; ++i) ids[static_cast<std::size_t>(i)] = i;
        std::shuffle(ids.begin(), ids.end(), rng);
        const int n = n_inst(rng);
        const int l = std::min(n, n_lead(rng));
        std::vector<std::pair<std::string, bool>> affs;
        for (int k = 0; k < n; ++k) affs.emplace_back("i" + std::to_string(ids[static_cast<std::size_t>(k)]), k < l);
        std::shuffle(affs.begin(), affs.end(), rng);
        const auto roles = extract_roles(test::make_record("p" + std::to_string(p), affs));
        const double ni = static_cast<double>(roles.institution_count());
        const double li = static_cast<double>(roles.leader_count());
        double collab = 0.0, spatial = 0.0;
        for (const auto& e : collab_flows(roles)) collab += e.weight;
        const double sps = paper_spatial_score(roles, table, lam(rng));
        for (const auto& e : spatial_flows(roles, sps)) spatial += e.weight;
        worst = std::max(worst, std::abs(collab - (ni - 1.0) / ni));
        worst = std::max(worst, std::abs(spatial - sps * static_cast<double>(roles.pair_count()) / (li * ni)));
    }
    require(o, worst < 1e-12, "max deviation " + std::to_string(worst));
    std::ostringstream d;
    d << "1000 papers, max deviation " << worst;
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome stationary_oracle() {
    Outcome o;
    std::mt19937_64 rng(77);
    std::vector<std::vector<std::vector<double>>> suite;
    // Every weighted digraph on one and two nodes.
    suite.push_back({{0.0}});
    for (int ab = 0; ab <= 3; ++ab)
        for (int ba = 0; ba <= 3; ++ba) suite.push_back({{0.0, double(ab)}, {double(ba), 0.0}});
    std::uniform_int_distribution<int> weight(0, 3), size(3, 5);
    while (suite.size() < 200) {
        const auto n = static_cast<std::size_t>(size(rng));
        std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t d = 0; d < n; ++d)
                if (s != d) w[s][d] = weight(rng);
        suite.push_back(std::move(w));
    }
    double worst_score = 0.0, worst_mass = 0.0;
    for (const auto& w : suite) {
        const std::size_t n = w.size();
        LeadershipNetwork net;
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i));
        net.nodes.insert(ids.begin(), ids.end());
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t d = 0; d < n; ++d)
                if (w[s][d] > 0.0) net.edges[{ids[s], ids[d]}] = {w[s][d], w[s][d]};
        const auto r = stationary_scores(augment_ground(net, WeightKind::Collab), {},
                                         [&](std::size_t, std::span<const double> s) {
                                             double sum = 0.0;
                                             for (double v : s) sum += v;
                                             worst_mass = std::max(worst_mass, std::abs(sum - double(n + 1)));
                                         });
        require(o, r.converged, "walk did not converge");
        const auto expected = oracle::dense_ground_walk(w);
        for (std::size_t i = 0; i < n; ++i)
            worst_score = std::max(worst_score, std::abs(r.scores.at(ids[i]) - expected[i]));
    }
    require(o, worst_score < 1e-8, "max score deviation " + std::to_string(worst_score));
    require(o, worst_mass < 1e-9, "max conservation error " + std::to_string(worst_mass));
    std::ostringstream d;
    d << suite.size() << " digraphs, max score deviation " << worst_score << ", max mass error " << worst_mass;
    if (o.pass) o.detail = d.str();
    return o;
}

// Third vertex of an equilateral triangle with base (0,0)-(0,base_lon): on the
// perpendicular bisector, at the latitude where both sides match the base.
std::vector<Institution> equilateral_triangle(const std::string& prefix, double side_km, double lon0) {
    auto solve = [](const std::function<double(double)>& f, double lo, double hi) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double dlon =
        solve([&](double x) { return haversine_km({0.0, lon0}, {0.0, lon0 + x}) - side_km; }, 0.0, 1.0);
    const double base = haversine_km({0.0, lon0}, {0.0, lon0 + dlon});
    const double lat = solve([&](double y) { return haversine_km({0.0, lon0}, {y, lon0 + dlon / 2}) - base; }, 0.0, 1.0);
    return {{prefix + "x", "x", 0.0, lon0, "CN"},
            {prefix + "y", "y", 0.0, lon0 + dlon, "CN"},
            {prefix + "z", "z", lat, lon0 + dlon / 2, "CN"}};
}

Outcome uniform_sps() {
    Outcome o;
    // A pair score of exactly 1 (10 km, domestic, lambda 0) makes the spatial
    // weights equal the collaboration weights, ground edges included.
    std::vector<Institution> rows;
    for (int t = 0; t < 4; ++t) {
        auto tri = equilateral_triangle("t" + std::to_string(t), 10.0, 20.0 * t);
        rows.insert(rows.end(), tri.begin(), tri.end());
    }
    const InstitutionTable table(rows);
    double worst_pair = 0.0;
    for (int t = 0; t < 4; ++t)
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const auto& a = rows[static_cast<std::size_t>(3 * t + i)];
                const auto& b = rows[static_cast<std::size_t>(3 * t + j)];
                worst_pair = std::max(worst_pair, std::abs(haversine_km({a.lat, a.lon}, {b.lat, b.lon}) - 10.0));
            }
    std::mt19937_64 rng(5);
    std::vector<PublicationRecord> recs;
    for (int p = 0; p < 300; ++p) {
        const std::string tri = "t" + std::to_string(rng() % 4);
        std::vector<std::pair<std::string, bool>> affs;
        for (const char* v : {"x", "y", "z"})
            if (rng() % 3 != 0) affs.emplace_back(tri + v, rng() % 2 == 0);
        if (affs.size() < 2) continue;
        affs[0].second = true;
        recs.push_back(test::make_record("p" + std::to_string(p), affs));
    }
    const auto built = build_network(recs, table, 0.0);
    const auto slr_scores = spatial_leader_rank(built.network);
    const auto lr_scores = leader_rank(built.network);
    double worst = 0.0;
    for (const auto& [id, s] : lr_scores.scores) worst = std::max(worst, std::abs(s - slr_scores.scores.at(id)));
    require(o, worst_pair < 1e-9, "triangle sides are not 10 km");
    require(o, worst <= 1e-12, "max score difference " + std::to_string(worst));
    std::ostringstream d;
    d << recs.size() << " papers on 10 km equilateral triangles, max score difference " << worst;
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome gravity_recovery() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto& beta = test::kPlantedBeta;
    const auto exact = ols_fit(test::planted_gravity_samples(1000, 11));
    double worst_rel = 0.0;
    for (std::size_t k = 0; k < beta.size(); ++k)
        worst_rel = std::max(worst_rel, std::abs(exact.coefficients[k] - beta[k]) / std::abs(beta[k]));
    require(o, worst_rel < 1e-6, "coefficient relative error " + std::to_string(worst_rel));
    const double lambda = estimate_lambda(exact);
    const double ratio = exact.coefficient("country") / exact.coefficient("distance");
    const double planted = beta[4] / beta[3];
    require(o, lambda == ratio, "lambda is not the ratio of recovered coefficients");
    require(o, std::abs(lambda - planted) / planted < 1e-6, "noise-free lambda off by more than 1e-6");

    double worst_noisy = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const double l = estimate_lambda(ols_fit(test::planted_gravity_samples(5000, 1000 + seed, 0.1)));
        worst_noisy = std::max(worst_noisy, std::abs(l - planted) / planted);
    }
    require(o, worst_noisy <= 0.05, "noisy lambda off by " + std::to_string(100 * worst_noisy) + "%");
    const double secs = seconds_since(t0);
    require(o, secs < 10.0, "runtime " + std::to_string(secs) + " s");
    std::ostringstream d;
    d << "coef rel err " << worst_rel << ", noisy lambda worst " << 100 * worst_noisy << "% over 20 seeds, " << secs
      << " s";
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome power_law() {
    Outcome o;
    std::mt19937_64 rng(2500);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> samples(100000);
    for (auto& x : samples) x = std::pow(1.0 - u(rng), -1.0 / 1.5);
    const auto fit = powerlaw_mle(samples, 1.0);
    require(o, std::abs(fit.alpha - 2.5) <= 0.02, "alpha " + std::to_string(fit.alpha));
    const std::vector<double> two{std::numbers::e, std::exp(2.0)};
    const auto closed = powerlaw_mle(two, 1.0);
    require(o, closed.alpha == 1.0 + 2.0 / 3.0, "closed-form case is not exactly 1 + 2/3");
    std::ostringstream d;
    d.precision(6);
    d << "alpha " << fit.alpha << " on 1e5 samples, closed form exact";
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome evaluation_metrics() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> real(-50.0, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(2 + rng() % 200), neg(x.size());
        for (auto& v : x) v = real(rng);
        for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
        require(o, spearman(x, x) == 1.0, "spearman(x,x) != 1");
        require(o, spearman(x, neg) == -1.0, "spearman(x,-x) != -1");
    }
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 300;
        ScoreMap scores, transformed;
        Labels labels;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string id = "i" + std::to_string(i);
            const double v = std::round(real(rng));
            scores[id] = v;
            transformed[id] = std::exp(v / 10.0) * 3.0 + 1.0;
            labels[id] = i == 0 ? 1 : (i == 1 ? 0 : static_cast<int>(rng() % 2));
        }
        require(o, roc_auc(scores, labels).auc == roc_auc(transformed, labels).auc, "AUC changed under transform");
    }
    const std::vector<InstitutionId> abc{"a", "b", "c"}, cba{"c", "b", "a"}, ab{"a", "b"}, ac{"a", "c"};
    require(o, ksim(abc, abc) == 1.0, "ksim identity");
    require(o, ksim(abc, cba) == 0.0, "ksim reversal");
    require(o, std::abs(ksim(ab, ac) - 2.0 / 3.0) < 1e-15, "ksim disjoint tail");
    std::uniform_int_distribution<std::int64_t> cites(0, 100);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::int64_t> v(rng() % 60);
        for (auto& c : v) c = cites(rng);
        require(o, h_index(v) == oracle::h_index_scan(v), "h_index disagrees with scan");
    }
    const double secs = seconds_since(t0);
    require(o, secs < 30.0, "runtime " + std::to_string(secs) + " s");
    std::ostringstream d;
    d << "spearman, AUC, ksim, h_index checks in " << secs << " s";
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome cli_determinism() {
    Outcome o;
    const auto dir = test::fresh_dir("acceptance");
    const auto pubs = test::fs::path(SLR_TOY_DIR) / "publications.jsonl";
    const auto inst = test::fs::path(SLR_TOY_DIR) / "institutions.csv";
    require(o, test::run_full_pipeline(pubs, inst, dir / "run1", "1.32") == 0, "first run failed");
    require(o, test::run_full_pipeline(pubs, inst, dir / "run2", "1.32") == 0, "second run failed");
    if (!o.pass) return o;
    const auto a = test::directory_contents(dir / "run1");
    const auto b = test::directory_contents(dir / "run2");
    require(o, !a.empty() && a == b, "outputs differ between runs");
    if (o.pass) o.detail = std::to_string(a.size()) + " files identical";
    test::fs::remove_all(dir);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"flow-construction oracle", flow_oracle},
        {"per-paper mass identity", per_paper_mass},
        {"stationary-score oracle", stationary_oracle},
        {"uniform-SPS equivalence", uniform_sps},
        {"gravity recovery", gravity_recovery},
        {"power-law MLE", power_law},
        {"evaluation metrics", evaluation_metrics},
        {"CLI determinism", cli_determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s: %s (%s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

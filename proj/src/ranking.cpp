#include "slr/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <json.hpp>

#include "slr/error.hpp"
#include "slr/format.hpp"
#include "slr/parallel.hpp"

namespace slr {

namespace {

double l1_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum;
}

void require_non_empty(const LeadershipNetwork& network) {
    if (network.empty()) throw InputError("network has no nodes");
}

// Sorted node list plus id -> index.
struct NodeIndex {
    std::vector<InstitutionId> ids;
    std::map<InstitutionId, std::size_t, std::less<>> index;

    explicit NodeIndex(const LeadershipNetwork& network) : ids(network.nodes.begin(), network.nodes.end()) {
        for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
    }
};

// Unweighted adjacency over edges with positive collaboration weight.
struct HopGraph {
    std::vector<InstitutionId> ids;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::vector<std::size_t>> in;
};

HopGraph hop_graph(const LeadershipNetwork& network) {
    NodeIndex idx(network);
    HopGraph g{idx.ids, std::vector<std::vector<std::size_t>>(idx.ids.size()),
               std::vector<std::vector<std::size_t>>(idx.ids.size())};
    for (const auto& [key, w] : network.edges) {
        if (!(w.collab > 0.0)) continue;
        const std::size_t s = idx.index.at(key.first);
        const std::size_t d = idx.index.at(key.second);
        g.out[s].push_back(d);
        g.in[d].push_back(s);
    }
    return g;
}

std::vector<double> apply_walk(const AugmentedNetwork& net, std::span<const double> s) {
    std::vector<double> next(net.node_count(), 0.0);
    for (std::size_t a = 0; a < net.node_count(); ++a) {
        double sum = 0.0;
        for (const auto& e : net.in_edges[a]) sum += e.weight / net.out_strength[e.src] * s[e.src];
        next[a] = sum;
    }
    return next;
}

RankingResult walk_result(const AugmentedNetwork& net, std::span<const double> s) {
    RankingResult r;
    for (std::size_t i = 0; i < net.base_node_count(); ++i) r.scores.emplace(net.ids[i], s[i]);
    r.ground_score = s[net.ground()];
    return r;
}

// Brandes accumulation from one source on an unweighted digraph.
void accumulate_betweenness(const HopGraph& g, std::size_t source, std::vector<double>& acc) {
    const std::size_t n = g.ids.size();
    std::vector<std::vector<std::size_t>> preds(n);
    std::vector<double> sigma(n, 0.0);
    std::vector<long> dist(n, -1);
    std::vector<std::size_t> order;
    std::deque<std::size_t> queue;
    sigma[source] = 1.0;
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        order.push_back(v);
        for (std::size_t w : g.out[v]) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if (dist[w] == dist[v] + 1) {
                sigma[w] += sigma[v];
                preds[w].push_back(v);
            }
        }
    }
    std::vector<double> delta(n, 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t w = *it;
        for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        if (w != source) acc[w] += delta[w];
    }
}

}  // namespace

double AugmentedNetwork::weight(std::size_t src, std::size_t dst) const {
    for (const auto& e : in_edges[dst])
        if (e.src == src) return e.weight;
    return 0.0;
}

AugmentedNetwork augment_ground(const LeadershipNetwork& network, WeightKind kind) {
    require_non_empty(network);
    if (network.nodes.count(std::string(kGroundId)))
        throw InputError("institution id '" + std::string(kGroundId) + "' is reserved for the ground node");
    NodeIndex idx(network);
    const std::size_t n = idx.ids.size();

    AugmentedNetwork aug;
    aug.ids = idx.ids;
    aug.in_edges.assign(n + 1, {});
    aug.out_strength.assign(n + 1, 0.0);
    for (const auto& [key, w] : network.edges) {
        const double weight = kind == WeightKind::Collab ? w.collab : w.spatial;
        if (!(weight > 0.0)) continue;
        const std::size_t s = idx.index.at(key.first);
        const std::size_t d = idx.index.at(key.second);
        aug.in_edges[d].push_back({s, weight});
        aug.out_strength[s] += weight;
        ++aug.base_edge_count;
    }
    for (std::size_t a = 0; a < n; ++a) {
        std::sort(aug.in_edges[a].begin(), aug.in_edges[a].end(),
                  [](const auto& x, const auto& y) { return x.src < y.src; });
        aug.in_edges[a].push_back({n, 1.0});
        aug.in_edges[n].push_back({a, 1.0});
        aug.out_strength[a] += 1.0;
    }
    aug.out_strength[n] = static_cast<double>(n);
    return aug;
}

RankingResult stationary_scores(const AugmentedNetwork& net, const WalkParams& params,
                                const IterationObserver& observer) {
    if (!(params.tol > 0.0)) throw InputError("tolerance must be positive");
    if (params.max_iter == 0) throw InputError("max_iter must be positive");

    std::vector<double> prev;
    std::vector<double> s(net.node_count(), 1.0);
    if (observer) observer(0, s);
    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= params.max_iter; ++it) {
        std::vector<double> next = apply_walk(net, s);
        residual = l1_distance(next, s);
        const double two_step = prev.empty() ? residual : l1_distance(next, prev);
        prev = std::move(s);
        s = std::move(next);
        if (observer) observer(it, s);
        if (residual < params.tol) {
            RankingResult r = walk_result(net, s);
            r.iterations = it;
            r.residual = residual;
            return r;
        }
        if (two_step < params.tol) {
            std::vector<double> mean(s.size());
            for (std::size_t i = 0; i < s.size(); ++i) mean[i] = 0.5 * (s[i] + prev[i]);
            RankingResult r = walk_result(net, mean);
            r.iterations = it;
            r.residual = l1_distance(apply_walk(net, mean), mean);
            r.converged = r.residual < params.tol;
            return r;
        }
    }
    RankingResult r = walk_result(net, s);
    r.iterations = params.max_iter;
    r.converged = false;
    r.residual = residual;
    return r;
}

RankingResult spatial_leader_rank(const LeadershipNetwork& network, const WalkParams& params) {
    RankingResult r = stationary_scores(augment_ground(network, WeightKind::Spatial), params);
    r.metric = "spatialleaderrank";
    return r;
}

RankingResult leader_rank(const LeadershipNetwork& network, const WalkParams& params) {
    RankingResult r = stationary_scores(augment_ground(network, WeightKind::Collab), params);
    r.metric = "leaderrank";
    return r;
}

RankingResult page_rank(const LeadershipNetwork& network, const PageRankParams& params) {
    require_non_empty(network);
    if (!(params.damping > 0.0 && params.damping < 1.0)) throw InputError("damping must lie in (0, 1)");
    if (!(params.tol > 0.0)) throw InputError("tolerance must be positive");
    if (params.max_iter == 0) throw InputError("max_iter must be positive");

    NodeIndex idx(network);
    const std::size_t n = idx.ids.size();
    std::vector<std::vector<AugmentedNetwork::InEdge>> in(n);
    std::vector<double> out(n, 0.0);
    for (const auto& [key, w] : network.edges) {
        if (!(w.collab > 0.0)) continue;
        const std::size_t s = idx.index.at(key.first);
        in[idx.index.at(key.second)].push_back({s, w.collab});
        out[s] += w.collab;
    }
    const double nd = static_cast<double>(n);
    const double d = params.damping;
    std::vector<double> x(n, 1.0 / nd);

    RankingResult r;
    r.metric = "pagerank";
    r.converged = false;
    r.iterations = params.max_iter;
    for (std::size_t it = 1; it <= params.max_iter; ++it) {
        double dangling = 0.0;
        for (std::size_t b = 0; b < n; ++b)
            if (out[b] == 0.0) dangling += x[b];
        std::vector<double> next(n);
        for (std::size_t a = 0; a < n; ++a) {
            double sum = 0.0;
            for (const auto& e : in[a]) sum += e.weight / out[e.src] * x[e.src];
            next[a] = (1.0 - d) / nd + d * (sum + dangling / nd);
        }
        r.residual = l1_distance(next, x);
        x = std::move(next);
        if (r.residual < params.tol) {
            r.iterations = it;
            r.converged = true;
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) r.scores.emplace(idx.ids[i], x[i]);
    return r;
}

CentralityKind parse_centrality_kind(std::string_view name) {
    if (name == "indegree") return CentralityKind::Indegree;
    if (name == "betweenness") return CentralityKind::Betweenness;
    if (name == "closeness") return CentralityKind::Closeness;
    throw InputError("unknown centrality kind '" + std::string(name) + "'");
}

std::string_view centrality_name(CentralityKind kind) {
    switch (kind) {
        case CentralityKind::Indegree: return "indegree";
        case CentralityKind::Betweenness: return "betweenness";
        case CentralityKind::Closeness: return "closeness";
    }
    return "unknown";
}

RankingResult centrality(const LeadershipNetwork& network, CentralityKind kind) {
    require_non_empty(network);
    const HopGraph g = hop_graph(network);
    const std::size_t n = g.ids.size();
    std::vector<double> value(n, 0.0);

    switch (kind) {
        case CentralityKind::Indegree:
            // Edges are keyed by (src, dst), so in-lists hold distinct neighbors.
            for (std::size_t v = 0; v < n; ++v) value[v] = static_cast<double>(g.in[v].size());
            break;
        case CentralityKind::Betweenness: {
            // Fixed-size source blocks reduced in block order keep the sum
            // independent of the worker count.
            constexpr std::size_t kBlock = 64;
            const std::size_t blocks = (n + kBlock - 1) / kBlock;
            std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));
            parallel_for_chunks(blocks, [&](std::size_t begin, std::size_t end) {
                for (std::size_t b = begin; b < end; ++b)
                    for (std::size_t s = b * kBlock; s < std::min(n, (b + 1) * kBlock); ++s)
                        accumulate_betweenness(g, s, partial[b]);
            });
            for (const auto& p : partial)
                for (std::size_t v = 0; v < n; ++v) value[v] += p[v];
            break;
        }
        case CentralityKind::Closeness:
            parallel_for_chunks(n, [&](std::size_t begin, std::size_t end) {
                std::vector<long> dist(n);
                for (std::size_t v = begin; v < end; ++v) {
                    // BFS on reversed edges gives d(u, v) for every u.
                    std::fill(dist.begin(), dist.end(), -1);
                    std::deque<std::size_t> queue{v};
                    dist[v] = 0;
                    double sum = 0.0;
                    while (!queue.empty()) {
                        const std::size_t x = queue.front();
                        queue.pop_front();
                        if (x != v) sum += 1.0 / static_cast<double>(dist[x]);
                        for (std::size_t u : g.in[x])
                            if (dist[u] < 0) {
                                dist[u] = dist[x] + 1;
                                queue.push_back(u);
                            }
                    }
                    value[v] = sum;
                }
            });
            break;
    }

    RankingResult r;
    r.metric = std::string(centrality_name(kind));
    for (std::size_t v = 0; v < n; ++v) r.scores.emplace(g.ids[v], value[v]);
    return r;
}

RankingResult centrality(const LeadershipNetwork& network, std::string_view kind) {
    return centrality(network, parse_centrality_kind(kind));
}

RankingResult publication_ranking(const std::map<InstitutionId, InstitutionStats>& stats) {
    RankingResult r;
    r.metric = "publication";
    for (const auto& [id, s] : stats) r.scores.emplace(id, static_cast<double>(s.publication_count));
    return r;
}

std::vector<std::pair<InstitutionId, double>> ranked_entries(const RankingResult& result) {
    std::vector<std::pair<InstitutionId, double>> out(result.scores.begin(), result.scores.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    return out;
}

std::string ranking_csv(const RankingResult& result) {
    std::string out = "# metric=" + result.metric + " iterations=" + std::to_string(result.iterations) +
                      " converged=" + (result.converged ? "true" : "false") +
                      " residual=" + format_number(result.residual) + '\n';
    out += "rank,institution_id,score\n";
    std::size_t rank = 0;
    for (const auto& [id, score] : ranked_entries(result))
        out += std::to_string(++rank) + ',' + csv_field(id) + ',' + format_number(score) + '\n';
    return out;
}

std::string ranking_json(const RankingResult& result) {
    nlohmann::ordered_json doc;
    doc["metric"] = result.metric;
    doc["iterations"] = result.iterations;
    doc["converged"] = result.converged;
    doc["residual"] = rounded_number(result.residual);
    auto& rows = doc["ranking"] = nlohmann::ordered_json::array();
    std::size_t rank = 0;
    for (const auto& [id, score] : ranked_entries(result))
        rows.push_back({{"rank", ++rank}, {"institution_id", id}, {"score", rounded_number(score)}});
    return doc.dump(2) + '\n';
}

}  // namespace slr

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slr/corpus.hpp"
#include "slr/leadership.hpp"

namespace slr {

enum class WeightKind { Collab, Spatial };

/// Reserved id of the ground node; no institution may use it.
inline constexpr std::string_view kGroundId = "__ground__";

/// Leadership network plus a ground node linked both ways to every
/// institution with weight 1. Node i < N is ids[i]; node N is the ground.
struct AugmentedNetwork {
    struct InEdge {
        std::size_t src = 0;
        double weight = 0.0;
    };

    std::vector<InstitutionId> ids;             // sorted base nodes
    std::vector<std::vector<InEdge>> in_edges;  // per target, sorted by src, ground last
    std::vector<double> out_strength;           // per node, ground included
    std::size_t base_edge_count = 0;

    std::size_t base_node_count() const { return ids.size(); }
    std::size_t node_count() const { return ids.size() + 1; }
    std::size_t ground() const { return ids.size(); }
    std::size_t edge_count() const { return base_edge_count + 2 * ids.size(); }
    /// Walk weight of src -> dst, 0 when absent.
    double weight(std::size_t src, std::size_t dst) const;
};

struct RankingResult {
    std::string metric;
    std::map<InstitutionId, double> scores;
    std::size_t iterations = 0;
    bool converged = true;
    double residual = 0.0;
    std::optional<double> ground_score;  // walk-based metrics only
};

struct WalkParams {
    double tol = 1e-10;
    std::size_t max_iter = 10000;
};

struct PageRankParams {
    double damping = 0.85;
    double tol = 1e-10;
    std::size_t max_iter = 10000;
};

/// Called with the full score vector (ground last) at t = 0 and after every
/// update.
using IterationObserver = std::function<void(std::size_t iteration, std::span<const double> scores)>;

/// Edges whose selected weight is zero are left out. Throws InputError for an
/// empty network or an institution named like the ground node.
AugmentedNetwork augment_ground(const LeadershipNetwork& network, WeightKind kind);

/// Power iteration of score_a <- sum_b w_ba / out_strength(b) * score_b from
/// all-ones, until the L1 change drops below tol. Without base edges the
/// chain is bipartite and the iterates settle into a 2-cycle; that is detected
/// and the mean of the two phases (the unique fixed point) is returned.
RankingResult stationary_scores(const AugmentedNetwork& network, const WalkParams& params = {},
                                const IterationObserver& observer = {});

RankingResult spatial_leader_rank(const LeadershipNetwork& network, const WalkParams& params = {});
RankingResult leader_rank(const LeadershipNetwork& network, const WalkParams& params = {});

/// Weighted PageRank over collaboration weights without the ground node.
/// Dangling mass is spread uniformly.
RankingResult page_rank(const LeadershipNetwork& network, const PageRankParams& params = {});

enum class CentralityKind { Indegree, Betweenness, Closeness };

/// Throws InputError for unknown names.
CentralityKind parse_centrality_kind(std::string_view name);
std::string_view centrality_name(CentralityKind kind);

/// Unweighted hop metrics on the collaboration edges: distinct in-neighbors,
/// directed shortest-path betweenness, harmonic in-closeness.
RankingResult centrality(const LeadershipNetwork& network, CentralityKind kind);
RankingResult centrality(const LeadershipNetwork& network, std::string_view kind);

/// Publication count per institution as a ranking.
RankingResult publication_ranking(const std::map<InstitutionId, InstitutionStats>& stats);

/// Descending score, then ascending id.
std::vector<std::pair<InstitutionId, double>> ranked_entries(const RankingResult& result);

/// `# metric=... iterations=... converged=... residual=...` then
/// `rank,institution_id,score`.
std::string ranking_csv(const RankingResult& result);
std::string ranking_json(const RankingResult& result);

}  // namespace slr

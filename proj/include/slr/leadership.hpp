#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "slr/corpus.hpp"

namespace slr {

/// Leading and participating institutions of one paper.
struct PaperRoles {
    std::string paper_id;
    std::vector<InstitutionId> leaders;       // distinct, first-occurrence order
    std::vector<InstitutionId> institutions;  // distinct, first-occurrence order
    std::int64_t year = 0;
    std::string field;

    std::size_t leader_count() const { return leaders.size(); }
    std::size_t institution_count() const { return institutions.size(); }
    /// Number of (participant, leader) pairs with participant != leader.
    std::size_t pair_count() const;
};

/// Directed participant -> leader flow.
struct FlowEdge {
    InstitutionId src;
    InstitutionId dst;
    double weight = 0.0;

    bool operator==(const FlowEdge&) const = default;
};

struct EdgeWeights {
    double collab = 0.0;
    double spatial = 0.0;
};

using EdgeKey = std::pair<InstitutionId, InstitutionId>;  // (src, dst)

struct LeadershipNetwork {
    std::set<InstitutionId> nodes;
    std::map<EdgeKey, EdgeWeights> edges;
    double lambda_used = 0.0;
    std::optional<std::pair<std::int64_t, std::int64_t>> year_range;

    bool empty() const { return nodes.empty(); }
};

/// Institution id -> total collaboration flow received as leader.
using LeadershipMass = std::map<InstitutionId, double>;

struct BuiltNetwork {
    LeadershipNetwork network;
    LeadershipMass mass;
};

struct DistanceSample {
    std::int64_t year = 0;
    double distance_km = 0.0;
};

/// Throws InputError naming the record when it has fewer than two distinct
/// institutions or no corresponding affiliation.
PaperRoles extract_roles(const PublicationRecord& record);

/// Edge b -> a for every leader a and institution b != a, each weighted
/// 1 / (leaders * institutions).
std::vector<FlowEdge> collab_flows(const PaperRoles& roles);

/// Mean pair spatial score over all (participant, leader) pairs with
/// participant != leader. Throws InputError on missing geodata.
double paper_spatial_score(const PaperRoles& roles, const InstitutionTable& institutions, double lambda);

/// Same pairs as collab_flows, each weighted sps / (leaders * institutions).
/// Zero-weight edges are not emitted.
std::vector<FlowEdge> spatial_flows(const PaperRoles& roles, double sps);

/// Aggregates per-paper flows over validated records. Per-edge sums are taken
/// over contributions in ascending order, so the result does not depend on the
/// order of `records`. Edges are keyed by collaboration flow; an edge whose
/// spatial contributions are all zero keeps spatial weight 0 and is skipped by
/// spatial-weighted walks.
BuiltNetwork build_network(const std::vector<PublicationRecord>& records, const InstitutionTable& institutions,
                           double lambda);

/// One haversine distance per emitted flow edge per paper.
std::vector<DistanceSample> flow_distance_samples(const std::vector<PublicationRecord>& records,
                                                  const InstitutionTable& institutions);

/// `src,dst,collab_weight,spatial_weight`, sorted by (src, dst).
std::string serialize_network_csv(const LeadershipNetwork& network);
std::string serialize_network_json(const LeadershipNetwork& network);

/// `institution_id,leadership_mass`, sorted by id.
std::string serialize_mass_csv(const LeadershipMass& mass);
std::string serialize_mass_json(const LeadershipMass& mass);

}  // namespace slr

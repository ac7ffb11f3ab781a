#include "slr/leadership.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "slr/error.hpp"
#include "slr/format.hpp"
#include "slr/geo.hpp"

namespace slr {

namespace {

double ordered_sum(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
}

template <typename Fn>
void for_each_pair(const PaperRoles& roles, Fn&& fn) {
    for (const auto& leader : roles.leaders)
        for (const auto& participant : roles.institutions)
            if (participant != leader) fn(participant, leader);
}

}  // namespace

std::size_t PaperRoles::pair_count() const {
    // Every leader is also in `institutions`.
    return leaders.size() * (institutions.size() - 1);
}

PaperRoles extract_roles(const PublicationRecord& record) {
    PaperRoles roles;
    roles.paper_id = record.id;
    roles.year = record.year;
    roles.field = record.field;
    roles.institutions = distinct_institutions(record);
    for (const auto& a : record.affiliations)
        if (a.is_corresponding &&
            std::find(roles.leaders.begin(), roles.leaders.end(), a.institution) == roles.leaders.end())
            roles.leaders.push_back(a.institution);
    if (roles.institutions.size() < 2)
        throw InputError("record '" + record.id + "' has fewer than two distinct institutions");
    if (roles.leaders.empty()) throw InputError("record '" + record.id + "' has no corresponding affiliation");
    return roles;
}

std::vector<FlowEdge> collab_flows(const PaperRoles& roles) {
    const double w = 1.0 / (static_cast<double>(roles.leader_count()) * static_cast<double>(roles.institution_count()));
    std::vector<FlowEdge> out;
    out.reserve(roles.pair_count());
    for_each_pair(roles, [&](const InstitutionId& b, const InstitutionId& a) { out.push_back({b, a, w}); });
    return out;
}

double paper_spatial_score(const PaperRoles& roles, const InstitutionTable& institutions, double lambda) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for_each_pair(roles, [&](const InstitutionId& b, const InstitutionId& a) {
        const Institution& ib = institutions.at(b);
        const Institution& ia = institutions.at(a);
        const double d = haversine_km({ib.lat, ib.lon}, {ia.lat, ia.lon});
        sum += spatial_score_pair(d, ib.country != ia.country, lambda);
        ++pairs;
    });
    if (pairs == 0) throw InputError("paper '" + roles.paper_id + "' has no leader-participant pair");
    return sum / static_cast<double>(pairs);
}

std::vector<FlowEdge> spatial_flows(const PaperRoles& roles, double sps) {
    const double w =
        sps / (static_cast<double>(roles.leader_count()) * static_cast<double>(roles.institution_count()));
    std::vector<FlowEdge> out;
    if (w == 0.0) return out;
    out.reserve(roles.pair_count());
    for_each_pair(roles, [&](const InstitutionId& b, const InstitutionId& a) { out.push_back({b, a, w}); });
    return out;
}

BuiltNetwork build_network(const std::vector<PublicationRecord>& records, const InstitutionTable& institutions,
                           double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw InputError("lambda must be finite and non-negative, got " + format_exact(lambda));

    struct Contributions {
        std::vector<double> collab;
        std::vector<double> spatial;
    };
    std::map<EdgeKey, Contributions> pending;
    BuiltNetwork out;
    out.network.lambda_used = lambda;

    for (const auto& rec : records) {
        const PaperRoles roles = extract_roles(rec);
        for (const auto& id : roles.institutions) out.network.nodes.insert(id);
        auto& yr = out.network.year_range;
        yr = yr ? std::pair{std::min(yr->first, rec.year), std::max(yr->second, rec.year)}
                : std::pair{rec.year, rec.year};
        for (const auto& e : collab_flows(roles)) pending[{e.src, e.dst}].collab.push_back(e.weight);
        const double sps = paper_spatial_score(roles, institutions, lambda);
        for (const auto& e : spatial_flows(roles, sps)) pending[{e.src, e.dst}].spatial.push_back(e.weight);
    }

    std::map<InstitutionId, std::vector<double>> inflow;
    for (auto& [key, c] : pending) {
        EdgeWeights w{ordered_sum(c.collab), ordered_sum(c.spatial)};
        out.network.edges.emplace(key, w);
        inflow[key.second].push_back(w.collab);
    }
    for (const auto& id : out.network.nodes) {
        auto it = inflow.find(id);
        out.mass[id] = it == inflow.end() ? 0.0 : ordered_sum(it->second);
    }
    return out;
}

std::vector<DistanceSample> flow_distance_samples(const std::vector<PublicationRecord>& records,
                                                  const InstitutionTable& institutions) {
    std::vector<DistanceSample> out;
    for (const auto& rec : records) {
        const PaperRoles roles = extract_roles(rec);
        for_each_pair(roles, [&](const InstitutionId& b, const InstitutionId& a) {
            const Institution& ib = institutions.at(b);
            const Institution& ia = institutions.at(a);
            out.push_back({rec.year, haversine_km({ib.lat, ib.lon}, {ia.lat, ia.lon})});
        });
    }
    return out;
}

std::string serialize_network_csv(const LeadershipNetwork& network) {
    std::string out = "src,dst,collab_weight,spatial_weight\n";
    for (const auto& [key, w] : network.edges)
        out += csv_field(key.first) + ',' + csv_field(key.second) + ',' + format_number(w.collab) + ',' +
               format_number(w.spatial) + '\n';
    return out;
}

std::string serialize_network_json(const LeadershipNetwork& network) {
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const auto& [key, w] : network.edges) {
        nlohmann::ordered_json e;
        e["src"] = key.first;
        e["dst"] = key.second;
        e["collab_weight"] = rounded_number(w.collab);
        e["spatial_weight"] = rounded_number(w.spatial);
        edges.push_back(std::move(e));
    }
    nlohmann::ordered_json doc;
    doc["lambda"] = network.lambda_used;
    doc["nodes"] = network.nodes;
    doc["edges"] = std::move(edges);
    return doc.dump(2) + '\n';
}

std::string serialize_mass_csv(const LeadershipMass& mass) {
    std::string out = "institution_id,leadership_mass\n";
    for (const auto& [id, m] : mass) out += csv_field(id) + ',' + format_number(m) + '\n';
    return out;
}

std::string serialize_mass_json(const LeadershipMass& mass) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& [id, m] : mass) {
        nlohmann::ordered_json r;
        r["institution_id"] = id;
        r["leadership_mass"] = rounded_number(m);
        rows.push_back(std::move(r));
    }
    return rows.dump(2) + '\n';
}

}  // namespace slr

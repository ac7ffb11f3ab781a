#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slr/corpus.hpp"

namespace slr::test {

inline PublicationRecord make_record(std::string id, std::vector<std::pair<std::string, bool>> affs,
                                     std::int64_t year = 2015, std::int64_t citations = 0,
                                     std::int64_t altmetrics = 0) {
    PublicationRecord r;
    r.id = std::move(id);
    r.year = year;
    r.field = "pharma";
    r.citations = citations;
    r.altmetrics = altmetrics;
    for (auto& [inst, corr] : affs) r.affiliations.push_back({inst, corr});
    return r;
}

// Same content as data/toy.
inline const char* kToyInstitutions =
    "id,name,lat,lon,country\n"
    "a,\"Wuhan University, Wuhan\",30.5434,114.3408,CN\n"
    "b,City University of Hong Kong,22.3364,114.2654,HK\n"
    "c,University of Amsterdam,52.3560,4.9553,NL\n"
    "d,\"Massachusetts Institute of Technology\",42.3601,-71.0942,US\n";

inline std::vector<PublicationRecord> toy_records() {
    return {make_record("pub1", {{"a", true}, {"b", false}, {"c", false}, {"d", false}}, 2015, 12, 30),
            make_record("pub2", {{"c", true}, {"a", false}, {"d", false}, {"b", false}}, 2016, 5, 8),
            make_record("pub3", {{"a", true}, {"c", false}}, 2016, 2, 4)};
}

inline InstitutionTable toy_institutions() { return InstitutionTable(parse_institutions(kToyInstitutions).items); }

}  // namespace slr::test

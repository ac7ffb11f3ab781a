#include "slr/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "slr/error.hpp"

namespace slr {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(std::string("missing key '") + key + "'");
    return *it;
}

std::int64_t require_count(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_number_integer()) throw InputError(std::string("'") + key + "' must be an integer");
    auto n = v.get<std::int64_t>();
    if (n < 0) throw InputError(std::string("'") + key + "' must be non-negative");
    return n;
}

PublicationRecord record_from_json(const json& obj) {
    if (!obj.is_object()) throw InputError("line is not a JSON object");
    PublicationRecord r;
    const json& id = require(obj, "id");
    if (!id.is_string()) throw InputError("'id' must be a string");
    r.id = id.get<std::string>();
    const json& year = require(obj, "year");
    if (!year.is_number_integer()) throw InputError("'year' must be an integer");
    r.year = year.get<std::int64_t>();
    const json& field = require(obj, "field");
    if (!field.is_string()) throw InputError("'field' must be a string");
    r.field = field.get<std::string>();
    r.citations = require_count(obj, "citations");
    r.altmetrics = require_count(obj, "altmetrics");

    const json& affs = require(obj, "affiliations");
    if (!affs.is_array()) throw InputError("'affiliations' must be an array");
    for (const json& a : affs) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_string() || !a[1].is_boolean())
            throw InputError("affiliation entries must be [institution_id, is_corresponding]");
        r.affiliations.push_back({a[0].get<std::string>(), a[1].get<bool>()});
    }
    return r;
}

bool blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

// Splits one CSV line; quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw InputError("unterminated quoted field");
    out.push_back(std::move(cur));
    return out;
}

double parse_degrees(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InputError(std::string("invalid ") + what + " '" + s + "'");
    }
    if (used != s.size()) throw InputError(std::string("invalid ") + what + " '" + s + "'");
    return v;
}

void check_institution(const Institution& inst) {
    if (inst.id.empty()) throw InputError("empty institution id");
    if (!(inst.lat >= -90.0 && inst.lat <= 90.0))
        throw InputError("latitude out of range for institution '" + inst.id + "'");
    if (!(inst.lon >= -180.0 && inst.lon <= 180.0))
        throw InputError("longitude out of range for institution '" + inst.id + "'");
    if (inst.country.empty()) throw InputError("empty country for institution '" + inst.id + "'");
}

}  // namespace

InstitutionTable::InstitutionTable(std::vector<Institution> institutions)
    : rows_(std::move(institutions)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        check_institution(rows_[i]);
        if (!index_.emplace(rows_[i].id, i).second)
            throw InputError("duplicate institution id '" + rows_[i].id + "'");
    }
}

const Institution* InstitutionTable::find(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &rows_[it->second];
}

const Institution& InstitutionTable::at(std::string_view id) const {
    const Institution* inst = find(id);
    if (!inst) throw InputError("no geodata for institution '" + std::string(id) + "'");
    return *inst;
}

Parsed<PublicationRecord> parse_publications(std::istream& in) {
    Parsed<PublicationRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        try {
            out.items.push_back(record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            out.errors.push_back({lineno, std::string("parse failure: ") + e.what()});
        } catch (const InputError& e) {
            out.errors.push_back({lineno, e.what()});
        }
    }
    return out;
}

Parsed<PublicationRecord> parse_publications(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_publications(in);
}

std::string serialize_publication(const PublicationRecord& r) {
    json affs = json::array();
    for (const auto& a : r.affiliations) affs.push_back(json::array({a.institution, a.is_corresponding}));
    json obj = json::object();
    obj["id"] = r.id;
    obj["year"] = r.year;
    obj["field"] = r.field;
    obj["citations"] = r.citations;
    obj["altmetrics"] = r.altmetrics;
    obj["affiliations"] = std::move(affs);
    return obj.dump();
}

Parsed<Institution> parse_institutions(std::istream& in) {
    Parsed<Institution> out;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        try {
            auto cols = split_csv_line(line);
            if (!header_seen) {
                header_seen = true;
                const std::vector<std::string> expected{"id", "name", "lat", "lon", "country"};
                if (cols != expected) throw InputError("expected header 'id,name,lat,lon,country'");
                continue;
            }
            if (cols.size() != 5) throw InputError("expected 5 columns, got " + std::to_string(cols.size()));
            Institution inst{cols[0], cols[1], parse_degrees(cols[2], "latitude"),
                             parse_degrees(cols[3], "longitude"), cols[4]};
            check_institution(inst);
            if (!seen.insert(inst.id).second) throw InputError("duplicate institution id '" + inst.id + "'");
            out.items.push_back(std::move(inst));
        } catch (const InputError& e) {
            out.errors.push_back({lineno, e.what()});
        }
    }
    return out;
}

Parsed<Institution> parse_institutions(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_institutions(in);
}

std::vector<InstitutionId> distinct_institutions(const PublicationRecord& record) {
    std::vector<InstitutionId> out;
    for (const auto& a : record.affiliations)
        if (std::find(out.begin(), out.end(), a.institution) == out.end()) out.push_back(a.institution);
    return out;
}

ValidatedCorpus validate_corpus(const std::vector<PublicationRecord>& records,
                                const InstitutionTable& institutions) {
    ValidatedCorpus out;
    out.report.record_count = records.size();
    std::set<std::string> used;
    for (const auto& rec : records) {
        PublicationRecord collapsed = rec;
        collapsed.affiliations.clear();
        bool unknown = false;
        bool any_corresponding = false;
        for (const auto& a : rec.affiliations) {
            if (!institutions.find(a.institution)) unknown = true;
            any_corresponding = any_corresponding || a.is_corresponding;
            auto it = std::find_if(collapsed.affiliations.begin(), collapsed.affiliations.end(),
                                   [&](const Affiliation& c) { return c.institution == a.institution; });
            if (it == collapsed.affiliations.end())
                collapsed.affiliations.push_back(a);
            else
                it->is_corresponding = it->is_corresponding || a.is_corresponding;
        }
        std::string_view reason;
        if (unknown)
            reason = kReasonUnknownInstitution;
        else if (collapsed.affiliations.size() < 2)
            reason = kReasonSingleInstitution;
        else if (!any_corresponding)
            reason = kReasonNoCorresponding;
        if (!reason.empty()) {
            out.report.dropped.push_back({rec.id, std::string(reason)});
            continue;
        }
        for (const auto& a : collapsed.affiliations) used.insert(a.institution);
        out.accepted.push_back(std::move(collapsed));
    }
    out.report.distinct_institutions = used.size();
    return out;
}

std::map<InstitutionId, InstitutionStats> institution_stats(
    const std::vector<PublicationRecord>& records) {
    std::map<InstitutionId, InstitutionStats> out;
    for (const auto& rec : records) {
        for (const auto& id : distinct_institutions(rec)) {
            auto& s = out[id];
            s.institution_id = id;
            ++s.publication_count;
            s.citation_list.push_back(rec.citations);
            s.altmetrics_list.push_back(rec.altmetrics);
        }
    }
    return out;
}

std::vector<PublicationRecord> filter_records(const std::vector<PublicationRecord>& records,
                                              const RecordFilter& filter) {
    std::vector<PublicationRecord> out;
    for (const auto& r : records) {
        if (filter.years && (r.year < filter.years->first || r.year > filter.years->second)) continue;
        if (filter.field && r.field != *filter.field) continue;
        out.push_back(r);
    }
    return out;
}

}  // namespace slr

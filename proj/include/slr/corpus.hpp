#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slr {

using InstitutionId = std::string;

struct Institution {
    InstitutionId id;
    std::string name;
    double lat = 0.0;
    double lon = 0.0;
    std::string country;

    bool operator==(const Institution&) const = default;
};

struct Affiliation {
    InstitutionId institution;
    bool is_corresponding = false;

    bool operator==(const Affiliation&) const = default;
};

struct PublicationRecord {
    std::string id;
    std::int64_t year = 0;
    std::string field;
    std::int64_t citations = 0;
    std::int64_t altmetrics = 0;
    std::vector<Affiliation> affiliations;

    bool operator==(const PublicationRecord&) const = default;
};

struct LineError {
    std::size_t line = 0;  // 1-based
    std::string message;

    bool operator==(const LineError&) const = default;
};

template <typename T>
struct Parsed {
    std::vector<T> items;
    std::vector<LineError> errors;
};

/// Institution table keyed by id. Lookups on unknown ids return nullptr.
class InstitutionTable {
public:
    InstitutionTable() = default;
    /// Throws InputError on duplicate ids or out-of-range coordinates.
    explicit InstitutionTable(std::vector<Institution> institutions);

    const Institution* find(std::string_view id) const;
    const Institution& at(std::string_view id) const;  // throws InputError
    std::size_t size() const { return rows_.size(); }
    const std::vector<Institution>& rows() const { return rows_; }

private:
    std::vector<Institution> rows_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

/// Reason strings used in ValidationReport::dropped.
inline constexpr std::string_view kReasonSingleInstitution = "single-institution";
inline constexpr std::string_view kReasonUnknownInstitution = "unknown-institution";
inline constexpr std::string_view kReasonNoCorresponding = "no-corresponding";

struct DroppedRecord {
    std::string record_id;
    std::string reason;

    bool operator==(const DroppedRecord&) const = default;
};

struct ValidationReport {
    std::size_t record_count = 0;
    std::vector<DroppedRecord> dropped;
    std::size_t distinct_institutions = 0;
};

struct ValidatedCorpus {
    std::vector<PublicationRecord> accepted;
    ValidationReport report;
};

struct InstitutionStats {
    InstitutionId institution_id;
    std::size_t publication_count = 0;
    std::vector<std::int64_t> citation_list;
    std::vector<std::int64_t> altmetrics_list;
};

/// One JSON object per line. Blank lines are skipped; malformed lines become
/// LineError entries and parsing continues.
Parsed<PublicationRecord> parse_publications(std::istream& in);
Parsed<PublicationRecord> parse_publications(std::string_view text);

/// Inverse of parse_publications for a single record (one line, no newline).
std::string serialize_publication(const PublicationRecord& record);

/// CSV with header `id,name,lat,lon,country`. Double-quoted fields may contain
/// commas and doubled quotes.
Parsed<Institution> parse_institutions(std::istream& in);
Parsed<Institution> parse_institutions(std::string_view text);

/// Collapses repeated institutions within a record (the corresponding flag is
/// OR-ed, first-occurrence order kept) and drops records that cannot take part
/// in a leadership network.
ValidatedCorpus validate_corpus(const std::vector<PublicationRecord>& records,
                                const InstitutionTable& institutions);

/// Per-institution publication counts and impact multisets over accepted
/// records. An institution listed several times in one record counts once.
std::map<InstitutionId, InstitutionStats> institution_stats(
    const std::vector<PublicationRecord>& records);

/// Distinct institution ids of a record in first-occurrence order.
std::vector<InstitutionId> distinct_institutions(const PublicationRecord& record);

struct RecordFilter {
    std::optional<std::pair<std::int64_t, std::int64_t>> years;  // inclusive
    std::optional<std::string> field;
};

std::vector<PublicationRecord> filter_records(const std::vector<PublicationRecord>& records,
                                              const RecordFilter& filter);

}  // namespace slr

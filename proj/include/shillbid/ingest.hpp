#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shillbid/model.hpp"

namespace shillbid {

/// Logical raw fields needed to build a BidRecord.
enum class RawField : std::size_t {
    AuctionUrl = 0,
    SellerId,
    BidderId,
    BidAmount,
    BidDate,
    BidTime,
    StartDate,
    StartTime,
    EndDate,
    EndTime,
    DurationDays,
    StartingPrice,
    WinningPrice,
    NumBids,
    NumBidders,
};

inline constexpr std::size_t kRawFieldCount = 15;

/// Logical key used in schema files ("auction_url", "bidder_id", ...).
std::string_view raw_field_key(RawField f);

/// Maps each logical field onto the column header used in a raw file.
struct SchemaConfig {
    std::array<std::string, kRawFieldCount> headers;

    const std::string& header(RawField f) const {
        return headers[static_cast<std::size_t>(f)];
    }

    /// Column headers of the scrape layout produced by the synthetic
    /// generator.
    static SchemaConfig defaults();

    /// Parses "logical_key = Raw Column Header" lines. Blank lines and lines
    /// starting with '#' are ignored; keys not mentioned keep their default.
    /// Throws ConfigError on unknown keys or malformed lines.
    static SchemaConfig parse(std::string_view text);
    static SchemaConfig load(const std::filesystem::path& path);

    /// Raw headers of every logical field, in RawField order.
    std::vector<std::string> keep_list() const;
};

/// 28-column raw header written by the synthetic generator. Includes the
/// irrelevant scrape columns that preprocessing drops.
const std::vector<std::string>& default_raw_columns();

struct Rejection {
    std::size_t line = 0;
    std::string reason;
    std::vector<std::string> fields;
};

struct SchemaReport {
    std::size_t row_count = 0;
    std::size_t accepted_row_count = 0;
    std::size_t rejected_row_count = 0;
    std::map<std::string, std::size_t> missing_values;  // per column, accepted rows only
    std::vector<Rejection> rejections;
};

struct RawReadResult {
    RawTable table;
    SchemaReport report;
};

/// Parses raw CSV text. The header must contain every column named by the
/// schema. Rows with the wrong column count (or broken quoting) are
/// rejected with a reason, never silently dropped.
RawReadResult parse_raw(std::string_view text, const SchemaConfig& schema);
RawReadResult read_raw(const std::filesystem::path& path, const SchemaConfig& schema);

/// Writes rejected rows as CSV with columns line, reason, then the raw fields.
void write_rejects(const SchemaReport& report, const std::filesystem::path& path);

std::string format_raw(const RawTable& table);
void write_raw(const RawTable& table, const std::filesystem::path& path);

// Preprocessed dataset ------------------------------------------------------

const std::vector<std::string>& preprocessed_columns();

/// Validates every BidRecord invariant (throws InvariantError), sorts into
/// canonical order and renders the 13-column CSV.
std::string format_preprocessed(std::span<const BidRecord> records);
void write_preprocessed(std::span<const BidRecord> records, const std::filesystem::path& path);

/// True when the first line of `text` is the preprocessed header.
bool looks_preprocessed(std::string_view text);

/// Strict parse of a preprocessed CSV. Throws SchemaError on header or
/// field errors and InvariantError when the rows break a record invariant.
std::vector<BidRecord> parse_preprocessed(std::string_view text);
std::vector<BidRecord> read_preprocessed(const std::filesystem::path& path);

// SB dataset ----------------------------------------------------------------

const std::vector<std::string>& sb_columns();

/// Fixed 6-decimal rendering used for every metric value.
std::string format_metric(double value);

/// Throws OutlierError if any metric is outside [0, 1]; otherwise renders
/// the 10-column CSV sorted by (auction_id, bidder_id).
std::string format_sb_dataset(std::span<const SBInstance> instances);
void write_sb_dataset(std::span<const SBInstance> instances, const std::filesystem::path& path);

/// Parses an SB CSV. Values are not range-checked here; that is the job of
/// scan_outliers().
std::vector<SBInstance> parse_sb_dataset(std::string_view text);
std::vector<SBInstance> read_sb_dataset(const std::filesystem::path& path);

struct ScoredInstance {
    std::uint64_t auction_id = 0;
    std::string bidder_id;
    double score = 0.0;
};

/// auction_id, bidder_id, weighted_score; same ordering and number format as
/// the SB dataset.
std::string format_scores(std::span<const ScoredInstance> scores);

}  // namespace shillbid

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shillbid/ingest.hpp"
#include "shillbid/model.hpp"

namespace shillbid {

/// Wall-clock time in the scrape site's (fixed-offset) timezone.
using SiteTime = std::chrono::local_seconds;

// Row-level conversions -----------------------------------------------------

/// Combines a scraped date ("Jun-01-17") and clock time ("19:24:55 PDT")
/// into one timestamp. The month name becomes a number; a trailing zone
/// abbreviation is consumed. Throws ParseError on bad input.
SiteTime merge_datetime(std::string_view date_text, std::string_view time_text);

/// "YYYY-MM-DD HH:MM:SS".
std::string format_site_time(SiteTime t);

/// Parses "YYYY-MM-DD HH:MM:SS" (site time). With a trailing 'Z' the value is
/// read as UTC and shifted into site time by `utc_offset`.
SiteTime parse_site_time(std::string_view text,
                         std::chrono::minutes utc_offset = std::chrono::minutes{-7 * 60});

/// Parses a fixed UTC offset such as "-07:00", "+0530" or "-7".
std::chrono::minutes parse_utc_offset(std::string_view text);

/// Seconds from `event` until `reference`. Later events map to smaller
/// values. Throws ParseError when the event lies after the reference.
std::int64_t to_countdown_seconds(SiteTime event, SiteTime reference);

/// Extracts the single decimal number in `text`, dropping currency symbols,
/// whitespace and thousands separators ("US $1,299.99" -> 1299.99).
/// Throws ParseError when there is no number or more than one.
Money parse_money(std::string_view text);

/// days * 86400. Throws ParseError for non-positive days.
std::int64_t duration_days_to_seconds(std::int64_t days);

/// The listing durations the scrape site offers: 1, 3, 5, 7 and 10 days.
bool is_standard_duration(std::int64_t days);

// Table-level cleansing -----------------------------------------------------

/// Projects the table onto `keep` (in that order). Throws SchemaError when
/// `keep` names a column the table does not have.
RawTable drop_irrelevant_columns(const RawTable& table, std::span<const std::string> keep);

/// Collapses rows that are equal on every column, keeping the first.
RawTable dedup_records(const RawTable& table);

/// Removes rows whose bidder column is empty or whitespace.
RawTable drop_missing_bidder(const RawTable& table, std::string_view bidder_column);

// Auction-level stages ------------------------------------------------------

/// One bid row after typing, keyed by the auction URL. `bid.num_bids` and
/// `bid.num_bidders` hold the scraped values (-1 when unparseable) until
/// reconcile_counts() runs; ids are assigned last.
struct StagedRow {
    std::string auction_key;
    BidRecord bid;
};

struct AuctionGroup {
    std::string key;
    std::vector<StagedRow> rows;
};

struct ReconcileOutcome {
    bool bids_adjusted = false;
    bool bidders_adjusted = false;
};

/// Sets num_bids to the actual row count and num_bidders to the number of
/// distinct bidder ids on every row.
ReconcileOutcome reconcile_counts(AuctionGroup& auction);

/// Removes auctions with fewer than `min_bids` bid rows. Returns the number
/// of auctions removed; `rows_removed` receives their row count.
std::size_t filter_low_activity_auctions(std::vector<AuctionGroup>& auctions, std::size_t min_bids,
                                         std::size_t* rows_removed = nullptr);

enum class Inconsistency { None, Price, Timing };

/// Price: a bid above the winning price (the last bid included), a starting
/// price above the winning price, or a non-positive winning price.
/// Timing: start - end differs from the duration, or a bid falls outside
/// [end, start].
Inconsistency classify_inconsistency(const AuctionGroup& auction);

struct InconsistencyCounts {
    std::size_t price_auctions = 0;
    std::size_t timing_auctions = 0;
    std::size_t rows = 0;
    std::size_t auctions() const { return price_auctions + timing_auctions; }
};

InconsistencyCounts filter_inconsistent_auctions(std::vector<AuctionGroup>& auctions);

/// Numbers auctions 1..N by earliest start first (largest countdown), then
/// key; numbers records 1..M over the canonical global row order. `keys`
/// receives the key of each auction in id order.
std::vector<BidRecord> assign_identifiers(std::vector<AuctionGroup> auctions,
                                          std::vector<std::string>* keys = nullptr);

// Whole pipeline ------------------------------------------------------------

struct DatasetTotals {
    std::size_t auctions = 0;
    std::size_t records = 0;
    std::size_t bidder_ids = 0;
    std::size_t seller_ids = 0;
    std::size_t attributes = 0;
    double avg_winning_price = 0.0;
    double avg_duration_days = 0.0;
    std::int64_t mode_duration_days = 0;
};

struct CleansingReport {
    std::size_t irrelevant_columns_dropped = 0;
    std::size_t duplicate_records_removed = 0;
    std::size_t missing_bidder_rows_removed = 0;
    std::size_t low_bid_auctions_removed = 0;
    std::size_t low_bid_rows_removed = 0;
    std::size_t inconsistent_auctions_removed = 0;
    std::size_t inconsistent_rows_removed = 0;
    std::size_t inconsistent_price_auctions = 0;
    std::size_t inconsistent_timing_auctions = 0;
    std::size_t scrape_filter_auctions_removed = 0;
    std::size_t scrape_filter_rows_removed = 0;
    std::size_t num_bids_adjusted = 0;
    std::size_t num_bidders_adjusted = 0;
    std::size_t nonstandard_duration_rows = 0;
    DatasetTotals before;
    DatasetTotals after;

    std::size_t rows_removed() const {
        return duplicate_records_removed + missing_bidder_rows_removed + low_bid_rows_removed +
               inconsistent_rows_removed + scrape_filter_rows_removed;
    }
    std::size_t auctions_removed() const {
        return low_bid_auctions_removed + inconsistent_auctions_removed +
               scrape_filter_auctions_removed;
    }

    /// Structured (JSON) rendering, stable key order.
    std::string to_json() const;
};

struct PipelineConfig {
    SchemaConfig schema = SchemaConfig::defaults();
    SiteTime reference_epoch = default_reference_epoch();
    std::size_t min_bids = 5;
    /// Optional collection-time filter: keep only auctions whose winning
    /// price is strictly above this value. Off by default.
    std::optional<Money> min_winning_price;
    std::size_t jobs = 1;

    /// 2017-07-07 00:00:00 site time.
    static SiteTime default_reference_epoch();
};

struct PipelineResult {
    std::vector<BidRecord> records;  // canonical order
    std::vector<std::string> auction_keys;  // auction_keys[id - 1] is the key of auction `id`
    CleansingReport report;
};

/// Raw records to cleaned BidRecords. Every output record satisfies the
/// BidRecord invariants; a violation throws InvariantError.
PipelineResult run_pipeline(const RawTable& raw, const PipelineConfig& config);

/// Re-runs the auction-level stages on an already preprocessed dataset.
/// On pipeline output this is the identity with zero removals.
PipelineResult run_pipeline(std::span<const BidRecord> records, const PipelineConfig& config);

}  // namespace shillbid

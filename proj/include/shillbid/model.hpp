#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shillbid/money.hpp"

namespace shillbid {

/// One scraped bid line. Values are untyped text; any of them may be empty
/// or malformed.
struct RawRecord {
    std::size_t line = 0;  // 1-based physical line in the source file
    std::vector<std::string> fields;

    friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

/// Raw records sharing one header.
struct RawTable {
    std::vector<std::string> columns;
    std::vector<RawRecord> records;

    std::optional<std::size_t> column_index(std::string_view name) const;
    /// Like column_index() but throws SchemaError when the column is absent.
    std::size_t require_column(std::string_view name) const;
};

/// Cleaned, typed row per bid. Times use the countdown convention: seconds
/// remaining until the reference epoch, so later events have smaller values.
struct BidRecord {
    std::uint64_t record_id = 0;
    std::uint64_t auction_id = 0;
    std::string seller_id;
    std::string bidder_id;
    Money bid_amount;
    std::int64_t bid_submit_time_sec = 0;
    std::int64_t num_bidders = 0;
    std::int64_t num_bids = 0;
    Money starting_price;
    Money winning_bid;
    std::int64_t auction_duration_sec = 0;
    std::int64_t start_time_sec = 0;
    std::int64_t end_time_sec = 0;

    friend bool operator==(const BidRecord&, const BidRecord&) = default;
};

/// Row-level BidRecord invariants. Returns a description of the first
/// violation, or nullopt when the record is valid.
std::optional<std::string> check_record(const BidRecord& record);

/// Row-level checks plus cross-row agreement of auction-level fields and
/// record_id uniqueness. Throws InvariantError on the first violation.
void validate_records(std::span<const BidRecord> records);

/// Canonical file order: auction_id, then descending bid time, then record_id.
bool canonical_less(const BidRecord& a, const BidRecord& b);

struct Bid {
    std::string bidder_id;
    Money amount;
    std::int64_t submit_time_sec = 0;
    std::uint64_t record_id = 0;

    friend bool operator==(const Bid&, const Bid&) = default;
};

/// Chronological order under the countdown convention: descending submit
/// time, then ascending amount, then record_id.
bool chronological_less(const Bid& a, const Bid& b);

/// All bids of one auction in chronological order plus the auction-level
/// fields.
struct AuctionView {
    std::uint64_t auction_id = 0;
    std::string seller_id;
    std::int64_t num_bidders = 0;
    std::int64_t num_bids = 0;
    Money starting_price;
    Money winning_bid;
    std::int64_t auction_duration_sec = 0;
    std::int64_t start_time_sec = 0;
    std::int64_t end_time_sec = 0;
    std::vector<Bid> bids;

    /// Builds a view from rows of a single auction. Auction-level fields are
    /// taken from the first row; bids are sorted chronologically.
    static AuctionView from_records(std::span<const BidRecord> rows);
};

/// Groups records by auction_id; result is ordered by auction_id.
std::vector<AuctionView> group_auctions(std::span<const BidRecord> records);

/// Bidder of the chronologically last bid. Throws InvariantError for an
/// auction without bids.
const std::string& winner_of(const AuctionView& auction);

/// Dataset-wide participation counters for one bidder.
struct BidderIndex {
    std::int64_t participate_all_auctions = 0;
    std::map<std::string, std::int64_t> participate_with_seller;
    std::int64_t auctions_won = 0;
    // Auctions where the bidder placed more than 10% of the bids.
    std::int64_t auction_part_high = 0;
    // Wins restricted to those high-participation auctions.
    std::int64_t high_participation_wins = 0;
};

struct GlobalAggregates {
    double avg_auctions_start_price = 0.0;
    double avg_bid_all_auctions = 0.0;
    std::unordered_map<std::string, BidderIndex> bidders;

    /// Throws SchemaError for an unknown bidder.
    const BidderIndex& bidder(const std::string& bidder_id) const;
};

enum class Pattern : std::size_t {
    BidderTendency = 0,
    EarlyBidding,
    BiddingRatio,
    LastBidding,
    AuctionStartingPrice,
    SuccessiveOutbidding,
    WinningRatio,
    AuctionBids,
};

inline constexpr std::size_t kPatternCount = 8;

inline constexpr std::array<Pattern, kPatternCount> kAllPatterns = {
    Pattern::BidderTendency,       Pattern::EarlyBidding, Pattern::BiddingRatio,
    Pattern::LastBidding,          Pattern::AuctionStartingPrice,
    Pattern::SuccessiveOutbidding, Pattern::WinningRatio, Pattern::AuctionBids,
};

/// Short code ("BT", "EB", ...).
std::string_view pattern_code(Pattern p);
/// Column name in the SB dataset ("bidder_tendency", ...).
std::string_view pattern_column(Pattern p);
/// Human-readable name ("Bidder Tendency", ...).
std::string_view pattern_title(Pattern p);
/// Accepts either the short code or the column name, case-insensitive.
std::optional<Pattern> pattern_from_name(std::string_view name);

/// One feature vector per (auction, bidder) pair.
struct SBInstance {
    std::uint64_t auction_id = 0;
    std::string bidder_id;
    std::array<double, kPatternCount> metrics{};

    double& operator[](Pattern p) { return metrics[static_cast<std::size_t>(p)]; }
    double operator[](Pattern p) const { return metrics[static_cast<std::size_t>(p)]; }

    friend bool operator==(const SBInstance&, const SBInstance&) = default;
};

/// Suspicion weight per pattern. Every weight lies in (0, 1].
struct WeightConfig {
    std::map<Pattern, double> weights;

    /// Low 0.3, medium 0.5, high 0.7 as assigned per pattern.
    static WeightConfig defaults();

    /// Throws ConfigError when a weight is outside (0, 1].
    void validate() const;
};

}  // namespace shillbid

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shillbid/model.hpp"

namespace shillbid {

/// How one bidder took part in one auction.
struct BidderParticipation {
    std::string bidder_id;
    std::int64_t first_bid_time_sec = 0;  // earliest bid: largest countdown value
    std::int64_t last_bid_time_sec = 0;   // latest bid: smallest countdown value
    std::int64_t bid_count = 0;
    std::int64_t longest_run = 0;  // longest streak of consecutive bids
};

/// Per-bidder participation in an auction, ordered by bidder_id.
std::vector<BidderParticipation> participations(const AuctionView& auction);

/// Longest streak of consecutive bids by `bidder_id` in chronological order.
std::int64_t longest_consecutive_run(const AuctionView& auction, std::string_view bidder_id);

/// True when the bidder placed more than 10% of the auction's bids.
bool is_high_participation(std::int64_t bid_count, std::int64_t num_bids);

/// Dataset means and the per-bidder participation index. Throws SchemaError
/// on an empty auction set.
GlobalAggregates compute_global_aggregates(std::span<const AuctionView> auctions);

// The eight metrics. Each returns a value in [0, 1]; higher is more
// suspicious.

double bidder_tendency(const std::string& bidder_id, const std::string& seller_id,
                       const GlobalAggregates& aggregates);

/// Uses the bidder's first bid in the auction.
double early_bidding(const BidderParticipation& p, const AuctionView& auction);

double bidding_ratio(const BidderParticipation& p, const AuctionView& auction);

/// Uses the bidder's last bid in the auction.
double last_bidding(const BidderParticipation& p, const AuctionView& auction);

double auction_starting_price(const AuctionView& auction, const GlobalAggregates& aggregates);

/// 1 for a run of four or more consecutive bids, 0.5 for a run of three,
/// 0 otherwise.
double successive_outbidding(std::int64_t longest_run);

double winning_ratio(const std::string& bidder_id, const GlobalAggregates& aggregates);

double auction_bids(const AuctionView& auction, const GlobalAggregates& aggregates);

/// Sum of weight * metric over all patterns, divided by the sum of weights.
/// Throws ConfigError when the table lacks a pattern.
double weighted_score(const SBInstance& instance, const WeightConfig& weights);

/// key=value lines (BT=0.5, successive_outbidding=0.9, ...) applied on top
/// of the defaults. '#' starts a comment. Throws ConfigError on unknown
/// patterns, malformed values or weights outside (0, 1].
WeightConfig parse_weights(std::string_view text);
WeightConfig load_weights(const std::filesystem::path& path);

}  // namespace shillbid

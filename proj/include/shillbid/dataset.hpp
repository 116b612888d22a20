#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shillbid/model.hpp"

namespace shillbid {

/// One SBInstance per distinct (auction, bidder) pair, ordered by
/// (auction_id, bidder_id). Metric evaluation is split over `jobs` workers;
/// the result does not depend on `jobs`. Throws OutlierError if any metric
/// leaves [0, 1].
std::vector<SBInstance> build_sb_dataset(std::span<const AuctionView> auctions,
                                         const GlobalAggregates& aggregates,
                                         std::size_t jobs = 1);

struct OutlierViolation {
    std::uint64_t auction_id = 0;
    std::string bidder_id;
    Pattern pattern = Pattern::BidderTendency;
    double value = 0.0;
};

/// Every metric value outside [0, 1] (NaN included).
std::vector<OutlierViolation> scan_outliers(std::span<const SBInstance> instances);

using WinnerSet = std::set<std::pair<std::uint64_t, std::string>>;

/// (auction_id, winner) for every auction.
WinnerSet winners_of(std::span<const AuctionView> auctions);

struct StatsConfig {
    double high_value_threshold = 0.7;  // strict ">"
    double aggressive_min_sob = 0.5;    // SOB >= this ...
    double aggressive_min_br = 0.1;     // ... and BR > this
    double early_min_eb = 0.7;          // EB > this
};

bool is_aggressive(const SBInstance& inst, const StatsConfig& config);

struct PatternCount {
    std::size_t count = 0;
    double percent = 0.0;
};

/// Winner/aggression buckets. Percentages use the instance count as base.
struct BehaviourBuckets {
    PatternCount winners_not_aggressive;
    PatternCount non_winners_aggressive;
    PatternCount non_winners_not_aggressive;
    PatternCount winners_aggressive;
    PatternCount early_aggressive_non_winners;
};

struct PatternStats {
    StatsConfig config;
    std::size_t instances = 0;
    std::size_t auctions = 0;
    std::size_t bidder_ids = 0;
    std::array<PatternCount, kPatternCount> high_values{};
    // Needs winner information; absent when only the SB dataset is known.
    std::optional<BehaviourBuckets> buckets;
    // "Low starting price" auctions are those with ASP > 0.
    std::size_t low_start_price_auctions = 0;
    std::size_t regular_start_price_auctions = 0;
    double avg_bidders_low_start_price = 0.0;
    double avg_bidders_regular_start_price = 0.0;

    std::string to_json() const;
    /// Aligned plain-text tables: dataset summary, then one row per pattern.
    std::string to_table() const;
};

PatternStats pattern_stats(std::span<const SBInstance> instances, const StatsConfig& config = {},
                           const WinnerSet* winners = nullptr);

}  // namespace shillbid

#include "shillbid/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "shillbid/error.hpp"
#include "shillbid/metrics.hpp"
#include "shillbid/parallel.hpp"

namespace shillbid {

std::vector<SBInstance> build_sb_dataset(std::span<const AuctionView> auctions,
                                         const GlobalAggregates& aggregates, std::size_t jobs) {
    std::vector<std::vector<SBInstance>> per_auction(auctions.size());
    parallel_for(auctions.size(), jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& a = auctions[i];
            const double asp = auction_starting_price(a, aggregates);
            const double ab = auction_bids(a, aggregates);
            auto& out = per_auction[i];
            for (const auto& p : participations(a)) {
                SBInstance inst;
                inst.auction_id = a.auction_id;
                inst.bidder_id = p.bidder_id;
                inst[Pattern::BidderTendency] = bidder_tendency(p.bidder_id, a.seller_id, aggregates);
                inst[Pattern::EarlyBidding] = early_bidding(p, a);
                inst[Pattern::BiddingRatio] = bidding_ratio(p, a);
                inst[Pattern::LastBidding] = last_bidding(p, a);
                inst[Pattern::AuctionStartingPrice] = asp;
                inst[Pattern::SuccessiveOutbidding] = successive_outbidding(p.longest_run);
                inst[Pattern::WinningRatio] = winning_ratio(p.bidder_id, aggregates);
                inst[Pattern::AuctionBids] = ab;
                out.push_back(std::move(inst));
            }
        }
    });

    std::size_t total = 0;
    for (const auto& v : per_auction) total += v.size();
    std::vector<SBInstance> instances;
    instances.reserve(total);
    for (auto& v : per_auction) {
        for (auto& inst : v) instances.push_back(std::move(inst));
    }
    std::sort(instances.begin(), instances.end(), [](const SBInstance& a, const SBInstance& b) {
        if (a.auction_id != b.auction_id) return a.auction_id < b.auction_id;
        return a.bidder_id < b.bidder_id;
    });

    if (const auto bad = scan_outliers(instances); !bad.empty()) {
        const auto& v = bad.front();
        throw OutlierError("outlier: auction " + std::to_string(v.auction_id) + ", bidder '" +
                           v.bidder_id + "', " + std::string(pattern_column(v.pattern)) + " = " +
                           std::to_string(v.value));
    }
    return instances;
}

std::vector<OutlierViolation> scan_outliers(std::span<const SBInstance> instances) {
    std::vector<OutlierViolation> out;
    for (const auto& inst : instances) {
        for (auto p : kAllPatterns) {
            const double v = inst[p];
            if (!(v >= 0.0 && v <= 1.0)) out.push_back({inst.auction_id, inst.bidder_id, p, v});
        }
    }
    return out;
}

WinnerSet winners_of(std::span<const AuctionView> auctions) {
    WinnerSet winners;
    for (const auto& a : auctions) winners.emplace(a.auction_id, winner_of(a));
    return winners;
}

bool is_aggressive(const SBInstance& inst, const StatsConfig& config) {
    return inst[Pattern::SuccessiveOutbidding] >= config.aggressive_min_sob &&
           inst[Pattern::BiddingRatio] > config.aggressive_min_br;
}

namespace {

PatternCount share(std::size_t count, std::size_t total) {
    return {count, total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / double(total)};
}

}  // namespace

PatternStats pattern_stats(std::span<const SBInstance> instances, const StatsConfig& config,
                           const WinnerSet* winners) {
    PatternStats stats;
    stats.config = config;
    stats.instances = instances.size();

    std::array<std::size_t, kPatternCount> high{};
    struct AuctionInfo {
        std::size_t bidders = 0;
        bool low_start_price = false;
    };
    std::map<std::uint64_t, AuctionInfo> auctions;
    std::unordered_set<std::string_view> bidders;
    std::size_t win_calm = 0, lose_aggr = 0, lose_calm = 0, win_aggr = 0, early_aggr_lose = 0;

    for (const auto& inst : instances) {
        for (std::size_t i = 0; i < kPatternCount; ++i) {
            if (inst.metrics[i] > config.high_value_threshold) ++high[i];
        }
        auto& info = auctions[inst.auction_id];
        ++info.bidders;
        info.low_start_price = inst[Pattern::AuctionStartingPrice] > 0.0;
        bidders.insert(inst.bidder_id);

        if (winners) {
            const bool won = winners->contains({inst.auction_id, inst.bidder_id});
            const bool aggressive = is_aggressive(inst, config);
            if (won && aggressive) ++win_aggr;
            if (won && !aggressive) ++win_calm;
            if (!won && aggressive) ++lose_aggr;
            if (!won && !aggressive) ++lose_calm;
            if (!won && aggressive && inst[Pattern::EarlyBidding] > config.early_min_eb) {
                ++early_aggr_lose;
            }
        }
    }

    for (std::size_t i = 0; i < kPatternCount; ++i) {
        stats.high_values[i] = share(high[i], stats.instances);
    }
    stats.auctions = auctions.size();
    stats.bidder_ids = bidders.size();

    std::size_t low_bidders = 0, regular_bidders = 0;
    for (const auto& [id, info] : auctions) {
        if (info.low_start_price) {
            ++stats.low_start_price_auctions;
            low_bidders += info.bidders;
        } else {
            ++stats.regular_start_price_auctions;
            regular_bidders += info.bidders;
        }
    }
    if (stats.low_start_price_auctions > 0) {
        stats.avg_bidders_low_start_price =
            static_cast<double>(low_bidders) / double(stats.low_start_price_auctions);
    }
    if (stats.regular_start_price_auctions > 0) {
        stats.avg_bidders_regular_start_price =
            static_cast<double>(regular_bidders) / double(stats.regular_start_price_auctions);
    }

    if (winners) {
        BehaviourBuckets b;
        b.winners_not_aggressive = share(win_calm, stats.instances);
        b.non_winners_aggressive = share(lose_aggr, stats.instances);
        b.non_winners_not_aggressive = share(lose_calm, stats.instances);
        b.winners_aggressive = share(win_aggr, stats.instances);
        b.early_aggressive_non_winners = share(early_aggr_lose, stats.instances);
        stats.buckets = b;
    }
    return stats;
}

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v + 0.0);
    return buf;
}

std::string count_cell(const PatternCount& c) {
    return std::to_string(c.count) + " (" + fixed(c.percent, 2) + "%)";
}

std::string render_table(const std::vector<std::pair<std::string, std::string>>& rows,
                         const std::string& left_title, const std::string& right_title) {
    std::size_t lw = left_title.size(), rw = right_title.size();
    for (const auto& [l, r] : rows) {
        lw = std::max(lw, l.size());
        rw = std::max(rw, r.size());
    }
    const std::string rule = "+" + std::string(lw + 2, '-') + "+" + std::string(rw + 2, '-') + "+\n";
    auto line = [&](const std::string& l, const std::string& r) {
        return "| " + l + std::string(lw - l.size(), ' ') + " | " + r +
               std::string(rw - r.size(), ' ') + " |\n";
    };
    std::string out = rule + line(left_title, right_title) + rule;
    for (const auto& [l, r] : rows) out += line(l, r);
    out += rule;
    return out;
}

}  // namespace

std::string PatternStats::to_table() const {
    std::vector<std::pair<std::string, std::string>> summary = {
        {"Number of auctions", std::to_string(auctions)},
        {"Number of instances", std::to_string(instances)},
        {"Number of bidder IDs", std::to_string(bidder_ids)},
        {"Avg. bidders in low starting price auctions", fixed(avg_bidders_low_start_price, 2)},
        {"Avg. bidders in regular starting price auctions",
         fixed(avg_bidders_regular_start_price, 2)},
    };
    if (buckets) {
        summary.emplace_back("Winners and not aggressively participated",
                             count_cell(buckets->winners_not_aggressive));
        summary.emplace_back("Not winners and aggressively participated",
                             count_cell(buckets->non_winners_aggressive));
        summary.emplace_back("Not winners and not aggressively participated",
                             count_cell(buckets->non_winners_not_aggressive));
        summary.emplace_back("Winners and aggressively participated",
                             count_cell(buckets->winners_aggressive));
        summary.emplace_back("Early, aggressive and not winners",
                             count_cell(buckets->early_aggressive_non_winners));
    } else {
        summary.emplace_back("Winner buckets", "n/a (no preprocessed dataset given)");
    }

    std::vector<std::pair<std::string, std::string>> patterns;
    for (auto p : kAllPatterns) {
        patterns.emplace_back(std::string(pattern_title(p)),
                              count_cell(high_values[static_cast<std::size_t>(p)]));
    }

    std::string out = "Statistics of SB dataset (percentages over " +
                      std::to_string(instances) + " instances)\n";
    out += render_table(summary, "Statistic", "Value");
    out += "\nSB patterns in the auction dataset\n";
    out += render_table(patterns, "SB Pattern", "High Value (> " + fixed(config.high_value_threshold, 2) + ")");
    return out;
}

std::string PatternStats::to_json() const {
    using nlohmann::ordered_json;
    auto count_json = [](const PatternCount& c) {
        ordered_json j;
        j["count"] = c.count;
        j["percent"] = c.percent;
        return j;
    };
    ordered_json j;
    j["percentage_base"] = "instances";
    j["high_value_threshold"] = config.high_value_threshold;
    j["aggressive_min_sob"] = config.aggressive_min_sob;
    j["aggressive_min_br"] = config.aggressive_min_br;
    j["early_min_eb"] = config.early_min_eb;
    j["auctions"] = auctions;
    j["instances"] = instances;
    j["bidder_ids"] = bidder_ids;
    j["low_start_price_auctions"] = low_start_price_auctions;
    j["regular_start_price_auctions"] = regular_start_price_auctions;
    j["avg_bidders_low_start_price"] = avg_bidders_low_start_price;
    j["avg_bidders_regular_start_price"] = avg_bidders_regular_start_price;
    if (buckets) {
        ordered_json b;
        b["winners_not_aggressive"] = count_json(buckets->winners_not_aggressive);
        b["non_winners_aggressive"] = count_json(buckets->non_winners_aggressive);
        b["non_winners_not_aggressive"] = count_json(buckets->non_winners_not_aggressive);
        b["winners_aggressive"] = count_json(buckets->winners_aggressive);
        b["early_aggressive_non_winners"] = count_json(buckets->early_aggressive_non_winners);
        j["buckets"] = b;
    } else {
        j["buckets"] = nullptr;
    }
    ordered_json high;
    for (auto p : kAllPatterns) {
        high[std::string(pattern_column(p))] = count_json(high_values[static_cast<std::size_t>(p)]);
    }
    j["high_values"] = high;
    return j.dump(2) + "\n";
}

}  // namespace shillbid

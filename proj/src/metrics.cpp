#include "shillbid/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "shillbid/csv.hpp"
#include "shillbid/error.hpp"

namespace shillbid {

namespace {

double unit_clamp(double v) { return std::clamp(v, 0.0, 1.0); }

void require_duration(const AuctionView& a) {
    if (a.auction_duration_sec <= 0) {
        throw InvariantError("auction " + std::to_string(a.auction_id) +
                             " has a non-positive duration");
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<BidderParticipation> participations(const AuctionView& auction) {
    std::map<std::string_view, BidderParticipation> by_bidder;
    std::string_view run_bidder;
    std::int64_t run = 0;
    for (const auto& bid : auction.bids) {
        auto [it, inserted] = by_bidder.try_emplace(bid.bidder_id);
        auto& p = it->second;
        if (inserted) {
            p.bidder_id = bid.bidder_id;
            p.first_bid_time_sec = bid.submit_time_sec;
        }
        // bids arrive in chronological order, so the last one seen is the latest
        p.last_bid_time_sec = bid.submit_time_sec;
        ++p.bid_count;

        run = (run > 0 && run_bidder == bid.bidder_id) ? run + 1 : 1;
        run_bidder = bid.bidder_id;
        p.longest_run = std::max(p.longest_run, run);
    }
    std::vector<BidderParticipation> out;
    out.reserve(by_bidder.size());
    for (auto& [id, p] : by_bidder) out.push_back(std::move(p));
    return out;
}

std::int64_t longest_consecutive_run(const AuctionView& auction, std::string_view bidder_id) {
    std::int64_t best = 0, run = 0;
    for (const auto& bid : auction.bids) {
        run = bid.bidder_id == bidder_id ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

bool is_high_participation(std::int64_t bid_count, std::int64_t num_bids) {
    // bid_count / num_bids > 0.1, evaluated exactly
    return bid_count * 10 > num_bids;
}

GlobalAggregates compute_global_aggregates(std::span<const AuctionView> auctions) {
    if (auctions.empty()) throw SchemaError("cannot aggregate an empty auction set");

    GlobalAggregates agg;
    std::int64_t start_price_cents = 0;
    std::int64_t bids = 0;
    for (const auto& a : auctions) {
        start_price_cents += a.starting_price.cents();
        bids += a.num_bids;

        const auto& winner = winner_of(a);
        for (const auto& p : participations(a)) {
            auto& idx = agg.bidders[p.bidder_id];
            ++idx.participate_all_auctions;
            ++idx.participate_with_seller[a.seller_id];
            const bool won = p.bidder_id == winner;
            if (won) ++idx.auctions_won;
            if (is_high_participation(p.bid_count, a.num_bids)) {
                ++idx.auction_part_high;
                if (won) ++idx.high_participation_wins;
            }
        }
    }
    const double n = static_cast<double>(auctions.size());
    agg.avg_auctions_start_price = static_cast<double>(start_price_cents) / (100.0 * n);
    agg.avg_bid_all_auctions = static_cast<double>(bids) / n;
    return agg;
}

double bidder_tendency(const std::string& bidder_id, const std::string& seller_id,
                       const GlobalAggregates& aggregates) {
    const auto& idx = aggregates.bidder(bidder_id);
    if (idx.participate_all_auctions <= 1) return 0.0;
    const auto it = idx.participate_with_seller.find(seller_id);
    const std::int64_t with_seller = it == idx.participate_with_seller.end() ? 0 : it->second;
    return unit_clamp(static_cast<double>(with_seller) /
                      static_cast<double>(idx.participate_all_auctions));
}

double early_bidding(const BidderParticipation& p, const AuctionView& a) {
    require_duration(a);
    const auto elapsed = a.start_time_sec - p.first_bid_time_sec;
    return unit_clamp(1.0 - static_cast<double>(elapsed) /
                                static_cast<double>(a.auction_duration_sec));
}

double bidding_ratio(const BidderParticipation& p, const AuctionView& a) {
    if (a.num_bids <= 0) {
        throw InvariantError("auction " + std::to_string(a.auction_id) + " has no bids");
    }
    return unit_clamp(static_cast<double>(p.bid_count) / static_cast<double>(a.num_bids));
}

double last_bidding(const BidderParticipation& p, const AuctionView& a) {
    require_duration(a);
    const auto remaining = p.last_bid_time_sec - a.end_time_sec;
    return unit_clamp(static_cast<double>(remaining) /
                      static_cast<double>(a.auction_duration_sec));
}

double auction_starting_price(const AuctionView& a, const GlobalAggregates& aggregates) {
    const double price = a.starting_price.to_double();
    const double mean = aggregates.avg_auctions_start_price;
    if (!(price < mean)) return 0.0;
    return unit_clamp(1.0 - price / mean);
}

double successive_outbidding(std::int64_t longest_run) {
    if (longest_run >= 4) return 1.0;
    if (longest_run >= 3) return 0.5;
    return 0.0;
}

double winning_ratio(const std::string& bidder_id, const GlobalAggregates& aggregates) {
    const auto& idx = aggregates.bidder(bidder_id);
    if (idx.auction_part_high == 0) return 0.0;
    return unit_clamp(1.0 - static_cast<double>(idx.high_participation_wins) /
                                static_cast<double>(idx.auction_part_high));
}

double auction_bids(const AuctionView& a, const GlobalAggregates& aggregates) {
    const double count = static_cast<double>(a.num_bids);
    const double mean = aggregates.avg_bid_all_auctions;
    if (!(count > mean)) return 0.0;
    return unit_clamp(1.0 - mean / count);
}

double weighted_score(const SBInstance& instance, const WeightConfig& weights) {
    double total = 0.0;
    double weight_sum = 0.0;
    for (auto p : kAllPatterns) {
        const auto it = weights.weights.find(p);
        if (it == weights.weights.end()) {
            throw ConfigError("weight table is missing pattern " + std::string(pattern_code(p)));
        }
        total += it->second * instance[p];
        weight_sum += it->second;
    }
    if (!(weight_sum > 0.0)) throw ConfigError("weights sum to zero");
    return total / weight_sum;
}

WeightConfig parse_weights(std::string_view text) {
    auto config = WeightConfig::defaults();
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto where = "weights line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected pattern=value");
        const auto key = trim(line.substr(0, eq));
        const auto value_text = trim(line.substr(eq + 1));
        const auto pattern = pattern_from_name(key);
        if (!pattern) throw ConfigError(where + "unknown pattern '" + std::string(key) + "'");
        double value = 0.0;
        auto [ptr, ec] =
            std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
        if (value_text.empty() || ec != std::errc() ||
            ptr != value_text.data() + value_text.size()) {
            throw ConfigError(where + "malformed weight '" + std::string(value_text) + "'");
        }
        config.weights[*pattern] = value;
    }
    config.validate();
    return config;
}

WeightConfig load_weights(const std::filesystem::path& path) {
    std::string text;
    try {
        text = csv::read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse_weights(text);
}

}  // namespace shillbid

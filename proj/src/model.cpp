#include "shillbid/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>
#include <unordered_set>

#include "shillbid/error.hpp"

namespace shillbid {

std::optional<std::size_t> RawTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t RawTable::require_column(std::string_view name) const {
    if (auto idx = column_index(name)) return *idx;
    throw SchemaError("missing column '" + std::string(name) + "'");
}

std::optional<std::string> check_record(const BidRecord& r) {
    if (r.record_id == 0) return "record_id must be positive";
    if (r.auction_id == 0) return "auction_id must be positive";
    if (r.seller_id.empty()) return "empty seller_id";
    if (r.bidder_id.empty()) return "empty bidder_id";
    if (r.auction_duration_sec <= 0) return "auction_duration_sec must be positive";
    if (r.start_time_sec - r.end_time_sec != r.auction_duration_sec) {
        return "start_time_sec - end_time_sec != auction_duration_sec";
    }
    if (r.end_time_sec < 0) return "end_time_sec is negative";
    if (r.bid_submit_time_sec < r.end_time_sec || r.bid_submit_time_sec > r.start_time_sec) {
        return "bid_submit_time_sec outside [end_time_sec, start_time_sec]";
    }
    if (r.num_bidders < 1) return "num_bidders must be positive";
    if (r.num_bids < 1) return "num_bids must be positive";
    if (r.winning_bid <= Money{}) return "winning_bid must be positive";
    if (r.starting_price < Money{}) return "starting_price is negative";
    if (r.starting_price > r.winning_bid) return "starting_price exceeds winning_bid";
    if (r.bid_amount < Money{}) return "bid_amount is negative";
    if (r.bid_amount > r.winning_bid) return "bid_amount exceeds winning_bid";
    return std::nullopt;
}

namespace {

auto auction_level(const BidRecord& r) {
    return std::tie(r.seller_id, r.num_bidders, r.num_bids, r.starting_price, r.winning_bid,
                    r.auction_duration_sec, r.start_time_sec, r.end_time_sec);
}

}  // namespace

void validate_records(std::span<const BidRecord> records) {
    std::unordered_set<std::uint64_t> record_ids;
    record_ids.reserve(records.size());
    for (const auto& r : records) {
        if (auto why = check_record(r)) {
            throw InvariantError("record " + std::to_string(r.record_id) + ": " + *why);
        }
        if (!record_ids.insert(r.record_id).second) {
            throw InvariantError("duplicate record_id " + std::to_string(r.record_id));
        }
    }

    struct Seen {
        const BidRecord* first = nullptr;
        std::int64_t rows = 0;
        std::set<std::string_view> bidders;
    };
    std::unordered_map<std::uint64_t, Seen> auctions;
    for (const auto& r : records) {
        auto& seen = auctions[r.auction_id];
        if (seen.first == nullptr) {
            seen.first = &r;
        } else if (auction_level(*seen.first) != auction_level(r)) {
            throw InvariantError("auction " + std::to_string(r.auction_id) +
                                 ": rows disagree on auction-level fields");
        }
        ++seen.rows;
        seen.bidders.insert(r.bidder_id);
    }
    for (const auto& [id, seen] : auctions) {
        if (seen.first->num_bids != seen.rows) {
            throw InvariantError("auction " + std::to_string(id) + ": num_bids " +
                                 std::to_string(seen.first->num_bids) + " but " +
                                 std::to_string(seen.rows) + " bid rows");
        }
        if (seen.first->num_bidders != static_cast<std::int64_t>(seen.bidders.size())) {
            throw InvariantError("auction " + std::to_string(id) + ": num_bidders " +
                                 std::to_string(seen.first->num_bidders) + " but " +
                                 std::to_string(seen.bidders.size()) + " distinct bidders");
        }
    }
}

bool canonical_less(const BidRecord& a, const BidRecord& b) {
    if (a.auction_id != b.auction_id) return a.auction_id < b.auction_id;
    if (a.bid_submit_time_sec != b.bid_submit_time_sec) {
        return a.bid_submit_time_sec > b.bid_submit_time_sec;
    }
    return a.record_id < b.record_id;
}

bool chronological_less(const Bid& a, const Bid& b) {
    if (a.submit_time_sec != b.submit_time_sec) return a.submit_time_sec > b.submit_time_sec;
    if (a.amount != b.amount) return a.amount < b.amount;
    return a.record_id < b.record_id;
}

AuctionView AuctionView::from_records(std::span<const BidRecord> rows) {
    AuctionView view;
    if (rows.empty()) return view;
    const auto& head = rows.front();
    view.auction_id = head.auction_id;
    view.seller_id = head.seller_id;
    view.num_bidders = head.num_bidders;
    view.num_bids = head.num_bids;
    view.starting_price = head.starting_price;
    view.winning_bid = head.winning_bid;
    view.auction_duration_sec = head.auction_duration_sec;
    view.start_time_sec = head.start_time_sec;
    view.end_time_sec = head.end_time_sec;
    view.bids.reserve(rows.size());
    for (const auto& r : rows) {
        view.bids.push_back({r.bidder_id, r.bid_amount, r.bid_submit_time_sec, r.record_id});
    }
    std::sort(view.bids.begin(), view.bids.end(), chronological_less);
    return view;
}

std::vector<AuctionView> group_auctions(std::span<const BidRecord> records) {
    std::vector<const BidRecord*> order;
    order.reserve(records.size());
    for (const auto& r : records) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(), [](const BidRecord* a, const BidRecord* b) {
        return a->auction_id < b->auction_id;
    });

    std::vector<AuctionView> views;
    std::vector<BidRecord> chunk;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        chunk.clear();
        while (j < order.size() && order[j]->auction_id == order[i]->auction_id) {
            chunk.push_back(*order[j]);
            ++j;
        }
        views.push_back(AuctionView::from_records(chunk));
        i = j;
    }
    return views;
}

const std::string& winner_of(const AuctionView& auction) {
    if (auction.bids.empty()) {
        throw InvariantError("auction " + std::to_string(auction.auction_id) + " has no bids");
    }
    return auction.bids.back().bidder_id;
}

const BidderIndex& GlobalAggregates::bidder(const std::string& bidder_id) const {
    auto it = bidders.find(bidder_id);
    if (it == bidders.end()) throw SchemaError("unknown bidder id '" + bidder_id + "'");
    return it->second;
}

namespace {

struct PatternNames {
    Pattern pattern;
    std::string_view code;
    std::string_view column;
    std::string_view title;
};

constexpr std::array<PatternNames, kPatternCount> kPatternNames = {{
    {Pattern::BidderTendency, "BT", "bidder_tendency", "Bidder Tendency"},
    {Pattern::EarlyBidding, "EB", "early_bidding", "Early Bidding"},
    {Pattern::BiddingRatio, "BR", "bidding_ratio", "Bidding Ratio"},
    {Pattern::LastBidding, "LB", "last_bidding", "Last Bidding"},
    {Pattern::AuctionStartingPrice, "ASP", "auction_starting_price", "Auction Starting Price"},
    {Pattern::SuccessiveOutbidding, "SOB", "successive_outbidding", "Successive Outbidding"},
    {Pattern::WinningRatio, "WR", "winning_ratio", "Winning Ratio"},
    {Pattern::AuctionBids, "AB", "auction_bids", "Auction Bids"},
}};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::string_view pattern_code(Pattern p) { return kPatternNames[static_cast<std::size_t>(p)].code; }

std::string_view pattern_column(Pattern p) {
    return kPatternNames[static_cast<std::size_t>(p)].column;
}

std::string_view pattern_title(Pattern p) {
    return kPatternNames[static_cast<std::size_t>(p)].title;
}

std::optional<Pattern> pattern_from_name(std::string_view name) {
    for (const auto& n : kPatternNames) {
        if (iequals(name, n.code) || iequals(name, n.column)) return n.pattern;
    }
    return std::nullopt;
}

WeightConfig WeightConfig::defaults() {
    return WeightConfig{{
        {Pattern::BidderTendency, 0.5},
        {Pattern::EarlyBidding, 0.3},
        {Pattern::BiddingRatio, 0.7},
        {Pattern::LastBidding, 0.5},
        {Pattern::AuctionStartingPrice, 0.3},
        {Pattern::SuccessiveOutbidding, 0.7},
        {Pattern::WinningRatio, 0.7},
        {Pattern::AuctionBids, 0.3},
    }};
}

void WeightConfig::validate() const {
    for (const auto& [pattern, w] : weights) {
        if (!(w > 0.0 && w <= 1.0)) {
            throw ConfigError("weight for " + std::string(pattern_code(pattern)) +
                              " must lie in (0, 1], got " + std::to_string(w));
        }
    }
}

}  // namespace shillbid

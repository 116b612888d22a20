#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "shillbid/model.hpp"

namespace shillbid::testing {

struct BidSpec {
    std::string bidder;
    std::int64_t cents;
    std::int64_t time_sec;  // countdown value
};

// Builds the rows of one consistent auction. Auction-level counts and the
// winning price are derived from the bids; record ids continue from `next_id`.
inline std::vector<BidRecord> make_auction(std::uint64_t auction_id, const std::string& seller,
                                           std::int64_t start_sec, std::int64_t duration_sec,
                                           std::int64_t starting_cents,
                                           const std::vector<BidSpec>& bids,
                                           std::uint64_t& next_id) {
    std::set<std::string> bidders;
    std::int64_t last_time = start_sec + 1;
    std::int64_t last_cents = 0;
    for (const auto& b : bids) {
        bidders.insert(b.bidder);
        if (b.time_sec < last_time || (b.time_sec == last_time && b.cents >= last_cents)) {
            last_time = b.time_sec;
            last_cents = b.cents;
        }
    }
    std::vector<BidRecord> rows;
    for (const auto& b : bids) {
        BidRecord r;
        r.record_id = next_id++;
        r.auction_id = auction_id;
        r.seller_id = seller;
        r.bidder_id = b.bidder;
        r.bid_amount = Money::from_cents(b.cents);
        r.bid_submit_time_sec = b.time_sec;
        r.num_bidders = static_cast<std::int64_t>(bidders.size());
        r.num_bids = static_cast<std::int64_t>(bids.size());
        r.starting_price = Money::from_cents(starting_cents);
        r.winning_bid = Money::from_cents(last_cents);
        r.auction_duration_sec = duration_sec;
        r.start_time_sec = start_sec;
        r.end_time_sec = start_sec - duration_sec;
        rows.push_back(r);
    }
    return rows;
}

inline std::vector<BidRecord> make_auction(std::uint64_t auction_id, const std::string& seller,
                                           const std::vector<BidSpec>& bids,
                                           std::int64_t starting_cents = 10000) {
    std::uint64_t next_id = auction_id * 1000;
    return make_auction(auction_id, seller, 500000, 432000, starting_cents, bids, next_id);
}

// Bidders bidding in the given chronological order, one bid each, evenly
// spaced inside a 5-day auction with strictly increasing amounts.
inline std::vector<BidSpec> sequence(const std::vector<std::string>& bidders) {
    std::vector<BidSpec> out;
    std::int64_t t = 499000;
    std::int64_t cents = 20000;
    for (const auto& b : bidders) {
        out.push_back({b, cents, t});
        t -= 1000;
        cents += 500;
    }
    return out;
}

// Random small corpus: each auction has 1..max_bids bids from up to
// max_bidders bidders drawn from a shared pool, so bidders recur across
// auctions and sellers. Equal timestamps occur on purpose.
inline std::vector<BidRecord> random_corpus(std::mt19937_64& rng, std::size_t auctions,
                                            std::size_t max_bids = 6,
                                            std::size_t max_bidders = 3) {
    static const std::vector<std::string> pool = {"ann", "ben", "cat", "dan", "eve"};
    static const std::vector<std::string> sellers = {"s1", "s2"};
    static const std::vector<std::int64_t> durations = {86400, 259200, 432000, 604800, 864000};
    std::vector<BidRecord> out;
    std::uint64_t next_id = 1;
    for (std::size_t a = 1; a <= auctions; ++a) {
        std::vector<std::string> bidders;
        const std::size_t nb = 1 + rng() % max_bidders;
        for (std::size_t i = 0; i < nb; ++i) bidders.push_back(pool[rng() % pool.size()]);
        const std::int64_t duration = durations[rng() % durations.size()];
        const std::int64_t start = duration + static_cast<std::int64_t>(rng() % 1000000);
        const std::size_t n = 1 + rng() % max_bids;
        std::vector<BidSpec> bids;
        for (std::size_t i = 0; i < n; ++i) {
            // Coarse time grid so ties are common.
            const std::int64_t t = start - duration * static_cast<std::int64_t>(rng() % 5) / 4;
            bids.push_back({bidders[rng() % bidders.size()],
                            1000 + static_cast<std::int64_t>(rng() % 20) * 50, t});
        }
        auto rows = make_auction(a, sellers[rng() % sellers.size()], start, duration,
                                 static_cast<std::int64_t>(rng() % 40) * 100, bids, next_id);
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() /
                ("shillbid-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace shillbid::testing

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "shillbid/dataset.hpp"
#include "shillbid/error.hpp"
#include "shillbid/metrics.hpp"
#include "support.hpp"

using namespace shillbid;
using shillbid::testing::BidSpec;
using shillbid::testing::make_auction;
using shillbid::testing::sequence;

namespace {

AuctionView view_of(const std::vector<BidRecord>& rows) { return AuctionView::from_records(rows); }

BidderParticipation part_of(const AuctionView& a, const std::string& bidder) {
    for (const auto& p : participations(a)) {
        if (p.bidder_id == bidder) return p;
    }
    throw std::runtime_error("bidder not found");
}

}  // namespace

TEST(Aggregates, Means) {
    auto a = make_auction(1, "s", sequence({"x", "y"}), 10000);
    auto b = make_auction(2, "s", sequence({"x", "y", "x", "y"}), 30000);
    const std::vector<AuctionView> auctions = {view_of(a), view_of(b)};
    const auto agg = compute_global_aggregates(auctions);
    EXPECT_DOUBLE_EQ(agg.avg_auctions_start_price, 200.0);
    EXPECT_DOUBLE_EQ(agg.avg_bid_all_auctions, 3.0);
    EXPECT_THROW(compute_global_aggregates(std::span<const AuctionView>{}), SchemaError);
    EXPECT_THROW(agg.bidder("nobody"), SchemaError);
}

TEST(Aggregates, AuctionsWon) {
    std::vector<AuctionView> auctions = {
        view_of(make_auction(1, "s", sequence({"w", "o", "w"}))),
        view_of(make_auction(2, "s", sequence({"w", "o"}))),
        view_of(make_auction(3, "s", sequence({"o", "w", "o"}))),
    };
    const auto agg = compute_global_aggregates(auctions);
    EXPECT_EQ(agg.bidder("w").auctions_won, 1);
    EXPECT_EQ(agg.bidder("w").participate_all_auctions, 3);
    EXPECT_EQ(agg.bidder("o").auctions_won, 2);
}

TEST(Aggregates, LowParticipationExcludedFromPartHigh) {
    std::vector<std::string> order(19, "heavy");
    order.insert(order.begin() + 5, "light");  // 1 of 20 bids, BR 0.05
    const std::vector<AuctionView> auctions = {view_of(make_auction(1, "s", sequence(order)))};
    const auto agg = compute_global_aggregates(auctions);
    EXPECT_EQ(agg.bidder("light").auction_part_high, 0);
    EXPECT_EQ(agg.bidder("heavy").auction_part_high, 1);
}

TEST(Aggregates, HighParticipationBoundaryIsStrict) {
    EXPECT_FALSE(is_high_participation(1, 10));
    EXPECT_TRUE(is_high_participation(2, 10));
    EXPECT_FALSE(is_high_participation(2, 20));
    EXPECT_TRUE(is_high_participation(3, 20));
}

TEST(BidderTendency, Examples) {
    // Bidder in exactly one auction.
    {
        const std::vector<AuctionView> auctions = {view_of(make_auction(1, "S", sequence({"b", "c"})))};
        const auto agg = compute_global_aggregates(auctions);
        EXPECT_EQ(bidder_tendency("b", "S", agg), 0.0);
    }
    // 4 of 10 auctions with seller S.
    {
        std::vector<AuctionView> auctions;
        for (std::uint64_t i = 1; i <= 10; ++i) {
            auctions.push_back(view_of(make_auction(i, i <= 4 ? "S" : "T" + std::to_string(i),
                                                    sequence({"b", "c"}))));
        }
        const auto agg = compute_global_aggregates(auctions);
        EXPECT_DOUBLE_EQ(bidder_tendency("b", "S", agg), 0.4);
    }
    // All 6 auctions with the same seller.
    {
        std::vector<AuctionView> auctions;
        for (std::uint64_t i = 1; i <= 6; ++i) {
            auctions.push_back(view_of(make_auction(i, "S", sequence({"b", "c"}))));
        }
        const auto agg = compute_global_aggregates(auctions);
        EXPECT_EQ(bidder_tendency("b", "S", agg), 1.0);
    }
}

TEST(EarlyBidding, Examples) {
    std::uint64_t id = 1;
    const auto rows = make_auction(1, "s", 500000, 432000, 100,
                                   {{"open", 1000, 500000}, {"mid", 1100, 392000},
                                    {"close", 1200, 68000}, {"mid", 1300, 68000}},
                                   id);
    const auto a = view_of(rows);
    EXPECT_EQ(early_bidding(part_of(a, "open"), a), 1.0);
    EXPECT_EQ(early_bidding(part_of(a, "close"), a), 0.0);
    EXPECT_DOUBLE_EQ(early_bidding(part_of(a, "mid"), a), 0.75);  // first bid counts
}

TEST(BiddingRatio, Examples) {
    const auto solo = view_of(make_auction(1, "s", sequence({"a", "a", "a"})));
    EXPECT_EQ(bidding_ratio(part_of(solo, "a"), solo), 1.0);

    const auto a = view_of(make_auction(
        2, "s", sequence({"x", "y", "z", "x", "y", "z", "x", "y", "z", "w", "w", "w"})));
    EXPECT_DOUBLE_EQ(bidding_ratio(part_of(a, "x"), a), 0.25);
    double sum = 0.0;
    for (const auto& p : participations(a)) sum += bidding_ratio(p, a);
    EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(LastBidding, Examples) {
    std::uint64_t id = 1;
    const auto rows = make_auction(1, "s", 500000, 432000, 100,
                                   {{"early", 1000, 500000}, {"tenth", 1100, 300000},
                                    {"tenth", 1150, 68000 + 43200}, {"end", 1200, 68000}},
                                   id);
    const auto a = view_of(rows);
    EXPECT_EQ(last_bidding(part_of(a, "end"), a), 0.0);
    EXPECT_EQ(last_bidding(part_of(a, "early"), a), 1.0);
    EXPECT_DOUBLE_EQ(last_bidding(part_of(a, "tenth"), a), 0.1);  // last bid counts
}

TEST(AuctionStartingPrice, Examples) {
    GlobalAggregates agg;
    agg.avg_auctions_start_price = 400.0;
    AuctionView a;
    a.starting_price = Money::from_cents(40000);
    EXPECT_EQ(auction_starting_price(a, agg), 0.0);
    a.starting_price = Money::from_cents(0);
    EXPECT_EQ(auction_starting_price(a, agg), 1.0);
    a.starting_price = Money::from_cents(10000);
    EXPECT_DOUBLE_EQ(auction_starting_price(a, agg), 0.75);
    a.starting_price = Money::from_cents(50000);
    EXPECT_EQ(auction_starting_price(a, agg), 0.0);
}

TEST(SuccessiveOutbidding, Banding) {
    EXPECT_EQ(successive_outbidding(0), 0.0);
    EXPECT_EQ(successive_outbidding(1), 0.0);
    EXPECT_EQ(successive_outbidding(2), 0.0);
    EXPECT_EQ(successive_outbidding(3), 0.5);
    EXPECT_EQ(successive_outbidding(4), 1.0);
    EXPECT_EQ(successive_outbidding(9), 1.0);
}

TEST(SuccessiveOutbidding, RunsFromAuction) {
    const auto a = view_of(make_auction(1, "s", sequence({"b", "b", "x", "b", "b", "y", "y", "y"})));
    EXPECT_EQ(longest_consecutive_run(a, "b"), 2);
    EXPECT_EQ(successive_outbidding(longest_consecutive_run(a, "b")), 0.0);
    EXPECT_EQ(longest_consecutive_run(a, "y"), 3);
    EXPECT_EQ(longest_consecutive_run(a, "x"), 1);
    EXPECT_EQ(longest_consecutive_run(a, "absent"), 0);
}

TEST(SuccessiveOutbidding, FuzzAgainstRunLengthOracle) {
    std::mt19937_64 rng(2024);
    const std::vector<std::string> names = {"a", "b", "c"};
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::string> order(1 + rng() % 12);
        for (auto& s : order) s = names[rng() % (1 + trial % 3)];
        const auto a = view_of(make_auction(1, "s", sequence(order)));
        for (const auto& p : participations(a)) {
            const int run = oracle::longest_run(order, p.bidder_id);
            EXPECT_EQ(p.longest_run, run);
            EXPECT_EQ(successive_outbidding(p.longest_run), 0.5 * oracle::sob_from_run(run));
        }
    }
}

TEST(WinningRatio, Examples) {
    GlobalAggregates agg;
    agg.bidders["none"].auction_part_high = 0;
    agg.bidders["loser"].auction_part_high = 10;
    agg.bidders["some"].auction_part_high = 8;
    agg.bidders["some"].high_participation_wins = 2;
    EXPECT_EQ(winning_ratio("none", agg), 0.0);
    EXPECT_EQ(winning_ratio("loser", agg), 1.0);
    EXPECT_DOUBLE_EQ(winning_ratio("some", agg), 0.75);
}

TEST(AuctionBids, Examples) {
    GlobalAggregates agg;
    agg.avg_bid_all_auctions = 10.0;
    AuctionView a;
    a.num_bids = 10;
    EXPECT_EQ(auction_bids(a, agg), 0.0);
    a.num_bids = 20;
    EXPECT_DOUBLE_EQ(auction_bids(a, agg), 0.5);
    a.num_bids = 5;
    EXPECT_EQ(auction_bids(a, agg), 0.0);
}

TEST(WeightedScore, Examples) {
    const auto w = WeightConfig::defaults();
    SBInstance inst{1, "b", {}};
    EXPECT_EQ(weighted_score(inst, w), 0.0);
    inst.metrics.fill(1.0);
    EXPECT_DOUBLE_EQ(weighted_score(inst, w), 1.0);
    inst.metrics.fill(0.0);
    inst[Pattern::SuccessiveOutbidding] = 1.0;
    EXPECT_DOUBLE_EQ(weighted_score(inst, w), 0.175);

    auto missing = w;
    missing.weights.erase(Pattern::AuctionBids);
    EXPECT_THROW(weighted_score(inst, missing), ConfigError);
}

TEST(WeightedScore, ParseWeights) {
    const auto w = parse_weights("# tweak\nSOB = 0.9\nbidder_tendency=0.1\n\n");
    EXPECT_DOUBLE_EQ(w.weights.at(Pattern::SuccessiveOutbidding), 0.9);
    EXPECT_DOUBLE_EQ(w.weights.at(Pattern::BidderTendency), 0.1);
    EXPECT_DOUBLE_EQ(w.weights.at(Pattern::AuctionBids), 0.3);
    EXPECT_THROW(parse_weights("NB = 0.5"), ConfigError);
    EXPECT_THROW(parse_weights("SOB = high"), ConfigError);
    EXPECT_THROW(parse_weights("SOB = 0"), ConfigError);
    EXPECT_THROW(parse_weights("SOB = 1.2"), ConfigError);
    EXPECT_THROW(parse_weights("SOB"), ConfigError);
}

TEST(WeightedScore, ScalingWeightsKeepsRanking) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<SBInstance> instances(200);
    for (auto& inst : instances) {
        for (auto& m : inst.metrics) m = u(rng);
    }
    const auto w = WeightConfig::defaults();
    auto scaled = w;
    for (auto& [p, v] : scaled.weights) v *= 0.5;
    std::vector<std::size_t> order(instances.size()), scaled_order(instances.size());
    std::iota(order.begin(), order.end(), 0);
    std::iota(scaled_order.begin(), scaled_order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return weighted_score(instances[a], w) > weighted_score(instances[b], w);
    });
    std::stable_sort(scaled_order.begin(), scaled_order.end(), [&](std::size_t a, std::size_t b) {
        return weighted_score(instances[a], scaled) > weighted_score(instances[b], scaled);
    });
    EXPECT_EQ(order, scaled_order);
}

TEST(Metrics, Monotonicity) {
    GlobalAggregates agg;
    agg.avg_auctions_start_price = 300.0;
    agg.avg_bid_all_auctions = 12.0;
    AuctionView a;
    double prev_asp = -1.0;
    for (std::int64_t cents = 60000; cents >= 0; cents -= 500) {
        a.starting_price = Money::from_cents(cents);
        const double v = auction_starting_price(a, agg);
        EXPECT_GE(v, prev_asp);
        prev_asp = v;
    }
    double prev_ab = -1.0;
    for (std::int64_t nb = 1; nb < 100; ++nb) {
        a.num_bids = nb;
        const double v = auction_bids(a, agg);
        EXPECT_GE(v, prev_ab);
        prev_ab = v;
    }
    double prev_sob = -1.0;
    for (std::int64_t run = 0; run < 10; ++run) {
        EXPECT_GE(successive_outbidding(run), prev_sob);
        prev_sob = successive_outbidding(run);
    }
}

TEST(Metrics, EpochRebaseLeavesEbLbUnchanged) {
    std::mt19937_64 rng(12);
    auto records = shillbid::testing::random_corpus(rng, 40);
    const auto base = build_sb_dataset(group_auctions(records),
                                       compute_global_aggregates(group_auctions(records)));
    for (auto& r : records) {
        r.bid_submit_time_sec += 86400 * 30;
        r.start_time_sec += 86400 * 30;
        r.end_time_sec += 86400 * 30;
    }
    const auto auctions = group_auctions(records);
    const auto shifted = build_sb_dataset(auctions, compute_global_aggregates(auctions));
    ASSERT_EQ(base.size(), shifted.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        EXPECT_NEAR(base[i][Pattern::EarlyBidding], shifted[i][Pattern::EarlyBidding], 1e-12);
        EXPECT_NEAR(base[i][Pattern::LastBidding], shifted[i][Pattern::LastBidding], 1e-12);
    }
}

TEST(Metrics, MatchBruteForceOracle) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto records = shillbid::testing::random_corpus(rng, 1 + rng() % 8);
        const auto auctions = group_auctions(records);
        const auto instances = build_sb_dataset(auctions, compute_global_aggregates(auctions));
        const auto expected = oracle::compute(records);
        ASSERT_EQ(instances.size(), expected.size());
        for (const auto& inst : instances) {
            const auto& m = expected.at({inst.auction_id, inst.bidder_id});
            for (std::size_t k = 0; k < kPatternCount; ++k) {
                if (k == static_cast<std::size_t>(Pattern::SuccessiveOutbidding)) {
                    EXPECT_EQ(inst.metrics[k], m[k]);
                } else {
                    EXPECT_NEAR(inst.metrics[k], m[k], 1e-12) << pattern_code(kAllPatterns[k]);
                }
            }
        }
    }
}

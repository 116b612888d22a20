// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "oracle.hpp"
#include "shillbid/csv.hpp"
#include "shillbid/dataset.hpp"
#include "shillbid/ingest.hpp"
#include "shillbid/metrics.hpp"
#include "shillbid/preprocess.hpp"
#include "shillbid/synth.hpp"
#include "support.hpp"

using namespace shillbid;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Features {
    std::vector<AuctionView> auctions;
    std::vector<SBInstance> instances;
};

Features features_of(const std::vector<BidRecord>& records, std::size_t jobs = 1) {
    Features f;
    f.auctions = group_auctions(records);
    if (!f.auctions.empty()) {
        f.instances = build_sb_dataset(f.auctions, compute_global_aggregates(f.auctions), jobs);
    }
    return f;
}

// Σ_B BR(B, A) per auction; returns the worst deviation from 1.
double partition_error(const Features& f) {
    std::map<std::uint64_t, double> sums;
    for (const auto& inst : f.instances) sums[inst.auction_id] += inst[Pattern::BiddingRatio];
    double worst = 0.0;
    for (const auto& [id, s] : sums) worst = std::max(worst, std::abs(s - 1.0));
    return worst;
}

// Corpora shared by criteria 1, 3 and 4.
struct Corpus {
    SynthCorpus synth;
    PipelineResult result;
    Features features;
};

std::vector<Corpus>& range_corpora() {
    static std::vector<Corpus> corpora;
    return corpora;
}

Outcome criterion1() {
    const auto t0 = Clock::now();
    std::size_t instances = 0, outliers = 0;
    auto& corpora = range_corpora();
    for (std::uint64_t i = 0; i < 25; ++i) {
        SynthConfig cfg;
        cfg.seed = 1000 + i;
        cfg.num_auctions = 150 + 10 * i;
        cfg.shill_fraction = 0.05 + 0.01 * double(i % 10);
        cfg.shill_run_length = 3 + i % 3;
        Corpus c;
        c.synth = generate(cfg);
        c.result = run_pipeline(c.synth.table, PipelineConfig{});
        c.features = features_of(c.result.records);
        instances += c.features.instances.size();
        outliers += scan_outliers(c.features.instances).size();
        for (const auto& inst : c.features.instances) {
            for (double v : inst.metrics) outliers += !(v >= 0.0 && v <= 1.0);
        }
        corpora.push_back(std::move(c));
    }
    const double secs = seconds_since(t0);
    return {instances >= 10000 && outliers == 0 && secs < 60.0,
            "25 corpora, " + std::to_string(instances) + " instances, " + std::to_string(outliers) +
                " out-of-range values, " + fmt("%.2f s", secs)};
}

Outcome criterion2() {
    std::mt19937_64 rng(20170707);
    std::size_t auctions = 0, compared = 0, mismatches = 0;
    double worst = 0.0;
    while (auctions < 500) {
        const std::size_t n = std::min<std::size_t>(1 + rng() % 6, 500 - auctions);
        const auto records = shillbid::testing::random_corpus(rng, n, 6, 3);
        auctions += n;
        const auto f = features_of(records);
        const auto expected = oracle::compute(records);
        if (expected.size() != f.instances.size()) ++mismatches;
        for (const auto& inst : f.instances) {
            const auto it = expected.find({inst.auction_id, inst.bidder_id});
            if (it == expected.end()) {
                ++mismatches;
                continue;
            }
            for (std::size_t k = 0; k < kPatternCount; ++k) {
                ++compared;
                const double diff = std::abs(inst.metrics[k] - it->second[k]);
                const bool sob = k == static_cast<std::size_t>(Pattern::SuccessiveOutbidding);
                if (sob ? diff != 0.0 : diff > 1e-12) ++mismatches;
                worst = std::max(worst, diff);
            }
        }
    }
    return {mismatches == 0, std::to_string(auctions) + " micro-auctions, " +
                                 std::to_string(compared) + " metric values, " +
                                 std::to_string(mismatches) + " mismatches, max |diff| " +
                                 fmt("%.3g", worst)};
}

Outcome criterion3() {
    double worst = 0.0;
    std::size_t auctions = 0;
    for (const auto& c : range_corpora()) {
        worst = std::max(worst, partition_error(c.features));
        auctions += c.features.auctions.size();
    }
    std::mt19937_64 rng(33);
    for (int i = 0; i < 200; ++i) {
        const auto f = features_of(shillbid::testing::random_corpus(rng, 10, 12, 5));
        worst = std::max(worst, partition_error(f));
        auctions += f.auctions.size();
    }
    return {worst <= 1e-9, std::to_string(auctions) + " auctions, max |sum BR - 1| " +
                               fmt("%.3g", worst)};
}

Outcome criterion4() {
    std::size_t auctions = 0, bad = 0;
    for (const auto& c : range_corpora()) {
        for (const auto& a : c.features.auctions) {
            ++auctions;
            const bool standard = a.auction_duration_sec % 86400 == 0;
            if (!standard || a.start_time_sec - a.end_time_sec != a.auction_duration_sec) ++bad;
        }
    }

    // Named fixture: the 5-day auction of the reformatting example.
    const auto ref = PipelineConfig::default_reference_epoch();
    const auto start = to_countdown_seconds(parse_site_time("2017-06-19 20:11:19"), ref);
    const auto end = to_countdown_seconds(parse_site_time("2017-06-24 20:11:19"), ref);
    bool fixture = start - end == 432000 && duration_days_to_seconds(5) == 432000;

    std::string raw;
    csv::append_row(raw, default_raw_columns());
    const auto& cols = default_raw_columns();
    for (int i = 0; i < 5; ++i) {
        std::map<std::string, std::string> v = {
            {"Auction URL", "table4"},
            {"Seller Name", "s"},
            {"Bidder ID", i % 2 ? "b" : "a"},
            {"Bid Amount", std::to_string(600 + 10 * i) + ".50 $"},
            {"Bid Date", "Jun-2" + std::to_string(i) + "-17"},
            {"Bid Time", "10:00:00 PDT"},
            {"Auction Starting Date", "Jun-19-17"},
            {"Auction Starting Time", "20:11:19 PDT"},
            {"Auction End Date", "Jun-24-17"},
            {"Auction End Time", "20:11:19 PDT"},
            {"Auction Duration", "5"},
            {"Starting Price", "500.00 $"},
            {"Winning Price", "640.50 $"},
            {"Number of Bids", "5"},
            {"Number of Bidders", "2"},
        };
        std::vector<std::string> row;
        for (const auto& c : cols) row.push_back(v.count(c) ? v[c] : "");
        csv::append_row(raw, row);
    }
    const auto result = run_pipeline(parse_raw(raw, SchemaConfig::defaults()).table, PipelineConfig{});
    fixture = fixture && result.records.size() == 5;
    for (const auto& r : result.records) {
        fixture = fixture && r.auction_duration_sec == 432000 &&
                  r.start_time_sec - r.end_time_sec == 432000 && r.start_time_sec == start &&
                  r.end_time_sec == end;
    }
    ++auctions;

    return {bad == 0 && fixture,
            std::to_string(auctions - bad) + "/" + std::to_string(auctions) +
                " auctions satisfy start - end = duration; 5-day fixture " +
                (fixture ? "432000 ok" : "FAILED")};
}

Outcome criterion5() {
    std::vector<std::string> failures;
    if (parse_money("650.50 $") != Money::from_cents(65050)) failures.push_back("parse_money");
    if (format_site_time(merge_datetime("Jun-01-17", "19:24:55 PDT")) != "2017-06-01 19:24:55")
        failures.push_back("merge_datetime row 1");
    if (format_site_time(merge_datetime("Jun-03-17", "19:24:55 PDT")) != "2017-06-03 19:24:55")
        failures.push_back("merge_datetime row 2");

    std::mt19937_64 rng(5);
    const std::vector<std::string> names = {"a", "b", "c"};
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::string> order(1 + rng() % 12);
        for (auto& s : order) s = names[rng() % (1 + i % 3)];
        const auto rows = shillbid::testing::make_auction(1, "s", shillbid::testing::sequence(order));
        const auto view = AuctionView::from_records(rows);
        for (const auto& p : participations(view)) {
            const int run = oracle::longest_run(order, p.bidder_id);
            const double want = run >= 4 ? 1.0 : run == 3 ? 0.5 : 0.0;
            if (successive_outbidding(p.longest_run) != want) ++mismatches;
        }
    }
    if (mismatches) failures.push_back("SOB fuzz");
    std::string detail = "650.50 $ -> " + parse_money("650.50 $").to_string() +
                         "; date merge rows exact; SOB fuzz 1000 sequences, " +
                         std::to_string(mismatches) + " mismatches";
    for (const auto& f : failures) detail += "; failed: " + f;
    return {failures.empty(), detail};
}

Outcome criterion6() {
    std::size_t checks = 0, failures = 0;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        SynthConfig cfg;
        cfg.seed = seed;
        const auto corpus = generate(cfg);
        PipelineConfig pc;
        const auto base = run_pipeline(corpus.table, pc);
        const auto pre = format_preprocessed(base.records);
        const auto sb = format_sb_dataset(features_of(base.records, 1).instances);

        const auto again = run_pipeline(parse_preprocessed(pre), pc);
        ++checks;
        failures += format_preprocessed(again.records) != pre || again.report.rows_removed() != 0;

        auto shuffled = corpus.table;
        std::mt19937_64 rng(seed);
        std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
        for (std::size_t jobs : {1u, 4u}) {
            pc.jobs = jobs;
            const auto r = run_pipeline(shuffled, pc);
            ++checks;
            failures += format_preprocessed(r.records) != pre;
            ++checks;
            failures += format_sb_dataset(features_of(r.records, jobs).instances) != sb;
        }
    }
    return {failures == 0, std::to_string(checks) + " byte comparisons (re-run, shuffle, jobs 1/4), " +
                               std::to_string(failures) + " differences"};
}

Outcome criterion7() {
    std::size_t failures = 0;
    std::ostringstream totals;
    std::size_t dup = 0, miss = 0, thin = 0, price = 0;
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        SynthConfig cfg;
        cfg.seed = seed;
        const auto corpus = generate(cfg);
        const auto& d = corpus.defects;
        const auto rep = run_pipeline(corpus.table, PipelineConfig{}).report;
        failures += rep.duplicate_records_removed != d.duplicate_rows;
        failures += rep.missing_bidder_rows_removed != d.missing_bidder_rows;
        failures += rep.low_bid_auctions_removed != d.thin_auctions;
        failures += rep.inconsistent_price_auctions != d.inconsistent_auctions;
        failures += rep.inconsistent_auctions_removed != d.inconsistent_auctions;
        dup += d.duplicate_rows;
        miss += d.missing_bidder_rows;
        thin += d.thin_auctions;
        price += d.inconsistent_auctions;
    }
    return {failures == 0, "10 corpora; injected dup " + std::to_string(dup) + ", missing id " +
                               std::to_string(miss) + ", thin " + std::to_string(thin) +
                               ", price " + std::to_string(price) + "; " +
                               std::to_string(failures) + " count mismatches"};
}

Outcome criterion8() {
    SynthConfig cfg;  // 200 auctions, 10% shills, run length 4
    const auto corpus = generate(cfg);
    const auto result = run_pipeline(corpus.table, PipelineConfig{});
    const auto f = features_of(result.records);
    std::map<std::pair<std::string, std::string>, bool> truth;
    for (const auto& t : corpus.truth) truth[{t.auction_url, t.bidder_id}] = t.shill;

    std::size_t shills = 0, shill_sob1 = 0, honest = 0, honest_sob0 = 0;
    double wr_sum = 0.0;
    for (const auto& inst : f.instances) {
        const auto& url = result.auction_keys.at(inst.auction_id - 1);
        if (truth.at({url, inst.bidder_id})) {
            ++shills;
            shill_sob1 += inst[Pattern::SuccessiveOutbidding] == 1.0;
            wr_sum += inst[Pattern::WinningRatio];
        } else {
            ++honest;
            honest_sob0 += inst[Pattern::SuccessiveOutbidding] == 0.0;
        }
    }
    const double mean_wr = shills ? wr_sum / double(shills) : 0.0;
    return {shills > 0 && shill_sob1 == shills && mean_wr >= 0.9 && honest_sob0 == honest,
            "shill SOB=1 in " + std::to_string(shill_sob1) + "/" + std::to_string(shills) +
                ", mean shill WR " + fmt("%.4f", mean_wr) + ", honest SOB=0 in " +
                std::to_string(honest_sob0) + "/" + std::to_string(honest)};
}

Outcome criterion9() {
    const std::string dir = SHILLBID_TEST_DATA;
    const auto raw = read_raw(dir + "/golden_raw.csv", SchemaConfig::defaults());
    const auto result = run_pipeline(raw.table, PipelineConfig{});
    const auto pre = format_preprocessed(result.records);
    const auto sb = format_sb_dataset(features_of(result.records).instances);
    const bool pre_ok = pre == csv::read_file(dir + "/golden_preprocessed.csv");
    const bool sb_ok = sb == csv::read_file(dir + "/golden_sb.csv");
    return {pre_ok && sb_ok, std::to_string(result.report.before.auctions) + "-auction fixture; " +
                                 "preprocessed " + (pre_ok ? "byte-exact" : "DIFFERS") + " (" +
                                 std::to_string(result.records.size()) + " rows), SB " +
                                 (sb_ok ? "byte-exact" : "DIFFERS")};
}

Outcome criterion10() {
    SynthConfig cfg;
    cfg.seed = 10;
    cfg.num_auctions = 100000;
    cfg.bidder_pool = 30000;
    cfg.num_sellers = 6000;
    auto corpus = generate(cfg);
    const auto rows = corpus.table.records.size();
    const shillbid::testing::TempDir dir;
    const auto raw_path = dir.file("raw.csv");
    write_raw(corpus.table, raw_path);
    corpus = SynthCorpus{};

    const std::size_t jobs = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 4);
    const auto t0 = Clock::now();
    PipelineConfig pc;
    pc.jobs = jobs;
    auto result = run_pipeline(read_raw(raw_path, pc.schema).table, pc);
    write_preprocessed(result.records, dir.file("pre.csv"));
    const auto records = read_preprocessed(dir.file("pre.csv"));
    const auto f = features_of(records, jobs);
    write_sb_dataset(f.instances, dir.file("sb.csv"));
    const double secs = seconds_since(t0);
    return {rows >= 1000000 && secs < 60.0,
            std::to_string(rows) + " raw rows -> " + std::to_string(f.instances.size()) +
                " instances in " + fmt("%.2f s", secs) + " with " + std::to_string(jobs) +
                " worker(s)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"range property", criterion1},
        {"oracle equivalence", criterion2},
        {"bidding-ratio partition", criterion3},
        {"countdown invariant", criterion4},
        {"micro-examples", criterion5},
        {"idempotence and determinism", criterion6},
        {"defect accounting", criterion7},
        {"shill separation", criterion8},
        {"golden pipeline", criterion9},
        {"throughput", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << " ("
                  << criteria[i].first << "): " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - std::size_t(failed)) << "/" << criteria.size()
              << " acceptance criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}

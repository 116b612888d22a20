#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shillbid/ingest.hpp"
#include "shillbid/model.hpp"
#include "shillbid/preprocess.hpp"

namespace shillbid {

/// Parameters of the synthetic auction generator.
///
/// Honest bidders arrive at uniformly random times over the auction and
/// never outbid themselves. Shill bidders are bound to one seller, enter in
/// the first quarter of the auction with one block of `shill_run_length`
/// consecutive bids, and leave long before the close, so they never hold the
/// final bid.
struct SynthConfig {
    std::uint64_t seed = 42;
    std::size_t num_auctions = 200;
    // Relative frequency of 1, 3, 5, 7 and 10 day listings.
    std::array<double, 5> duration_weights = {166, 187, 131, 309, 14};
    std::size_t bidder_pool = 300;  // honest + shill bidders
    double shill_fraction = 0.1;
    std::size_t num_sellers = 50;

    std::size_t min_honest_bidders = 4;
    std::size_t max_honest_bidders = 9;
    double honest_repeat_prob = 0.3;  // chance an honest bidder bids a second time

    std::size_t shill_run_length = 4;
    double shill_participation = 0.7;  // chance a bound shill joins its seller's auction
    std::size_t max_shills_per_auction = 2;
    double shill_entry_quantile = 0.25;
    std::size_t max_bids_per_auction = 40;

    Money min_increment = Money::from_cents(500);
    Money max_increment = Money::from_cents(2500);

    // Defects, mirroring the cleansing rules.
    double duplicate_rate = 0.05;         // per row: append an exact copy
    double missing_bidder_rate = 0.02;    // per row: add a row with no bidder id
    double thin_auction_rate = 0.05;      // per auction: fewer than 5 bids
    double inconsistent_rate = 0.03;      // per auction: contradictory prices
    double count_mismatch_rate = 0.10;    // per auction: wrong scraped counts

    SiteTime reference_epoch = PipelineConfig::default_reference_epoch();
    std::string zone_label = "PDT";

    /// Throws ConfigError for an infeasible or out-of-range configuration.
    void validate() const;
};

struct TruthLabel {
    std::string auction_url;
    std::string bidder_id;
    bool shill = false;
};

struct DefectManifest {
    std::size_t duplicate_rows = 0;
    std::size_t missing_bidder_rows = 0;
    std::size_t thin_auctions = 0;
    std::size_t inconsistent_auctions = 0;
    std::size_t num_bids_mismatches = 0;
    std::size_t num_bidders_mismatches = 0;
    std::vector<std::string> thin_auction_urls;
    std::vector<std::string> inconsistent_auction_urls;

    std::string to_json() const;
};

struct SynthCorpus {
    RawTable table;
    std::vector<TruthLabel> truth;  // one label per (auction, bidder) pair
    DefectManifest defects;
};

/// Deterministic for a given config: same seed, same corpus.
/// `schema` renames the logical columns in the generated header.
SynthCorpus generate(const SynthConfig& config, const SchemaConfig& schema = SchemaConfig::defaults());

/// auction_url, bidder_id, label ("shill" / "honest").
std::string format_truth(const std::vector<TruthLabel>& truth);

}  // namespace shillbid

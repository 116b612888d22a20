#include "shillbid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "shillbid/csv.hpp"
#include "shillbid/error.hpp"

namespace shillbid {

namespace {

using namespace std::chrono;

constexpr std::int64_t kDay = 86400;
constexpr std::array<std::int64_t, 5> kDurationDays = {1, 3, 5, 7, 10};

// mt19937_64 output is fixed by the standard; the helpers below avoid the
// implementation-defined std:: distributions so corpora are portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // inclusive range
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return real() < p; }

    std::size_t weighted(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double x = real() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (x < weights[i]) return i;
            x -= weights[i];
        }
        return weights.size() - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(uniform(0, std::int64_t(i) - 1))]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::string format_raw_date(SiteTime t) {
    static constexpr std::array<const char*, 12> kMonths = {
        "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    const year_month_day ymd{floor<days>(t)};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s-%02u-%02d", kMonths[unsigned(ymd.month()) - 1],
                  unsigned(ymd.day()), int(ymd.year()) % 100);
    return buf;
}

std::string format_raw_time(SiteTime t, const std::string& zone) {
    const auto tod = (t - floor<days>(t)).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", static_cast<long long>(tod / 3600),
                  static_cast<long long>(tod / 60 % 60), static_cast<long long>(tod % 60));
    return std::string(buf) + " " + zone;
}

std::string format_raw_money(Money m, bool us_style) {
    if (!us_style) return m.to_string() + " $";
    // "US $1,299.99"
    std::string digits = std::to_string(m.cents() / 100);
    for (int pos = static_cast<int>(digits.size()) - 3; pos > 0; pos -= 3) {
        digits.insert(static_cast<std::size_t>(pos), ",");
    }
    char frac[8];
    std::snprintf(frac, sizeof frac, ".%02lld", static_cast<long long>(m.cents() % 100));
    return "US $" + digits + frac;
}

// Sequence of participant indices with no index repeated back to back.
std::vector<std::size_t> arrange_without_repeats(std::vector<std::size_t> counts, Rng& rng) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    std::vector<std::size_t> seq;
    seq.reserve(total);
    const std::size_t none = counts.size();
    std::size_t prev = none;
    for (std::size_t remaining = total; remaining > 0; --remaining) {
        std::size_t pick = none;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (i != prev && counts[i] * 2 > remaining) pick = i;  // must go now
        }
        if (pick == none) {
            std::vector<double> w(counts.size(), 0.0);
            bool any = false;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                if (i != prev && counts[i] > 0) {
                    w[i] = static_cast<double>(counts[i]);
                    any = true;
                }
            }
            if (!any) break;  // infeasible remainder; caller checks length
            pick = rng.weighted(w);
        }
        seq.push_back(pick);
        --counts[pick];
        prev = pick;
    }
    return seq;
}

struct PlannedBid {
    std::int64_t offset = 0;  // seconds after the auction start
    std::string bidder;
    bool shill = false;
    Money amount;
};

}  // namespace

void SynthConfig::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError(std::string(name) + " must lie in [0, 1]");
        }
    };
    if (num_auctions == 0) throw ConfigError("number of auctions must be positive");
    prob(shill_fraction, "shill fraction");
    prob(honest_repeat_prob, "honest repeat probability");
    prob(shill_participation, "shill participation");
    prob(duplicate_rate, "duplicate rate");
    prob(missing_bidder_rate, "missing bidder rate");
    prob(thin_auction_rate, "thin auction rate");
    prob(inconsistent_rate, "inconsistent rate");
    prob(count_mismatch_rate, "count mismatch rate");
    if (!(shill_entry_quantile > 0.0 && shill_entry_quantile <= 0.25)) {
        throw ConfigError("shill entry quantile must lie in (0, 0.25]");
    }
    double weight_sum = 0.0;
    for (double w : duration_weights) {
        if (!(w >= 0.0)) throw ConfigError("duration weights must be non-negative");
        weight_sum += w;
    }
    if (!(weight_sum > 0.0)) throw ConfigError("duration weights must not all be zero");
    if (shill_run_length < 2) throw ConfigError("shill run length must be at least 2");
    if (min_honest_bidders < 2 || min_honest_bidders > max_honest_bidders) {
        throw ConfigError("honest bidders per auction must satisfy 2 <= min <= max");
    }
    if (num_sellers == 0) throw ConfigError("need at least one seller");
    const auto shills = static_cast<std::size_t>(std::llround(double(bidder_pool) * shill_fraction));
    if (bidder_pool < shills + max_honest_bidders) {
        throw ConfigError("bidder pool too small for the honest bidders per auction");
    }
    const std::size_t worst_case =
        2 * max_honest_bidders + max_shills_per_auction * shill_run_length;
    if (worst_case > max_bids_per_auction) {
        throw ConfigError("infeasible: up to " + std::to_string(worst_case) +
                          " bids per auction exceed the limit of " +
                          std::to_string(max_bids_per_auction));
    }
    // a shill block with maximal gaps has to fit in the entry window of a
    // one-day auction
    const double window = shill_entry_quantile * double(kDay);
    if (double(shill_run_length - 1) * 300.0 + 0.01 * double(kDay) + 60.0 >= window) {
        throw ConfigError("infeasible: shill run length does not fit the entry window");
    }
    if (min_increment < Money::from_cents(500) || max_increment < min_increment) {
        throw ConfigError("bid increments must satisfy 5.00 <= min <= max");
    }
}

SynthCorpus generate(const SynthConfig& config, const SchemaConfig& schema) {
    config.validate();
    Rng rng(config.seed);
    SynthCorpus corpus;

    // Column layout: the default scrape header with the logical columns
    // renamed per schema.
    const auto defaults = SchemaConfig::defaults();
    corpus.table.columns = default_raw_columns();
    for (std::size_t f = 0; f < kRawFieldCount; ++f) {
        auto it = std::find(corpus.table.columns.begin(), corpus.table.columns.end(),
                            defaults.headers[f]);
        *it = schema.headers[f];
    }
    auto col = [&](std::string_view name) {
        auto it = std::find(default_raw_columns().begin(), default_raw_columns().end(), name);
        return static_cast<std::size_t>(it - default_raw_columns().begin());
    };
    const std::size_t c_url = col("Auction URL"), c_pid = col("Product ID"),
                      c_title = col("Product Title"), c_loc = col("Product Location"),
                      c_seller = col("Seller Name"), c_srating = col("Seller Rating"),
                      c_sfeedback = col("Seller Feedback %"), c_slink = col("Seller Account Link"),
                      c_bidder = col("Bidder ID"), c_brating = col("Bidder Rating"),
                      c_blink = col("Bidder Account Link"), c_amount = col("Bid Amount"),
                      c_bdate = col("Bid Date"), c_btime = col("Bid Time"),
                      c_sdate = col("Auction Starting Date"), c_stime = col("Auction Starting Time"),
                      c_edate = col("Auction End Date"), c_etime = col("Auction End Time"),
                      c_dur = col("Auction Duration"), c_sprice = col("Starting Price"),
                      c_wprice = col("Winning Price"), c_nbids = col("Number of Bids"),
                      c_nbidders = col("Number of Bidders"), c_ship = col("Shipping Cost"),
                      c_cond = col("Item Condition"), c_lseller = col("Listing Seller Name"),
                      c_lstart = col("Listing Start Time"), c_lnbids = col("Listing Number of Bids");

    // Bidder pool; shill ids are a random subset.
    std::vector<std::string> pool;
    for (std::size_t i = 1; i <= config.bidder_pool; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "bidder_%05zu", i);
        pool.emplace_back(buf);
    }
    rng.shuffle(pool);
    const auto n_shills =
        static_cast<std::size_t>(std::llround(double(config.bidder_pool) * config.shill_fraction));
    const std::vector<std::string> shills(pool.begin(), pool.begin() + std::ptrdiff_t(n_shills));
    const std::vector<std::string> honest(pool.begin() + std::ptrdiff_t(n_shills), pool.end());
    const std::unordered_set<std::string> shill_set(shills.begin(), shills.end());

    std::vector<std::string> sellers;
    for (std::size_t i = 1; i <= config.num_sellers; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "seller_%04zu", i);
        sellers.emplace_back(buf);
    }
    std::vector<std::vector<std::size_t>> shills_of_seller(sellers.size());
    for (std::size_t s = 0; s < shills.size(); ++s) {
        shills_of_seller[static_cast<std::size_t>(
                             rng.uniform(0, std::int64_t(sellers.size()) - 1))]
            .push_back(s);
    }

    // FNV-1a, so irrelevant columns are stable across standard libraries
    auto fnv = [](const std::string& id) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : id) h = (h ^ c) * 0x100000001b3ull;
        return h;
    };
    auto rating_of = [&](const std::string& id, std::uint64_t modulus) {
        return std::to_string(fnv(id) % modulus);
    };

    const std::vector<double> duration_weights(config.duration_weights.begin(),
                                               config.duration_weights.end());
    std::vector<std::vector<std::string>> rows;

    for (std::size_t a = 0; a < config.num_auctions; ++a) {
        const std::string url = "https://www.ebay.com/itm/" + std::to_string(182600000000ull + a * 37);
        const std::size_t seller_idx =
            static_cast<std::size_t>(rng.uniform(0, std::int64_t(sellers.size()) - 1));
        const std::string& seller = sellers[seller_idx];
        const std::int64_t days = kDurationDays[rng.weighted(duration_weights)];
        const std::int64_t duration = days * kDay;
        const SiteTime latest_start = config.reference_epoch - seconds{duration + 3600};
        const SiteTime start = latest_start - seconds{rng.uniform(0, 45 * kDay)};
        const SiteTime end = start + seconds{duration};

        const bool thin = rng.chance(config.thin_auction_rate);
        std::vector<PlannedBid> bids;
        std::set<std::int64_t> used_offsets;

        // shill blocks: [first, last] offsets
        std::vector<std::pair<std::int64_t, std::int64_t>> blocks;
        if (!thin) {
            std::vector<std::size_t> joining;
            for (auto s : shills_of_seller[seller_idx]) {
                if (rng.chance(config.shill_participation)) joining.push_back(s);
            }
            rng.shuffle(joining);
            if (joining.size() > config.max_shills_per_auction) {
                joining.resize(config.max_shills_per_auction);
            }
            const auto run = static_cast<std::int64_t>(config.shill_run_length);
            const auto lo = static_cast<std::int64_t>(std::ceil(0.01 * double(duration)));
            for (auto s : joining) {
                const std::int64_t gap = rng.uniform(30, 300);
                const std::int64_t span = (run - 1) * gap;
                const auto hi = static_cast<std::int64_t>(config.shill_entry_quantile *
                                                          double(duration)) - span - 1;
                for (int attempt = 0; attempt < 100; ++attempt) {
                    const std::int64_t t0 = rng.uniform(lo, hi);
                    const bool clash = std::any_of(blocks.begin(), blocks.end(), [&](auto& b) {
                        return t0 <= b.second + 60 && t0 + span >= b.first - 60;
                    });
                    if (clash) continue;
                    blocks.emplace_back(t0, t0 + span);
                    for (std::int64_t k = 0; k < run; ++k) {
                        bids.push_back({t0 + k * gap, shills[s], true, {}});
                        used_offsets.insert(t0 + k * gap);
                    }
                    break;
                }
            }
        }
        auto in_block = [&](std::int64_t t) {
            return std::any_of(blocks.begin(), blocks.end(),
                               [&](auto& b) { return t >= b.first && t <= b.second; });
        };
        auto fresh_offset = [&](std::int64_t lo, std::int64_t hi) {
            for (;;) {
                const std::int64_t t = rng.uniform(lo, hi);
                if (!in_block(t) && used_offsets.insert(t).second) return t;
            }
        };

        // honest participants and their bid sequence
        std::vector<std::string> participants;
        std::vector<std::size_t> sequence;
        if (thin) {
            const auto n = static_cast<std::size_t>(rng.uniform(1, 4));
            const auto k = n == 1 ? 1 : static_cast<std::size_t>(rng.uniform(2, std::min<std::int64_t>(3, n)));
            std::set<std::size_t> picked;
            while (picked.size() < k) {
                picked.insert(static_cast<std::size_t>(rng.uniform(0, std::int64_t(honest.size()) - 1)));
            }
            for (auto p : picked) participants.push_back(honest[p]);
            std::size_t prev = k;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t pick = 0;
                do {
                    pick = static_cast<std::size_t>(rng.uniform(0, std::int64_t(k) - 1));
                } while (k > 1 && pick == prev);
                sequence.push_back(pick);
                prev = pick;
            }
        } else {
            const auto k = static_cast<std::size_t>(rng.uniform(
                std::int64_t(config.min_honest_bidders), std::int64_t(config.max_honest_bidders)));
            std::set<std::size_t> picked;
            while (picked.size() < k) {
                picked.insert(static_cast<std::size_t>(rng.uniform(0, std::int64_t(honest.size()) - 1)));
            }
            for (auto p : picked) participants.push_back(honest[p]);
            rng.shuffle(participants);
            std::vector<std::size_t> counts(k, 1);
            for (auto& c : counts) c += rng.chance(config.honest_repeat_prob) ? 1 : 0;
            std::size_t total = 0;
            for (auto c : counts) total += c;
            while (total < 5) {
                auto& c = counts[static_cast<std::size_t>(rng.uniform(0, std::int64_t(k) - 1))];
                if (c < 2) {
                    ++c;
                    ++total;
                }
            }
            sequence = arrange_without_repeats(counts, rng);
            if (sequence.size() != total) {
                throw InvariantError("internal error: honest bid arrangement failed");
            }
        }

        // honest times: sorted, the latest one late in the auction so it
        // follows every shill block
        std::vector<std::int64_t> honest_times;
        honest_times.push_back(fresh_offset(static_cast<std::int64_t>(0.75 * double(duration)), duration - 1));
        while (honest_times.size() < sequence.size()) honest_times.push_back(fresh_offset(1, duration - 1));
        std::sort(honest_times.begin(), honest_times.end());
        for (std::size_t i = 0; i < sequence.size(); ++i) {
            bids.push_back({honest_times[i], participants[sequence[i]], false, {}});
        }
        std::sort(bids.begin(), bids.end(),
                  [](const PlannedBid& x, const PlannedBid& y) { return x.offset < y.offset; });

        // prices
        Money starting;
        if (rng.chance(0.4)) {
            starting = Money::from_cents(rng.uniform(1, 50) * 100 - (rng.chance(0.5) ? 1 : 0));
        } else {
            starting = Money::from_cents(rng.uniform(100, 400) * 100);
        }
        Money current = starting;
        for (auto& b : bids) {
            const auto steps = (config.max_increment - config.min_increment).cents() / 50;
            current = current + config.min_increment + Money::from_cents(rng.uniform(0, steps) * 50);
            b.amount = current;
        }
        const Money final_price = bids.back().amount;
        Money winning_text_price = final_price;
        Money starting_text_price = starting;

        std::set<std::string> distinct;
        for (const auto& b : bids) distinct.insert(b.bidder);
        std::int64_t scraped_bids = static_cast<std::int64_t>(bids.size());
        std::int64_t scraped_bidders = static_cast<std::int64_t>(distinct.size());

        if (thin) {
            ++corpus.defects.thin_auctions;
            corpus.defects.thin_auction_urls.push_back(url);
        } else {
            if (rng.chance(config.inconsistent_rate)) {
                ++corpus.defects.inconsistent_auctions;
                corpus.defects.inconsistent_auction_urls.push_back(url);
                if (rng.chance(0.5)) {
                    starting_text_price = final_price + Money::from_cents(rng.uniform(1, 50) * 100);
                } else {
                    winning_text_price = final_price - Money::from_cents(500);
                }
            }
            if (rng.chance(config.count_mismatch_rate)) {
                const auto variant = rng.uniform(0, 2);
                if (variant != 1) {
                    scraped_bids += rng.uniform(1, 5);
                    ++corpus.defects.num_bids_mismatches;
                }
                if (variant != 0) {
                    scraped_bidders += rng.uniform(1, 3);
                    ++corpus.defects.num_bidders_mismatches;
                }
            }
        }

        for (const auto& b : distinct) {
            corpus.truth.push_back({url, b, shill_set.contains(b)});
        }

        // missing-id rows: extra lines without a bidder
        std::vector<PlannedBid> blanks;
        for (const auto& b : bids) {
            if (rng.chance(config.missing_bidder_rate)) {
                const auto t = fresh_offset(1, duration - 1);
                blanks.push_back({t, (blanks.size() % 2 == 0) ? "" : "  ", false, b.amount});
                ++corpus.defects.missing_bidder_rows;
            }
        }

        std::vector<PlannedBid> emitted = bids;
        emitted.insert(emitted.end(), blanks.begin(), blanks.end());
        // bid history lists the most recent bid first
        std::sort(emitted.begin(), emitted.end(),
                  [](const PlannedBid& x, const PlannedBid& y) { return x.offset > y.offset; });

        const std::string product_id = std::to_string(3000000 + a);
        const std::string start_date = format_raw_date(start);
        const std::string start_time = format_raw_time(start, config.zone_label);
        for (const auto& b : emitted) {
            std::vector<std::string> row(corpus.table.columns.size());
            const SiteTime when = start + seconds{b.offset};
            row[c_url] = url;
            row[c_pid] = product_id;
            row[c_title] = "Apple iPhone 7 " + std::string(a % 2 ? "32GB" : "128GB") +
                           ", \"Unlocked\" Smartphone";
            row[c_loc] = a % 3 ? "New York, NY" : "Toronto, ON";
            row[c_seller] = seller;
            row[c_srating] = rating_of(seller, 5000);
            row[c_sfeedback] = std::to_string(90 + fnv(seller) % 11) + "%";
            row[c_slink] = "https://www.ebay.com/usr/" + seller;
            row[c_bidder] = b.bidder;
            row[c_brating] = b.bidder.empty() || b.bidder == "  " ? "" : rating_of(b.bidder, 900);
            row[c_blink] = b.bidder.empty() || b.bidder == "  " ? "" : "https://www.ebay.com/usr/" + b.bidder;
            row[c_amount] = format_raw_money(b.amount, b.amount >= Money::from_cents(100000));
            row[c_bdate] = format_raw_date(when);
            row[c_btime] = format_raw_time(when, config.zone_label);
            row[c_sdate] = start_date;
            row[c_stime] = start_time;
            row[c_edate] = format_raw_date(end);
            row[c_etime] = format_raw_time(end, config.zone_label);
            row[c_dur] = std::to_string(days);
            row[c_sprice] = format_raw_money(starting_text_price, false);
            row[c_wprice] = format_raw_money(winning_text_price, winning_text_price >= Money::from_cents(100000));
            row[c_nbids] = std::to_string(scraped_bids);
            row[c_nbidders] = std::to_string(scraped_bidders);
            row[c_ship] = a % 4 ? "Free" : "12.50 $";
            row[c_cond] = a % 5 ? "Used" : "New";
            row[c_lseller] = seller;
            row[c_lstart] = start_date + " " + start_time;
            row[c_lnbids] = row[c_nbids];
            rows.push_back(std::move(row));
        }
    }

    // duplicates: a re-scraped copy of the row appended at the end
    const std::size_t originals = rows.size();
    for (std::size_t i = 0; i < originals; ++i) {
        if (rng.chance(config.duplicate_rate)) {
            rows.push_back(rows[i]);
            ++corpus.defects.duplicate_rows;
        }
    }

    corpus.table.records.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        corpus.table.records.push_back({i + 2, std::move(rows[i])});
    }
    return corpus;
}

std::string DefectManifest::to_json() const {
    nlohmann::ordered_json j;
    j["duplicate_rows"] = duplicate_rows;
    j["missing_bidder_rows"] = missing_bidder_rows;
    j["thin_auctions"] = thin_auctions;
    j["inconsistent_auctions"] = inconsistent_auctions;
    j["num_bids_mismatches"] = num_bids_mismatches;
    j["num_bidders_mismatches"] = num_bidders_mismatches;
    j["thin_auction_urls"] = thin_auction_urls;
    j["inconsistent_auction_urls"] = inconsistent_auction_urls;
    return j.dump(2) + "\n";
}

std::string format_truth(const std::vector<TruthLabel>& truth) {
    std::string out = "auction_url,bidder_id,label\n";
    for (const auto& t : truth) {
        csv::append_row(out, {t.auction_url, t.bidder_id, t.shill ? "shill" : "honest"});
    }
    return out;
}

}  // namespace shillbid

#include "shillbid/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "shillbid/error.hpp"
#include "shillbid/parallel.hpp"

namespace shillbid {

namespace {

using namespace std::chrono;

constexpr std::int64_t kSecondsPerDay = 86400;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::optional<unsigned> month_from_name(std::string_view name) {
    static constexpr std::array<std::string_view, 12> kShort = {
        "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
    static constexpr std::array<std::string_view, 12> kLong = {
        "january", "february", "march",     "april",   "may",      "june",
        "july",    "august",   "september", "october", "november", "december"};
    for (unsigned i = 0; i < 12; ++i) {
        if (iequals(name, kShort[i]) || iequals(name, kLong[i])) return i + 1;
    }
    if (iequals(name, "sept")) return 9;
    return std::nullopt;
}

// "HH:MM:SS" -> seconds since midnight
std::optional<std::int64_t> parse_clock(std::string_view text) {
    if (text.size() != 8 || text[2] != ':' || text[5] != ':') return std::nullopt;
    int h = 0, m = 0, s = 0;
    if (!parse_int(text.substr(0, 2), h) || !parse_int(text.substr(3, 2), m) ||
        !parse_int(text.substr(6, 2), s)) {
        return std::nullopt;
    }
    if (h < 0 || h > 23 || m < 0 || m > 59 || s < 0 || s > 59) return std::nullopt;
    return h * 3600 + m * 60 + s;
}

SiteTime make_site_time(int y, unsigned mo, unsigned d, std::int64_t secs_of_day,
                        std::string_view what) {
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok()) throw ParseError("invalid calendar date in '" + std::string(what) + "'");
    return local_days{ymd} + seconds{secs_of_day};
}

}  // namespace

SiteTime merge_datetime(std::string_view date_text, std::string_view time_text) {
    const auto date = trim(date_text);
    const auto d1 = date.find('-');
    const auto d2 = d1 == std::string_view::npos ? d1 : date.find('-', d1 + 1);
    if (d2 == std::string_view::npos) {
        throw ParseError("malformed date '" + std::string(date_text) + "'");
    }
    const auto month_name = date.substr(0, d1);
    const auto month = month_from_name(month_name);
    if (!month) throw ParseError("unknown month name '" + std::string(month_name) + "'");
    unsigned day_num = 0;
    int year_num = 0;
    const auto year_text = date.substr(d2 + 1);
    if (!parse_int(date.substr(d1 + 1, d2 - d1 - 1), day_num) || !parse_int(year_text, year_num) ||
        (year_text.size() != 2 && year_text.size() != 4)) {
        throw ParseError("malformed date '" + std::string(date_text) + "'");
    }
    if (year_text.size() == 2) year_num += 2000;

    auto time = trim(time_text);
    const auto space = time.find(' ');
    const auto clock = time.substr(0, space);
    if (space != std::string_view::npos) {
        const auto zone = trim(time.substr(space + 1));
        if (!std::all_of(zone.begin(), zone.end(),
                         [](char c) { return std::isalpha(static_cast<unsigned char>(c)); })) {
            throw ParseError("malformed clock time '" + std::string(time_text) + "'");
        }
    }
    const auto secs = parse_clock(clock);
    if (!secs) throw ParseError("malformed clock time '" + std::string(time_text) + "'");
    return make_site_time(year_num, *month, day_num, *secs, date_text);
}

std::string format_site_time(SiteTime t) {
    const auto days = floor<std::chrono::days>(t);
    const year_month_day ymd{days};
    const auto tod = (t - days).count();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), static_cast<long long>(tod / 3600),
                  static_cast<long long>(tod / 60 % 60), static_cast<long long>(tod % 60));
    return buf;
}

SiteTime parse_site_time(std::string_view text, std::chrono::minutes utc_offset) {
    auto t = trim(text);
    bool utc = false;
    if (!t.empty() && (t.back() == 'Z' || t.back() == 'z')) {
        utc = true;
        t.remove_suffix(1);
    }
    if (t.size() != 19 || t[4] != '-' || t[7] != '-' || (t[10] != ' ' && t[10] != 'T')) {
        throw ParseError("expected 'YYYY-MM-DD HH:MM:SS', got '" + std::string(text) + "'");
    }
    int y = 0;
    unsigned mo = 0, d = 0;
    if (!parse_int(t.substr(0, 4), y) || !parse_int(t.substr(5, 2), mo) ||
        !parse_int(t.substr(8, 2), d)) {
        throw ParseError("malformed date in '" + std::string(text) + "'");
    }
    const auto secs = parse_clock(t.substr(11));
    if (!secs) throw ParseError("malformed clock time in '" + std::string(text) + "'");
    auto local = make_site_time(y, mo, d, *secs, text);
    if (utc) local += utc_offset;
    return local;
}

std::chrono::minutes parse_utc_offset(std::string_view text) {
    auto t = trim(text);
    if (t.empty()) throw ParseError("empty UTC offset");
    int sign = 1;
    if (t.front() == '+' || t.front() == '-') {
        sign = t.front() == '-' ? -1 : 1;
        t.remove_prefix(1);
    }
    int hours = 0, mins = 0;
    bool ok = false;
    if (const auto colon = t.find(':'); colon != std::string_view::npos) {
        ok = parse_int(t.substr(0, colon), hours) && t.size() - colon - 1 == 2 &&
             parse_int(t.substr(colon + 1), mins);
    } else if (t.size() == 4) {
        ok = parse_int(t.substr(0, 2), hours) && parse_int(t.substr(2), mins);
    } else if (t.size() <= 2) {
        ok = parse_int(t, hours);
    }
    if (!ok || hours > 14 || mins > 59) {
        throw ParseError("malformed UTC offset '" + std::string(text) + "'");
    }
    return std::chrono::minutes{sign * (hours * 60 + mins)};
}

std::int64_t to_countdown_seconds(SiteTime event, SiteTime reference) {
    if (event > reference) {
        throw ParseError("event " + format_site_time(event) + " is after the reference epoch " +
                         format_site_time(reference));
    }
    return (reference - event).count();
}

Money parse_money(std::string_view text) {
    std::optional<std::string> number;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (!is_digit(c) && c != '.' && c != ',') {
            ++i;
            continue;
        }
        const std::size_t begin = i;
        bool has_digit = false;
        while (i < text.size() && (is_digit(text[i]) || text[i] == '.' || text[i] == ',')) {
            has_digit = has_digit || is_digit(text[i]);
            ++i;
        }
        if (!has_digit) continue;
        if (number) throw ParseError("more than one number in '" + std::string(text) + "'");
        if (begin > 0 && text[begin - 1] == '-') {
            throw ParseError("negative amount '" + std::string(text) + "'");
        }
        std::string token(text.substr(begin, i - begin));
        // a trailing separator belongs to the surrounding prose ("650.50 $.")
        while (!token.empty() && (token.back() == '.' || token.back() == ',')) token.pop_back();
        token.erase(std::remove(token.begin(), token.end(), ','), token.end());
        number = std::move(token);
    }
    if (!number) throw ParseError("no amount in '" + std::string(text) + "'");
    auto money = Money::parse(*number);
    if (!money) throw ParseError("malformed amount '" + std::string(text) + "'");
    return *money;
}

std::int64_t duration_days_to_seconds(std::int64_t days) {
    if (days <= 0) throw ParseError("auction duration must be positive, got " + std::to_string(days));
    return days * kSecondsPerDay;
}

bool is_standard_duration(std::int64_t days) {
    return days == 1 || days == 3 || days == 5 || days == 7 || days == 10;
}

RawTable drop_irrelevant_columns(const RawTable& table, std::span<const std::string> keep) {
    std::vector<std::size_t> indices;
    indices.reserve(keep.size());
    for (const auto& name : keep) indices.push_back(table.require_column(name));

    RawTable out;
    out.columns.assign(keep.begin(), keep.end());
    out.records.reserve(table.records.size());
    for (const auto& r : table.records) {
        RawRecord projected;
        projected.line = r.line;
        projected.fields.reserve(indices.size());
        for (auto idx : indices) projected.fields.push_back(r.fields.at(idx));
        out.records.push_back(std::move(projected));
    }
    return out;
}

namespace {

struct RowHash {
    std::size_t operator()(const std::vector<std::string>* row) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (const auto& f : *row) {
            h ^= std::hash<std::string>{}(f) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

struct RowEq {
    bool operator()(const std::vector<std::string>* a, const std::vector<std::string>* b) const {
        return *a == *b;
    }
};

}  // namespace

RawTable dedup_records(const RawTable& table) {
    RawTable out;
    out.columns = table.columns;
    std::unordered_set<const std::vector<std::string>*, RowHash, RowEq> seen;
    seen.reserve(table.records.size());
    for (const auto& r : table.records) {
        if (seen.insert(&r.fields).second) out.records.push_back(r);
    }
    return out;
}

RawTable drop_missing_bidder(const RawTable& table, std::string_view bidder_column) {
    const auto idx = table.require_column(bidder_column);
    RawTable out;
    out.columns = table.columns;
    for (const auto& r : table.records) {
        if (!trim(r.fields.at(idx)).empty()) out.records.push_back(r);
    }
    return out;
}

ReconcileOutcome reconcile_counts(AuctionGroup& auction) {
    const auto actual_bids = static_cast<std::int64_t>(auction.rows.size());
    std::set<std::string_view> distinct;
    for (const auto& r : auction.rows) distinct.insert(r.bid.bidder_id);
    const auto actual_bidders = static_cast<std::int64_t>(distinct.size());

    ReconcileOutcome outcome;
    for (auto& r : auction.rows) {
        if (r.bid.num_bids != actual_bids) outcome.bids_adjusted = true;
        if (r.bid.num_bidders != actual_bidders) outcome.bidders_adjusted = true;
        r.bid.num_bids = actual_bids;
        r.bid.num_bidders = actual_bidders;
    }
    return outcome;
}

std::size_t filter_low_activity_auctions(std::vector<AuctionGroup>& auctions, std::size_t min_bids,
                                         std::size_t* rows_removed) {
    std::size_t removed = 0, rows = 0;
    std::erase_if(auctions, [&](const AuctionGroup& a) {
        if (a.rows.size() >= min_bids) return false;
        ++removed;
        rows += a.rows.size();
        return true;
    });
    if (rows_removed) *rows_removed = rows;
    return removed;
}

Inconsistency classify_inconsistency(const AuctionGroup& auction) {
    if (auction.rows.empty()) return Inconsistency::None;
    const auto& head = auction.rows.front().bid;
    if (head.winning_bid <= Money{} || head.starting_price > head.winning_bid) {
        return Inconsistency::Price;
    }
    for (const auto& r : auction.rows) {
        if (r.bid.bid_amount > head.winning_bid) return Inconsistency::Price;
    }
    if (head.start_time_sec - head.end_time_sec != head.auction_duration_sec) {
        return Inconsistency::Timing;
    }
    for (const auto& r : auction.rows) {
        if (r.bid.bid_submit_time_sec > head.start_time_sec ||
            r.bid.bid_submit_time_sec < head.end_time_sec) {
            return Inconsistency::Timing;
        }
    }
    return Inconsistency::None;
}

InconsistencyCounts filter_inconsistent_auctions(std::vector<AuctionGroup>& auctions) {
    InconsistencyCounts counts;
    std::erase_if(auctions, [&](const AuctionGroup& a) {
        switch (classify_inconsistency(a)) {
            case Inconsistency::None:
                return false;
            case Inconsistency::Price:
                ++counts.price_auctions;
                break;
            case Inconsistency::Timing:
                ++counts.timing_auctions;
                break;
        }
        counts.rows += a.rows.size();
        return true;
    });
    return counts;
}

std::vector<BidRecord> assign_identifiers(std::vector<AuctionGroup> auctions,
                                          std::vector<std::string>* keys) {
    std::sort(auctions.begin(), auctions.end(), [](const AuctionGroup& a, const AuctionGroup& b) {
        const auto sa = a.rows.empty() ? 0 : a.rows.front().bid.start_time_sec;
        const auto sb = b.rows.empty() ? 0 : b.rows.front().bid.start_time_sec;
        if (sa != sb) return sa > sb;
        return a.key < b.key;
    });
    for (std::size_t i = 1; i < auctions.size(); ++i) {
        if (auctions[i].key == auctions[i - 1].key) {
            throw SchemaError("auction key '" + auctions[i].key + "' maps to two bid sets");
        }
    }

    if (keys) {
        keys->clear();
        for (const auto& a : auctions) keys->push_back(a.key);
    }

    std::size_t total = 0;
    for (const auto& a : auctions) total += a.rows.size();
    std::vector<BidRecord> out;
    out.reserve(total);

    std::uint64_t auction_id = 0;
    std::uint64_t record_id = 0;
    for (auto& a : auctions) {
        ++auction_id;
        std::sort(a.rows.begin(), a.rows.end(), [](const StagedRow& x, const StagedRow& y) {
            const auto& l = x.bid;
            const auto& r = y.bid;
            if (l.bid_submit_time_sec != r.bid_submit_time_sec) {
                return l.bid_submit_time_sec > r.bid_submit_time_sec;
            }
            if (l.bid_amount != r.bid_amount) return l.bid_amount < r.bid_amount;
            if (l.bidder_id != r.bidder_id) return l.bidder_id < r.bidder_id;
            return l.record_id < r.record_id;
        });
        for (auto& row : a.rows) {
            BidRecord rec = std::move(row.bid);
            rec.auction_id = auction_id;
            rec.record_id = ++record_id;
            out.push_back(std::move(rec));
        }
    }
    return out;
}

SiteTime PipelineConfig::default_reference_epoch() {
    return local_days{year{2017} / July / 7};
}

namespace {

DatasetTotals totals_of_groups(const std::vector<AuctionGroup>& groups) {
    DatasetTotals t;
    std::unordered_set<std::string_view> bidders, sellers;
    std::map<std::int64_t, std::size_t> durations;
    std::int64_t price_sum = 0;
    std::int64_t duration_sum = 0;
    for (const auto& g : groups) {
        if (g.rows.empty()) continue;
        ++t.auctions;
        t.records += g.rows.size();
        const auto& head = g.rows.front().bid;
        sellers.insert(head.seller_id);
        for (const auto& r : g.rows) bidders.insert(r.bid.bidder_id);
        price_sum += head.winning_bid.cents();
        duration_sum += head.auction_duration_sec;
        ++durations[head.auction_duration_sec / kSecondsPerDay];
    }
    t.bidder_ids = bidders.size();
    t.seller_ids = sellers.size();
    if (t.auctions > 0) {
        t.avg_winning_price = static_cast<double>(price_sum) / (100.0 * double(t.auctions));
        t.avg_duration_days =
            static_cast<double>(duration_sum) / (double(kSecondsPerDay) * double(t.auctions));
        std::size_t best = 0;
        for (const auto& [days, n] : durations) {
            if (n > best) {
                best = n;
                t.mode_duration_days = days;
            }
        }
    }
    return t;
}

std::string zero_padded(std::uint64_t id) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%020llu", static_cast<unsigned long long>(id));
    return buf;
}

// Shared tail of both pipeline entry points: grouping through id assignment.
PipelineResult finish_pipeline(std::vector<StagedRow> rows, const std::set<std::string>& keys,
                               CleansingReport report, const PipelineConfig& config) {
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<AuctionGroup> groups;
    groups.reserve(keys.size());
    for (const auto& k : keys) {
        slot.emplace(k, groups.size());
        groups.push_back({k, {}});
    }
    for (auto& r : rows) {
        auto it = slot.find(r.auction_key);
        if (it == slot.end()) {
            it = slot.emplace(r.auction_key, groups.size()).first;
            groups.push_back({r.auction_key, {}});
        }
        groups[it->second].rows.push_back(std::move(r));
    }
    rows.clear();

    for (const auto& g : groups) {
        if (g.rows.empty()) continue;
        const auto& h = g.rows.front().bid;
        for (const auto& r : g.rows) {
            const auto& b = r.bid;
            if (b.seller_id != h.seller_id || b.starting_price != h.starting_price ||
                b.winning_bid != h.winning_bid || b.auction_duration_sec != h.auction_duration_sec ||
                b.start_time_sec != h.start_time_sec || b.end_time_sec != h.end_time_sec) {
                throw SchemaError("auction '" + g.key +
                                  "': rows disagree on auction-level fields");
            }
        }
    }

    for (auto& g : groups) {
        const auto outcome = reconcile_counts(g);
        report.num_bids_adjusted += outcome.bids_adjusted;
        report.num_bidders_adjusted += outcome.bidders_adjusted;
    }

    report.low_bid_auctions_removed =
        filter_low_activity_auctions(groups, config.min_bids, &report.low_bid_rows_removed);

    const auto inconsistent = filter_inconsistent_auctions(groups);
    report.inconsistent_auctions_removed = inconsistent.auctions();
    report.inconsistent_price_auctions = inconsistent.price_auctions;
    report.inconsistent_timing_auctions = inconsistent.timing_auctions;
    report.inconsistent_rows_removed = inconsistent.rows;

    if (config.min_winning_price) {
        const Money floor_price = *config.min_winning_price;
        std::erase_if(groups, [&](const AuctionGroup& g) {
            if (g.rows.front().bid.winning_bid > floor_price) return false;
            ++report.scrape_filter_auctions_removed;
            report.scrape_filter_rows_removed += g.rows.size();
            return true;
        });
    }

    const auto after = totals_of_groups(groups);
    PipelineResult result;
    result.records = assign_identifiers(std::move(groups), &result.auction_keys);
    try {
        validate_records(result.records);
    } catch (const InvariantError& e) {
        throw InvariantError(std::string("internal error: pipeline output violates an invariant: ") +
                             e.what());
    }
    report.after = after;
    report.after.attributes = preprocessed_columns().size();
    result.report = std::move(report);
    return result;
}

StagedRow stage_row(const RawRecord& raw, const PipelineConfig& config) {
    const auto& f = raw.fields;
    auto field = [&](RawField which) -> std::string_view {
        return f[static_cast<std::size_t>(which)];
    };
    auto count = [&](RawField which) -> std::int64_t {
        std::int64_t v = -1;
        return parse_int(trim(field(which)), v) ? v : -1;
    };

    try {
        StagedRow row;
        row.auction_key = std::string(trim(field(RawField::AuctionUrl)));
        auto& b = row.bid;
        b.seller_id = std::string(trim(field(RawField::SellerId)));
        b.bidder_id = std::string(trim(field(RawField::BidderId)));
        if (row.auction_key.empty()) throw ParseError("empty auction URL");
        if (b.seller_id.empty()) throw ParseError("empty seller id");

        const auto bid_time = merge_datetime(field(RawField::BidDate), field(RawField::BidTime));
        const auto start = merge_datetime(field(RawField::StartDate), field(RawField::StartTime));
        const auto end = merge_datetime(field(RawField::EndDate), field(RawField::EndTime));

        b.bid_amount = parse_money(field(RawField::BidAmount));
        b.starting_price = parse_money(field(RawField::StartingPrice));
        b.winning_bid = parse_money(field(RawField::WinningPrice));

        auto days_text = trim(field(RawField::DurationDays));
        std::int64_t days = 0;
        {
            auto [ptr, ec] = std::from_chars(days_text.data(), days_text.data() + days_text.size(), days);
            const auto rest = trim(std::string_view(ptr, days_text.data() + days_text.size() - ptr));
            if (ec != std::errc() || !(rest.empty() || iequals(rest, "day") || iequals(rest, "days"))) {
                throw ParseError("malformed auction duration '" + std::string(days_text) + "'");
            }
        }
        b.auction_duration_sec = duration_days_to_seconds(days);

        b.bid_submit_time_sec = to_countdown_seconds(bid_time, config.reference_epoch);
        b.start_time_sec = to_countdown_seconds(start, config.reference_epoch);
        b.end_time_sec = to_countdown_seconds(end, config.reference_epoch);

        b.num_bids = count(RawField::NumBids);
        b.num_bidders = count(RawField::NumBidders);
        return row;
    } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(raw.line) + ": " + e.what());
    }
}

}  // namespace

PipelineResult run_pipeline(const RawTable& raw, const PipelineConfig& config) {
    CleansingReport report;
    const auto keep = config.schema.keep_list();
    {
        const auto url_idx = raw.require_column(config.schema.header(RawField::AuctionUrl));
        const auto bidder_idx = raw.require_column(config.schema.header(RawField::BidderId));
        const auto seller_idx = raw.require_column(config.schema.header(RawField::SellerId));
        std::unordered_set<std::string_view> urls, bidders, sellers;
        for (const auto& r : raw.records) {
            urls.insert(trim(r.fields.at(url_idx)));
            if (auto b = trim(r.fields.at(bidder_idx)); !b.empty()) bidders.insert(b);
            sellers.insert(trim(r.fields.at(seller_idx)));
        }
        report.before.auctions = urls.size();
        report.before.records = raw.records.size();
        report.before.bidder_ids = bidders.size();
        report.before.seller_ids = sellers.size();
        report.before.attributes = raw.columns.size();
    }

    auto table = drop_irrelevant_columns(raw, keep);
    report.irrelevant_columns_dropped = raw.columns.size() - keep.size();

    auto deduped = dedup_records(table);
    report.duplicate_records_removed = table.records.size() - deduped.records.size();
    table = RawTable{};

    std::set<std::string> keys;
    const auto url_idx = static_cast<std::size_t>(RawField::AuctionUrl);
    for (const auto& r : deduped.records) keys.emplace(trim(r.fields[url_idx]));

    auto present = drop_missing_bidder(deduped, config.schema.header(RawField::BidderId));
    report.missing_bidder_rows_removed = deduped.records.size() - present.records.size();
    deduped = RawTable{};

    std::vector<StagedRow> rows(present.records.size());
    parallel_for(rows.size(), config.jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) rows[i] = stage_row(present.records[i], config);
    });
    for (const auto& r : rows) {
        if (!is_standard_duration(r.bid.auction_duration_sec / kSecondsPerDay)) {
            ++report.nonstandard_duration_rows;
        }
    }
    present = RawTable{};

    {
        // pre-filter averages, measured on the typed rows
        std::unordered_map<std::string_view, const BidRecord*> first;
        for (const auto& r : rows) first.emplace(r.auction_key, &r.bid);
        std::int64_t price_sum = 0, duration_sum = 0;
        std::map<std::int64_t, std::size_t> durations;
        for (const auto& [key, b] : first) {
            price_sum += b->winning_bid.cents();
            duration_sum += b->auction_duration_sec;
            ++durations[b->auction_duration_sec / kSecondsPerDay];
        }
        if (!first.empty()) {
            const double n = static_cast<double>(first.size());
            report.before.avg_winning_price = static_cast<double>(price_sum) / (100.0 * n);
            report.before.avg_duration_days = static_cast<double>(duration_sum) / (86400.0 * n);
            std::size_t best = 0;
            for (const auto& [days, count] : durations) {
                if (count > best) {
                    best = count;
                    report.before.mode_duration_days = days;
                }
            }
        }
    }

    return finish_pipeline(std::move(rows), keys, std::move(report), config);
}

PipelineResult run_pipeline(std::span<const BidRecord> records, const PipelineConfig& config) {
    CleansingReport report;
    {
        std::unordered_set<std::uint64_t> auctions;
        std::unordered_set<std::string_view> bidders, sellers;
        for (const auto& r : records) {
            auctions.insert(r.auction_id);
            if (!trim(r.bidder_id).empty()) bidders.insert(r.bidder_id);
            sellers.insert(r.seller_id);
        }
        report.before.auctions = auctions.size();
        report.before.records = records.size();
        report.before.bidder_ids = bidders.size();
        report.before.seller_ids = sellers.size();
        report.before.attributes = preprocessed_columns().size();
    }

    struct RecordHash {
        std::size_t operator()(const BidRecord* r) const {
            std::size_t h = std::hash<std::uint64_t>{}(r->record_id);
            h ^= std::hash<std::uint64_t>{}(r->auction_id) + 0x9e3779b97f4a7c15ull + (h << 6);
            h ^= std::hash<std::string>{}(r->bidder_id) + 0x9e3779b97f4a7c15ull + (h << 6);
            h ^= std::hash<std::int64_t>{}(r->bid_submit_time_sec) + (h << 6) + (h >> 2);
            return h;
        }
    };
    struct RecordEq {
        bool operator()(const BidRecord* a, const BidRecord* b) const { return *a == *b; }
    };
    std::unordered_set<const BidRecord*, RecordHash, RecordEq> seen;
    std::set<std::string> keys;
    std::vector<StagedRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        if (!seen.insert(&r).second) {
            ++report.duplicate_records_removed;
            continue;
        }
        auto key = zero_padded(r.auction_id);
        keys.insert(key);
        if (trim(r.bidder_id).empty()) {
            ++report.missing_bidder_rows_removed;
            continue;
        }
        if (!is_standard_duration(r.auction_duration_sec / kSecondsPerDay) ||
            r.auction_duration_sec % kSecondsPerDay != 0) {
            ++report.nonstandard_duration_rows;
        }
        rows.push_back({std::move(key), r});
    }

    {
        std::vector<AuctionGroup> groups;
        std::map<std::string_view, std::size_t> slot;
        for (const auto& r : rows) {
            auto [it, inserted] = slot.emplace(r.auction_key, groups.size());
            if (inserted) groups.push_back({r.auction_key, {r}});
        }
        const auto t = totals_of_groups(groups);
        report.before.avg_winning_price = t.avg_winning_price;
        report.before.avg_duration_days = t.avg_duration_days;
        report.before.mode_duration_days = t.mode_duration_days;
    }

    return finish_pipeline(std::move(rows), keys, std::move(report), config);
}

std::string CleansingReport::to_json() const {
    using nlohmann::ordered_json;
    auto totals = [](const DatasetTotals& t) {
        ordered_json j;
        j["auctions"] = t.auctions;
        j["records"] = t.records;
        j["bidder_ids"] = t.bidder_ids;
        j["seller_ids"] = t.seller_ids;
        j["attributes"] = t.attributes;
        j["avg_winning_price"] = t.avg_winning_price;
        j["avg_duration_days"] = t.avg_duration_days;
        j["mode_duration_days"] = t.mode_duration_days;
        return j;
    };
    ordered_json j;
    j["irrelevant_columns_dropped"] = irrelevant_columns_dropped;
    j["duplicate_records_removed"] = duplicate_records_removed;
    j["missing_bidder_rows_removed"] = missing_bidder_rows_removed;
    j["low_bid_auctions_removed"] = low_bid_auctions_removed;
    j["low_bid_rows_removed"] = low_bid_rows_removed;
    j["inconsistent_auctions_removed"] = inconsistent_auctions_removed;
    j["inconsistent_price_auctions"] = inconsistent_price_auctions;
    j["inconsistent_timing_auctions"] = inconsistent_timing_auctions;
    j["inconsistent_rows_removed"] = inconsistent_rows_removed;
    j["scrape_filter_auctions_removed"] = scrape_filter_auctions_removed;
    j["scrape_filter_rows_removed"] = scrape_filter_rows_removed;
    j["num_bids_adjusted"] = num_bids_adjusted;
    j["num_bidders_adjusted"] = num_bidders_adjusted;
    j["nonstandard_duration_rows"] = nonstandard_duration_rows;
    j["before"] = totals(before);
    j["after"] = totals(after);
    return j.dump(2) + "\n";
}

}  // namespace shillbid

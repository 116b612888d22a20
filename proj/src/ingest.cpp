#include "shillbid/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "shillbid/csv.hpp"
#include "shillbid/error.hpp"

namespace shillbid {

namespace {

constexpr std::array<std::string_view, kRawFieldCount> kRawFieldKeys = {
    "auction_url", "seller_id",  "bidder_id",     "bid_amount",    "bid_date",
    "bid_time",    "start_date", "start_time",    "end_date",      "end_time",
    "duration_days", "starting_price", "winning_price", "num_bids", "num_bidders",
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
    if (text.empty()) return false;
    const auto* begin = text.data();
    const auto* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string_view strip_bom(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    return text;
}

}  // namespace

std::string_view raw_field_key(RawField f) { return kRawFieldKeys[static_cast<std::size_t>(f)]; }

SchemaConfig SchemaConfig::defaults() {
    return SchemaConfig{{
        "Auction URL",
        "Seller Name",
        "Bidder ID",
        "Bid Amount",
        "Bid Date",
        "Bid Time",
        "Auction Starting Date",
        "Auction Starting Time",
        "Auction End Date",
        "Auction End Time",
        "Auction Duration",
        "Starting Price",
        "Winning Price",
        "Number of Bids",
        "Number of Bidders",
    }};
}

SchemaConfig SchemaConfig::parse(std::string_view text) {
    SchemaConfig schema = defaults();
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("schema line " + std::to_string(line_no) + ": expected key = header");
        }
        const auto key = trim(line.substr(0, eq));
        const auto header = trim(line.substr(eq + 1));
        auto it = std::find(kRawFieldKeys.begin(), kRawFieldKeys.end(), key);
        if (it == kRawFieldKeys.end()) {
            throw ConfigError("schema line " + std::to_string(line_no) + ": unknown field '" +
                              std::string(key) + "'");
        }
        if (header.empty()) {
            throw ConfigError("schema line " + std::to_string(line_no) + ": empty header");
        }
        schema.headers[static_cast<std::size_t>(it - kRawFieldKeys.begin())] = std::string(header);
    }
    return schema;
}

SchemaConfig SchemaConfig::load(const std::filesystem::path& path) {
    std::string text;
    try {
        text = csv::read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse(text);
}

std::vector<std::string> SchemaConfig::keep_list() const {
    return {headers.begin(), headers.end()};
}

const std::vector<std::string>& default_raw_columns() {
    static const std::vector<std::string> columns = {
        "Auction URL",          "Product ID",           "Product Title",
        "Product Location",     "Seller Name",          "Seller Rating",
        "Seller Feedback %",    "Seller Account Link",  "Bidder ID",
        "Bidder Rating",        "Bidder Account Link",  "Bid Amount",
        "Bid Date",             "Bid Time",             "Auction Starting Date",
        "Auction Starting Time", "Auction End Date",    "Auction End Time",
        "Auction Duration",     "Starting Price",       "Winning Price",
        "Number of Bids",       "Number of Bidders",    "Shipping Cost",
        "Item Condition",       "Listing Seller Name",  "Listing Start Time",
        "Listing Number of Bids",
    };
    return columns;
}

RawReadResult parse_raw(std::string_view text, const SchemaConfig& schema) {
    text = strip_bom(text);
    csv::Reader reader(text);
    csv::Row row;
    if (!reader.next(row)) throw SchemaError("missing header row");
    if (row.malformed) throw SchemaError("malformed header row");

    RawReadResult result;
    result.table.columns = std::move(row.fields);
    const auto& columns = result.table.columns;
    {
        std::set<std::string_view> seen;
        for (const auto& c : columns) {
            if (!seen.insert(c).second) throw SchemaError("duplicate header column '" + c + "'");
        }
    }
    std::vector<std::string> missing;
    for (const auto& h : schema.headers) {
        if (!result.table.column_index(h)) missing.push_back(h);
    }
    if (!missing.empty()) {
        std::string msg = "header does not match schema; missing column(s):";
        for (const auto& m : missing) msg += " '" + m + "'";
        throw SchemaError(msg);
    }

    auto& report = result.report;
    std::vector<std::size_t> missing_counts(columns.size(), 0);
    while (reader.next(row)) {
        ++report.row_count;
        std::string reason;
        if (row.malformed) {
            reason = "malformed quoting";
        } else if (row.fields.size() != columns.size()) {
            reason = "column count";
        }
        if (!reason.empty()) {
            ++report.rejected_row_count;
            report.rejections.push_back({row.line, std::move(reason), std::move(row.fields)});
            continue;
        }
        for (std::size_t i = 0; i < row.fields.size(); ++i) {
            if (trim(row.fields[i]).empty()) ++missing_counts[i];
        }
        ++report.accepted_row_count;
        result.table.records.push_back({row.line, std::move(row.fields)});
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        report.missing_values[columns[i]] = missing_counts[i];
    }
    return result;
}

RawReadResult read_raw(const std::filesystem::path& path, const SchemaConfig& schema) {
    return parse_raw(csv::read_file(path), schema);
}

void write_rejects(const SchemaReport& report, const std::filesystem::path& path) {
    std::string out = "line,reason,fields\n";
    for (const auto& r : report.rejections) {
        std::string joined;
        for (std::size_t i = 0; i < r.fields.size(); ++i) {
            if (i) joined.push_back(',');
            csv::append_field(joined, r.fields[i]);
        }
        csv::append_row(out, {std::to_string(r.line), r.reason, joined});
    }
    csv::write_file(path, out);
}

std::string format_raw(const RawTable& table) {
    std::string out;
    csv::append_row(out, table.columns);
    for (const auto& r : table.records) csv::append_row(out, r.fields);
    return out;
}

void write_raw(const RawTable& table, const std::filesystem::path& path) {
    csv::write_file(path, format_raw(table));
}

const std::vector<std::string>& preprocessed_columns() {
    static const std::vector<std::string> columns = {
        "record_id",      "auction_id",  "seller_id",           "bidder_id",
        "bid_amount",     "bid_submit_time_sec", "num_bidders", "num_bids",
        "starting_price", "winning_bid", "auction_duration_sec", "start_time_sec",
        "end_time_sec",
    };
    return columns;
}

std::string format_preprocessed(std::span<const BidRecord> records) {
    validate_records(records);
    std::vector<const BidRecord*> order;
    order.reserve(records.size());
    for (const auto& r : records) order.push_back(&r);
    std::sort(order.begin(), order.end(),
              [](const BidRecord* a, const BidRecord* b) { return canonical_less(*a, *b); });

    std::string out;
    out.reserve(64 + records.size() * 96);
    csv::append_row(out, preprocessed_columns());
    auto num = [&out](auto v) {
        out.append(std::to_string(v));
        out.push_back(',');
    };
    for (const auto* r : order) {
        num(r->record_id);
        num(r->auction_id);
        csv::append_field(out, r->seller_id);
        out.push_back(',');
        csv::append_field(out, r->bidder_id);
        out.push_back(',');
        out.append(r->bid_amount.to_string());
        out.push_back(',');
        num(r->bid_submit_time_sec);
        num(r->num_bidders);
        num(r->num_bids);
        out.append(r->starting_price.to_string());
        out.push_back(',');
        out.append(r->winning_bid.to_string());
        out.push_back(',');
        num(r->auction_duration_sec);
        num(r->start_time_sec);
        out.append(std::to_string(r->end_time_sec));
        out.push_back('\n');
    }
    return out;
}

void write_preprocessed(std::span<const BidRecord> records, const std::filesystem::path& path) {
    csv::write_file(path, format_preprocessed(records));
}

bool looks_preprocessed(std::string_view text) {
    text = strip_bom(text);
    csv::Reader reader(text);
    csv::Row row;
    return reader.next(row) && row.fields == preprocessed_columns();
}

std::vector<BidRecord> parse_preprocessed(std::string_view text) {
    text = strip_bom(text);
    csv::Reader reader(text);
    csv::Row row;
    if (!reader.next(row)) throw SchemaError("missing header row");
    if (row.fields != preprocessed_columns()) {
        throw SchemaError("header does not match the preprocessed dataset layout");
    }

    std::vector<BidRecord> records;
    while (reader.next(row)) {
        const auto where = "line " + std::to_string(row.line) + ": ";
        if (row.malformed) throw SchemaError(where + "malformed quoting");
        if (row.fields.size() != preprocessed_columns().size()) {
            throw SchemaError(where + "column count");
        }
        const auto& f = row.fields;
        BidRecord r;
        auto need_int = [&](std::size_t i, auto& out) {
            if (!parse_int(f[i], out)) {
                throw SchemaError(where + "bad integer in " + preprocessed_columns()[i]);
            }
        };
        auto need_money = [&](std::size_t i, Money& out) {
            auto m = Money::parse(f[i]);
            if (!m) throw SchemaError(where + "bad amount in " + preprocessed_columns()[i]);
            out = *m;
        };
        need_int(0, r.record_id);
        need_int(1, r.auction_id);
        r.seller_id = f[2];
        r.bidder_id = f[3];
        need_money(4, r.bid_amount);
        need_int(5, r.bid_submit_time_sec);
        need_int(6, r.num_bidders);
        need_int(7, r.num_bids);
        need_money(8, r.starting_price);
        need_money(9, r.winning_bid);
        need_int(10, r.auction_duration_sec);
        need_int(11, r.start_time_sec);
        need_int(12, r.end_time_sec);
        records.push_back(std::move(r));
    }
    validate_records(records);
    return records;
}

std::vector<BidRecord> read_preprocessed(const std::filesystem::path& path) {
    return parse_preprocessed(csv::read_file(path));
}

const std::vector<std::string>& sb_columns() {
    static const std::vector<std::string> columns = [] {
        std::vector<std::string> c = {"auction_id", "bidder_id"};
        for (auto p : kAllPatterns) c.emplace_back(pattern_column(p));
        return c;
    }();
    return columns;
}

std::string format_metric(double value) {
    value += 0.0;  // -0.0 -> +0.0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
    if (ec != std::errc()) throw InvariantError("cannot format metric value");
    return std::string(buf, ptr);
}

namespace {

bool in_unit_range(double v) { return v >= 0.0 && v <= 1.0; }

template <typename T>
std::vector<const T*> sorted_by_pair(std::span<const T> items) {
    std::vector<const T*> order;
    order.reserve(items.size());
    for (const auto& i : items) order.push_back(&i);
    std::sort(order.begin(), order.end(), [](const T* a, const T* b) {
        if (a->auction_id != b->auction_id) return a->auction_id < b->auction_id;
        return a->bidder_id < b->bidder_id;
    });
    return order;
}

}  // namespace

std::string format_sb_dataset(std::span<const SBInstance> instances) {
    for (const auto& inst : instances) {
        for (auto p : kAllPatterns) {
            if (!in_unit_range(inst[p])) {
                throw OutlierError("outlier: auction " + std::to_string(inst.auction_id) +
                                   ", bidder '" + inst.bidder_id + "', " +
                                   std::string(pattern_column(p)) + " = " +
                                   std::to_string(inst[p]) + " is outside [0, 1]");
            }
        }
    }
    std::string out;
    out.reserve(128 + instances.size() * 96);
    csv::append_row(out, sb_columns());
    for (const auto* inst : sorted_by_pair(instances)) {
        out.append(std::to_string(inst->auction_id));
        out.push_back(',');
        csv::append_field(out, inst->bidder_id);
        for (auto p : kAllPatterns) {
            out.push_back(',');
            out.append(format_metric((*inst)[p]));
        }
        out.push_back('\n');
    }
    return out;
}

void write_sb_dataset(std::span<const SBInstance> instances, const std::filesystem::path& path) {
    csv::write_file(path, format_sb_dataset(instances));
}

std::vector<SBInstance> parse_sb_dataset(std::string_view text) {
    text = strip_bom(text);
    csv::Reader reader(text);
    csv::Row row;
    if (!reader.next(row)) throw SchemaError("missing header row");
    if (row.fields != sb_columns()) {
        throw SchemaError("header does not match the SB dataset layout");
    }
    std::vector<SBInstance> instances;
    while (reader.next(row)) {
        const auto where = "line " + std::to_string(row.line) + ": ";
        if (row.malformed) throw SchemaError(where + "malformed quoting");
        if (row.fields.size() != sb_columns().size()) throw SchemaError(where + "column count");
        SBInstance inst;
        if (!parse_int(row.fields[0], inst.auction_id)) {
            throw SchemaError(where + "bad auction_id");
        }
        inst.bidder_id = row.fields[1];
        for (std::size_t i = 0; i < kPatternCount; ++i) {
            const auto& cell = row.fields[2 + i];
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw SchemaError(where + "bad value in " + sb_columns()[2 + i]);
            }
            inst.metrics[i] = v;
        }
        instances.push_back(std::move(inst));
    }
    return instances;
}

std::vector<SBInstance> read_sb_dataset(const std::filesystem::path& path) {
    return parse_sb_dataset(csv::read_file(path));
}

std::string format_scores(std::span<const ScoredInstance> scores) {
    std::string out = "auction_id,bidder_id,weighted_score\n";
    for (const auto* s : sorted_by_pair(scores)) {
        out.append(std::to_string(s->auction_id));
        out.push_back(',');
        csv::append_field(out, s->bidder_id);
        out.push_back(',');
        out.append(format_metric(s->score));
        out.push_back('\n');
    }
    return out;
}

}  // namespace shillbid

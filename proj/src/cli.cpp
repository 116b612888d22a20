#include "shillbid/cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shillbid/csv.hpp"
#include "shillbid/dataset.hpp"
#include "shillbid/error.hpp"
#include "shillbid/ingest.hpp"
#include "shillbid/metrics.hpp"
#include "shillbid/preprocess.hpp"
#include "shillbid/synth.hpp"

namespace shillbid {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::string in;
    std::string out;
    std::string report;
    std::string schema;
    std::string epoch = "2017-07-07 00:00:00";
    std::string tz_offset = "-07:00";
    std::size_t min_bids = 5;
    std::string min_winning_price;
    double threshold = 0.7;
    double aggressive_sob = 0.5;
    double aggressive_br = 0.1;
    std::string weights;
    std::string scores;
    std::string preprocessed;
    std::string truth;
    std::string manifest;
    std::size_t jobs = 1;
};

std::string sidecar(const std::string& base, const std::string& suffix) { return base + suffix; }

SchemaConfig schema_of(const RunConfig& rc) {
    return rc.schema.empty() ? SchemaConfig::defaults() : SchemaConfig::load(rc.schema);
}

SiteTime epoch_of(const RunConfig& rc) {
    try {
        return parse_site_time(rc.epoch, parse_utc_offset(rc.tz_offset));
    } catch (const ParseError& e) {
        throw ConfigError(std::string("--epoch/--tz-offset: ") + e.what());
    }
}

StatsConfig stats_config_of(const RunConfig& rc) {
    StatsConfig sc;
    sc.high_value_threshold = rc.threshold;
    sc.aggressive_min_sob = rc.aggressive_sob;
    sc.aggressive_min_br = rc.aggressive_br;
    return sc;
}

int cmd_synth(const RunConfig& rc, const SynthConfig& sc_in, std::ostream& out) {
    SynthConfig sc = sc_in;
    sc.reference_epoch = epoch_of(rc);
    const auto corpus = generate(sc, schema_of(rc));
    write_raw(corpus.table, rc.out);
    const auto truth_path = rc.truth.empty() ? sidecar(rc.out, ".truth.csv") : rc.truth;
    const auto manifest_path = rc.manifest.empty() ? sidecar(rc.out, ".defects.json") : rc.manifest;
    csv::write_file(truth_path, format_truth(corpus.truth));
    csv::write_file(manifest_path, corpus.defects.to_json());
    out << "wrote " << corpus.table.records.size() << " raw rows to " << rc.out << "\n";
    return kExitOk;
}

int cmd_preprocess(const RunConfig& rc, std::ostream& out) {
    PipelineConfig config;
    config.schema = schema_of(rc);
    config.reference_epoch = epoch_of(rc);
    config.min_bids = rc.min_bids;
    config.jobs = rc.jobs;
    if (!rc.min_winning_price.empty()) {
        auto price = Money::parse(rc.min_winning_price);
        if (!price) throw ConfigError("--min-winning-price: malformed amount");
        config.min_winning_price = price;
    }

    const std::string text = csv::read_file(rc.in);
    nlohmann::ordered_json report;
    PipelineResult result;
    if (looks_preprocessed(text)) {
        const auto records = parse_preprocessed(text);
        result = run_pipeline(records, config);
        report["input_format"] = "preprocessed";
    } else {
        auto raw = parse_raw(text, config.schema);
        if (!raw.report.rejections.empty()) {
            write_rejects(raw.report, sidecar(rc.out, ".rejects.csv"));
        }
        result = run_pipeline(raw.table, config);
        report["input_format"] = "raw";
        nlohmann::ordered_json schema;
        schema["row_count"] = raw.report.row_count;
        schema["accepted_row_count"] = raw.report.accepted_row_count;
        schema["rejected_row_count"] = raw.report.rejected_row_count;
        schema["missing_values"] = raw.report.missing_values;
        report["schema"] = schema;
    }
    report["cleansing"] = nlohmann::ordered_json::parse(result.report.to_json());

    write_preprocessed(result.records, rc.out);
    const auto report_path = rc.report.empty() ? sidecar(rc.out, ".report.json") : rc.report;
    csv::write_file(report_path, report.dump(2) + "\n");
    out << "kept " << result.report.after.auctions << " of " << result.report.before.auctions
        << " auctions (" << result.records.size() << " records)\n";
    return kExitOk;
}

int cmd_features(const RunConfig& rc, std::ostream& out) {
    const auto weights = rc.weights.empty() ? WeightConfig::defaults() : load_weights(rc.weights);
    const auto records = read_preprocessed(rc.in);
    if (records.empty()) throw SchemaError("preprocessed dataset '" + rc.in + "' has no records");
    const auto auctions = group_auctions(records);
    const auto aggregates = compute_global_aggregates(auctions);
    const auto instances = build_sb_dataset(auctions, aggregates, rc.jobs);

    write_sb_dataset(instances, rc.out);

    std::vector<ScoredInstance> scores;
    scores.reserve(instances.size());
    for (const auto& inst : instances) {
        scores.push_back({inst.auction_id, inst.bidder_id, weighted_score(inst, weights)});
    }
    csv::write_file(rc.scores.empty() ? sidecar(rc.out, ".scores.csv") : rc.scores,
                    format_scores(scores));

    const auto winners = winners_of(auctions);
    const auto stats = pattern_stats(instances, stats_config_of(rc), &winners);
    csv::write_file(rc.report.empty() ? sidecar(rc.out, ".stats.json") : rc.report, stats.to_json());
    out << "wrote " << instances.size() << " SB instances for " << auctions.size()
        << " auctions to " << rc.out << "\n";
    return kExitOk;
}

int cmd_stats(const RunConfig& rc, std::ostream& out) {
    const auto instances = read_sb_dataset(rc.in);
    std::optional<WinnerSet> winners;
    if (!rc.preprocessed.empty()) {
        const auto records = read_preprocessed(rc.preprocessed);
        winners = winners_of(group_auctions(records));
    }
    const auto stats = pattern_stats(instances, stats_config_of(rc), winners ? &*winners : nullptr);
    const auto table = stats.to_table();
    out << table;
    if (!rc.out.empty()) csv::write_file(rc.out, table);
    if (!rc.report.empty()) csv::write_file(rc.report, stats.to_json());
    return kExitOk;
}

int cmd_validate(const RunConfig& rc, std::ostream& out) {
    const std::string text = csv::read_file(rc.in);
    if (looks_preprocessed(text)) {
        const auto records = parse_preprocessed(text);
        out << "preprocessed dataset OK: " << records.size() << " records\n";
        return kExitOk;
    }
    const auto instances = parse_sb_dataset(text);
    const auto violations = scan_outliers(instances);
    for (const auto& v : violations) {
        out << "outlier: auction " << v.auction_id << ", bidder '" << v.bidder_id << "', "
            << pattern_column(v.pattern) << " = " << v.value << "\n";
    }
    std::set<std::pair<std::uint64_t, std::string>> seen;
    for (const auto& inst : instances) {
        if (!seen.emplace(inst.auction_id, inst.bidder_id).second) {
            throw InvariantError("duplicate instance for auction " +
                                 std::to_string(inst.auction_id) + ", bidder '" + inst.bidder_id +
                                 "'");
        }
    }
    if (!violations.empty()) {
        out << violations.size() << " outlier value(s) found\n";
        return kExitInvariant;
    }
    out << "SB dataset OK: " << instances.size() << " instances, no outliers\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shill-bidding dataset pipeline: synth -> preprocess -> features -> stats"};
    app.require_subcommand(1);
    RunConfig rc;
    SynthConfig sc;

    auto add_epoch = [&](CLI::App* cmd) {
        cmd->add_option("--epoch", rc.epoch, "Reference epoch, site time (append Z for UTC)")
            ->capture_default_str();
        cmd->add_option("--tz-offset", rc.tz_offset, "Site timezone as a fixed UTC offset")
            ->capture_default_str();
    };
    auto add_jobs = [&](CLI::App* cmd) {
        cmd->add_option("--jobs", rc.jobs, "Worker threads (does not change output)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };
    auto add_stats_flags = [&](CLI::App* cmd) {
        cmd->add_option("--threshold", rc.threshold, "High-value threshold (strict >)")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd->add_option("--aggressive-sob", rc.aggressive_sob, "Aggressive: SOB >= this")
            ->capture_default_str();
        cmd->add_option("--aggressive-br", rc.aggressive_br, "Aggressive: BR > this")
            ->capture_default_str();
    };

    auto* synth = app.add_subcommand("synth", "Generate a synthetic raw auction corpus");
    synth->add_option("--out", rc.out, "Raw CSV to write")->required();
    synth->add_option("--truth", rc.truth, "Truth labels CSV (default: <out>.truth.csv)");
    synth->add_option("--manifest", rc.manifest, "Defect manifest (default: <out>.defects.json)");
    synth->add_option("--seed", sc.seed)->capture_default_str();
    synth->add_option("--auctions", sc.num_auctions)->capture_default_str();
    synth->add_option("--bidders", sc.bidder_pool, "Bidder pool size")->capture_default_str();
    synth->add_option("--sellers", sc.num_sellers)->capture_default_str();
    synth->add_option("--shill-fraction", sc.shill_fraction)->capture_default_str();
    synth->add_option("--run-length", sc.shill_run_length, "Shill successive-bid run")
        ->capture_default_str();
    synth->add_option("--duplicate-rate", sc.duplicate_rate)->capture_default_str();
    synth->add_option("--missing-rate", sc.missing_bidder_rate)->capture_default_str();
    synth->add_option("--thin-rate", sc.thin_auction_rate)->capture_default_str();
    synth->add_option("--inconsistent-rate", sc.inconsistent_rate)->capture_default_str();
    synth->add_option("--mismatch-rate", sc.count_mismatch_rate)->capture_default_str();
    synth->add_option("--schema", rc.schema, "Raw schema file (logical = header)");
    add_epoch(synth);

    auto* pre = app.add_subcommand("preprocess", "Clean raw records into the auction dataset");
    pre->add_option("--in", rc.in, "Raw CSV (or a preprocessed CSV to re-clean)")->required();
    pre->add_option("--out", rc.out, "Preprocessed CSV to write")->required();
    pre->add_option("--report", rc.report, "Cleansing report JSON (default: <out>.report.json)");
    pre->add_option("--schema", rc.schema, "Raw schema file (logical = header)");
    pre->add_option("--min-bids", rc.min_bids, "Drop auctions with fewer bids")
        ->capture_default_str();
    pre->add_option("--min-winning-price", rc.min_winning_price,
                    "Optional: keep auctions whose winning price exceeds this");
    add_epoch(pre);
    add_jobs(pre);

    auto* feat = app.add_subcommand("features", "Compute the SB dataset from preprocessed data");
    feat->add_option("--in", rc.in, "Preprocessed CSV")->required();
    feat->add_option("--out", rc.out, "SB dataset CSV to write")->required();
    feat->add_option("--report", rc.report, "Pattern statistics JSON (default: <out>.stats.json)");
    feat->add_option("--scores", rc.scores, "Weighted scores CSV (default: <out>.scores.csv)");
    feat->add_option("--weights", rc.weights, "Weight file (pattern=value lines)");
    add_stats_flags(feat);
    add_jobs(feat);

    auto* stats = app.add_subcommand("stats", "Summarize an SB dataset");
    stats->add_option("--in", rc.in, "SB dataset CSV")->required();
    stats->add_option("--preprocessed", rc.preprocessed,
                      "Preprocessed CSV, enables winner-based buckets");
    stats->add_option("--out", rc.out, "Write the text table here as well");
    stats->add_option("--report", rc.report, "Write the JSON report here");
    add_stats_flags(stats);

    auto* validate = app.add_subcommand("validate", "Check a preprocessed or SB dataset");
    validate->add_option("--in", rc.in, "Preprocessed or SB CSV")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (*synth) return cmd_synth(rc, sc, out);
        if (*pre) return cmd_preprocess(rc, out);
        if (*feat) return cmd_features(rc, out);
        if (*stats) return cmd_stats(rc, out);
        if (*validate) return cmd_validate(rc, out);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InvariantError& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const SchemaError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace shillbid

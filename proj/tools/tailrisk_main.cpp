// tailrisk: command-line front end for the tail-risk scaling library.
//
// Subcommands:
//   simulate    Monte Carlo estimator study from a JSON config
//   fit         power-law scaling fit of subsampled block maxima from a CSV
//   timeseries  per-period / rolling-window block-maximum statistics
//   convert     moment magnitude <-> radiated energy
//   generate    synthetic samples from the built-in families
//
// Every command that writes files also writes manifest.json next to them;
// the manifest is the only output containing a wall-clock timestamp, so
// reruns with identical inputs and seeds are byte-identical elsewhere.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailrisk/block_maxima.hpp"
#include "tailrisk/csv.hpp"
#include "tailrisk/distributions.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/json_io.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/scaling_fit.hpp"
#include "tailrisk/series.hpp"
#include "tailrisk/simulation.hpp"
#include "tailrisk/tail_estimators.hpp"
#include "tailrisk/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tailrisk;

namespace {

// ---------------------------------------------------------------------------
// Shared option bundles
// ---------------------------------------------------------------------------

struct InputOptions {
    std::string input;
    std::string value_col;
    std::string time_col;
    std::string time_format = "%Y-%m-%d";
    std::string transform = "none";
    bool drop_zero = false;
    std::string units;
};

struct PipelineFlags {
    std::size_t grid_points = default_grid_points;
    std::size_t subsamples = default_subsamples;
    std::size_t max_block = 10000;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
};

void add_input_options(CLI::App* cmd, InputOptions& opts) {
    cmd->add_option("--input", opts.input, "input CSV file")->required();
    cmd->add_option("--value-col", opts.value_col, "name of the value column")->required();
    cmd->add_option("--time-col", opts.time_col,
                    "name of the timestamp column (omit to use row order)");
    cmd->add_option("--time-format", opts.time_format,
                    "timestamp format, %Y/%m/%d fields plus literals")
        ->capture_default_str();
    cmd->add_option("--transform", opts.transform,
                    "value transform applied after loading")
        ->check(CLI::IsMember({"none", "magnitude-to-energy", "price-to-loss"}))
        ->capture_default_str();
    cmd->add_flag("--drop-zero", opts.drop_zero, "drop records whose value is zero");
    cmd->add_option("--units", opts.units, "unit label recorded with the series");
}

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags) {
    cmd->add_option("--grid-points", flags.grid_points, "log-spaced block sizes in the grid")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
        ->capture_default_str();
    cmd->add_option("--subsamples", flags.subsamples, "subsample replicates per block size")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
        ->capture_default_str();
    cmd->add_option("--max-block", flags.max_block, "hard ceiling on block sizes")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
        ->capture_default_str();
    cmd->add_option("--seed", flags.seed, "base seed for subsampling")->capture_default_str();
    cmd->add_option("--out-dir", flags.out_dir, "directory for output files")
        ->capture_default_str();
}

// Loads a series per the input flags, applying the price-to-loss transform
// at series level (it needs consecutive records, not single cells).
ObservationSeries load_series(const InputOptions& opts) {
    CsvSchema schema;
    schema.value_column = opts.value_col;
    schema.time_column = opts.time_col;
    schema.time_format = opts.time_format;
    schema.drop_zero = opts.drop_zero;
    schema.units = opts.units;
    if (opts.transform == "magnitude-to-energy") {
        schema.transform = ValueTransform::magnitude_to_energy;
        if (schema.units.empty()) schema.units = "J";
    }
    ObservationSeries series = load_catalog_csv(opts.input, schema);
    if (opts.transform == "price-to-loss") {
        series = prices_to_losses(series);
        if (series.records.size() < 2) {
            throw DataError("price-to-loss left fewer than 2 positive losses");
        }
    }
    return series;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << content;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& effective_config, std::uint64_t seed,
                    std::vector<std::string> outputs) {
    RunManifest manifest;
    manifest.command = command;
    manifest.config_digest = fnv1a_hex(effective_config.dump());
    manifest.seed = seed;
    manifest.tool_version = tool_version;
    manifest.created_utc = utc_now_iso8601();
    manifest.outputs = std::move(outputs);
    write_file(out_dir / "manifest.json", manifest_to_json(manifest));
}

json input_options_json(const InputOptions& opts) {
    json j;
    j["input"] = opts.input;
    j["value_col"] = opts.value_col;
    j["time_col"] = opts.time_col;
    j["time_format"] = opts.time_format;
    j["transform"] = opts.transform;
    j["drop_zero"] = opts.drop_zero;
    j["units"] = opts.units;
    return j;
}

json pipeline_flags_json(const PipelineFlags& flags) {
    json j;
    j["grid_points"] = flags.grid_points;
    j["subsamples"] = flags.subsamples;
    j["max_block"] = flags.max_block;
    j["seed"] = flags.seed;
    return j;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t replications = 0;
    double tail_frac = 0.0;
};

int cmd_simulate(const SimulateArgs& args) {
    // A bad study configuration is a usage problem, not a data problem: it
    // should exit like any other bad flag.
    SimConfig config = [&] {
        std::ifstream in(args.config_path, std::ios::binary);
        if (!in) {
            throw std::invalid_argument("cannot open config '" + args.config_path + "'");
        }
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            return sim_config_from_json(buf.str());
        } catch (const std::exception& e) {
            throw std::invalid_argument("config '" + args.config_path + "': " + e.what());
        }
    }();
    if (args.seed_set) config.base_seed = args.seed;
    if (args.replications > 0) config.replications = args.replications;
    if (args.tail_frac > 0.0) config.tail_fraction = args.tail_frac;

    const SimSummary summary = run_study(config);

    const fs::path out_dir(args.out_dir);
    fs::create_directories(out_dir);
    std::ostringstream csv;
    write_summary_csv(summary, csv);
    write_file(out_dir / "summary.csv", csv.str());
    write_file(out_dir / "summary.json", summary_to_json(summary));
    const std::string canonical = sim_config_to_json(config);
    write_file(out_dir / "config.json", canonical);
    write_manifest(out_dir, "simulate", json::parse(canonical), config.base_seed,
                   {"summary.csv", "summary.json", "config.json"});

    std::cout << "simulate: " << summary.cells.size() << " cells -> " << out_dir.string()
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitArgs {
    InputOptions input;
    PipelineFlags flags;
    double tail_frac = 1.0;
    std::vector<double> horizons;
};

json fit_json_block(const ScalingFit& fit) { return json::parse(fit_to_json(fit)); }

int cmd_fit(const FitArgs& args) {
    const ObservationSeries series = load_series(args.input);
    std::vector<double> values;
    values.reserve(series.records.size());
    for (const auto& rec : series.records) values.push_back(rec.value);

    const TailSample tail = make_tail_sample(values, args.tail_frac);
    const BlockGrid grid =
        make_grid_bounded(tail.values.size(), args.flags.grid_points, args.flags.max_block);
    const BlockMaxima bm =
        collect_block_maxima(tail.values, grid, args.flags.subsamples, args.flags.seed);

    std::vector<std::size_t> skipped;
    const std::vector<SeriesPoint> mpmr_pts = mpmr_series(bm, ModeConfig{}, &skipped);
    const std::vector<SeriesPoint> emr_pts = emr_series(bm);
    for (std::size_t n : skipped) {
        std::cerr << "warning: block size " << n << " dropped from the mode series\n";
    }

    const ScalingFit mpmr_fit = fit_loglog(mpmr_pts, FitSource::mpmr);
    const ScalingFit emr_fit = fit_loglog(emr_pts, FitSource::emr);
    std::size_t dropped = 0;
    const ScalingFit pooled_fit = fit_pooled_bm(bm, &dropped);

    json report;
    report["count_loaded"] = series.records.size();
    report["count_used"] = tail.values.size();
    report["units"] = series.units;
    report["mpmr_fit"] = fit_json_block(mpmr_fit);
    report["emr_fit"] = fit_json_block(emr_fit);
    report["pooled_fit"] = fit_json_block(pooled_fit);
    report["gr"] = {{"b_value", eta_to_gr(mpmr_fit.eta).b_value},
                    {"big_b", eta_to_gr(mpmr_fit.eta).big_b}};
    report["skipped_sizes"] = skipped;
    report["dropped_maxima"] = dropped;
    if (!args.horizons.empty()) {
        json ex;
        for (double n : args.horizons) {
            const std::string key = format_double(n);
            ex["mpmr"][key] = extrapolate(mpmr_fit, n);
            ex["emr"][key] = extrapolate(emr_fit, n);
        }
        report["extrapolations"] = std::move(ex);
    }

    const fs::path out_dir(args.flags.out_dir);
    fs::create_directories(out_dir);
    std::ostringstream bm_csv;
    write_block_maxima_csv(bm, bm_csv);
    write_file(out_dir / "block_maxima.csv", bm_csv.str());
    std::ostringstream series_csv;
    write_series_csv(mpmr_pts, emr_pts, series_csv);
    write_file(out_dir / "series.csv", series_csv.str());
    write_file(out_dir / "fit.json", report.dump(2) + "\n");

    json effective;
    effective["command"] = "fit";
    effective["input"] = input_options_json(args.input);
    effective["pipeline"] = pipeline_flags_json(args.flags);
    effective["tail_frac"] = args.tail_frac;
    effective["horizons"] = args.horizons;
    write_manifest(out_dir, "fit", effective, args.flags.seed,
                   {"block_maxima.csv", "series.csv", "fit.json"});

    std::cout << "fit: eta(mpmr)=" << format_double(mpmr_fit.eta)
              << " ti(mpmr)=" << format_double(mpmr_fit.ti)
              << " eta(emr)=" << format_double(emr_fit.eta)
              << " ti(emr)=" << format_double(emr_fit.ti) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// timeseries
// ---------------------------------------------------------------------------

struct TimeseriesArgs {
    InputOptions input;
    PipelineFlags flags;
    std::string period;
    std::int64_t window_days = 0;
    std::int64_t step_days = 0;
    std::size_t block_n = 5;
};

TimeseriesRow window_row(const std::string& label, const ObservationSeries& window,
                         const TimeseriesArgs& args, std::uint64_t window_seed) {
    std::vector<double> values;
    values.reserve(window.records.size());
    for (const auto& rec : window.records) values.push_back(rec.value);

    TimeseriesRow row;
    row.label = label;
    row.count = values.size();
    row.block_n = args.block_n;

    const std::vector<double> maxima =
        subsample_maxima(values, args.block_n, args.flags.subsamples,
                         derive_seed(window_seed, args.block_n));
    const ModeResult mode = mean_shift_mode(maxima);
    row.mpmr = mode.mode;
    double mean = 0.0;
    for (double v : maxima) mean += v;
    row.emr = mean / static_cast<double>(maxima.size());

    // Tail indices need a full grid fit; small windows simply omit them.
    try {
        const BlockGrid grid =
            make_grid_bounded(values.size(), args.flags.grid_points, args.flags.max_block);
        const BlockMaxima bm =
            collect_block_maxima(values, grid, args.flags.subsamples, window_seed);
        std::vector<std::size_t> skipped;
        const auto mpmr_pts = mpmr_series(bm, ModeConfig{}, &skipped);
        row.ti_mpmr = fit_loglog(mpmr_pts, FitSource::mpmr).ti;
        row.ti_emr = fit_loglog(emr_series(bm), FitSource::emr).ti;
    } catch (const std::exception& e) {
        std::cerr << "warning: window '" << label << "': no tail index (" << e.what()
                  << ")\n";
    }
    return row;
}

int cmd_timeseries(const TimeseriesArgs& args) {
    if (args.period.empty() == (args.window_days == 0)) {
        throw std::invalid_argument(
            "timeseries: choose exactly one of --period or --window-days");
    }
    const ObservationSeries series = load_series(args.input);

    std::vector<TimeseriesRow> rows;
    std::size_t window_index = 0;
    auto emit = [&](const std::string& label, const ObservationSeries& window) {
        const std::uint64_t window_seed = derive_seed(args.flags.seed, window_index);
        ++window_index;
        if (window.records.size() < args.block_n || window.records.size() < 2) {
            std::cerr << "warning: window '" << label << "' has only "
                      << window.records.size() << " records, skipped\n";
            return;
        }
        rows.push_back(window_row(label, window, args, window_seed));
    };

    if (!args.period.empty()) {
        Period period;
        if (args.period == "year") period = Period::year;
        else if (args.period == "decade") period = Period::decade;
        else if (args.period == "month") period = Period::month;
        else throw std::invalid_argument("timeseries: bad --period '" + args.period + "'");
        for (const auto& [label, group] : aggregate_periods(series, period)) {
            emit(label, group);
        }
    } else {
        const std::int64_t step = args.step_days > 0 ? args.step_days : args.window_days;
        for (const auto& [end_day, window] : rolling_windows(series, args.window_days, step)) {
            emit(format_date(civil_from_days(end_day)), window);
        }
    }
    if (rows.empty()) throw DataError("timeseries: no window had enough records");

    const fs::path out_dir(args.flags.out_dir);
    fs::create_directories(out_dir);
    std::ostringstream csv;
    write_timeseries_csv(rows, csv);
    write_file(out_dir / "timeseries.csv", csv.str());

    json effective;
    effective["command"] = "timeseries";
    effective["input"] = input_options_json(args.input);
    effective["pipeline"] = pipeline_flags_json(args.flags);
    effective["period"] = args.period;
    effective["window_days"] = args.window_days;
    effective["step_days"] = args.step_days;
    effective["block_n"] = args.block_n;
    write_manifest(out_dir, "timeseries", effective, args.flags.seed, {"timeseries.csv"});

    std::cout << "timeseries: " << rows.size() << " windows -> " << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// convert / generate
// ---------------------------------------------------------------------------

int cmd_convert(double mw, bool have_mw, double joules, bool have_joules) {
    if (have_mw == have_joules) {
        throw std::invalid_argument("convert: give exactly one of --mw or --joules");
    }
    if (have_mw) joules = magnitude_to_energy(mw);
    else mw = energy_to_magnitude(joules);
    std::cout << "mw,joules\n" << format_double(mw) << ',' << format_double(joules) << "\n";
    return 0;
}

struct GenerateArgs {
    std::string family = "student-t";
    double sigma = 1.0;
    double xi = 1.0;
    double scale = 1.0;
    double nu = 3.0;
    std::size_t count = 1000;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
    std::string output = "sample.csv";
};

int cmd_generate(const GenerateArgs& args) {
    const Family family = family_from_name(args.family);
    DistributionSpec spec = [&] {
        switch (family) {
            case Family::normal: return DistributionSpec::normal(args.sigma);
            case Family::exponential: return DistributionSpec::exponential(args.xi);
            case Family::pareto: return DistributionSpec::pareto(args.scale, args.xi);
            default: return DistributionSpec::student_t(args.nu);
        }
    }();
    if (args.count < 1) throw std::invalid_argument("generate: --count must be >= 1");

    const std::vector<double> draws = sample(spec, args.count, args.seed);
    std::ostringstream csv;
    csv << "value\n";
    for (double v : draws) csv << format_double(v) << '\n';

    const fs::path out_dir(args.out_dir);
    fs::create_directories(out_dir);
    write_file(out_dir / args.output, csv.str());

    json effective;
    effective["command"] = "generate";
    effective["family"] = args.family;
    effective["spec"] = spec.describe();
    effective["count"] = args.count;
    effective["seed"] = args.seed;
    effective["output"] = args.output;
    write_manifest(out_dir, "generate", effective, args.seed, {args.output});

    std::cout << "generate: " << args.count << " draws from " << spec.describe() << " -> "
              << (out_dir / args.output).string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block-maximum tail-risk scaling toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimator study");
    simulate->add_option("--config", sim.config_path, "study configuration (JSON)")->required();
    simulate->add_option("--out-dir", sim.out_dir, "directory for output files")
        ->capture_default_str();
    auto* seed_opt = simulate->add_option("--seed", sim.seed, "override the configured base seed");
    simulate->add_option("--replications", sim.replications,
                         "override the configured replication count");
    simulate->add_option("--tail-frac", sim.tail_frac,
                         "override the configured tail fraction")
        ->check(CLI::Range(1e-9, 1.0));

    FitArgs fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "power-law fit of subsampled block maxima");
    add_input_options(fit_cmd, fit.input);
    add_pipeline_flags(fit_cmd, fit.flags);
    fit_cmd->add_option("--tail-frac", fit.tail_frac,
                        "largest fraction of the series to fit on (1 = all)")
        ->check(CLI::Range(1e-9, 1.0))
        ->capture_default_str();
    fit_cmd->add_option("--horizon", fit.horizons,
                        "block sizes at which to report extrapolated risk (repeatable)");

    TimeseriesArgs ts;
    CLI::App* ts_cmd = app.add_subcommand("timeseries", "per-period block-maximum statistics");
    add_input_options(ts_cmd, ts.input);
    add_pipeline_flags(ts_cmd, ts.flags);
    ts_cmd->add_option("--period", ts.period, "calendar partition: year, decade or month")
        ->check(CLI::IsMember({"year", "decade", "month"}));
    ts_cmd->add_option("--window-days", ts.window_days, "rolling window length in days")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{100000000}));
    ts_cmd->add_option("--step-days", ts.step_days, "rolling window step (default: window)")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{100000000}));
    ts_cmd->add_option("--block-size", ts.block_n, "block size n for the per-window mpmr/emr")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}))
        ->capture_default_str();

    double mw = 0.0, joules = 0.0;
    CLI::App* convert = app.add_subcommand("convert", "moment magnitude <-> energy in Joules");
    auto* mw_opt = convert->add_option("--mw", mw, "moment magnitude");
    auto* joules_opt = convert->add_option("--joules", joules, "radiated energy in Joules");

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "draw a synthetic sample");
    generate->add_option("--family", gen.family,
                         "normal, exponential, pareto or student-t")
        ->capture_default_str();
    generate->add_option("--sigma", gen.sigma, "normal scale")->capture_default_str();
    generate->add_option("--xi", gen.xi, "exponential rate / pareto tail index")
        ->capture_default_str();
    generate->add_option("--scale", gen.scale, "pareto scale")->capture_default_str();
    generate->add_option("--nu", gen.nu, "student-t degrees of freedom")->capture_default_str();
    generate->add_option("--count", gen.count, "number of draws")->capture_default_str();
    generate->add_option("--seed", gen.seed, "sampling seed")->capture_default_str();
    generate->add_option("--out-dir", gen.out_dir, "directory for output files")
        ->capture_default_str();
    generate->add_option("--output", gen.output, "sample file name inside --out-dir")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (simulate->parsed()) {
            sim.seed_set = seed_opt->count() > 0;
            return cmd_simulate(sim);
        }
        if (fit_cmd->parsed()) return cmd_fit(fit);
        if (ts_cmd->parsed()) return cmd_timeseries(ts);
        if (convert->parsed()) {
            return cmd_convert(mw, mw_opt->count() > 0, joules, joules_opt->count() > 0);
        }
        if (generate->parsed()) return cmd_generate(gen);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
}

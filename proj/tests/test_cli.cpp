#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailrisk/csv.hpp"
#include "tailrisk/distributions.hpp"
#include "tailrisk/series.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& scratch_root() {
    static const fs::path root = [] {
        const fs::path p = fs::temp_directory_path() / "tailrisk_cli_scratch";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = scratch_root() / name;
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs the built binary through the shell, capturing exit code and streams.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path out = scratch_root() / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path err = scratch_root() / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    std::string cmd = env_prefix;
    if (!cmd.empty()) cmd += ' ';
    cmd += '"';
    cmd += TAILRISK_CLI_PATH;
    cmd += "\" " + args + " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    CliResult result;
    result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("convert maps magnitude to energy and back") {
    const auto fwd = run_cli("convert --mw 7.91");
    REQUIRE(fwd.code == 0);
    const auto out = lines_of(fwd.out);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == "mw,joules");
    const auto comma = out[1].find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stod(out[1].substr(0, comma)) == 7.91);
    CHECK(std::stod(out[1].substr(comma + 1)) ==
          doctest::Approx(4.624e16).epsilon(1e-3));

    const auto back = run_cli("convert --joules 4.624e16");
    REQUIRE(back.code == 0);
    const auto bl = lines_of(back.out);
    REQUIRE(bl.size() == 2);
    CHECK(std::stod(bl[1].substr(0, bl[1].find(','))) ==
          doctest::Approx(7.91).epsilon(1e-3));

    CHECK(run_cli("convert --mw 5 --joules 1e12").code == 1);
    CHECK(run_cli("convert").code == 1);
}

TEST_CASE("exit codes separate usage, data and internal failures") {
    CHECK(run_cli("frobnicate").code == 1);                       // unknown subcommand
    CHECK(run_cli("fit --no-such-flag").code == 1);               // unknown flag
    CHECK(run_cli("").code == 1);                                 // missing subcommand
    CHECK(run_cli("fit --input /nonexistent/x.csv --value-col v").code == 2);
    CHECK(run_cli("simulate --config /nonexistent/cfg.json").code == 1);
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("fit --help").code == 0);
}

TEST_CASE("bad study configs are usage errors") {
    const auto dir = fresh_dir("bad_config");
    const auto unknown = dir / "unknown_key.json";
    spill(unknown, "{\"family\": \"pareto\", \"bogus_knob\": 3}\n");
    const auto r1 = run_cli("simulate --config \"" + unknown.string() + "\"");
    CHECK(r1.code == 1);
    CHECK(r1.err.find("bogus_knob") != std::string::npos);

    const auto broken = dir / "broken.json";
    spill(broken, "{not json\n");
    CHECK(run_cli("simulate --config \"" + broken.string() + "\"").code == 1);

    const auto badvalue = dir / "bad_value.json";
    spill(badvalue, "{\"family\": \"cauchy\"}\n");
    CHECK(run_cli("simulate --config \"" + badvalue.string() + "\"").code == 1);
}

TEST_CASE("generate then fit recovers a pareto scaling exponent") {
    const auto gen_dir = fresh_dir("gen");
    const auto gen = run_cli("generate --family pareto --xi 2 --scale 1 --count 4000 "
                             "--seed 9 --out-dir \"" + gen_dir.string() + "\"");
    REQUIRE(gen.code == 0);
    REQUIRE(fs::exists(gen_dir / "sample.csv"));
    REQUIRE(fs::exists(gen_dir / "manifest.json"));

    const auto fit_dir = fresh_dir("fit");
    const auto fit = run_cli("fit --input \"" + (gen_dir / "sample.csv").string() +
                             "\" --value-col value --grid-points 10 --subsamples 150 "
                             "--seed 5 --horizon 450 --out-dir \"" + fit_dir.string() + "\"");
    REQUIRE(fit.code == 0);
    REQUIRE(fs::exists(fit_dir / "fit.json"));
    REQUIRE(fs::exists(fit_dir / "block_maxima.csv"));
    REQUIRE(fs::exists(fit_dir / "series.csv"));
    REQUIRE(fs::exists(fit_dir / "manifest.json"));

    const json report = json::parse(slurp(fit_dir / "fit.json"));
    CHECK(report["count_loaded"] == 4000);
    CHECK(report["count_used"] == 4000);
    // True exponent is 1/xi = 0.5; a 4000-point sample lands close.
    CHECK(report["mpmr_fit"]["eta"].get<double>() == doctest::Approx(0.5).epsilon(0.3));
    CHECK(report["emr_fit"]["eta"].get<double>() == doctest::Approx(0.5).epsilon(0.3));
    CHECK(report["pooled_fit"]["source"] == "pooled-bm");
    CHECK(report["gr"]["big_b"].get<double>() ==
          doctest::Approx(1.0 / report["mpmr_fit"]["eta"].get<double>()).epsilon(1e-12));
    CHECK(report["extrapolations"]["mpmr"].contains("450"));

    // The series table joins the two per-size series on n.
    const auto series_lines = lines_of(slurp(fit_dir / "series.csv"));
    REQUIRE(series_lines.size() >= 3);
    CHECK(series_lines[0] == "n,mpmr,emr");
}

TEST_CASE("fit reruns are byte-identical apart from the manifest") {
    const auto gen_dir = fresh_dir("det_gen");
    REQUIRE(run_cli("generate --family student-t --nu 3 --count 1500 --seed 21 "
                    "--out-dir \"" + gen_dir.string() + "\"").code == 0);

    // Absolute values: student-t draws are signed, block maxima of the whole
    // series stay positive, but feed the tail only to keep the fit stable.
    const std::string common = "fit --input \"" + (gen_dir / "sample.csv").string() +
                               "\" --value-col value --tail-frac 0.2 --grid-points 8 "
                               "--subsamples 100 --seed 33 --out-dir ";
    const auto a = fresh_dir("det_a");
    const auto b = fresh_dir("det_b");
    REQUIRE(run_cli(common + "\"" + a.string() + "\"").code == 0);
    REQUIRE(run_cli(common + "\"" + b.string() + "\"", "TAILRISK_THREADS=3").code == 0);
    for (const char* name : {"block_maxima.csv", "series.csv", "fit.json"}) {
        CHECK(slurp(a / name) == slurp(b / name));
        CHECK_FALSE(slurp(a / name).empty());
    }
}

TEST_CASE("simulate writes stable summaries regardless of threading") {
    const auto dir = fresh_dir("sim");
    const auto cfg = dir / "study.json";
    spill(cfg, R"({
  "family": "pareto",
  "tail_indices": [2.0],
  "effective_sizes": [80],
  "tail_fraction": 0.1,
  "replications": 4,
  "estimators": ["hill", "percentiles", "emr"],
  "base_seed": 11,
  "grid_points": 6,
  "subsamples": 40
})");
    const auto one = fresh_dir("sim_one");
    const auto two = fresh_dir("sim_two");
    const auto r1 = run_cli("simulate --config \"" + cfg.string() + "\" --out-dir \"" +
                            one.string() + "\"", "TAILRISK_THREADS=1");
    const auto r2 = run_cli("simulate --config \"" + cfg.string() + "\" --out-dir \"" +
                            two.string() + "\"", "TAILRISK_THREADS=3");
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    for (const char* name : {"summary.csv", "summary.json", "config.json"}) {
        CHECK(slurp(one / name) == slurp(two / name));
        CHECK_FALSE(slurp(one / name).empty());
    }
    const auto head = lines_of(slurp(one / "summary.csv"));
    REQUIRE(head.size() == 4);  // header + one row per estimator
    CHECK(head[0] == "method,effective_size,tail_index,mean,sd,mape,failures");

    // A seed override must change the numbers.
    const auto three = fresh_dir("sim_three");
    REQUIRE(run_cli("simulate --config \"" + cfg.string() + "\" --seed 12 --out-dir \"" +
                    three.string() + "\"").code == 0);
    CHECK(slurp(one / "summary.csv") != slurp(three / "summary.csv"));
}

TEST_CASE("timeseries partitions a dated catalog") {
    using namespace tailrisk;
    const auto dir = fresh_dir("ts");
    const auto input = dir / "daily.csv";
    // Three years of synthetic daily positive values.
    const auto values = sample(DistributionSpec::pareto(1.0, 2.0), 1096, 3);
    std::ostringstream csv;
    csv << "date,loss\n";
    const std::int64_t start = days_from_civil({2000, 1, 1});
    for (std::size_t i = 0; i < values.size(); ++i) {
        csv << format_date(civil_from_days(start + static_cast<std::int64_t>(i))) << ','
            << format_double(values[i]) << '\n';
    }
    spill(input, csv.str());

    const auto out_year = fresh_dir("ts_year");
    const auto yearly = run_cli("timeseries --input \"" + input.string() +
                                "\" --value-col loss --time-col date --period year "
                                "--block-size 5 --grid-points 6 --subsamples 50 "
                                "--out-dir \"" + out_year.string() + "\"");
    REQUIRE(yearly.code == 0);
    const auto rows = lines_of(slurp(out_year / "timeseries.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "label,count,block_n,mpmr,emr,ti_mpmr,ti_emr");
    CHECK(rows[1].substr(0, 5) == "2000,");
    CHECK(rows[2].substr(0, 5) == "2001,");
    CHECK(rows[3].substr(0, 5) == "2002,");

    const auto out_roll = fresh_dir("ts_roll");
    const auto rolling = run_cli("timeseries --input \"" + input.string() +
                                 "\" --value-col loss --time-col date --window-days 365 "
                                 "--block-size 5 --grid-points 6 --subsamples 50 "
                                 "--out-dir \"" + out_roll.string() + "\"");
    REQUIRE(rolling.code == 0);
    CHECK(lines_of(slurp(out_roll / "timeseries.csv")).size() == 4);  // 3 windows

    // Exactly one of --period / --window-days.
    CHECK(run_cli("timeseries --input \"" + input.string() +
                  "\" --value-col loss --time-col date --period year --window-days 30")
              .code == 1);
    CHECK(run_cli("timeseries --input \"" + input.string() +
                  "\" --value-col loss --time-col date")
              .code == 1);
}

TEST_CASE("generate rejects unknown families") {
    CHECK(run_cli("generate --family weibull").code == 1);
}

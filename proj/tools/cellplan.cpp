#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cellplan/calibrate.hpp"
#include "cellplan/drive_test.hpp"
#include "cellplan/errors.hpp"
#include "cellplan/link_budget.hpp"
#include "cellplan/propagation.hpp"
#include "cellplan/raster.hpp"

namespace fs = std::filesystem;
using namespace cellplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInternalError = 2;

/// Input problem: bad file, bad flag value, malformed content.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

int env_threads() {
    if (const char* env = std::getenv("CELLPLAN_THREADS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (const std::exception&) {
            throw InputError("CELLPLAN_THREADS must be a nonnegative integer");
        }
    }
    return 0;
}

std::vector<double> parse_threshold_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            out.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw InputError("bad threshold value: " + token);
        }
    }
    if (out.empty()) throw InputError("empty threshold list");
    return out;
}

template <typename Fn>
auto with_file_context(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

int run_budget(const std::string& config_path, const std::string& json_out) {
    const LinkBudget budget =
        with_file_context(config_path, [&] { return parse_budget_json(read_file(config_path)); });
    const BudgetResult result = evaluate_budget(budget);
    if (json_out == "-") {
        std::cout << budget_result_json(budget, result);
        return kExitOk;
    }
    std::cout << budget_table(budget, result);
    if (!json_out.empty()) write_file(json_out, budget_result_json(budget, result));
    return kExitOk;
}

int run_predict(const std::string& site_path, const std::string& dtm_path,
                const std::string& clutter_path, const std::string& clutter_table_path,
                const std::string& out_dir, const std::string& bands, bool ppm, bool indoor,
                int threads_flag) {
    const SiteConfig site =
        with_file_context(site_path, [&] { return parse_site_json(read_file(site_path)); });
    const RasterGrid dtm =
        with_file_context(dtm_path, [&] { return parse_ascii_grid(read_file(dtm_path)); });
    const RasterGrid clutter =
        with_file_context(clutter_path, [&] { return parse_ascii_grid(read_file(clutter_path)); });
    const ClutterTable table = with_file_context(
        clutter_table_path, [&] { return parse_clutter_table_json(read_file(clutter_table_path)); });

    PredictOptions options;
    options.indoor = indoor;
    options.threads = threads_flag >= 0 ? threads_flag : env_threads();

    const CoverageMap map =
        predict_coverage(site.sectors, dtm, clutter, table, site.carrier, options);
    const std::vector<double> thresholds = parse_threshold_list(bands);
    const RasterGrid band_grid = classify_bands(map, thresholds);

    const fs::path out(out_dir);
    write_file((out / "nrsrp.asc").string(), write_ascii_grid(map.nrsrp));
    write_file((out / "best_beam.asc").string(), write_ascii_grid(map.best_beam));
    write_file((out / "bands.asc").string(), write_ascii_grid(band_grid));
    if (ppm) write_file((out / "nrsrp.ppm").string(), render_ppm(map.nrsrp));

    std::cerr << "predicted " << map.nrsrp.ncols << "x" << map.nrsrp.nrows << " pixels, "
              << site.sectors.size() << " sector(s)\n";
    return kExitOk;
}

ScannerParseResult load_scanner(const std::string& path) {
    auto result =
        with_file_context(path, [&] { return parse_scanner_csv(read_file(path)); });
    for (const auto& w : result.warnings) std::cerr << path << ": " << w << "\n";
    return result;
}

int run_ingest(const std::string& scanner_path, const std::string& out_path) {
    const ScannerParseResult result = load_scanner(scanner_path);
    if (!out_path.empty()) write_file(out_path, write_scanner_csv(result.log));
    nlohmann::json doc;
    doc["samples"] = result.log.samples.size();
    doc["route_length_m"] = result.log.route.total_m();
    doc["warnings"] = result.warnings.size();
    double lo = result.log.samples.front().nrsrp_dbm, hi = lo;
    for (const auto& s : result.log.samples) {
        lo = std::min(lo, s.nrsrp_dbm);
        hi = std::max(hi, s.nrsrp_dbm);
    }
    doc["nrsrp_min_dbm"] = lo;
    doc["nrsrp_max_dbm"] = hi;
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int run_lee(const std::string& scanner_path, const LeeParams& params,
            const std::string& envelope_out, const std::string& residual_out, int beam) {
    params.validate();
    char header[160];
    std::snprintf(header, sizeof(header),
                  "lee: lambda = %.2f cm, window 2L = %.2f cm, spacing d = %.2f cm, "
                  "window samples = %d (minimum %d)\n",
                  params.lambda_m() * 100.0, params.window_m() * 100.0, params.spacing_m() * 100.0,
                  params.window_samples(), params.min_samples);
    std::cerr << header;

    ScannerParseResult scan = load_scanner(scanner_path);
    if (beam >= 0) {
        // Per-beam mode: keep only samples of the requested beam.
        std::vector<ScannerSample> filtered;
        for (const auto& s : scan.log.samples) {
            if (s.beam_index == beam) filtered.push_back(s);
        }
        if (filtered.empty()) throw InputError("no samples for beam " + std::to_string(beam));
        std::vector<GeoPoint> points;
        for (const auto& s : filtered) points.push_back(s.position);
        scan.log.samples = std::move(filtered);
        scan.log.route = cumulative_route_distance(points);
    }

    const std::vector<SeriesPoint> series = resample_route(scan.log, params);
    const std::vector<SeriesPoint> envelope = lee_local_mean(series, params);
    const ResidualReport residual = fading_residual(series, envelope);

    if (!envelope_out.empty()) write_file(envelope_out, write_series_csv(envelope, "nrsrp_dbm"));
    if (!residual_out.empty()) write_file(residual_out, write_series_csv(residual.points, "residual_db"));
    std::cerr << "lee: " << series.size() << " resampled points, " << envelope.size()
              << " envelope points\n";
    return kExitOk;
}

std::vector<SeriesPoint> read_series_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty file");
    std::vector<SeriesPoint> series;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        SeriesPoint p;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &p.distance_m, &p.value_db, &p.position.lat,
                        &p.position.lon) != 4) {
            throw InputError(path + ": line " + std::to_string(line_no) +
                             ": expected distance_m,value,lat,lon");
        }
        series.push_back(p);
    }
    if (series.empty()) throw InputError(path + ": no data rows");
    return series;
}

CoverageMap read_coverage(const std::string& nrsrp_path) {
    CoverageMap map;
    map.nrsrp = with_file_context(nrsrp_path, [&] { return parse_ascii_grid(read_file(nrsrp_path)); });
    map.best_beam = RasterGrid::filled(map.nrsrp.origin, map.nrsrp.cell_size, map.nrsrp.ncols,
                                       map.nrsrp.nrows, map.nrsrp.nodata, map.nrsrp.nodata);
    return map;
}

int run_compare(const std::string& prediction_path, const std::string& envelope_path,
                const std::string& json_out, const std::string& csv_out,
                const std::string& delta_out) {
    const CoverageMap map = read_coverage(prediction_path);
    const std::vector<SeriesPoint> envelope = read_series_csv(envelope_path);
    const ComparisonReport report = compare(map, envelope);
    std::cout << comparison_report_json(report);
    if (!json_out.empty()) write_file(json_out, comparison_report_json(report));
    if (!csv_out.empty()) write_file(csv_out, comparison_delta_csv(report));
    if (!delta_out.empty()) write_file(delta_out, write_ascii_grid(delta_raster(map, report)));
    return kExitOk;
}

int run_tune(const std::string& prediction_path, const std::string& clutter_path,
             const std::string& clutter_table_path, const std::string& envelope_path,
             int min_points, const std::string& json_out) {
    const CoverageMap map = read_coverage(prediction_path);
    const RasterGrid clutter =
        with_file_context(clutter_path, [&] { return parse_ascii_grid(read_file(clutter_path)); });
    const ClutterTable table = with_file_context(
        clutter_table_path, [&] { return parse_clutter_table_json(read_file(clutter_table_path)); });
    const std::vector<SeriesPoint> envelope = read_series_csv(envelope_path);
    const TuneResult result = tune_offsets(map, clutter, table, envelope, min_points);
    std::cout << tune_result_json(result);
    if (!json_out.empty()) write_file(json_out, tune_result_json(result));
    return kExitOk;
}

int run_stats(const std::string& ue_path, const std::string& json_out) {
    const std::vector<UeTestSample> samples =
        with_file_context(ue_path, [&] { return parse_ue_csv(read_file(ue_path)); });
    const StatsSummary summary = throughput_stats(samples);
    std::cout << stats_summary_json(summary);
    if (!json_out.empty()) write_file(json_out, stats_summary_json(summary));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"5G NR cell planning and drive test analysis"};
    app.require_subcommand(1);

    // budget
    std::string budget_config, budget_json;
    auto* budget_cmd = app.add_subcommand("budget", "Evaluate a link budget config");
    budget_cmd->add_option("--config", budget_config, "Budget JSON document")->required();
    budget_cmd->add_option("--json", budget_json, "Write result JSON here ('-' for stdout)");

    // predict
    std::string site_path, dtm_path, clutter_path, clutter_table_path, out_dir;
    std::string bands = "-110,-100,-90,-80";
    bool ppm = false, indoor = false;
    int threads_flag = -1;
    auto* predict_cmd = app.add_subcommand("predict", "Predict NRSRP coverage over rasters");
    predict_cmd->add_option("--sectors", site_path, "Site/sector JSON document")->required();
    predict_cmd->add_option("--dtm", dtm_path, "Terrain raster (.asc)")->required();
    predict_cmd->add_option("--clutter", clutter_path, "Clutter class raster (.asc)")->required();
    predict_cmd->add_option("--clutter-table", clutter_table_path, "Clutter table JSON")->required();
    predict_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
    predict_cmd->add_option("--bands", bands, "Band thresholds, dBm, comma separated");
    predict_cmd->add_flag("--ppm", ppm, "Also write a PPM heatmap");
    predict_cmd->add_flag("--indoor", indoor, "Apply per-clutter indoor extra loss");
    predict_cmd->add_option("--threads", threads_flag,
                            "Worker threads (0 = auto, overrides CELLPLAN_THREADS)");

    // ingest
    std::string scanner_path, ingest_out;
    auto* ingest_cmd = app.add_subcommand("ingest", "Validate a scanner CSV log");
    ingest_cmd->add_option("--scanner", scanner_path, "Scanner CSV")->required();
    ingest_cmd->add_option("--out", ingest_out, "Write the validated log here");

    // lee
    std::string lee_scanner, envelope_out, residual_out;
    LeeParams lee_params;
    int lee_beam = -1;
    auto* lee_cmd = app.add_subcommand("lee", "Separate slow fading with Lee's method");
    lee_cmd->add_option("--scanner", lee_scanner, "Scanner CSV")->required();
    lee_cmd->add_option("--freq", lee_params.carrier_freq_mhz, "Carrier frequency, MHz");
    lee_cmd->add_option("--window", lee_params.window_wavelengths, "Averaging window 2L, wavelengths");
    lee_cmd->add_option("--min-samples", lee_params.min_samples, "Minimum samples per window");
    lee_cmd->add_option("--spacing", lee_params.resample_wavelengths, "Sample spacing d, wavelengths");
    lee_cmd->add_option("--beam", lee_beam, "Restrict to one beam index (default: best-beam series)");
    lee_cmd->add_option("--out-envelope", envelope_out, "Envelope CSV path");
    lee_cmd->add_option("--out-residual", residual_out, "Residual CSV path");

    // compare
    std::string cmp_prediction, cmp_envelope, cmp_json, cmp_csv, cmp_delta;
    auto* compare_cmd = app.add_subcommand("compare", "Compare measurements against a prediction");
    compare_cmd->add_option("--prediction", cmp_prediction, "Predicted NRSRP raster (.asc)")->required();
    compare_cmd->add_option("--envelope", cmp_envelope, "Envelope CSV from lee")->required();
    compare_cmd->add_option("--json", cmp_json, "Write report JSON here");
    compare_cmd->add_option("--csv", cmp_csv, "Write per-point delta CSV here");
    compare_cmd->add_option("--delta-raster", cmp_delta, "Write binned delta raster here");

    // tune
    std::string tune_prediction, tune_clutter, tune_table, tune_envelope, tune_json;
    int tune_min_points = 20;
    auto* tune_cmd = app.add_subcommand("tune", "Fit per-clutter loss offsets");
    tune_cmd->add_option("--prediction", tune_prediction, "Predicted NRSRP raster (.asc)")->required();
    tune_cmd->add_option("--clutter", tune_clutter, "Clutter class raster (.asc)")->required();
    tune_cmd->add_option("--clutter-table", tune_table, "Clutter table JSON")->required();
    tune_cmd->add_option("--envelope", tune_envelope, "Envelope CSV from lee")->required();
    tune_cmd->add_option("--min-points", tune_min_points, "Freeze classes with fewer points");
    tune_cmd->add_option("--json", tune_json, "Write offsets JSON here");

    // stats
    std::string ue_path, stats_json;
    auto* stats_cmd = app.add_subcommand("stats", "Summary statistics of UE speed tests");
    stats_cmd->add_option("--ue", ue_path, "UE test CSV")->required();
    stats_cmd->add_option("--json", stats_json, "Write summary JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (budget_cmd->parsed()) return run_budget(budget_config, budget_json);
        if (predict_cmd->parsed()) {
            return run_predict(site_path, dtm_path, clutter_path, clutter_table_path, out_dir, bands,
                               ppm, indoor, threads_flag);
        }
        if (ingest_cmd->parsed()) return run_ingest(scanner_path, ingest_out);
        if (lee_cmd->parsed()) {
            return run_lee(lee_scanner, lee_params, envelope_out, residual_out, lee_beam);
        }
        if (compare_cmd->parsed()) {
            return run_compare(cmp_prediction, cmp_envelope, cmp_json, cmp_csv, cmp_delta);
        }
        if (tune_cmd->parsed()) {
            return run_tune(tune_prediction, tune_clutter, tune_table, tune_envelope,
                            tune_min_points, tune_json);
        }
        if (stats_cmd->parsed()) return run_stats(ue_path, stats_json);
        std::cerr << app.help();
        return kExitInputError;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
}

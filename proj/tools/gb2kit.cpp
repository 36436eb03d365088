// gb2kit command line: fit reports, closed-form and empirical inequality
// indices, tail-slope fits, and steady-state SDE simulation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gb2kit/errors.hpp"
#include "gb2kit/fit.hpp"
#include "gb2kit/inequality.hpp"
#include "gb2kit/io.hpp"
#include "gb2kit/sde.hpp"

namespace {

using gb2kit::io::json;

// Inline JSON or a path to a JSON file.
json load_json_arg(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
        return json::parse(arg);
    }
    std::ifstream in(arg);
    if (!in) throw gb2kit::DataError("cannot open JSON file: " + arg);
    json j;
    in >> j;
    return j;
}

std::vector<gb2kit::Family> parse_families(const std::vector<std::string>& names) {
    std::vector<gb2kit::Family> out;
    for (const auto& n : names) {
        const auto f = gb2kit::family_from_name(n);
        if (!f) throw gb2kit::DataError("unknown family: " + n);
        out.push_back(*f);
    }
    if (out.empty())
        out = {gb2kit::Family::GB2, gb2kit::Family::BP, gb2kit::Family::GIGa,
               gb2kit::Family::IGa, gb2kit::Family::GGa, gb2kit::Family::Ga,
               gb2kit::Family::LN};
    return out;
}

struct IngestFlags {
    std::string path;
    std::string column = "0";
    std::string year_column;
    std::string deflator_path;
    int base_year = 0;
};

gb2kit::Sample load_sample(const IngestFlags& flags) {
    std::optional<std::string> ycol;
    if (!flags.year_column.empty()) ycol = flags.year_column;
    auto loaded = gb2kit::io::ingest_csv(flags.path, flags.column, ycol);
    if (loaded.stats.rows_skipped_nonpositive > 0) {
        std::cerr << "note: skipped " << loaded.stats.rows_skipped_nonpositive
                  << " non-positive rows\n";
    }
    if (!flags.deflator_path.empty()) {
        if (flags.base_year == 0)
            throw gb2kit::DataError("--deflator requires --base-year");
        if (!ycol) throw gb2kit::DataError("--deflator requires --year-column");
        const auto series =
            gb2kit::io::load_deflator_csv(flags.deflator_path, flags.base_year);
        return gb2kit::io::deflate(loaded.sample, series, flags.base_year);
    }
    return loaded.sample;
}

void add_ingest_flags(CLI::App* cmd, IngestFlags& flags) {
    cmd->add_option("csv", flags.path, "input CSV file")->required();
    cmd->add_option("--column", flags.column, "value column (header name or 0-based index)");
    cmd->add_option("--year-column", flags.year_column, "year column for deflation");
    cmd->add_option("--deflator", flags.deflator_path,
                    "CSV with year,index columns used to deflate values");
    cmd->add_option("--base-year", flags.base_year, "deflation base year");
}

int run(int argc, char** argv) {
    CLI::App app{"GB2 heavy-tail distribution toolkit"};
    app.require_subcommand(1);

    // fit ------------------------------------------------------------------
    IngestFlags fit_ingest;
    std::vector<std::string> fit_families;
    double fit_tail_cut = 0.0;
    bool fit_csv_out = false;
    bool fit_json_out = false;
    gb2kit::FitOptions fit_options;
    auto* fit_cmd = app.add_subcommand("fit", "MLE fit report over the family set");
    add_ingest_flags(fit_cmd, fit_ingest);
    fit_cmd->add_option("--families", fit_families, "families to fit (default: all)")
        ->delimiter(',');
    fit_cmd->add_option("--tail-cut", fit_tail_cut,
                        "remove this top fraction before fitting");
    fit_cmd->add_flag("--csv", fit_csv_out, "emit the report as CSV");
    fit_cmd->add_flag("--json", fit_json_out, "emit the report as JSON (default)");
    fit_cmd->add_option("--starts", fit_options.starts, "optimizer starts per family");
    fit_cmd->add_option("--threads", fit_options.threads,
                        "parallel family fits (default: GB2KIT_THREADS or hardware)");

    // indices ---------------------------------------------------------------
    auto* idx_cmd =
        app.add_subcommand("indices", "inequality indices for a spec or a data file");
    std::string idx_spec;
    IngestFlags idx_ingest;
    idx_cmd->add_option("--spec", idx_spec, "distribution spec as JSON");
    idx_cmd->add_option("csv", idx_ingest.path, "input CSV file (empirical indices)");
    idx_cmd->add_option("--column", idx_ingest.column, "value column");
    idx_cmd->add_option("--year-column", idx_ingest.year_column, "year column");
    idx_cmd->add_option("--deflator", idx_ingest.deflator_path, "deflator CSV");
    idx_cmd->add_option("--base-year", idx_ingest.base_year, "deflation base year");

    // tailfit ----------------------------------------------------------------
    IngestFlags tail_ingest;
    double tail_fraction = 0.1;
    int tail_exclude = 3;
    auto* tail_cmd =
        app.add_subcommand("tailfit", "log-log survival slope of the upper tail");
    add_ingest_flags(tail_cmd, tail_ingest);
    tail_cmd->add_option("--fraction", tail_fraction,
                         "top fraction of the sample to fit (0.2 / 0.3 mirror the "
                         "deeper-window variants)");
    tail_cmd->add_option("--exclude-top", tail_exclude,
                         "largest order statistics to exclude");

    // simulate ----------------------------------------------------------------
    std::string sim_config;
    std::uint64_t sim_seed = 0;
    std::size_t sim_n = 0;
    std::string sim_out;
    auto* sim_cmd = app.add_subcommand("simulate", "integrate the mean-reverting SDE");
    sim_cmd->add_option("--config", sim_config, "SdeConfig as JSON (inline or file)")
        ->required();
    sim_cmd->add_option("--seed", sim_seed, "RNG seed")->required();
    sim_cmd->add_option("-n,--samples", sim_n, "pooled samples to draw")->required();
    sim_cmd->add_option("-o,--output", sim_out, "write samples to this CSV");

    // dmms ---------------------------------------------------------------------
    std::string dmms_spec;
    auto* dmms_cmd =
        app.add_subcommand("dmms", "mode/half-width inequality index for a spec");
    dmms_cmd->add_option("--spec", dmms_spec, "distribution spec as JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (fit_cmd->parsed()) {
        auto sample = load_sample(fit_ingest);
        if (fit_tail_cut > 0.0) sample = gb2kit::tail_cut(sample, fit_tail_cut);
        const auto rows =
            gb2kit::fit_report(sample, parse_families(fit_families), fit_options);
        if (fit_csv_out)
            std::cout << gb2kit::io::report_rows_to_csv(rows);
        else
            std::cout << gb2kit::io::report_rows_to_json(rows).dump(2) << '\n';
        return 0;
    }
    if (idx_cmd->parsed()) {
        if (!idx_spec.empty()) {
            const auto spec = gb2kit::io::spec_from_json(load_json_arg(idx_spec));
            const auto report = gb2kit::closed_form_indices(spec);
            std::cout << gb2kit::io::index_report_to_json(report).dump(2) << '\n';
        } else if (!idx_ingest.path.empty()) {
            const auto sample = load_sample(idx_ingest);
            const auto report = gb2kit::empirical_indices(sample);
            std::cout << gb2kit::io::index_report_to_json(report).dump(2) << '\n';
        } else {
            throw gb2kit::DataError("indices: give --spec or a CSV file");
        }
        return 0;
    }
    if (tail_cmd->parsed()) {
        const auto sample = load_sample(tail_ingest);
        const auto fit = gb2kit::tail_slope(sample, tail_fraction, tail_exclude);
        json j{{"slope", fit.slope},
               {"std_error", fit.std_error},
               {"intercept", fit.intercept},
               {"points_used", fit.points_used},
               {"fraction", tail_fraction}};
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    if (sim_cmd->parsed()) {
        const auto config = gb2kit::io::sde_config_from_json(load_json_arg(sim_config));
        const auto steady = gb2kit::steady_state_spec(config);
        const auto result = gb2kit::simulate(config, sim_n, sim_seed);
        if (!sim_out.empty()) gb2kit::io::write_values_csv(sim_out, result.values);
        json j{{"steady_state", gb2kit::io::spec_to_json(steady)},
               {"samples", result.values.size()},
               {"guard_rate", result.guard_rate},
               {"seed", sim_seed}};
        if (!sim_out.empty()) j["output"] = sim_out;
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    if (dmms_cmd->parsed()) {
        const auto spec = gb2kit::io::spec_from_json(load_json_arg(dmms_spec));
        const auto b = gb2kit::dmms_breakdown(spec);
        json j{{"dmms", b.value},
               {"modal_pdf", b.modal_pdf},
               {"half_width", b.half_width},
               {"mode", b.mode}};
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const gb2kit::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const gb2kit::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

// Command-line front end: `forecast`, `backtest` and `sequences`.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rgforecast/evaluation.hpp"
#include "rgforecast/report.hpp"
#include "rgforecast/scenario.hpp"
#include "rgforecast/series.hpp"

namespace {

struct RunConfig {
    std::string input;
    std::string date_col = "0";
    std::string value_col = "1";
    std::string delimiter = ",";
    std::vector<int> k_values{3, 4, 5, 6};
    std::vector<std::string> sequences{"A", "B", "C"};
    std::vector<double> horizons{0.1, 0.3, 0.5, 0.7, 1.0};
    std::string from;
    std::string to;
    std::string anchor = "latest";
    std::string out_dir = "report";
    std::string format = "table";
    unsigned threads = 0;
};

rgforecast::TimeSeries load(const RunConfig& cfg) {
    if (cfg.delimiter.size() != 1) {
        throw std::invalid_argument("--delimiter must be a single character");
    }
    rgforecast::ColumnSpec columns;
    columns.date = rgforecast::parse_column_ref(cfg.date_col);
    const auto value = rgforecast::parse_column_ref(cfg.value_col);
    if (!value) {
        throw std::invalid_argument("--value-col cannot be 'none'");
    }
    columns.value = *value;
    columns.delimiter = cfg.delimiter.front();
    return rgforecast::load_series(cfg.input, columns);
}

rgforecast::GridSpec make_grid(const RunConfig& cfg) {
    rgforecast::GridSpec grid;
    grid.k_values = cfg.k_values;
    grid.sequences.clear();
    for (const auto& s : cfg.sequences) {
        grid.sequences.push_back(rgforecast::parse_sequence(s));
    }
    grid.horizons = cfg.horizons;
    grid.validate();
    return grid;
}

std::size_t resolve_label(const rgforecast::TimeSeries& series, const std::string& label, const char* flag) {
    const auto index = series.find_label(label);
    if (!index) {
        throw std::invalid_argument(fmt::format("{} '{}' does not match any date in the input", flag, label));
    }
    return *index;
}

int run_forecast(const RunConfig& cfg) {
    const auto series = load(cfg);
    const auto grid = make_grid(cfg);
    const std::size_t anchor = cfg.anchor == "latest" ? series.size() - 1 : resolve_label(series, cfg.anchor, "--anchor");
    const auto summary = rgforecast::summarize_forecast(series, anchor, grid);
    std::cout << rgforecast::render_forecast_summary(summary, rgforecast::parse_report_format(cfg.format));
    return 0;
}

int run_backtest(const RunConfig& cfg) {
    const auto series = load(cfg);
    const auto grid = make_grid(cfg);
    if (series.size() < 2) {
        throw std::invalid_argument("backtest needs at least two observations");
    }
    const std::size_t first = cfg.from.empty() ? grid.required_history() : resolve_label(series, cfg.from, "--from");
    const std::size_t last = cfg.to.empty() ? series.size() - 2 : resolve_label(series, cfg.to, "--to");
    const auto report = rgforecast::backtest(series, grid, first, last, cfg.threads);
    const auto format = rgforecast::parse_report_format(cfg.format);
    const auto files = rgforecast::write_report(report, cfg.out_dir);

    std::cout << fmt::format("Backtest {} .. {} ({} days, {} excluded cells)\n\n", series.label(first), series.label(last),
                             report.days.size(), report.excluded_cells());
    std::cout << rgforecast::render_indicator_tables(rgforecast::indicator_tables(report), format);
    std::cout << '\n';
    for (const auto& f : files) {
        std::cout << "wrote " << f.string() << '\n';
    }
    return 0;
}

int run_sequences() {
    for (const auto& s : rgforecast::builtin_sequences()) {
        std::string offsets;
        for (std::size_t i = 0; i < s.offsets.size(); ++i) {
            offsets += (i ? "," : "") + std::to_string(s.offsets[i]);
        }
        std::cout << fmt::format("{}: t = ({})\n", s.name, offsets);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similar renormalization-group forecasting of daily series"};
    app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--input", cfg.input, "Delimited input file with a header row");
    app.add_option("--date-col", cfg.date_col, "Date column name or zero-based position, or 'none'")->capture_default_str();
    app.add_option("--value-col", cfg.value_col, "Value column name or zero-based position")->capture_default_str();
    app.add_option("--delimiter", cfg.delimiter, "Field delimiter")->capture_default_str();
    app.add_option("--k", cfg.k_values, "Polynomial orders")->delimiter(',')->capture_default_str();
    app.add_option("--sequences", cfg.sequences, "Sequences: A, B, C or NAME=0:-1:-3:...")->delimiter(',')->capture_default_str();
    app.add_option("--horizons", cfg.horizons, "Horizons in (0, 1]")->delimiter(',')->capture_default_str();
    app.add_option("--from", cfg.from, "First backtest anchor date (exact label)");
    app.add_option("--to", cfg.to, "Last backtest anchor date (exact label)");
    app.add_option("--anchor", cfg.anchor, "Forecast anchor date or 'latest'")->capture_default_str();
    app.add_option("--out-dir", cfg.out_dir, "Directory for backtest report files")->capture_default_str();
    app.add_option("--format", cfg.format, "Report format: table or csv")->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads for backtest (0 = all cores)")->capture_default_str();

    auto* forecast = app.add_subcommand("forecast", "Forecast every grid cell at one anchor, with scenario weights");
    auto* backtest = app.add_subcommand("backtest", "Rolling-forward backtest and indicator tables");
    auto* sequences = app.add_subcommand("sequences", "Print the built-in past-time sequences");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sequences) {
            return run_sequences();
        }
        if (cfg.input.empty()) {
            throw std::invalid_argument("--input is required");
        }
        if (*forecast) {
            return run_forecast(cfg);
        }
        if (*backtest) {
            return run_backtest(cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

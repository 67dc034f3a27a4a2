#include "rgforecast/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace rgforecast {

namespace {

using Row = std::vector<std::string>;

std::string render_rows(const Row& header, const std::vector<Row>& rows, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::csv) {
        auto line = [&out](const Row& r) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                out += (i ? "," : "") + r[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows) {
            line(r);
        }
        return out;
    }
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
        width[i] = header[i].size();
        for (const auto& r : rows) {
            width[i] = std::max(width[i], r[i].size());
        }
    }
    auto rule = [&] {
        out += '+';
        for (auto w : width) {
            out += std::string(w + 2, '-') + '+';
        }
        out += '\n';
    };
    auto line = [&](const Row& r) {
        out += '|';
        for (std::size_t i = 0; i < r.size(); ++i) {
            out += fmt::format(" {:>{}} |", r[i], width[i]);
        }
        out += '\n';
    };
    rule();
    line(header);
    rule();
    for (const auto& r : rows) {
        line(r);
    }
    rule();
    return out;
}

std::string exact(double v) {
    return fmt::format("{:.17g}", v);
}

const char* dimension_title(Dimension d) {
    switch (d) {
        case Dimension::k:
            return "k";
        case Dimension::sequence:
            return "Sequence";
        case Dimension::horizon:
            return "Time.ahead";
    }
    return "";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    }
    out << text;
    if (!out) {
        throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
    }
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
    if (text == "table" || text == "plain") {
        return ReportFormat::table;
    }
    if (text == "csv" || text == "delimited") {
        return ReportFormat::csv;
    }
    throw std::invalid_argument(fmt::format("unknown report format '{}'", text));
}

std::string format_mape(const std::optional<double>& value) {
    return value ? fmt::format("{:.3f}", *value) : "n/a";
}

std::string format_percent(const std::optional<double>& value) {
    return value ? fmt::format("{:.1f}", *value) : "n/a";
}

std::string render_indicator_tables(const std::vector<IndicatorRow>& rows, ReportFormat format) {
    if (format == ReportFormat::csv) {
        std::vector<Row> body;
        for (const auto& r : rows) {
            body.push_back({to_string(r.level.dimension), r.level.label(), format_mape(r.stats.mape),
                            format_percent(r.stats.okape), format_percent(r.stats.trend.percent),
                            std::to_string(r.stats.n_days), std::to_string(r.stats.trend.flat_days)});
        }
        return render_rows({"dimension", "level", "mape", "okape", "trend_ok", "n_days", "flat_days"}, body, format);
    }
    std::string out;
    for (auto dim : {Dimension::k, Dimension::sequence, Dimension::horizon}) {
        std::vector<Row> body;
        for (const auto& r : rows) {
            if (r.level.dimension == dim) {
                body.push_back({r.level.label(), format_mape(r.stats.mape), format_percent(r.stats.okape),
                                format_percent(r.stats.trend.percent)});
            }
        }
        if (!body.empty()) {
            out += render_rows({dimension_title(dim), "MAPE", "OKAPE", "% TrendOK"}, body, format);
        }
    }
    return out;
}

std::string render_combination_table(const std::vector<CombinationRow>& rows, ReportFormat format) {
    std::vector<Row> body;
    for (const auto& r : rows) {
        body.push_back({std::to_string(r.k), r.sequence, fmt::format("{:g}", r.horizon), format_mape(r.stats.mape),
                        format_percent(r.stats.okape), format_percent(r.stats.trend.percent), std::to_string(r.stats.n_days)});
    }
    if (format == ReportFormat::csv) {
        return render_rows({"k", "sequence", "horizon", "mape", "okape", "trend_ok", "n_days"}, body, format);
    }
    return render_rows({"k", "Sequence", "Time.ahead", "MAPE", "OKAPE", "% TrendOK", "days"}, body, format);
}

std::string render_win_rates(const WinRateTable& table, ReportFormat format) {
    std::vector<Row> body;
    for (const auto& r : table.rows) {
        const std::string name = r.level.dimension == Dimension::k          ? "k=" + r.level.label()
                                 : r.level.dimension == Dimension::sequence ? "Seq" + r.level.label()
                                                                            : "Time.ahead." + r.level.label();
        if (format == ReportFormat::csv) {
            body.push_back({to_string(r.level.dimension), r.level.label(), format_percent(r.percent), std::to_string(r.wins)});
        } else {
            body.push_back({name, format_percent(r.percent), std::to_string(r.wins)});
        }
    }
    if (format == ReportFormat::csv) {
        return render_rows({"dimension", "level", "percent", "wins"}, body, format);
    }
    return render_rows({"Parameter", "% best", "wins"}, body, format);
}

std::string render_daily_outcomes(const BacktestReport& report) {
    Row header{"anchor", "previous", "actual_next", "ensemble_mean"};
    for (const auto& l : report.levels) {
        header.push_back(fmt::format("{}={}", to_string(l.dimension), l.label()));
    }
    std::vector<Row> body;
    for (const auto& d : report.days) {
        Row r{d.anchor_label, exact(d.previous), exact(d.actual_next), std::isnan(d.predicted) ? "n/a" : exact(d.predicted)};
        for (const auto& avg : d.level_averages) {
            r.push_back(avg ? exact(*avg) : "n/a");
        }
        body.push_back(std::move(r));
    }
    return render_rows(header, body, ReportFormat::csv);
}

std::string render_prediction_log(const BacktestReport& report) {
    const auto& g = report.grid;
    std::vector<std::string> cell_ids;
    for (int k : g.k_values) {
        for (const auto& s : g.sequences) {
            for (double h : g.horizons) {
                cell_ids.push_back(fmt::format("k{}-{}-t{:g}", k, s.name, h));
            }
        }
    }
    std::vector<Row> body;
    for (const auto& d : report.days) {
        for (std::size_t i = 0; i < d.cells.size(); ++i) {
            const auto& c = d.cells[i];
            body.push_back({d.anchor_label, cell_ids[i], c.status == CellStatus::ok ? exact(c.value) : "", to_string(c.status)});
        }
    }
    return render_rows({"anchor", "cell", "prediction", "status"}, body, ReportFormat::csv);
}

std::vector<std::filesystem::path> write_report(const BacktestReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::vector<std::pair<std::string, std::string>> files{
        {"indicators.csv", render_indicator_tables(indicator_tables(report), ReportFormat::csv)},
        {"combinations.csv", render_combination_table(combination_table(report), ReportFormat::csv)},
        {"win_rates.csv", render_win_rates(win_rate_table(report), ReportFormat::csv)},
        {"days.csv", render_daily_outcomes(report)},
        {"predictions.csv", render_prediction_log(report)},
    };
    std::vector<std::filesystem::path> written;
    for (const auto& [name, text] : files) {
        const auto path = out_dir / name;
        write_file(path, text);
        written.push_back(path);
    }
    return written;
}

ForecastSummary summarize_forecast(const TimeSeries& series, std::size_t anchor, const GridSpec& grid) {
    ForecastSummary s;
    s.anchor_index = anchor;
    s.anchor_label = series.label(anchor);
    s.anchor_value = series.value(anchor);
    s.grid = grid;
    s.scenarios = run_grid(series, anchor, grid);
    for (const auto& level : grid_levels(grid)) {
        try {
            s.averages.emplace_back(level, fixed_dimension_average(s.scenarios, level));
        } catch (const std::domain_error&) {
            s.averages.emplace_back(level, std::nullopt);
        }
    }
    for (double h : grid.horizons) {
        ForecastSummary::HorizonWeighting hw{scenario_weights(series, anchor, grid, h), std::nullopt, std::nullopt};
        if (!hw.weights.entries.empty()) {
            try {
                hw.weighted = weighted_forecast(s.scenarios, hw.weights);
            } catch (const std::domain_error&) {
            }
            hw.most_probable = most_probable_scenario(hw.weights);
        }
        s.horizons.push_back(std::move(hw));
    }
    return s;
}

std::string render_forecast_summary(const ForecastSummary& s, ReportFormat format) {
    std::string out;
    const bool table = format == ReportFormat::table;
    if (table) {
        out += fmt::format("Anchor {} (index {}), value {:.6g}\n\n", s.anchor_label, s.anchor_index, s.anchor_value);
    }

    std::vector<Row> cells;
    for (const auto& c : s.scenarios) {
        Row r{std::to_string(c.k), c.sequence, fmt::format("{:g}", c.horizon), c.valid() ? fmt::format("{:.6f}", c.value()) : "",
              to_string(c.status)};
        cells.push_back(std::move(r));
    }
    if (table) {
        out += "Scenarios\n";
    }
    out += render_rows({"k", "sequence", "horizon", "forecast", "status"}, cells, format);
    out += '\n';

    std::vector<Row> avgs;
    for (const auto& [level, avg] : s.averages) {
        avgs.push_back({to_string(level.dimension), level.label(), avg ? fmt::format("{:.6f}", avg->mean) : "",
                        avg ? std::to_string(avg->cells) : "0"});
    }
    if (table) {
        out += "Fixed-dimension averages\n";
    }
    out += render_rows({"dimension", "level", "average", "cells"}, avgs, format);
    out += '\n';

    std::vector<Row> weights;
    for (const auto& hw : s.horizons) {
        for (const auto& e : hw.weights.entries) {
            weights.push_back({fmt::format("{:g}", hw.weights.horizon), std::to_string(e.cell.k), e.cell.sequence,
                               fmt::format("{:.6f}", e.forecast), e.degenerate ? "0" : fmt::format("{:.6g}", e.multiplier),
                               fmt::format("{:.6f}", e.probability)});
        }
    }
    if (table) {
        out += "Scenario weights\n";
    }
    out += render_rows({"horizon", "k", "sequence", "forecast", "multiplier", "probability"}, weights, format);
    out += '\n';

    std::vector<Row> summary;
    for (const auto& hw : s.horizons) {
        summary.push_back({fmt::format("{:g}", hw.weights.horizon), hw.weighted ? fmt::format("{:.6f}", *hw.weighted) : "n/a",
                           hw.most_probable ? fmt::format("k={} {}", hw.most_probable->k, hw.most_probable->sequence) : "n/a",
                           std::to_string(hw.weights.excluded)});
    }
    if (table) {
        out += "Weighted forecast\n";
    }
    out += render_rows({"horizon", "weighted_forecast", "most_probable", "excluded"}, summary, format);
    return out;
}

}  // namespace rgforecast

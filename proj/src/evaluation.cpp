#include "rgforecast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace rgforecast {

namespace {

DayOutcome evaluate_day(const TimeSeries& series, const GridSpec& grid, const std::vector<GridLevel>& levels,
                        std::size_t anchor) {
    const auto scenarios = run_grid(series, anchor, grid);

    DayOutcome day;
    day.anchor_index = anchor;
    day.anchor_label = series.label(anchor);
    day.previous = series[anchor];
    day.actual_next = series[anchor + 1];

    std::vector<double> valid;
    day.cells.reserve(scenarios.size());
    for (const auto& s : scenarios) {
        day.cells.push_back({s.status, s.value()});
        if (s.valid()) {
            valid.push_back(s.value());
        }
    }
    day.predicted = valid.empty() ? std::numeric_limits<double>::quiet_NaN()
                                  : pairwise_sum(valid) / static_cast<double>(valid.size());

    day.level_averages.reserve(levels.size());
    for (const auto& level : levels) {
        try {
            day.level_averages.emplace_back(fixed_dimension_average(scenarios, level).mean);
        } catch (const std::domain_error&) {
            day.level_averages.emplace_back(std::nullopt);
        }
    }
    return day;
}

}  // namespace

std::size_t BacktestReport::excluded_cells() const noexcept {
    std::size_t n = 0;
    for (const auto& d : days) {
        n += static_cast<std::size_t>(std::count_if(d.cells.begin(), d.cells.end(),
                                                    [](const CellPrediction& c) { return c.status != CellStatus::ok; }));
    }
    return n;
}

BacktestReport backtest(const TimeSeries& series, const GridSpec& grid, std::size_t first, std::size_t last,
                        unsigned threads) {
    grid.validate();
    if (first > last) {
        throw std::invalid_argument(fmt::format("empty backtest range [{}, {}]", first, last));
    }
    if (last + 1 >= series.size()) {
        throw std::out_of_range(fmt::format("anchor {} has no next value (series length {})", last, series.size()));
    }

    BacktestReport report;
    report.grid = grid;
    report.levels = grid_levels(grid);
    const std::size_t count = last - first + 1;
    report.days.resize(count);

    std::vector<std::exception_ptr> errors(count);
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, count));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                report.days[i] = evaluate_day(series, report.grid, report.levels, first + i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work(0, count);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return report;
}

double absolute_percentage_error(double predicted, double actual) noexcept {
    return 100.0 * std::abs(predicted - actual) / actual;
}

double mape(std::span<const double> predictions, std::span<const double> actuals) {
    if (predictions.size() != actuals.size()) {
        throw std::invalid_argument("mape: length mismatch");
    }
    if (predictions.empty()) {
        throw std::invalid_argument("mape: empty input");
    }
    std::vector<double> errors(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!(actuals[i] > 0.0)) {
            throw std::invalid_argument("mape: actual values must be positive");
        }
        errors[i] = absolute_percentage_error(predictions[i], actuals[i]);
    }
    return pairwise_sum(errors) / static_cast<double>(errors.size());
}

double okape(std::span<const PredictionPoint> points) {
    if (points.empty()) {
        throw std::invalid_argument("okape: empty input");
    }
    std::size_t ok = 0;
    for (const auto& p : points) {
        if (!(p.previous > 0.0) || !(p.actual > 0.0)) {
            throw std::invalid_argument("okape: previous and actual values must be positive");
        }
        const double volatility = 100.0 * std::abs(p.actual - p.previous) / p.previous;
        if (absolute_percentage_error(p.predicted, p.actual) < volatility) {
            ++ok;
        }
    }
    return 100.0 * static_cast<double>(ok) / static_cast<double>(points.size());
}

TrendScore trend_ok(std::span<const PredictionPoint> points) {
    TrendScore score;
    std::size_t agree = 0;
    for (const auto& p : points) {
        const double realized = p.actual - p.previous;
        if (realized == 0.0) {
            ++score.flat_days;
            continue;
        }
        ++score.included;
        const double predicted = p.predicted - p.previous;
        if ((predicted > 0.0 && realized > 0.0) || (predicted < 0.0 && realized < 0.0)) {
            ++agree;
        }
    }
    if (score.included > 0) {
        score.percent = 100.0 * static_cast<double>(agree) / static_cast<double>(score.included);
    }
    return score;
}

IndicatorStats compute_indicators(std::span<const PredictionPoint> points) {
    IndicatorStats stats;
    stats.n_days = points.size();
    stats.trend = trend_ok(points);
    if (points.empty()) {
        return stats;
    }
    std::vector<double> preds;
    std::vector<double> actuals;
    preds.reserve(points.size());
    actuals.reserve(points.size());
    for (const auto& p : points) {
        preds.push_back(p.predicted);
        actuals.push_back(p.actual);
    }
    stats.mape = mape(preds, actuals);
    stats.okape = okape(points);
    return stats;
}

std::vector<IndicatorRow> indicator_tables(const BacktestReport& report) {
    if (report.days.empty()) {
        throw std::invalid_argument("indicator_tables: empty report");
    }
    std::vector<IndicatorRow> rows;
    rows.reserve(report.levels.size());
    for (std::size_t l = 0; l < report.levels.size(); ++l) {
        std::vector<PredictionPoint> stream;
        for (const auto& d : report.days) {
            if (d.level_averages[l]) {
                stream.push_back({d.previous, *d.level_averages[l], d.actual_next});
            }
        }
        rows.push_back({report.levels[l], compute_indicators(stream)});
    }
    return rows;
}

std::vector<CombinationRow> combination_table(const BacktestReport& report) {
    const auto& g = report.grid;
    std::vector<CombinationRow> rows;
    rows.reserve(g.size());
    for (std::size_t ki = 0; ki < g.k_values.size(); ++ki) {
        for (std::size_t si = 0; si < g.sequences.size(); ++si) {
            for (std::size_t hi = 0; hi < g.horizons.size(); ++hi) {
                const auto idx = g.cell_index(ki, si, hi);
                std::vector<PredictionPoint> stream;
                for (const auto& d : report.days) {
                    const auto& c = d.cells[idx];
                    if (c.status == CellStatus::ok) {
                        stream.push_back({d.previous, c.value, d.actual_next});
                    }
                }
                rows.push_back({g.k_values[ki], g.sequences[si].name, g.horizons[hi], compute_indicators(stream)});
            }
        }
    }
    return rows;
}

WinRateTable win_rate_table(const BacktestReport& report) {
    const auto& g = report.grid;
    std::vector<std::size_t> k_wins(g.k_values.size(), 0);
    std::vector<std::size_t> s_wins(g.sequences.size(), 0);
    std::vector<std::size_t> h_wins(g.horizons.size(), 0);
    WinRateTable table;
    for (const auto& d : report.days) {
        std::optional<std::size_t> best;
        double best_ape = 0.0;
        for (std::size_t i = 0; i < d.cells.size(); ++i) {
            if (d.cells[i].status != CellStatus::ok) {
                continue;
            }
            const double ape = absolute_percentage_error(d.cells[i].value, d.actual_next);
            if (!best || ape < best_ape) {
                best = i;
                best_ape = ape;
            }
        }
        if (!best) {
            continue;
        }
        ++table.days;
        const std::size_t per_k = g.sequences.size() * g.horizons.size();
        ++k_wins[*best / per_k];
        ++s_wins[(*best / g.horizons.size()) % g.sequences.size()];
        ++h_wins[*best % g.horizons.size()];
    }
    if (table.days == 0) {
        throw std::domain_error("win_rate_table: no day has a valid cell");
    }
    const auto percent = [&](std::size_t wins) { return 100.0 * static_cast<double>(wins) / static_cast<double>(table.days); };
    std::size_t l = 0;
    for (const auto& level : report.levels) {
        std::size_t wins = 0;
        if (level.dimension == Dimension::k) {
            wins = k_wins[l];
        } else if (level.dimension == Dimension::sequence) {
            wins = s_wins[l - g.k_values.size()];
        } else {
            wins = h_wins[l - g.k_values.size() - g.sequences.size()];
        }
        table.rows.push_back({level, wins, percent(wins)});
        ++l;
    }
    return table;
}

}  // namespace rgforecast

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgforecast/scenario.hpp"
#include "rgforecast/series.hpp"

namespace rgforecast {

struct CellPrediction {
    CellStatus status = CellStatus::ok;
    double value = 0.0;  // NaN unless status is ok
};

/// Everything predicted at one anchor, scored against the next close only.
struct DayOutcome {
    std::size_t anchor_index = 0;
    std::string anchor_label;
    double previous = 0.0;     // value at the anchor
    double actual_next = 0.0;  // value at anchor + 1
    double predicted = 0.0;    // mean over all valid cells; NaN if none
    std::vector<CellPrediction> cells;                  // GridSpec cell order
    std::vector<std::optional<double>> level_averages;  // grid_levels() order
};

struct BacktestReport {
    GridSpec grid;
    std::vector<GridLevel> levels;
    std::vector<DayOutcome> days;

    [[nodiscard]] std::size_t excluded_cells() const noexcept;
};

/**
 * Rolling-forward backtest over anchors [first, last]. Each anchor only sees
 * values up to itself; its forecasts are scored against anchor + 1. Days are
 * evaluated on up to `threads` workers (0 = hardware concurrency); results
 * do not depend on the thread count.
 */
[[nodiscard]] BacktestReport backtest(const TimeSeries& series, const GridSpec& grid, std::size_t first, std::size_t last,
                                      unsigned threads = 0);

struct PredictionPoint {
    double previous = 0.0;
    double predicted = 0.0;
    double actual = 0.0;
};

/// Absolute percentage error 100 |predicted - actual| / actual.
[[nodiscard]] double absolute_percentage_error(double predicted, double actual) noexcept;

/// Mean of 100 |p - a| / a, in percent.
[[nodiscard]] double mape(std::span<const double> predictions, std::span<const double> actuals);

/// Percent of days whose APE is strictly below the realized one-day move 100 |a - prev| / prev.
[[nodiscard]] double okape(std::span<const PredictionPoint> points);

struct TrendScore {
    std::optional<double> percent;  // empty when every day is flat
    std::size_t included = 0;
    std::size_t flat_days = 0;
};

/// Sign agreement of (predicted - previous) with (actual - previous); flat days are excluded.
[[nodiscard]] TrendScore trend_ok(std::span<const PredictionPoint> points);

struct IndicatorStats {
    std::size_t n_days = 0;
    std::optional<double> mape;
    std::optional<double> okape;
    TrendScore trend;
};

[[nodiscard]] IndicatorStats compute_indicators(std::span<const PredictionPoint> points);

struct IndicatorRow {
    GridLevel level;
    IndicatorStats stats;
};

/// One row per grid level, computed on that level's daily averaged prediction.
[[nodiscard]] std::vector<IndicatorRow> indicator_tables(const BacktestReport& report);

struct CombinationRow {
    int k = 0;
    std::string sequence;
    double horizon = 0.0;
    IndicatorStats stats;
};

/// One row per grid cell, computed on that cell's own prediction stream.
[[nodiscard]] std::vector<CombinationRow> combination_table(const BacktestReport& report);

struct WinRateRow {
    GridLevel level;
    std::size_t wins = 0;
    double percent = 0.0;
};

struct WinRateTable {
    std::size_t days = 0;  // days with at least one valid cell
    std::vector<WinRateRow> rows;  // grid_levels() order
};

/// Per day the valid cell with minimal APE wins (first in cell order on ties).
[[nodiscard]] WinRateTable win_rate_table(const BacktestReport& report);

}  // namespace rgforecast

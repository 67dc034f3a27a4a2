#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rgforecast/evaluation.hpp"
#include "rgforecast/scenario.hpp"

namespace rgforecast {

enum class ReportFormat { table, csv };

[[nodiscard]] ReportFormat parse_report_format(std::string_view text);

/// MAPE to three decimals, percentages to one; "n/a" for missing values.
[[nodiscard]] std::string format_mape(const std::optional<double>& value);
[[nodiscard]] std::string format_percent(const std::optional<double>& value);

/// The per-k, per-sequence and per-horizon tables with columns (level, MAPE, OKAPE, %TrendOK).
[[nodiscard]] std::string render_indicator_tables(const std::vector<IndicatorRow>& rows, ReportFormat format);
[[nodiscard]] std::string render_combination_table(const std::vector<CombinationRow>& rows, ReportFormat format);
[[nodiscard]] std::string render_win_rates(const WinRateTable& table, ReportFormat format);
/// Per-day anchor, previous, actual, ensemble mean and each level average.
[[nodiscard]] std::string render_daily_outcomes(const BacktestReport& report);
/// Per-day, per-cell prediction log: anchor label, cell id, prediction, status.
[[nodiscard]] std::string render_prediction_log(const BacktestReport& report);

/// Writes indicators, combinations, win_rates, days and predictions CSV files; returns their paths.
std::vector<std::filesystem::path> write_report(const BacktestReport& report, const std::filesystem::path& out_dir);

/// Everything shown for a single anchor: grid, averages and weighted forecasts.
struct ForecastSummary {
    std::size_t anchor_index = 0;
    std::string anchor_label;
    double anchor_value = 0.0;
    GridSpec grid;
    std::vector<ForecastScenario> scenarios;
    std::vector<std::pair<GridLevel, std::optional<LevelAverage>>> averages;
    struct HorizonWeighting {
        ScenarioWeights weights;
        std::optional<double> weighted;
        std::optional<CellKey> most_probable;
    };
    std::vector<HorizonWeighting> horizons;
};

[[nodiscard]] ForecastSummary summarize_forecast(const TimeSeries& series, std::size_t anchor, const GridSpec& grid);
[[nodiscard]] std::string render_forecast_summary(const ForecastSummary& summary, ReportFormat format);

}  // namespace rgforecast

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rgforecast/extrapolator.hpp"
#include "rgforecast/series.hpp"

namespace rgforecast {

/// Pairwise (cascade) summation in the given element order.
[[nodiscard]] double pairwise_sum(std::span<const double> values) noexcept;

/// The (k, sequence, horizon) grid. Defaults give 4 * 3 * 5 = 60 cells.
struct GridSpec {
    std::vector<int> k_values{3, 4, 5, 6};
    std::vector<SequenceSpec> sequences = builtin_sequences();
    std::vector<double> horizons{0.1, 0.3, 0.5, 0.7, 1.0};

    /// Throws std::invalid_argument on empty lists, k < 1, duplicate levels or horizons outside (0, 1].
    void validate() const;
    [[nodiscard]] std::size_t size() const noexcept { return k_values.size() * sequences.size() * horizons.size(); }
    /// Position of a cell in the (k, sequence, horizon) row-major order.
    [[nodiscard]] std::size_t cell_index(std::size_t k_pos, std::size_t seq_pos, std::size_t h_pos) const noexcept {
        return (k_pos * sequences.size() + seq_pos) * horizons.size() + h_pos;
    }
    /// Number of prior trading days the deepest runnable cell needs.
    [[nodiscard]] std::size_t required_history() const;
};

enum class CellStatus { ok, diverged, zero_coefficient, insufficient_history };

[[nodiscard]] const char* to_string(CellStatus status) noexcept;

struct ForecastScenario {
    int k = 0;
    std::string sequence;
    double horizon = 0.0;
    std::size_t anchor_index = 0;
    CellStatus status = CellStatus::ok;
    std::optional<Forecast> forecast;

    [[nodiscard]] bool valid() const noexcept { return status == CellStatus::ok; }
    /// Forecast value; NaN for errored cells.
    [[nodiscard]] double value() const noexcept;
};

/**
 * One forecast per grid cell, ordered by k, then sequence, then horizon.
 * Cells lacking history, with a zero interior coefficient or with a diverged
 * exponent carry the matching status. Throws std::out_of_range when no cell
 * has enough history.
 */
[[nodiscard]] std::vector<ForecastScenario> run_grid(const TimeSeries& series, std::size_t anchor, const GridSpec& grid);

enum class Dimension { k, sequence, horizon };

[[nodiscard]] const char* to_string(Dimension dimension) noexcept;

using LevelValue = std::variant<int, std::string, double>;

/// One fixed value of one grid dimension, e.g. k = 3 or sequence = B.
struct GridLevel {
    Dimension dimension;
    LevelValue value;

    [[nodiscard]] bool matches(const ForecastScenario& cell) const;
    [[nodiscard]] std::string label() const;
};

/// All levels in table order: every k, then every sequence, then every horizon.
[[nodiscard]] std::vector<GridLevel> grid_levels(const GridSpec& grid);

struct LevelAverage {
    double mean = 0.0;
    std::size_t cells = 0;
};

/// Mean of the valid cells at the level. Throws std::domain_error when none remain.
[[nodiscard]] LevelAverage fixed_dimension_average(std::span<const ForecastScenario> scenarios, const GridLevel& level);

struct CellKey {
    int k = 0;
    std::string sequence;

    friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct WeightEntry {
    CellKey cell;
    double forecast = 0.0;       // f_k*(j, t)
    double increment = 0.0;      // f_k* - f_{k-1}*
    double entropy = 0.0;        // ln |increment|
    double delta_entropy = 0.0;  // entropy - first-order entropy
    double multiplier = 0.0;     // |increment / first-order increment|
    double probability = 0.0;
    bool degenerate = false;     // zero increment
};

struct LevelMultiplier {
    int k = 0;
    /// Harmonic combination 1 / sum_j 1/|m|; empty when no regular multiplier exists.
    std::optional<double> mean_multiplier;
};

/// Scenario probabilities at one horizon. Probabilities sum to one within each k.
struct ScenarioWeights {
    double horizon = 1.0;
    std::vector<WeightEntry> entries;  // grid order: k outer, sequence inner
    std::vector<LevelMultiplier> average_multipliers;
    std::size_t excluded = 0;

    [[nodiscard]] std::optional<double> probability(const CellKey& cell) const;
};

/**
 * Within-level probabilities |m_bar / m_j| for multipliers |m_j|.
 * A zero (or NaN) multiplier marks a converged cell: it receives the largest
 * regular probability, or 1 if there is none, before renormalization. An
 * infinite multiplier gets probability zero. The result sums to one.
 */
[[nodiscard]] std::vector<double> level_probabilities(std::span<const double> multipliers);

/**
 * Entropy-based weights for the grid's k levels and sequences at one horizon.
 * Increments use successive orders, f_k* - f_{k-1}* with f_0* = f_0, and the
 * multiplier compares each sequence with its own first-order increment.
 */
[[nodiscard]] ScenarioWeights scenario_weights(const TimeSeries& series, std::size_t anchor, const GridSpec& grid, double horizon);

/**
 * sum p_k(j) f_k*(j) over the weighted cells, divided by the total weight so
 * the result is a convex combination. Scenarios are matched on (k, sequence)
 * at the weights' horizon. Throws std::domain_error if no weight remains.
 */
[[nodiscard]] double weighted_forecast(std::span<const ForecastScenario> scenarios, const ScenarioWeights& weights);

/// argmax p; ties go to the earlier entry (smaller k, then grid sequence order).
[[nodiscard]] CellKey most_probable_scenario(const ScenarioWeights& weights);

}  // namespace rgforecast

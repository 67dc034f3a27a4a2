#include "rgforecast/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace rgforecast {

double pairwise_sum(std::span<const double> values) noexcept {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const auto half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void GridSpec::validate() const {
    if (k_values.empty() || sequences.empty() || horizons.empty()) {
        throw std::invalid_argument("grid: k values, sequences and horizons must be non-empty");
    }
    if (std::set<int>(k_values.begin(), k_values.end()).size() != k_values.size()) {
        throw std::invalid_argument("grid: duplicate k value");
    }
    for (int k : k_values) {
        if (k < 1) {
            throw std::invalid_argument(fmt::format("grid: k = {} must be >= 1", k));
        }
    }
    std::set<std::string> names;
    for (const auto& s : sequences) {
        if (!names.insert(s.name).second) {
            throw std::invalid_argument(fmt::format("grid: duplicate sequence '{}'", s.name));
        }
    }
    if (std::set<double>(horizons.begin(), horizons.end()).size() != horizons.size()) {
        throw std::invalid_argument("grid: duplicate horizon");
    }
    for (double h : horizons) {
        if (!(h > 0.0 && h <= 1.0)) {
            throw std::invalid_argument(fmt::format("grid: horizon {} outside (0, 1]", h));
        }
    }
}

std::size_t GridSpec::required_history() const {
    std::size_t depth = 0;
    for (const auto& seq : sequences) {
        for (int k : k_values) {
            if (k >= 0 && k <= seq.max_order()) {
                depth = std::max(depth, static_cast<std::size_t>(-seq.offsets[static_cast<std::size_t>(k)]));
            }
        }
    }
    return depth;
}

const char* to_string(CellStatus status) noexcept {
    switch (status) {
        case CellStatus::ok:
            return "ok";
        case CellStatus::diverged:
            return "diverged";
        case CellStatus::zero_coefficient:
            return "zero_coefficient";
        case CellStatus::insufficient_history:
            return "insufficient_history";
    }
    return "unknown";
}

const char* to_string(Dimension dimension) noexcept {
    switch (dimension) {
        case Dimension::k:
            return "k";
        case Dimension::sequence:
            return "sequence";
        case Dimension::horizon:
            return "horizon";
    }
    return "unknown";
}

double ForecastScenario::value() const noexcept {
    if (!valid() || !forecast) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return forecast->value;
}

std::vector<ForecastScenario> run_grid(const TimeSeries& series, std::size_t anchor, const GridSpec& grid) {
    grid.validate();
    if (anchor >= series.size()) {
        throw std::out_of_range(fmt::format("anchor {} outside series of length {}", anchor, series.size()));
    }
    std::vector<ForecastScenario> cells;
    cells.reserve(grid.size());
    bool any_history = false;
    for (int k : grid.k_values) {
        for (const auto& seq : grid.sequences) {
            std::optional<PolynomialFit> poly;
            CellStatus shared = CellStatus::ok;
            if (has_history(series, anchor, seq, k)) {
                any_history = true;
                poly = fit(past_history(series, anchor, seq, k));
            } else {
                shared = CellStatus::insufficient_history;
            }
            for (double h : grid.horizons) {
                ForecastScenario cell{k, seq.name, h, anchor, shared, std::nullopt};
                if (poly) {
                    try {
                        cell.forecast = forecast(*poly, h);
                        cell.status = cell.forecast->ok() ? CellStatus::ok : CellStatus::diverged;
                    } catch (const ZeroCoefficientError&) {
                        cell.status = CellStatus::zero_coefficient;
                    }
                }
                cells.push_back(std::move(cell));
            }
        }
    }
    if (!any_history) {
        throw std::out_of_range(fmt::format("anchor {} has insufficient history for every grid cell", anchor));
    }
    return cells;
}

bool GridLevel::matches(const ForecastScenario& cell) const {
    switch (dimension) {
        case Dimension::k:
            return cell.k == std::get<int>(value);
        case Dimension::sequence:
            return cell.sequence == std::get<std::string>(value);
        case Dimension::horizon:
            return cell.horizon == std::get<double>(value);
    }
    return false;
}

std::string GridLevel::label() const {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, int>) {
                return std::to_string(v);
            } else {
                return fmt::format("{:g}", v);
            }
        },
        value);
}

std::vector<GridLevel> grid_levels(const GridSpec& grid) {
    std::vector<GridLevel> levels;
    for (int k : grid.k_values) {
        levels.push_back({Dimension::k, k});
    }
    for (const auto& s : grid.sequences) {
        levels.push_back({Dimension::sequence, s.name});
    }
    for (double h : grid.horizons) {
        levels.push_back({Dimension::horizon, h});
    }
    return levels;
}

LevelAverage fixed_dimension_average(std::span<const ForecastScenario> scenarios, const GridLevel& level) {
    std::vector<double> selected;
    for (const auto& cell : scenarios) {
        if (cell.valid() && level.matches(cell)) {
            selected.push_back(cell.value());
        }
    }
    if (selected.empty()) {
        throw std::domain_error(fmt::format("no valid scenario at {} = {}", to_string(level.dimension), level.label()));
    }
    return {pairwise_sum(selected) / static_cast<double>(selected.size()), selected.size()};
}

std::optional<double> ScenarioWeights::probability(const CellKey& cell) const {
    for (const auto& e : entries) {
        if (e.cell == cell) {
            return e.probability;
        }
    }
    return std::nullopt;
}

std::vector<double> level_probabilities(std::span<const double> multipliers) {
    std::vector<double> p(multipliers.size(), 0.0);
    if (multipliers.empty()) {
        return p;
    }
    std::vector<double> inverses;
    for (double m : multipliers) {
        const double am = std::abs(m);
        if (std::isfinite(am) && am > 0.0) {
            inverses.push_back(1.0 / am);
        }
    }
    const bool any_regular = !inverses.empty();
    const double mean_multiplier = any_regular ? 1.0 / pairwise_sum(inverses) : 0.0;
    double largest = any_regular ? 0.0 : 1.0;
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
        const double am = std::abs(multipliers[i]);
        if (std::isfinite(am) && am > 0.0) {
            p[i] = mean_multiplier / am;
            largest = std::max(largest, p[i]);
        }
    }
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
        const double am = std::abs(multipliers[i]);
        if (std::isnan(am) || am == 0.0) {
            p[i] = largest;
        }
    }
    const double total = pairwise_sum(p);
    if (total == 0.0) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
        return p;
    }
    for (auto& x : p) {
        x /= total;
    }
    return p;
}

ScenarioWeights scenario_weights(const TimeSeries& series, std::size_t anchor, const GridSpec& grid, double horizon) {
    grid.validate();
    if (!(horizon > 0.0 && horizon <= 1.0)) {
        throw std::invalid_argument("scenario_weights: horizon must lie in (0, 1]");
    }
    if (anchor >= series.size()) {
        throw std::out_of_range(fmt::format("anchor {} outside series of length {}", anchor, series.size()));
    }
    const int k_max = *std::max_element(grid.k_values.begin(), grid.k_values.end());
    const double f0 = series[anchor];

    // orders[j][n] = f_n*(j, t) for n = 0..k_max, empty where not computable.
    std::vector<std::vector<std::optional<double>>> orders(grid.sequences.size());
    for (std::size_t j = 0; j < grid.sequences.size(); ++j) {
        const auto& seq = grid.sequences[j];
        auto& row = orders[j];
        row.assign(static_cast<std::size_t>(k_max) + 1, std::nullopt);
        row[0] = f0;
        for (int n = 1; n <= k_max; ++n) {
            if (!has_history(series, anchor, seq, n)) {
                break;
            }
            try {
                const auto fc = forecast(fit(past_history(series, anchor, seq, n)), horizon);
                if (fc.ok()) {
                    row[static_cast<std::size_t>(n)] = fc.value;
                }
            } catch (const ZeroCoefficientError&) {
            }
        }
    }

    ScenarioWeights out;
    out.horizon = horizon;
    for (int k : grid.k_values) {
        std::vector<WeightEntry> level;
        std::vector<double> multipliers;
        for (std::size_t j = 0; j < grid.sequences.size(); ++j) {
            const auto& row = orders[j];
            const auto ku = static_cast<std::size_t>(k);
            if (!row[ku] || !row[ku - 1] || !row[1]) {
                ++out.excluded;
                continue;
            }
            WeightEntry e;
            e.cell = {k, grid.sequences[j].name};
            e.forecast = *row[ku];
            e.increment = *row[ku] - *row[ku - 1];
            const double first = *row[1] - f0;
            e.entropy = std::log(std::abs(e.increment));
            e.delta_entropy = e.entropy - std::log(std::abs(first));
            e.degenerate = e.increment == 0.0;
            e.multiplier = e.degenerate ? 0.0 : std::abs(e.increment) / std::abs(first);
            multipliers.push_back(e.multiplier);
            level.push_back(std::move(e));
        }
        LevelMultiplier lm{k, std::nullopt};
        double inverse_sum = 0.0;
        for (double m : multipliers) {
            if (std::isfinite(m) && m > 0.0) {
                inverse_sum += 1.0 / m;
            }
        }
        if (inverse_sum > 0.0) {
            lm.mean_multiplier = 1.0 / inverse_sum;
        }
        out.average_multipliers.push_back(lm);
        const auto p = level_probabilities(multipliers);
        for (std::size_t i = 0; i < level.size(); ++i) {
            level[i].probability = p[i];
            out.entries.push_back(std::move(level[i]));
        }
    }
    return out;
}

double weighted_forecast(std::span<const ForecastScenario> scenarios, const ScenarioWeights& weights) {
    std::vector<double> weighted;
    std::vector<double> mass;
    for (const auto& e : weights.entries) {
        const auto it = std::find_if(scenarios.begin(), scenarios.end(), [&](const ForecastScenario& s) {
            return s.valid() && s.k == e.cell.k && s.sequence == e.cell.sequence && s.horizon == weights.horizon;
        });
        if (it == scenarios.end() || !(e.probability > 0.0)) {
            continue;
        }
        weighted.push_back(e.probability * it->value());
        mass.push_back(e.probability);
    }
    const double total = pairwise_sum(mass);
    if (!(total > 0.0)) {
        throw std::domain_error("weighted_forecast: every weighted cell is degenerate or missing");
    }
    return pairwise_sum(weighted) / total;
}

CellKey most_probable_scenario(const ScenarioWeights& weights) {
    if (weights.entries.empty()) {
        throw std::domain_error("most_probable_scenario: no weighted cells");
    }
    const WeightEntry* best = &weights.entries.front();
    for (const auto& e : weights.entries) {
        if (e.probability > best->probability || (e.probability == best->probability && e.cell.k < best->cell.k)) {
            best = &e;
        }
    }
    return best->cell;
}

}  // namespace rgforecast

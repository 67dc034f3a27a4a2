#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rgforecast {

/// Raised for malformed input files and invalid series construction.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Observation {
    std::string label;
    /// Chronological sort key: days since 1970-01-01 for dated rows, row position otherwise.
    std::int64_t ordinal = 0;
    double value = 0.0;
};

/**
 * Daily observations of a strictly positive quantity, indexed by trading-day
 * position 0..N-1 in chronological order. Immutable after construction.
 */
class TimeSeries {
public:
    explicit TimeSeries(std::vector<Observation> observations);

    /// Undated series; labels are the zero-based positions.
    static TimeSeries from_values(std::span<const double> values);

    [[nodiscard]] std::size_t size() const noexcept { return observations_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return observations_[i].value; }
    [[nodiscard]] double value(std::size_t i) const { return observations_.at(i).value; }
    [[nodiscard]] const std::string& label(std::size_t i) const { return observations_.at(i).label; }
    [[nodiscard]] const std::vector<Observation>& observations() const noexcept { return observations_; }
    [[nodiscard]] std::vector<double> values() const;

    /// Exact label lookup; no nearest-date matching.
    [[nodiscard]] std::optional<std::size_t> find_label(std::string_view label) const;

    /// Copy of observations [0, count).
    [[nodiscard]] TimeSeries head(std::size_t count) const;
    /// Every value multiplied by factor > 0; labels unchanged.
    [[nodiscard]] TimeSeries scaled(double factor) const;

private:
    std::vector<Observation> observations_;
};

/// Column selector: header name or zero-based position.
using ColumnRef = std::variant<std::string, std::size_t>;

struct ColumnSpec {
    /// No date column means labels are generated from row positions.
    std::optional<ColumnRef> date = ColumnRef{std::size_t{0}};
    ColumnRef value = ColumnRef{std::size_t{1}};
    char delimiter = ',';
};

/// Parses "none", a non-negative integer (position) or a header name.
[[nodiscard]] std::optional<ColumnRef> parse_column_ref(const std::string& text);

/**
 * Reads a delimited text file with a header row. Rows whose value field is
 * empty or a missing-value marker (NA, NaN, null, ".") are skipped; any
 * other unparsable value, and any value <= 0, is fatal. The result is sorted
 * chronologically; duplicate dates are rejected.
 */
[[nodiscard]] TimeSeries load_series(const std::filesystem::path& path, const ColumnSpec& columns = {});
[[nodiscard]] TimeSeries parse_series(std::string_view text, const ColumnSpec& columns = {});

/// Parses YYYY-MM-DD (also '/' or '.' separated) or YYYYMMDD into days since epoch.
[[nodiscard]] std::optional<std::int64_t> parse_date_ordinal(std::string_view text);

/// Past-time offsets in trading days: offsets[0] == 0, strictly decreasing.
struct SequenceSpec {
    std::string name;
    std::vector<int> offsets;

    SequenceSpec(std::string name, std::vector<int> offsets);

    /// Largest k this sequence supports.
    [[nodiscard]] int max_order() const noexcept { return static_cast<int>(offsets.size()) - 1; }

    friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;
};

/// A, B (Fibonacci spacing) or C (even two-day spacing).
[[nodiscard]] SequenceSpec builtin_sequence(std::string_view name);
[[nodiscard]] std::vector<SequenceSpec> builtin_sequences();

/// Parses "A", "B", "C" or a custom "NAME=0:-1:-3:..." definition.
[[nodiscard]] SequenceSpec parse_sequence(std::string_view text);

struct HistoryPoint {
    double t;
    double f;
};

/// Backward-recursion snapshot: t_0 = 0 > t_1 > ... > t_k, all f_n > 0.
class PastHistory {
public:
    PastHistory(std::vector<HistoryPoint> points, std::size_t anchor_index);

    [[nodiscard]] const std::vector<HistoryPoint>& points() const noexcept { return points_; }
    [[nodiscard]] int order() const noexcept { return static_cast<int>(points_.size()) - 1; }
    [[nodiscard]] std::size_t anchor_index() const noexcept { return anchor_index_; }
    [[nodiscard]] double f0() const noexcept { return points_.front().f; }

    [[nodiscard]] PastHistory scaled(double factor) const;

private:
    std::vector<HistoryPoint> points_;
    std::size_t anchor_index_;
};

/// True when series has enough values before anchor for seq at order k.
[[nodiscard]] bool has_history(const TimeSeries& series, std::size_t anchor, const SequenceSpec& seq, int k) noexcept;

/// points[n] = (offsets[n], series[anchor + offsets[n]]) for n = 0..k.
[[nodiscard]] PastHistory past_history(const TimeSeries& series, std::size_t anchor, const SequenceSpec& seq, int k);

}  // namespace rgforecast

#include "rgforecast/series.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace rgforecast {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Splits one delimited record; double-quoted fields may contain the delimiter.
std::vector<std::string> split_record(std::string_view line, char delimiter) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

bool is_missing_marker(std::string_view field) {
    if (field.empty() || field == ".") {
        return true;
    }
    const auto l = lower(field);
    return l == "na" || l == "nan" || l == "null" || l == "n/a";
}

std::optional<double> parse_real(std::string_view field) {
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::size_t resolve_column(const ColumnRef& ref, const std::vector<std::string>& header) {
    if (const auto* pos = std::get_if<std::size_t>(&ref)) {
        if (*pos >= header.size()) {
            throw DataError(fmt::format("column position {} out of range (header has {} columns)", *pos, header.size()));
        }
        return *pos;
    }
    const auto wanted = lower(trim(std::get<std::string>(ref)));
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (lower(trim(header[i])) == wanted) {
            return i;
        }
    }
    throw DataError(fmt::format("column '{}' not found in header", std::get<std::string>(ref)));
}

}  // namespace

TimeSeries::TimeSeries(std::vector<Observation> observations) : observations_(std::move(observations)) {
    if (observations_.empty()) {
        throw DataError("time series must contain at least one observation");
    }
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const auto& obs = observations_[i];
        if (!std::isfinite(obs.value) || obs.value <= 0.0) {
            throw DataError(fmt::format("non-positive value {} at '{}'", obs.value, obs.label));
        }
        if (i > 0 && obs.ordinal <= observations_[i - 1].ordinal) {
            throw DataError(fmt::format("labels not strictly increasing at '{}'", obs.label));
        }
    }
}

TimeSeries TimeSeries::from_values(std::span<const double> values) {
    std::vector<Observation> obs;
    obs.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        obs.push_back({std::to_string(i), static_cast<std::int64_t>(i), values[i]});
    }
    return TimeSeries(std::move(obs));
}

std::vector<double> TimeSeries::values() const {
    std::vector<double> out;
    out.reserve(observations_.size());
    for (const auto& obs : observations_) {
        out.push_back(obs.value);
    }
    return out;
}

std::optional<std::size_t> TimeSeries::find_label(std::string_view label) const {
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        if (observations_[i].label == label) {
            return i;
        }
    }
    return std::nullopt;
}

TimeSeries TimeSeries::head(std::size_t count) const {
    if (count == 0 || count > observations_.size()) {
        throw std::out_of_range("head: count out of range");
    }
    return TimeSeries(std::vector<Observation>(observations_.begin(), observations_.begin() + static_cast<std::ptrdiff_t>(count)));
}

TimeSeries TimeSeries::scaled(double factor) const {
    if (!(factor > 0.0)) {
        throw std::invalid_argument("scale factor must be positive");
    }
    auto obs = observations_;
    for (auto& o : obs) {
        o.value *= factor;
    }
    return TimeSeries(std::move(obs));
}

std::optional<ColumnRef> parse_column_ref(const std::string& text) {
    const auto t = trim(text);
    if (lower(t) == "none") {
        return std::nullopt;
    }
    std::size_t pos = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, pos);
    if (!t.empty() && ec == std::errc{} && ptr == end) {
        return ColumnRef{pos};
    }
    return ColumnRef{std::string(t)};
}

std::optional<std::int64_t> parse_date_ordinal(std::string_view text) {
    text = trim(text);
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    auto number = [](std::string_view s, auto& out) {
        const auto* end = s.data() + s.size();
        const auto [ptr, ec] = std::from_chars(s.data(), end, out);
        return !s.empty() && ec == std::errc{} && ptr == end;
    };
    if (text.size() == 8 && text.find_first_not_of("0123456789") == std::string_view::npos) {
        if (!number(text.substr(0, 4), y) || !number(text.substr(4, 2), m) || !number(text.substr(6, 2), d)) {
            return std::nullopt;
        }
    } else if (text.size() >= 8 && text.size() <= 10 && (text[4] == '-' || text[4] == '/' || text[4] == '.')) {
        const char sep = text[4];
        const auto second = text.find(sep, 5);
        if (second == std::string_view::npos || !number(text.substr(0, 4), y) ||
            !number(text.substr(5, second - 5), m) || !number(text.substr(second + 1), d)) {
            return std::nullopt;
        }
    } else {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

TimeSeries parse_series(std::string_view text, const ColumnSpec& columns) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            header = split_record(line, columns.delimiter);
            break;
        }
    }
    if (header.empty()) {
        throw DataError("input has no header row");
    }
    const auto value_col = resolve_column(columns.value, header);
    const std::optional<std::size_t> date_col =
        columns.date ? std::optional<std::size_t>(resolve_column(*columns.date, header)) : std::nullopt;

    std::vector<Observation> rows;
    std::size_t line_no = 1;
    std::size_t data_row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_record(line, columns.delimiter);
        const auto needed = std::max(value_col, date_col.value_or(0));
        if (fields.size() <= needed) {
            throw DataError(fmt::format("line {}: expected at least {} fields, found {}", line_no, needed + 1, fields.size()));
        }
        const auto raw_value = trim(fields[value_col]);
        if (is_missing_marker(raw_value)) {
            continue;
        }
        const auto value = parse_real(raw_value);
        if (!value || !std::isfinite(*value)) {
            throw DataError(fmt::format("line {}: unparsable value '{}'", line_no, raw_value));
        }
        if (*value <= 0.0) {
            throw DataError(fmt::format("line {}: non-positive value {}", line_no, raw_value));
        }
        Observation obs;
        obs.value = *value;
        if (date_col) {
            const auto raw_date = trim(fields[*date_col]);
            const auto ordinal = parse_date_ordinal(raw_date);
            if (!ordinal) {
                throw DataError(fmt::format("line {}: unrecognized date '{}'", line_no, raw_date));
            }
            obs.label = std::string(raw_date);
            obs.ordinal = *ordinal;
        } else {
            obs.label = std::to_string(data_row);
            obs.ordinal = static_cast<std::int64_t>(data_row);
        }
        ++data_row;
        rows.push_back(std::move(obs));
    }
    if (rows.empty()) {
        throw DataError("no parsable rows");
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.ordinal < b.ordinal; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].ordinal == rows[i - 1].ordinal) {
            throw DataError(fmt::format("duplicate date '{}'", rows[i].label));
        }
    }
    return TimeSeries(std::move(rows));
}

TimeSeries load_series(const std::filesystem::path& path, const ColumnSpec& columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("cannot read '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_series(buffer.str(), columns);
}

SequenceSpec::SequenceSpec(std::string name_, std::vector<int> offsets_) : name(std::move(name_)), offsets(std::move(offsets_)) {
    if (name.empty()) {
        throw std::invalid_argument("sequence name must not be empty");
    }
    if (offsets.empty() || offsets.front() != 0) {
        throw std::invalid_argument(fmt::format("sequence {}: first offset must be 0", name));
    }
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        if (offsets[i] >= offsets[i - 1]) {
            throw std::invalid_argument(fmt::format("sequence {}: offsets must be strictly decreasing", name));
        }
    }
}

SequenceSpec builtin_sequence(std::string_view name) {
    if (name == "A") {
        return {"A", {0, -1, -2, -3, -4, -5, -6}};
    }
    if (name == "B") {
        return {"B", {0, -1, -2, -3, -5, -8, -13}};
    }
    if (name == "C") {
        return {"C", {0, -2, -4, -6, -8, -10, -12}};
    }
    throw std::invalid_argument(fmt::format("unknown built-in sequence '{}'", name));
}

std::vector<SequenceSpec> builtin_sequences() {
    return {builtin_sequence("A"), builtin_sequence("B"), builtin_sequence("C")};
}

SequenceSpec parse_sequence(std::string_view text) {
    text = trim(text);
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
        return builtin_sequence(text);
    }
    const auto name = std::string(trim(text.substr(0, eq)));
    std::vector<int> offsets;
    auto rest = text.substr(eq + 1);
    while (!rest.empty()) {
        const auto colon = rest.find(':');
        const auto part = trim(rest.substr(0, colon));
        int v = 0;
        const auto* end = part.data() + part.size();
        const auto [ptr, ec] = std::from_chars(part.data(), end, v);
        if (part.empty() || ec != std::errc{} || ptr != end) {
            throw std::invalid_argument(fmt::format("sequence {}: bad offset '{}'", name, part));
        }
        offsets.push_back(v);
        if (colon == std::string_view::npos) {
            break;
        }
        rest = rest.substr(colon + 1);
    }
    return {name, std::move(offsets)};
}

PastHistory::PastHistory(std::vector<HistoryPoint> points, std::size_t anchor_index)
    : points_(std::move(points)), anchor_index_(anchor_index) {
    if (points_.empty()) {
        throw std::invalid_argument("past history needs at least one point");
    }
    if (points_.front().t != 0.0) {
        throw std::invalid_argument("past history must start at t_0 = 0");
    }
    for (std::size_t n = 0; n < points_.size(); ++n) {
        if (!(points_[n].f > 0.0) || !std::isfinite(points_[n].f)) {
            throw std::invalid_argument("past history values must be positive");
        }
        if (n > 0 && !(points_[n].t < points_[n - 1].t)) {
            throw std::invalid_argument("past history times must be strictly decreasing");
        }
    }
}

PastHistory PastHistory::scaled(double factor) const {
    auto pts = points_;
    for (auto& p : pts) {
        p.f *= factor;
    }
    return PastHistory(std::move(pts), anchor_index_);
}

bool has_history(const TimeSeries& series, std::size_t anchor, const SequenceSpec& seq, int k) noexcept {
    if (k < 0 || k > seq.max_order() || anchor >= series.size()) {
        return false;
    }
    return static_cast<std::int64_t>(anchor) + seq.offsets[static_cast<std::size_t>(k)] >= 0;
}

PastHistory past_history(const TimeSeries& series, std::size_t anchor, const SequenceSpec& seq, int k) {
    if (k < 0 || k > seq.max_order()) {
        throw std::invalid_argument(fmt::format("k = {} exceeds sequence {} (max {})", k, seq.name, seq.max_order()));
    }
    if (anchor >= series.size()) {
        throw std::out_of_range(fmt::format("anchor {} outside series of length {}", anchor, series.size()));
    }
    if (!has_history(series, anchor, seq, k)) {
        throw std::out_of_range(fmt::format("insufficient history: anchor {} with sequence {} at k = {} needs offset {}",
                                            anchor, seq.name, k, seq.offsets[static_cast<std::size_t>(k)]));
    }
    std::vector<HistoryPoint> points;
    points.reserve(static_cast<std::size_t>(k) + 1);
    for (int n = 0; n <= k; ++n) {
        const auto offset = seq.offsets[static_cast<std::size_t>(n)];
        const auto index = static_cast<std::size_t>(static_cast<std::int64_t>(anchor) + offset);
        points.push_back({static_cast<double>(offset), series[index]});
    }
    return PastHistory(std::move(points), anchor);
}

}  // namespace rgforecast

#pragma once

#include "ars/clock.hpp"
#include "ars/core_model.hpp"
#include "ars/fraction.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ars {

struct EngineState;

/// Half-open [from, to) on server receipt time.
struct TimeRange {
  Instant from;
  Instant to;

  bool contains(Instant t) const { return from <= t && t < to; }
  bool operator==(const TimeRange&) const = default;
};

struct StatsFilter {
  std::optional<GroupId> group_id;
  std::optional<WindowId> window_id;
  std::optional<TimeRange> time_range;
  /// Count an Open window's partial responses.
  bool include_live = false;

  bool operator==(const StatsFilter&) const = default;
};

/// "group=G;window=W;from=ISO;to=ISO;live=1", any subset, any order.
StatsFilter parse_filter(std::string_view text);
std::string format_filter(const StatsFilter& filter);

struct OptionStats {
  OptionId option_id;
  std::string label;
  std::int64_t count = 0;
  Fraction fraction;

  bool operator==(const OptionStats&) const = default;
};

struct QuestionStats {
  QuestionId question_id;
  int revision = 1;
  ChoiceKind kind = ChoiceKind::SingleChoice;
  std::int64_t respondent_count = 0;
  std::vector<OptionStats> options;

  bool operator==(const QuestionStats&) const = default;
};

struct TabulatedStats {
  StatsFilter filter;
  GroupId group_id;
  /// Group order.
  std::vector<QuestionStats> questions;

  bool operator==(const TabulatedStats&) const = default;
};

/// Counts final (last-write-wins) responses selected by the filter. Without
/// include_live only Closed windows contribute.
/// Throws EmptyFilter, InvalidFilter, UnknownGroup, UnknownWindow.
TabulatedStats tabulate(const EngineState& state, const StatsFilter& filter);

struct ComparisonRow {
  QuestionId question_id;
  OptionId option_id;
  std::string label;
  bool aligned = false;
  std::optional<std::int64_t> count_left;
  std::optional<std::int64_t> count_right;
  std::optional<Fraction> fraction_left;
  std::optional<Fraction> fraction_right;
  /// left - right, aligned rows only.
  std::optional<Fraction> fraction_delta;

  bool operator==(const ComparisonRow&) const = default;
};

struct StatsComparison {
  StatsFilter left;
  StatsFilter right;
  /// Left rows in left order, then right-only rows in right order.
  std::vector<ComparisonRow> rows;

  std::size_t aligned_count() const;
};

StatsComparison compare(const TabulatedStats& left, const TabulatedStats& right);
StatsComparison compare(const EngineState& state, const StatsFilter& left,
                        const StatsFilter& right);

inline constexpr std::array<std::string_view, 12> kBarPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
};

struct BarSpec {
  OptionId option_id;
  std::string label;
  Fraction fraction;
  std::int64_t bar_length = 0;
  int color_index = 0;

  bool operator==(const BarSpec&) const = default;
};

struct QuestionBars {
  QuestionId question_id;
  std::vector<BarSpec> bars;

  bool operator==(const QuestionBars&) const = default;
};

struct BarChartSpec {
  std::int64_t max_width = 0;
  std::vector<QuestionBars> questions;

  bool operator==(const BarChartSpec&) const = default;
};

/// Throws ZeroWidth when max_width < 1.
BarChartSpec bar_layout(const TabulatedStats& stats, std::int64_t max_width);

inline constexpr std::string_view kCsvHeader =
    "group_id,window_id,question_id,option_id,label,count,respondents,fraction";

/// RFC 4180 (CRLF rows). Fractions with six digits, round-half-even.
std::string export_csv(const TabulatedStats& stats);

} // namespace ars

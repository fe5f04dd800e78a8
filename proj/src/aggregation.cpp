#include "ars/aggregation.hpp"

#include "ars/state.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace ars {

StatsFilter parse_filter(std::string_view text) {
  StatsFilter f;
  std::optional<Instant> from;
  std::optional<Instant> to;
  while (!text.empty()) {
    const auto semi = text.find(';');
    const auto part = text.substr(0, semi);
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (part.empty()) {
      continue;
    }
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidFilter, "filter term without '=': " + std::string(part));
    }
    const auto key = part.substr(0, eq);
    const auto value = std::string(part.substr(eq + 1));
    if (key == "group") {
      f.group_id = GroupId(value);
    } else if (key == "window") {
      f.window_id = WindowId(value);
    } else if (key == "from") {
      from = parse_iso(value);
    } else if (key == "to") {
      to = parse_iso(value);
    } else if (key == "live") {
      f.include_live = value == "1" || value == "true";
    } else {
      throw Error(ErrorCode::InvalidFilter, "unknown filter key: " + std::string(key));
    }
  }
  if (from || to) {
    f.time_range = TimeRange{from.value_or(Instant{Millis{std::numeric_limits<std::int64_t>::min() / 2}}),
                             to.value_or(Instant{Millis{std::numeric_limits<std::int64_t>::max() / 2}})};
  }
  return f;
}

std::string format_filter(const StatsFilter& filter) {
  std::string out;
  const auto add = [&](std::string_view key, const std::string& value) {
    if (!out.empty()) {
      out += ';';
    }
    out.append(key).append("=").append(value);
  };
  if (filter.group_id) add("group", filter.group_id->str());
  if (filter.window_id) add("window", filter.window_id->str());
  if (filter.time_range) {
    add("from", format_iso(filter.time_range->from));
    add("to", format_iso(filter.time_range->to));
  }
  if (filter.include_live) add("live", "1");
  return out;
}

TabulatedStats tabulate(const EngineState& state, const StatsFilter& filter) {
  if (!filter.group_id && !filter.window_id) {
    throw Error(ErrorCode::EmptyFilter, "filter needs a group or a window");
  }
  if (filter.time_range && filter.time_range->to < filter.time_range->from) {
    throw Error(ErrorCode::InvalidFilter, "time range ends before it starts");
  }
  GroupId group_id;
  std::vector<WindowId> windows;
  if (filter.window_id) {
    const auto& rec = state.sessions.get(*filter.window_id);
    if (filter.group_id && *filter.group_id != rec.window.group_id) {
      throw Error(ErrorCode::InvalidFilter,
                  "window " + filter.window_id->str() + " does not belong to group " +
                      filter.group_id->str());
    }
    group_id = rec.window.group_id;
    windows.push_back(*filter.window_id);
  } else {
    group_id = *filter.group_id;
  }
  const auto& group = state.groups.get(group_id);
  if (!filter.window_id) {
    windows = state.sessions.windows_of(group_id);
  }

  TabulatedStats out;
  out.filter = filter;
  out.group_id = group_id;
  std::map<QuestionId, std::size_t> index;
  for (const auto& item : group.items) {
    const auto& rev = state.pool.revision(item.question_id, item.revision);
    QuestionStats qs;
    qs.question_id = rev.question_id;
    qs.revision = rev.revision;
    qs.kind = rev.kind;
    for (const auto& opt : rev.options) {
      qs.options.push_back({opt.id, opt.label, 0, Fraction(0)});
    }
    index.emplace(rev.question_id, out.questions.size());
    out.questions.push_back(std::move(qs));
  }

  for (const auto& wid : windows) {
    const auto& rec = state.sessions.get(wid);
    if (rec.window.state == WindowState::Open && !filter.include_live) {
      continue;
    }
    for (const auto& [key, response] : rec.responses.finals) {
      if (filter.time_range && !filter.time_range->contains(response.received_at)) {
        continue;
      }
      const auto it = index.find(key.question_id);
      if (it == index.end()) {
        continue;
      }
      auto& qs = out.questions[it->second];
      ++qs.respondent_count;
      for (const auto& opt : response.options) {
        for (auto& os : qs.options) {
          if (os.option_id == opt) {
            ++os.count;
            break;
          }
        }
      }
    }
  }

  for (auto& qs : out.questions) {
    for (auto& os : qs.options) {
      os.fraction = qs.respondent_count > 0 ? Fraction(os.count, qs.respondent_count) : Fraction(0);
    }
  }
  return out;
}

std::size_t StatsComparison::aligned_count() const {
  std::size_t n = 0;
  for (const auto& r : rows) {
    n += r.aligned ? 1 : 0;
  }
  return n;
}

namespace {

struct Cell {
  const QuestionStats* question;
  const OptionStats* option;
};

std::map<std::pair<QuestionId, OptionId>, Cell> index_cells(const TabulatedStats& s) {
  std::map<std::pair<QuestionId, OptionId>, Cell> cells;
  for (const auto& q : s.questions) {
    for (const auto& o : q.options) {
      cells.emplace(std::pair{q.question_id, o.option_id}, Cell{&q, &o});
    }
  }
  return cells;
}

} // namespace

StatsComparison compare(const TabulatedStats& left, const TabulatedStats& right) {
  StatsComparison out;
  out.left = left.filter;
  out.right = right.filter;
  const auto right_cells = index_cells(right);
  const auto left_cells = index_cells(left);

  for (const auto& q : left.questions) {
    for (const auto& o : q.options) {
      ComparisonRow row;
      row.question_id = q.question_id;
      row.option_id = o.option_id;
      row.label = o.label;
      row.count_left = o.count;
      row.fraction_left = o.fraction;
      if (const auto it = right_cells.find({q.question_id, o.option_id}); it != right_cells.end()) {
        row.aligned = true;
        row.count_right = it->second.option->count;
        row.fraction_right = it->second.option->fraction;
        row.fraction_delta = o.fraction - it->second.option->fraction;
      }
      out.rows.push_back(std::move(row));
    }
  }
  for (const auto& q : right.questions) {
    for (const auto& o : q.options) {
      if (left_cells.contains({q.question_id, o.option_id})) {
        continue;
      }
      ComparisonRow row;
      row.question_id = q.question_id;
      row.option_id = o.option_id;
      row.label = o.label;
      row.count_right = o.count;
      row.fraction_right = o.fraction;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

StatsComparison compare(const EngineState& state, const StatsFilter& left,
                        const StatsFilter& right) {
  return compare(tabulate(state, left), tabulate(state, right));
}

BarChartSpec bar_layout(const TabulatedStats& stats, std::int64_t max_width) {
  if (max_width < 1) {
    throw Error(ErrorCode::ZeroWidth, "max_width must be at least 1");
  }
  BarChartSpec spec;
  spec.max_width = max_width;
  for (const auto& q : stats.questions) {
    QuestionBars qb;
    qb.question_id = q.question_id;
    for (std::size_t i = 0; i < q.options.size(); ++i) {
      const auto& o = q.options[i];
      BarSpec bar;
      bar.option_id = o.option_id;
      bar.label = o.label;
      bar.fraction = o.fraction;
      bar.bar_length = std::clamp<std::int64_t>(round_scaled(o.fraction, max_width), 0, max_width);
      bar.color_index = static_cast<int>(i % kBarPalette.size());
      qb.bars.push_back(std::move(bar));
    }
    spec.questions.push_back(std::move(qb));
  }
  return spec;
}

namespace {

void append_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') {
      out.push_back('"');
    }
    out.push_back(c);
  }
  out.push_back('"');
}

} // namespace

std::string export_csv(const TabulatedStats& stats) {
  std::string out(kCsvHeader);
  out += "\r\n";
  const std::string window = stats.filter.window_id ? stats.filter.window_id->str() : "";
  for (const auto& q : stats.questions) {
    for (const auto& o : q.options) {
      append_field(out, stats.group_id.str());
      out += ',';
      append_field(out, window);
      out += ',';
      append_field(out, q.question_id.str());
      out += ',';
      append_field(out, o.option_id.str());
      out += ',';
      append_field(out, o.label);
      out += ',';
      out += std::to_string(o.count);
      out += ',';
      out += std::to_string(q.respondent_count);
      out += ',';
      out += to_decimal(o.fraction, 6);
      out += "\r\n";
    }
  }
  return out;
}

} // namespace ars

#include "ars/codec.hpp"

namespace ars {

json instant_json(Instant t) { return format_iso(t); }

Instant instant_from_json(const json& j) { return parse_iso(j.get<std::string>()); }

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) {
    j[key] = *v;
  } else {
    j[key] = nullptr;
  }
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return std::nullopt;
  }
  return it->get<T>();
}

} // namespace

void to_json(json& j, const AnswerOption& o) { j = json{{"id", o.id}, {"label", o.label}}; }

void from_json(const json& j, AnswerOption& o) {
  j.at("id").get_to(o.id);
  j.at("label").get_to(o.label);
}

void to_json(json& j, const QuestionRevision& q) {
  j = json{{"question_id", q.question_id},
           {"revision", q.revision},
           {"text", q.text},
           {"kind", to_string(q.kind)},
           {"options", q.options}};
}

void from_json(const json& j, QuestionRevision& q) {
  j.at("question_id").get_to(q.question_id);
  j.at("revision").get_to(q.revision);
  j.at("text").get_to(q.text);
  q.kind = parse_choice_kind(j.at("kind").get<std::string>());
  j.at("options").get_to(q.options);
}

void to_json(json& j, const GroupItem& g) {
  j = json{{"question_id", g.question_id}, {"revision", g.revision}};
}

void from_json(const json& j, GroupItem& g) {
  j.at("question_id").get_to(g.question_id);
  j.at("revision").get_to(g.revision);
}

void to_json(json& j, const QuestionGroup& g) {
  j = json{{"group_id", g.group_id},
           {"title", g.title},
           {"items", g.items},
           {"state", to_string(g.state)},
           {"visibility", to_string(g.visibility)}};
}

void from_json(const json& j, QuestionGroup& g) {
  j.at("group_id").get_to(g.group_id);
  j.at("title").get_to(g.title);
  j.at("items").get_to(g.items);
  g.state = parse_group_state(j.at("state").get<std::string>());
  g.visibility = parse_visibility(j.at("visibility").get<std::string>());
}

void to_json(json& j, const AnsweringWindow& w) {
  j = json{{"window_id", w.window_id},
           {"group_id", w.group_id},
           {"opened_at", instant_json(w.opened_at)},
           {"state", to_string(w.state)},
           {"published", w.published}};
  if (w.duration) {
    j["duration_s"] = w.duration->count();
  } else {
    j["duration_s"] = nullptr;
  }
  j["closed_at"] = w.closed_at ? instant_json(*w.closed_at) : json(nullptr);
  put_optional(j, "join_code", w.join_code);
}

void from_json(const json& j, AnsweringWindow& w) {
  j.at("window_id").get_to(w.window_id);
  j.at("group_id").get_to(w.group_id);
  w.opened_at = instant_from_json(j.at("opened_at"));
  if (const auto d = get_optional<std::int64_t>(j, "duration_s")) {
    w.duration = std::chrono::seconds{*d};
  } else {
    w.duration.reset();
  }
  const auto state = j.value("state", std::string("open"));
  w.state = state == "closed" ? WindowState::Closed : WindowState::Open;
  if (const auto c = get_optional<std::string>(j, "closed_at")) {
    w.closed_at = parse_iso(*c);
  } else {
    w.closed_at.reset();
  }
  w.join_code = get_optional<std::string>(j, "join_code");
  w.published = j.value("published", false);
}

void to_json(json& j, const ResponseRecord& r) {
  j = json{{"receipt_id", r.receipt_id},
           {"window_id", r.window_id},
           {"group_id", r.group_id},
           {"question_id", r.question_id},
           {"participant", r.participant},
           {"options", r.options},
           {"received_at", instant_json(r.received_at)}};
  put_optional(j, "client_note", r.client_note);
  put_optional(j, "idempotency_key", r.idempotency_key);
}

void from_json(const json& j, ResponseRecord& r) {
  j.at("receipt_id").get_to(r.receipt_id);
  j.at("window_id").get_to(r.window_id);
  j.at("group_id").get_to(r.group_id);
  j.at("question_id").get_to(r.question_id);
  j.at("participant").get_to(r.participant);
  j.at("options").get_to(r.options);
  r.received_at = instant_from_json(j.at("received_at"));
  r.client_note = get_optional<std::string>(j, "client_note");
  r.idempotency_key = get_optional<std::string>(j, "idempotency_key");
}

void to_json(json& j, const SubmissionReceipt& r) {
  j = json{{"receipt_id", r.receipt_id},
           {"window_id", r.window_id},
           {"question_id", r.question_id},
           {"received_at", instant_json(r.received_at)},
           {"accepted", r.accepted},
           {"replaced_prior", r.replaced_prior}};
  if (r.rejection) {
    j["rejection"] = to_string(*r.rejection);
    j["detail"] = r.detail;
  }
}

void from_json(const json& j, SubmissionReceipt& r) {
  j.at("receipt_id").get_to(r.receipt_id);
  j.at("window_id").get_to(r.window_id);
  j.at("question_id").get_to(r.question_id);
  r.received_at = instant_from_json(j.at("received_at"));
  j.at("accepted").get_to(r.accepted);
  j.at("replaced_prior").get_to(r.replaced_prior);
  // Only accepted receipts are ever stored, so a rejection code is not read back.
  r.rejection.reset();
  r.detail = j.value("detail", std::string{});
}

void to_json(json& j, const WindowSummary& s) {
  j = json{{"window_id", s.window_id},
           {"group_id", s.group_id},
           {"opened_at", instant_json(s.opened_at)},
           {"closed_at", instant_json(s.closed_at)},
           {"respondent_count", s.respondent_count},
           {"responses_flushed", s.responses_flushed}};
}

void from_json(const json& j, WindowSummary& s) {
  j.at("window_id").get_to(s.window_id);
  j.at("group_id").get_to(s.group_id);
  s.opened_at = instant_from_json(j.at("opened_at"));
  s.closed_at = instant_from_json(j.at("closed_at"));
  j.at("respondent_count").get_to(s.respondent_count);
  j.at("responses_flushed").get_to(s.responses_flushed);
}

void to_json(json& j, const StatsFilter& f) {
  j = json::object();
  j["group_id"] = f.group_id ? json(f.group_id->str()) : json(nullptr);
  j["window_id"] = f.window_id ? json(f.window_id->str()) : json(nullptr);
  if (f.time_range) {
    j["from"] = instant_json(f.time_range->from);
    j["to"] = instant_json(f.time_range->to);
  }
  j["include_live"] = f.include_live;
}

namespace {

json fraction_json(const Fraction& f) { return to_string(f); }

double as_double(const Fraction& f) {
  return static_cast<double>(f.numerator()) / static_cast<double>(f.denominator());
}

} // namespace

void to_json(json& j, const TabulatedStats& s) {
  json questions = json::array();
  for (const auto& q : s.questions) {
    json options = json::array();
    for (const auto& o : q.options) {
      options.push_back({{"option_id", o.option_id},
                         {"label", o.label},
                         {"count", o.count},
                         {"fraction", fraction_json(o.fraction)},
                         {"share", as_double(o.fraction)}});
    }
    questions.push_back({{"question_id", q.question_id},
                         {"revision", q.revision},
                         {"kind", to_string(q.kind)},
                         {"respondent_count", q.respondent_count},
                         {"options", std::move(options)}});
  }
  j = json{{"filter", s.filter}, {"group_id", s.group_id}, {"questions", std::move(questions)}};
}

void to_json(json& j, const StatsComparison& c) {
  json rows = json::array();
  for (const auto& r : c.rows) {
    json row{{"question_id", r.question_id},
             {"option_id", r.option_id},
             {"label", r.label},
             {"aligned", r.aligned}};
    row["count_left"] = r.count_left ? json(*r.count_left) : json(nullptr);
    row["count_right"] = r.count_right ? json(*r.count_right) : json(nullptr);
    row["fraction_left"] = r.fraction_left ? fraction_json(*r.fraction_left) : json(nullptr);
    row["fraction_right"] = r.fraction_right ? fraction_json(*r.fraction_right) : json(nullptr);
    row["fraction_delta"] = r.fraction_delta ? fraction_json(*r.fraction_delta) : json(nullptr);
    rows.push_back(std::move(row));
  }
  j = json{{"left", c.left}, {"right", c.right}, {"rows", std::move(rows)}};
}

void to_json(json& j, const BarChartSpec& b) {
  json questions = json::array();
  for (const auto& q : b.questions) {
    json bars = json::array();
    for (const auto& bar : q.bars) {
      bars.push_back({{"option_id", bar.option_id},
                      {"label", bar.label},
                      {"fraction", fraction_json(bar.fraction)},
                      {"bar_length", bar.bar_length},
                      {"color_index", bar.color_index},
                      {"color", kBarPalette[static_cast<std::size_t>(bar.color_index)]}});
    }
    questions.push_back({{"question_id", q.question_id}, {"bars", std::move(bars)}});
  }
  j = json{{"max_width", b.max_width}, {"questions", std::move(questions)}};
}

} // namespace ars

#pragma once

#include "ars/aggregation.hpp"
#include "ars/core_model.hpp"
#include "ars/session_engine.hpp"

#include "json.hpp"

// JSON forms shared by the event log, snapshots and the HTTP API.
namespace ars {

using json = nlohmann::json;

template <typename Tag>
void to_json(json& j, const Id<Tag>& id) { j = id.str(); }
template <typename Tag>
void from_json(const json& j, Id<Tag>& id) { id = Id<Tag>(j.get<std::string>()); }

void to_json(json& j, const AnswerOption& o);
void from_json(const json& j, AnswerOption& o);
void to_json(json& j, const QuestionRevision& q);
void from_json(const json& j, QuestionRevision& q);
void to_json(json& j, const GroupItem& g);
void from_json(const json& j, GroupItem& g);
void to_json(json& j, const QuestionGroup& g);
void from_json(const json& j, QuestionGroup& g);
void to_json(json& j, const AnsweringWindow& w);
void from_json(const json& j, AnsweringWindow& w);
void to_json(json& j, const ResponseRecord& r);
void from_json(const json& j, ResponseRecord& r);
void to_json(json& j, const SubmissionReceipt& r);
void from_json(const json& j, SubmissionReceipt& r);
void to_json(json& j, const WindowSummary& s);
void from_json(const json& j, WindowSummary& s);

void to_json(json& j, const StatsFilter& f);
void to_json(json& j, const TabulatedStats& s);
void to_json(json& j, const StatsComparison& c);
void to_json(json& j, const BarChartSpec& b);

json instant_json(Instant t);
Instant instant_from_json(const json& j);

} // namespace ars

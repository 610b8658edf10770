// Copyright 2026 The evsound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evsound/study.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include <boost/math/distributions/students_t.hpp>

#include "evsound/error.h"
#include "json.hpp"

namespace evsound {
namespace {

using nlohmann::json;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Splits one CSV line; double quotes protect commas and "" escapes a quote.
std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string QuoteCsv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

bool ParseInt(const std::string& s, int* out) {
  const std::string t = Trim(s);
  if (t.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stoi(t, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == t.size();
}

bool ParseDouble(const std::string& s, double* out) {
  const std::string t = Trim(s);
  if (t.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stod(t, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == t.size() && std::isfinite(*out);
}

class Issues {
 public:
  explicit Issues(std::string source) : source_(std::move(source)) {}
  void Add(const std::string& where, const std::string& msg) {
    items_.push_back(source_ + ": " + where + ": " + msg);
  }
  void ThrowIfAny() const {
    if (items_.empty()) return;
    std::string msg;
    for (const auto& s : items_) msg += (msg.empty() ? "" : "\n") + s;
    throw Error(errc::kValidation, msg);
  }

 private:
  std::string source_;
  std::vector<std::string> items_;
};

void CheckRating(const std::string& field, int v, const std::string& where,
                 Issues& issues) {
  if (v < kRatingMin || v > kRatingMax) {
    issues.Add(where, field + " = " + std::to_string(v) + " outside [0, 10]");
  }
}

void CheckRecord(const RatingRecord& r, const std::string& where,
                 Issues& issues) {
  if (r.participant_id.empty()) issues.Add(where, "participant_id is empty");
  if (r.stimulus_id < 1 || r.stimulus_id > kStimulusCount) {
    issues.Add(where, "stimulus_id = " + std::to_string(r.stimulus_id) +
                          " is not a known stimulus");
  }
  CheckRating("annoyance", r.annoyance, where, issues);
  CheckRating("noticeability", r.noticeability, where, issues);
  CheckRating("informativeness", r.informativeness, where, issues);
  const auto& tl = r.keypress_timeline;
  for (std::size_t i = 0; i < tl.size(); ++i) {
    if (tl[i].time < 0.0) {
      issues.Add(where, "keypress_timeline has a negative time");
    }
    if (i > 0 && tl[i].time < tl[i - 1].time) {
      issues.Add(where, "keypress_timeline is not time-ordered");
    }
    if (i > 0 && tl[i].event == tl[i - 1].event) {
      issues.Add(where, "keypress_timeline does not alternate press/release");
    }
  }
}

void CheckDuplicates(std::span<const RatingRecord> records, Issues& issues) {
  std::set<std::pair<std::string, int>> seen;
  for (const auto& r : records) {
    if (!seen.insert({r.participant_id, r.stimulus_id}).second) {
      issues.Add("participant " + r.participant_id,
                 "duplicate rating for stimulus " + std::to_string(r.stimulus_id));
    }
  }
}

double Quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct MetricField {
  const char* name;
  double MetricSet::*member;
};

constexpr MetricField kFields[] = {
    {"L_p_max", &MetricSet::lp_max},   {"L_p_A_max", &MetricSet::lpa_max},
    {"L_p_A_eq", &MetricSet::lpa_eq},  {"PNLT_max", &MetricSet::pnlt_max},
    {"EPNL", &MetricSet::epnl},        {"N5", &MetricSet::n5},
    {"S5", &MetricSet::s5},            {"K5", &MetricSet::k5},
    {"R5", &MetricSet::r5},            {"FS5", &MetricSet::fs5},
    {"PA", &MetricSet::pa},
};

void CheckMetricIds(std::span<const MetricSet> metrics) {
  std::set<int> ids;
  for (const auto& m : metrics) {
    if (!ids.insert(m.stimulus_id).second) {
      throw Error(errc::kValidation,
                  "duplicate metrics for stimulus " + std::to_string(m.stimulus_id));
    }
  }
}

}  // namespace

std::vector<TimelineEvent> ParseTimeline(std::string_view text) {
  std::vector<TimelineEvent> out;
  const std::string t = Trim(text);
  if (t.empty()) return out;
  std::size_t start = 0;
  while (start <= t.size()) {
    const std::size_t end = std::min(t.find(';', start), t.size());
    const std::string item = Trim(std::string_view(t).substr(start, end - start));
    const auto colon = item.find(':');
    double time = 0.0;
    if (colon == std::string::npos || !ParseDouble(item.substr(colon + 1), &time)) {
      throw Error(errc::kValidation, "malformed timeline entry '" + item + "'");
    }
    const std::string kind = Trim(item.substr(0, colon));
    if (kind == "P") {
      out.push_back({KeyEvent::kPress, time});
    } else if (kind == "R") {
      out.push_back({KeyEvent::kRelease, time});
    } else {
      throw Error(errc::kValidation, "unknown timeline event '" + kind + "'");
    }
    start = end + 1;
  }
  return out;
}

std::string FormatTimeline(std::span<const TimelineEvent> events) {
  std::string out;
  for (const auto& e : events) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s:%.3f", e.event == KeyEvent::kPress ? "P" : "R",
                  e.time);
    if (!out.empty()) out += ';';
    out += buf;
  }
  return out;
}

std::vector<RatingRecord> ParseRatingsCsv(std::string_view text,
                                          const std::string& source) {
  Issues issues(source);
  std::vector<RatingRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  std::map<std::string, std::size_t> col;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCsv(line);
    if (header.empty()) {
      for (const auto& c : cells) header.push_back(Trim(c));
      for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
      for (const char* need : {"participant_id", "stimulus_id", "annoyance",
                               "noticeability", "informativeness"}) {
        if (!col.count(need)) issues.Add("line 1", std::string("missing column ") + need);
      }
      issues.ThrowIfAny();
      continue;
    }
    const std::string where = "line " + std::to_string(lineno);
    if (cells.size() != header.size()) {
      issues.Add(where, "expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(cells.size()));
      continue;
    }
    RatingRecord r;
    r.participant_id = Trim(cells[col["participant_id"]]);
    bool ok = true;
    auto read_int = [&](const char* name, int* dst) {
      if (!ParseInt(cells[col[name]], dst)) {
        issues.Add(where, std::string(name) + " is not an integer");
        ok = false;
      }
    };
    read_int("stimulus_id", &r.stimulus_id);
    read_int("annoyance", &r.annoyance);
    read_int("noticeability", &r.noticeability);
    read_int("informativeness", &r.informativeness);
    if (col.count("keypress_timeline")) {
      try {
        r.keypress_timeline = ParseTimeline(cells[col["keypress_timeline"]]);
      } catch (const Error& e) {
        issues.Add(where, std::string("keypress_timeline: ") + e.what());
        ok = false;
      }
    }
    if (!ok) continue;
    CheckRecord(r, where, issues);
    out.push_back(std::move(r));
  }
  if (header.empty()) issues.Add("line 1", "missing header");
  CheckDuplicates(out, issues);
  issues.ThrowIfAny();
  return out;
}

std::vector<RatingRecord> ParseSessionResult(std::string_view text,
                                             const std::string& source) {
  Issues issues(source);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(errc::kValidation, source + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw Error(errc::kValidation, source + ": not an object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kSessionSchemaVersion) {
    throw Error(errc::kValidation,
                source + ": schema_version must be " + std::to_string(kSessionSchemaVersion));
  }
  std::string participant;
  const json& p = doc.value("participant", json::object());
  if (p.is_object() && p.contains("id") && p["id"].is_string()) {
    participant = p["id"].get<std::string>();
  } else {
    issues.Add("participant", "missing id");
  }
  const bool partial = doc.value("partial", false);
  if (!doc.contains("trials") || !doc["trials"].is_array()) {
    issues.Add("trials", "missing array");
    issues.ThrowIfAny();
  }
  std::vector<RatingRecord> out;
  const json& trials = doc["trials"];
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const json& t = trials[i];
    const std::string where = "trial " + std::to_string(i);
    if (!t.is_object()) {
      issues.Add(where, "not an object");
      continue;
    }
    if (t.value("training", false)) continue;
    if (!t.contains("ratings") || t["ratings"].is_null()) {
      if (!partial) issues.Add(where, "missing ratings");
      continue;
    }
    RatingRecord r;
    r.participant_id = participant;
    bool ok = true;
    auto read_int = [&](const json& obj, const char* name, int* dst) {
      if (!obj.is_object() || !obj.contains(name) || !obj[name].is_number_integer()) {
        issues.Add(where, std::string(name) + " must be an integer");
        ok = false;
        return;
      }
      *dst = obj[name].get<int>();
    };
    read_int(t, "stimulus_id", &r.stimulus_id);
    read_int(t["ratings"], "annoyance", &r.annoyance);
    read_int(t["ratings"], "noticeability", &r.noticeability);
    read_int(t["ratings"], "informativeness", &r.informativeness);
    for (const json& e : t.value("events", json::array())) {
      const std::string kind = e.value("event", "");
      if ((kind != "press" && kind != "release") || !e.contains("time") ||
          !e["time"].is_number()) {
        issues.Add(where, "malformed event");
        ok = false;
        break;
      }
      r.keypress_timeline.push_back(
          {kind == "press" ? KeyEvent::kPress : KeyEvent::kRelease,
           e["time"].get<double>()});
    }
    if (!ok) continue;
    CheckRecord(r, where, issues);
    out.push_back(std::move(r));
  }
  CheckDuplicates(out, issues);
  issues.ThrowIfAny();
  return out;
}

std::string FormatRatingsCsv(std::span<const RatingRecord> records) {
  std::string out = std::string(kRatingsCsvHeader) + "\n";
  for (const auto& r : records) {
    out += QuoteCsv(r.participant_id) + "," + std::to_string(r.stimulus_id) + "," +
           std::to_string(r.annoyance) + "," + std::to_string(r.noticeability) + "," +
           std::to_string(r.informativeness) + "," + FormatTimeline(r.keypress_timeline) +
           "\n";
  }
  return out;
}

std::vector<RatingRecord> LoadRatings(const std::filesystem::path& path) {
  return LoadRatings(std::span<const std::filesystem::path>(&path, 1));
}

std::vector<RatingRecord> LoadRatings(
    std::span<const std::filesystem::path> paths) {
  std::vector<std::filesystem::path> files;
  for (const auto& p : paths) {
    if (std::filesystem::is_directory(p)) {
      std::vector<std::filesystem::path> found;
      for (const auto& e : std::filesystem::directory_iterator(p)) {
        const auto ext = e.path().extension();
        if (e.is_regular_file() && (ext == ".csv" || ext == ".json")) {
          found.push_back(e.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  std::vector<RatingRecord> all;
  for (const auto& f : files) {
    const std::string text = ReadFile(f);
    const std::string t = Trim(text);
    auto part = (!t.empty() && t.front() == '{') ? ParseSessionResult(text, f.string())
                                                 : ParseRatingsCsv(text, f.string());
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  Issues issues("ratings");
  CheckDuplicates(all, issues);
  issues.ThrowIfAny();
  return all;
}

BoxStats DescribeValues(std::vector<double> values) {
  if (values.empty()) throw Error(errc::kInvalidArgument, "no values to describe");
  std::sort(values.begin(), values.end());
  BoxStats s;
  s.n = values.size();
  const double n = static_cast<double>(s.n);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  s.median = Quantile(values, 0.5);
  s.q25 = Quantile(values, 0.25);
  s.q75 = Quantile(values, 0.75);
  const double iqr = s.q75 - s.q25;
  const double lo_fence = s.q25 - 1.5 * iqr;
  const double hi_fence = s.q75 + 1.5 * iqr;
  s.whisker_low = s.q25;
  s.whisker_high = s.q75;
  bool first = true;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
      continue;
    }
    if (first) s.whisker_low = v;
    first = false;
    s.whisker_high = v;
  }
  return s;
}

BoxStats Describe(std::span<const RatingRecord> records, int stimulus_id) {
  return Describe(records, std::set<int>{stimulus_id});
}

BoxStats Describe(std::span<const RatingRecord> records,
                  const std::set<int>& stimulus_ids) {
  std::vector<double> v;
  for (const auto& r : records) {
    if (stimulus_ids.count(r.stimulus_id)) v.push_back(r.annoyance);
  }
  if (v.empty()) throw Error(errc::kInvalidArgument, "no ratings for the requested stimuli");
  return DescribeValues(std::move(v));
}

std::map<int, double> MeanAnnoyance(std::span<const RatingRecord> records) {
  std::map<int, std::pair<double, int>> acc;
  for (const auto& r : records) {
    acc[r.stimulus_id].first += r.annoyance;
    acc[r.stimulus_id].second += 1;
  }
  std::map<int, double> out;
  for (const auto& [id, a] : acc) out[id] = a.first / a.second;
  return out;
}

double PearsonPValue(double rho, std::size_t n) {
  if (n < 3) throw Error(errc::kInvalidArgument, "need at least 3 samples");
  const double r = std::clamp(std::abs(rho), 0.0, 1.0);
  if (r >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
}

CorrelationResult Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(errc::kMismatch, "length mismatch");
  if (x.size() < 3) throw Error(errc::kInvalidArgument, "need at least 3 samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw Error(errc::kUndefined, "correlation undefined for a constant vector");
  }
  CorrelationResult out;
  out.n = x.size();
  out.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = n - 2.0;
  const double den = 1.0 - out.rho * out.rho;
  out.t = den > 0.0 ? out.rho * std::sqrt(df / den)
                    : std::copysign(std::numeric_limits<double>::infinity(), out.rho);
  out.p_value = PearsonPValue(out.rho, out.n);
  out.significant = out.p_value <= kSignificanceLevel;
  return out;
}

LinearFit FitLine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(errc::kMismatch, "length mismatch");
  if (x.size() < 2) throw Error(errc::kInvalidArgument, "need at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx <= 0.0) throw Error(errc::kUndefined, "constant x");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.residuals.push_back(y[i] - (f.slope * x[i] + f.intercept));
  }
  return f;
}

const std::vector<std::string>& MetricNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : kFields) v.emplace_back(f.name);
    return v;
  }();
  return names;
}

const std::vector<std::string>& CorrelatedMetricNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : kFields) {
      if (std::string_view(f.name) != "L_p_A_eq") v.emplace_back(f.name);
    }
    return v;
  }();
  return names;
}

double MetricValue(const MetricSet& m, std::string_view name) {
  for (const auto& f : kFields) {
    if (name == f.name) return m.*(f.member);
  }
  throw Error(errc::kInvalidArgument, "unknown metric " + std::string(name));
}

std::string MetricsToCsv(std::span<const MetricSet> metrics) {
  std::string out = "stimulus_id";
  for (const auto& f : kFields) out += std::string(",") + f.name;
  out += "\n";
  for (const auto& m : metrics) {
    out += std::to_string(m.stimulus_id);
    for (const auto& f : kFields) out += "," + Num(m.*(f.member));
    out += "\n";
  }
  return out;
}

std::string MetricsToJson(std::span<const MetricSet> metrics) {
  json arr = json::array();
  for (const auto& m : metrics) {
    json o;
    o["stimulus_id"] = m.stimulus_id;
    for (const auto& f : kFields) o[f.name] = m.*(f.member);
    arr.push_back(std::move(o));
  }
  return json{{"metrics", arr}}.dump(2) + "\n";
}

std::vector<MetricSet> MetricsFromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(errc::kValidation, std::string("invalid metrics JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("metrics") || !doc["metrics"].is_array()) {
    throw Error(errc::kValidation, "metrics JSON needs a 'metrics' array");
  }
  std::vector<MetricSet> out;
  for (const json& o : doc["metrics"]) {
    MetricSet m;
    if (!o.contains("stimulus_id") || !o["stimulus_id"].is_number_integer()) {
      throw Error(errc::kValidation, "metrics entry without stimulus_id");
    }
    m.stimulus_id = o["stimulus_id"].get<int>();
    for (const auto& f : kFields) {
      if (!o.contains(f.name) || !o[f.name].is_number()) {
        throw Error(errc::kValidation, std::string("metrics entry missing ") + f.name);
      }
      m.*(f.member) = o[f.name].get<double>();
    }
    out.push_back(m);
  }
  CheckMetricIds(out);
  return out;
}

std::vector<MetricSet> MetricsFromCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> header;
  std::vector<MetricSet> out;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCsv(line);
    if (header.empty()) {
      for (const auto& c : cells) header.push_back(Trim(c));
      continue;
    }
    if (cells.size() != header.size()) {
      throw Error(errc::kValidation, "metrics CSV line " + std::to_string(lineno) +
                                         ": wrong field count");
    }
    MetricSet m;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == "stimulus_id") {
        if (!ParseInt(cells[i], &m.stimulus_id)) {
          throw Error(errc::kValidation, "metrics CSV line " + std::to_string(lineno) +
                                             ": bad stimulus_id");
        }
        seen.insert(header[i]);
        continue;
      }
      for (const auto& f : kFields) {
        if (header[i] != f.name) continue;
        if (!ParseDouble(cells[i], &(m.*(f.member)))) {
          throw Error(errc::kValidation, "metrics CSV line " + std::to_string(lineno) +
                                             ": bad " + header[i]);
        }
        seen.insert(header[i]);
      }
    }
    if (seen.size() != std::size(kFields) + 1) {
      throw Error(errc::kValidation, "metrics CSV is missing columns");
    }
    out.push_back(m);
  }
  CheckMetricIds(out);
  return out;
}

std::vector<MetricSet> LoadMetrics(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  const std::string t = Trim(text);
  return (!t.empty() && t.front() == '{') ? MetricsFromJson(text) : MetricsFromCsv(text);
}

std::vector<CorrelationResult> CorrelationTable(
    std::span<const MetricSet> metrics, const std::map<int, double>& mean_ratings,
    const std::set<int>& exclude) {
  CheckMetricIds(metrics);
  std::map<int, const MetricSet*> by_id;
  for (const auto& m : metrics) {
    if (!exclude.count(m.stimulus_id)) by_id[m.stimulus_id] = &m;
  }
  std::set<int> rating_ids;
  for (const auto& [id, v] : mean_ratings) {
    if (!exclude.count(id)) rating_ids.insert(id);
  }
  for (const auto& [id, m] : by_id) {
    if (!rating_ids.count(id)) {
      throw Error(errc::kMismatch, "no ratings for stimulus " + std::to_string(id));
    }
  }
  for (int id : rating_ids) {
    if (!by_id.count(id)) {
      throw Error(errc::kMismatch, "no metrics for stimulus " + std::to_string(id));
    }
  }
  if (by_id.size() < 3) {
    throw Error(errc::kInvalidArgument, "fewer than 3 stimuli after exclusion");
  }
  std::vector<double> y;
  for (const auto& [id, m] : by_id) y.push_back(mean_ratings.at(id));
  std::vector<CorrelationResult> table;
  for (const auto& name : CorrelatedMetricNames()) {
    std::vector<double> x;
    for (const auto& [id, m] : by_id) x.push_back(MetricValue(*m, name));
    CorrelationResult r;
    try {
      r = Pearson(x, y);
    } catch (const Error& e) {
      if (e.code() != errc::kUndefined) throw;
      // A metric that does not vary over the set has no correlation.
      r.rho = std::numeric_limits<double>::quiet_NaN();
      r.t = r.rho;
      r.p_value = r.rho;
      r.n = x.size();
    }
    r.metric = name;
    table.push_back(r);
  }
  return table;
}

std::string CorrelationTableCsv(std::span<const CorrelationResult> table) {
  std::string out = "metric,rho,p_value,n,significant\n";
  for (const auto& r : table) {
    out += r.metric + "," + Num(r.rho) + "," + Num(r.p_value) + "," + std::to_string(r.n) +
           "," + (r.significant ? "true" : "false") + "\n";
  }
  return out;
}

std::string CorrelationTableJson(std::span<const CorrelationResult> table) {
  json arr = json::array();
  for (const auto& r : table) {
    json o{{"metric", r.metric}, {"n", r.n}, {"significant", r.significant}};
    o["rho"] = std::isfinite(r.rho) ? json(r.rho) : json(nullptr);
    o["t"] = std::isfinite(r.t) ? json(r.t) : json(nullptr);
    o["p_value"] = std::isfinite(r.p_value) ? json(r.p_value) : json(nullptr);
    arr.push_back(std::move(o));
  }
  return json{{"correlations", arr}}.dump(2) + "\n";
}

}  // namespace evsound

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

// Listening-study data: rating ingestion, box-plot statistics, Pearson
// correlation against per-stimulus metrics, and least-squares fits.

#ifndef EVSOUND_STUDY_H_
#define EVSOUND_STUDY_H_

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evsound {

inline constexpr int kStimulusCount = 15;
inline constexpr int kRatingMin = 0;
inline constexpr int kRatingMax = 10;
inline constexpr double kSignificanceLevel = 0.05;
// Version shared by the session manifest and the session-result files.
inline constexpr int kSessionSchemaVersion = 1;

enum class KeyEvent { kPress, kRelease };

struct TimelineEvent {
  KeyEvent event = KeyEvent::kPress;
  double time = 0.0;  // s

  bool operator==(const TimelineEvent&) const = default;
};

struct RatingRecord {
  std::string participant_id;
  int stimulus_id = 0;
  int annoyance = 0;
  int noticeability = 0;
  int informativeness = 0;
  std::vector<TimelineEvent> keypress_timeline;

  bool operator==(const RatingRecord&) const = default;
};

// "P:0.52;R:1.30" <-> events. Throws on malformed text.
std::vector<TimelineEvent> ParseTimeline(std::string_view text);
std::string FormatTimeline(std::span<const TimelineEvent> events);

// Parsers for the two ratings formats. `source` names the input in error
// messages. Every problem is collected and reported in one validation error
// with line numbers (CSV) or trial indices (JSON).
std::vector<RatingRecord> ParseRatingsCsv(std::string_view text,
                                          const std::string& source = "csv");
std::vector<RatingRecord> ParseSessionResult(std::string_view text,
                                             const std::string& source = "json");

inline constexpr const char* kRatingsCsvHeader =
    "participant_id,stimulus_id,annoyance,noticeability,informativeness,"
    "keypress_timeline";
std::string FormatRatingsCsv(std::span<const RatingRecord> records);

// Reads a CSV file, a session-result JSON file, or every *.csv / *.json file
// of a directory (in name order). Duplicate (participant, stimulus) pairs
// across all inputs are rejected.
std::vector<RatingRecord> LoadRatings(const std::filesystem::path& path);
std::vector<RatingRecord> LoadRatings(
    std::span<const std::filesystem::path> paths);

struct BoxStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for n = 1
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double whisker_low = 0.0;   // most extreme points within 1.5 IQR
  double whisker_high = 0.0;
  std::vector<double> outliers;  // ascending
};

// Quartiles interpolate linearly between order statistics.
BoxStats DescribeValues(std::vector<double> values);
BoxStats Describe(std::span<const RatingRecord> records, int stimulus_id);
// Pooled over several stimuli.
BoxStats Describe(std::span<const RatingRecord> records,
                  const std::set<int>& stimulus_ids);

// Unweighted mean annoyance per stimulus.
std::map<int, double> MeanAnnoyance(std::span<const RatingRecord> records);

struct CorrelationResult {
  std::string metric;
  double rho = 0.0;
  double t = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool significant = false;  // p <= 0.05
};

// Pearson correlation with a two-sided t-test on n - 2 degrees of freedom.
CorrelationResult Pearson(std::span<const double> x, std::span<const double> y);
// Two-sided p-value of a correlation coefficient for n samples.
double PearsonPValue(double rho, std::size_t n);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

LinearFit FitLine(std::span<const double> x, std::span<const double> y);

// Per-stimulus metric values.
struct MetricSet {
  int stimulus_id = 0;
  double lp_max = 0.0;     // dB
  double lpa_max = 0.0;    // dBA
  double lpa_eq = 0.0;     // dBA
  double pnlt_max = 0.0;   // PNdB
  double epnl = 0.0;       // EPNdB
  double n5 = 0.0;         // sone
  double s5 = 0.0;         // acum
  double k5 = 0.0;         // t.u.
  double r5 = 0.0;         // asper
  double fs5 = 0.0;        // vacil
  double pa = 0.0;

  bool operator==(const MetricSet&) const = default;
};

// Column names in table order.
const std::vector<std::string>& MetricNames();
// The names correlated against ratings: all but L_p_A_eq, which is held
// constant by normalization.
const std::vector<std::string>& CorrelatedMetricNames();
double MetricValue(const MetricSet& m, std::string_view name);

std::string MetricsToCsv(std::span<const MetricSet> metrics);
std::string MetricsToJson(std::span<const MetricSet> metrics);
std::vector<MetricSet> MetricsFromJson(std::string_view text);
std::vector<MetricSet> MetricsFromCsv(std::string_view text);
std::vector<MetricSet> LoadMetrics(const std::filesystem::path& path);

inline const std::set<int> kDefaultExcluded = {14, 15};

// One result per correlated metric over the stimuli not in `exclude`.
// Metrics and ratings must cover the same ids.
std::vector<CorrelationResult> CorrelationTable(
    std::span<const MetricSet> metrics, const std::map<int, double>& mean_ratings,
    const std::set<int>& exclude = kDefaultExcluded);

std::string CorrelationTableCsv(std::span<const CorrelationResult> table);
std::string CorrelationTableJson(std::span<const CorrelationResult> table);

}  // namespace evsound

#endif  // EVSOUND_STUDY_H_

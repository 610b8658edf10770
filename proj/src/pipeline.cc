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

#include "evsound/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "evsound/dsp.h"
#include "evsound/error.h"
#include "evsound/io.h"
#include "evsound/levels.h"
#include "evsound/plot.h"
#include "evsound/pnl.h"
#include "evsound/wav.h"
#include "json.hpp"

namespace evsound {
namespace {

using nlohmann::json;

json Parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(errc::kValidation, std::string("invalid ") + what + " JSON: " + e.what());
  }
}

template <typename T>
T Field(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  try {
    return obj[key].get<T>();
  } catch (const json::exception&) {
    throw Error(errc::kValidation, where + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T Required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw Error(errc::kValidation, where + ": missing field '" + key + "'");
  }
  return Field<T>(obj, key, T{}, where);
}

json TrajectoryJson(const Trajectory& t) {
  return {{"x_start", t.x_start}, {"x_end", t.x_end}, {"y_s", t.y_s},
          {"v_x", t.v_x},         {"c", t.c}};
}

Trajectory TrajectoryFromJson(const json& o) {
  Trajectory t;
  const std::string where = "trajectory";
  t.x_start = Required<double>(o, "x_start", where);
  t.x_end = Required<double>(o, "x_end", where);
  t.y_s = Required<double>(o, "y_s", where);
  t.v_x = Required<double>(o, "v_x", where);
  t.c = Required<double>(o, "c", where);
  t.Validate();
  return t;
}

bool HasSource(const StimulusSpec& spec) {
  return !(spec.kind == StimulusKind::kFileBed && spec.bed_path.empty() &&
           !spec.surrogate);
}

char* Fmt(char* buf, std::size_t n, double v) {
  std::snprintf(buf, n, "%.10g", v);
  return buf;
}

std::string TwoDigit(int id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", id);
  return buf;
}

json BoxJson(const BoxStats& b) {
  return {{"n", b.n},
          {"mean", b.mean},
          {"sd", b.sd},
          {"median", b.median},
          {"q25", b.q25},
          {"q75", b.q75},
          {"whisker_low", b.whisker_low},
          {"whisker_high", b.whisker_high},
          {"outliers", b.outliers}};
}

}  // namespace

std::string StimulusSpecsToJson(const std::vector<StimulusSpec>& specs) {
  json arr = json::array();
  for (const auto& s : specs) {
    json o{{"id", s.id},
           {"kind", ToString(s.kind)},
           {"label", s.label},
           {"principal_freq", s.principal_freq},
           {"normalize", s.normalize}};
    switch (s.kind) {
      case StimulusKind::kCombined:
        o["secondary_offset"] = s.secondary_offset;
        o["secondary_gain"] = s.secondary_gain;
        break;
      case StimulusKind::kIntermittent:
        o["on_ms"] = s.on_ms;
        o["off_ms"] = s.off_ms;
        o["repetitions"] = s.repetitions;
        break;
      case StimulusKind::kDoubleBeep: {
        json pattern = json::array();
        for (const auto& seg : s.beep_pattern) {
          pattern.push_back({{"duration_ms", seg.duration_ms},
                             {"freq_hz", seg.freq_hz ? json(*seg.freq_hz) : json(nullptr)}});
        }
        o["beep_pattern"] = pattern;
        o["repetitions"] = s.repetitions;
        break;
      }
      case StimulusKind::kFileBed:
        o["bed_path"] = s.bed_path;
        if (s.surrogate) {
          o["surrogate"] = {{"kind", ToString(s.surrogate->kind)},
                            {"seed", s.surrogate->seed},
                            {"gain", s.surrogate->gain}};
        }
        break;
      case StimulusKind::kPure:
        break;
    }
    arr.push_back(std::move(o));
  }
  return json{{"stimuli", arr}}.dump(2) + "\n";
}

std::vector<StimulusSpec> StimulusSpecsFromJson(std::string_view text) {
  const json doc = Parse(text, "stimulus spec");
  if (!doc.is_object() || !doc.contains("stimuli") || !doc["stimuli"].is_array()) {
    throw Error(errc::kValidation, "stimulus spec needs a 'stimuli' array");
  }
  std::vector<StimulusSpec> out;
  std::set<int> ids;
  for (std::size_t i = 0; i < doc["stimuli"].size(); ++i) {
    const json& o = doc["stimuli"][i];
    const std::string where = "stimuli[" + std::to_string(i) + "]";
    if (!o.is_object()) throw Error(errc::kValidation, where + ": not an object");
    StimulusSpec s;
    s.id = Required<int>(o, "id", where);
    if (!ids.insert(s.id).second) {
      throw Error(errc::kValidation, where + ": duplicate id " + std::to_string(s.id));
    }
    s.kind = StimulusKindFromString(Required<std::string>(o, "kind", where));
    s.label = Field<std::string>(o, "label", "stimulus " + std::to_string(s.id), where);
    s.principal_freq = Field<double>(o, "principal_freq", 0.0, where);
    s.secondary_offset = Field<double>(o, "secondary_offset", kDefaultSecondaryOffset, where);
    s.secondary_gain = Field<double>(o, "secondary_gain", kDefaultSecondaryGain, where);
    s.on_ms = Field<double>(o, "on_ms", 500.0, where);
    s.off_ms = Field<double>(o, "off_ms", 500.0, where);
    s.repetitions = Field<int>(o, "repetitions", 0, where);
    s.bed_path = Field<std::string>(o, "bed_path", "", where);
    s.normalize = Field<bool>(o, "normalize", true, where);
    if (o.contains("beep_pattern")) {
      if (!o["beep_pattern"].is_array()) {
        throw Error(errc::kValidation, where + ": beep_pattern must be an array");
      }
      for (const json& seg : o["beep_pattern"]) {
        BeepSegment b;
        b.duration_ms = Required<double>(seg, "duration_ms", where + ".beep_pattern");
        if (seg.contains("freq_hz") && !seg["freq_hz"].is_null()) {
          b.freq_hz = Field<double>(seg, "freq_hz", 0.0, where + ".beep_pattern");
        }
        s.beep_pattern.push_back(b);
      }
    } else if (s.kind == StimulusKind::kDoubleBeep) {
      s.beep_pattern = DefaultDoubleBeepPattern();
    }
    if (o.contains("surrogate") && !o["surrogate"].is_null()) {
      const json& b = o["surrogate"];
      NoiseBedSpec bed;
      bed.kind = NoiseBedKindFromString(Required<std::string>(b, "kind", where + ".surrogate"));
      bed.seed = Field<std::uint64_t>(b, "seed", 0, where + ".surrogate");
      bed.gain = Field<double>(b, "gain", 1.0, where + ".surrogate");
      s.surrogate = bed;
    }
    out.push_back(std::move(s));
  }
  return out;
}

NoiseBeds RenderNoiseBeds(const PipelineConfig& config) {
  config.trajectory.Validate();
  const double duration = config.trajectory.Duration();
  dsp::Rng rng(config.seed);
  const NoiseBedSpec tyre{NoiseBedKind::kTyreSurrogate, rng.NextU64(), 1.0};
  const NoiseBedSpec street{NoiseBedKind::kBackgroundSurrogate, rng.NextU64(), 1.0};
  const CalibratedSignal tyre_src =
      ApplyEdgeRamps(SynthNoiseBed(tyre, duration, config.sample_rate));
  const CalibratedSignal tyre_obs = RenderPassby(tyre_src, config.trajectory);
  const CalibratedSignal bg = SynthNoiseBed(street, duration, config.sample_rate);
  return {NormalizeToLevel(tyre_obs, config.tyre_dba),
          NormalizeToLevel(bg, config.background_dba)};
}

RenderedStimulus RenderStimulus(const StimulusSpec& spec, const PipelineConfig& config,
                                const NoiseBeds& beds, const CalibratedSignal* file_bed) {
  if (!spec.bed_path.empty() && file_bed == nullptr) {
    throw Error(errc::kInvalidArgument, "stimulus " + std::to_string(spec.id) +
                                            " needs its bed file " + spec.bed_path);
  }
  const Trajectory& traj = config.trajectory;
  traj.Validate();
  const double duration = traj.Duration();
  const double fs = config.sample_rate;

  std::vector<CalibratedSignal> moving_parts{beds.tyre};
  if (HasSource(spec)) {
    const CalibratedSignal src =
        ApplyEdgeRamps(SynthesizeSource(spec, duration, fs, 1.0, file_bed));
    moving_parts.push_back(NormalizeToLevel(RenderPassby(src, traj), config.source_dba));
  }
  const std::vector<double> unit(moving_parts.size(), 1.0);
  const CalibratedSignal moving = Mix(moving_parts, unit);
  const std::vector<CalibratedSignal> mono_parts{moving, beds.background};
  const std::vector<double> ones{1.0, 1.0};
  const CalibratedSignal mono = Mix(mono_parts, ones);

  const double gain = spec.normalize ? LevelNormalizationGain(mono, config.target_dba) : 1.0;
  const Eigen::ArrayXd bg = beds.background.mono();
  const std::vector<CalibratedSignal> stereo_parts{
      StereoStage(moving, traj), CalibratedSignal::Stereo(fs, bg, bg)};
  RenderedStimulus out{spec, mono.scaled(gain), Mix(stereo_parts, ones).scaled(gain), gain};
  return out;
}

std::string StimulusManifestToJson(const StimulusManifest& m) {
  json arr = json::array();
  for (const auto& e : m.stimuli) {
    arr.push_back({{"id", e.id},
                   {"label", e.label},
                   {"kind", e.kind},
                   {"mono_file", e.mono_file},
                   {"stereo_file", e.stereo_file},
                   {"duration", e.duration},
                   {"normalized", e.normalized},
                   {"gain", e.gain}});
  }
  json doc{{"schema_version", m.schema_version},
           {"sample_rate", m.sample_rate},
           {"full_scale_pa", m.full_scale},
           {"seed", m.seed},
           {"target_dba", m.target_dba},
           {"trajectory", TrajectoryJson(m.trajectory)},
           {"stimuli", arr}};
  return doc.dump(2) + "\n";
}

StimulusManifest StimulusManifestFromJson(std::string_view text) {
  const json doc = Parse(text, "stimulus manifest");
  const std::string where = "stimulus manifest";
  StimulusManifest m;
  m.schema_version = Required<int>(doc, "schema_version", where);
  if (m.schema_version != kStimulusManifestVersion) {
    throw Error(errc::kValidation, "unsupported stimulus manifest version " +
                                       std::to_string(m.schema_version));
  }
  m.sample_rate = Required<double>(doc, "sample_rate", where);
  m.full_scale = Required<double>(doc, "full_scale_pa", where);
  m.seed = Required<std::uint64_t>(doc, "seed", where);
  m.target_dba = Required<double>(doc, "target_dba", where);
  if (!doc.contains("trajectory")) throw Error(errc::kValidation, where + ": no trajectory");
  m.trajectory = TrajectoryFromJson(doc["trajectory"]);
  if (!doc.contains("stimuli") || !doc["stimuli"].is_array()) {
    throw Error(errc::kValidation, where + ": no stimuli array");
  }
  for (const json& o : doc["stimuli"]) {
    ManifestEntry e;
    e.id = Required<int>(o, "id", where);
    e.label = Field<std::string>(o, "label", "", where);
    e.kind = Field<std::string>(o, "kind", "", where);
    e.mono_file = Required<std::string>(o, "mono_file", where);
    e.stereo_file = Required<std::string>(o, "stereo_file", where);
    e.duration = Required<double>(o, "duration", where);
    e.normalized = Field<bool>(o, "normalized", true, where);
    e.gain = Field<double>(o, "gain", 1.0, where);
    m.stimuli.push_back(std::move(e));
  }
  return m;
}

StimulusManifest SynthesizeAll(const std::vector<StimulusSpec>& specs,
                               const PipelineConfig& config,
                               const std::filesystem::path& out_dir,
                               const std::filesystem::path& spec_dir) {
  const NoiseBeds beds = RenderNoiseBeds(config);
  StimulusManifest manifest;
  manifest.sample_rate = config.sample_rate;
  manifest.full_scale = config.full_scale;
  manifest.seed = config.seed;
  manifest.target_dba = config.target_dba;
  manifest.trajectory = config.trajectory;
  for (const auto& spec : specs) {
    std::optional<CalibratedSignal> bed;
    if (!spec.bed_path.empty()) {
      std::filesystem::path p = spec.bed_path;
      if (p.is_relative()) p = spec_dir / p;
      bed = ReadWav(p);
      if (bed->channels() > 1) {
        bed = CalibratedSignal::Mono(bed->sample_rate(), bed->samples().rowwise().mean(),
                                     false);
      }
    }
    const RenderedStimulus r =
        RenderStimulus(spec, config, beds, bed ? &*bed : nullptr);
    ManifestEntry e;
    e.id = spec.id;
    e.label = spec.label;
    e.kind = ToString(spec.kind);
    e.mono_file = TwoDigit(spec.id) + "_mono.wav";
    e.stereo_file = TwoDigit(spec.id) + "_stereo.wav";
    e.duration = r.mono.duration();
    e.normalized = spec.normalize;
    e.gain = r.gain;
    WriteWav(out_dir / e.mono_file, r.mono, {WavFormat::kFloat32, config.full_scale});
    WriteWav(out_dir / e.stereo_file, r.stereo, {WavFormat::kPcm24, config.full_scale});
    manifest.stimuli.push_back(std::move(e));
  }
  WriteFileAtomic(out_dir / kStimulusManifestName, StimulusManifestToJson(manifest));
  return manifest;
}

MetricReport ComputeMetrics(const CalibratedSignal& mono, int stimulus_id) {
  RequireMono(mono, "metric battery");
  MetricReport r;
  MetricSet& m = r.metrics;
  m.stimulus_id = stimulus_id;
  m.lp_max = LpMax(mono, TimeWeighting::kFast);
  m.lpa_max = LpMax(AWeight(mono), TimeWeighting::kFast);
  m.lpa_eq = LpAEq(mono);
  const PnlResult pnl = PnlChain(ThirdOctaveFrames(mono, 0.5), 0.5);
  m.pnlt_max = pnl.pnlt_max;
  m.epnl = pnl.epnl;
  r.traces = ComputeSqmTraces(mono);
  const SqmSummary s = Summarize(r.traces);
  m.n5 = s.n5;
  m.s5 = s.s5;
  m.k5 = s.k5;
  m.r5 = s.r5;
  m.fs5 = s.fs5;
  m.pa = s.pa;
  return r;
}

std::vector<MetricSet> MeasureAll(const std::filesystem::path& audio_dir) {
  const StimulusManifest manifest =
      StimulusManifestFromJson(ReadFileBytes(audio_dir / kStimulusManifestName));
  std::vector<ManifestEntry> entries = manifest.stimuli;
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::vector<MetricSet> out;
  for (const auto& e : entries) {
    WavInfo info;
    const CalibratedSignal sig = ReadWav(audio_dir / e.mono_file, manifest.full_scale, &info);
    if (info.sample_rate != manifest.sample_rate) {
      throw Error(errc::kMismatch, e.mono_file + " has sample rate " +
                                       std::to_string(info.sample_rate) +
                                       ", manifest says " +
                                       std::to_string(manifest.sample_rate));
    }
    if (sig.channels() != 1) {
      throw Error(errc::kMismatch, e.mono_file + " is not a mono file");
    }
    out.push_back(ComputeMetrics(sig, e.id).metrics);
  }
  return out;
}

AnalysisFiles Analyze(const std::vector<MetricSet>& metrics,
                      const std::vector<RatingRecord>& ratings,
                      const std::set<int>& exclude, const std::filesystem::path& out_dir,
                      TableFormat format) {
  const std::map<int, double> means = MeanAnnoyance(ratings);
  const auto table = CorrelationTable(metrics, means, exclude);
  AnalysisFiles files;
  if (format == TableFormat::kCsv) {
    files.correlation_table = out_dir / "correlation_table.csv";
    WriteFileAtomic(files.correlation_table, CorrelationTableCsv(table));
  } else {
    files.correlation_table = out_dir / "correlation_table.json";
    WriteFileAtomic(files.correlation_table, CorrelationTableJson(table));
  }

  // Box statistics per stimulus and for the pooled tonal groups.
  json per = json::array();
  std::vector<BoxStats> boxes;
  for (const auto& [id, mean] : means) {
    boxes.push_back(Describe(ratings, id));
    json o = BoxJson(boxes.back());
    o["stimulus_id"] = id;
    per.push_back(std::move(o));
  }
  json groups = json::object();
  const std::pair<const char*, std::set<int>> kGroups[] = {
      {"pure", {1, 2, 3, 4}}, {"intermittent", {5, 6, 7, 8}}, {"combined", {9, 10, 11, 12}}};
  for (const auto& [name, ids] : kGroups) {
    const bool any = std::any_of(ratings.begin(), ratings.end(),
                                 [&](const auto& r) { return ids.count(r.stimulus_id) > 0; });
    if (any) groups[name] = BoxJson(Describe(ratings, ids));
  }
  files.box_stats = out_dir / "box_stats.json";
  WriteFileAtomic(files.box_stats, json{{"stimuli", per}, {"groups", groups}}.dump(2) + "\n");
  files.box_plot = out_dir / "box_plot.png";
  WriteImage(files.box_plot, RenderBoxPlot(boxes));

  // Mean rating against PA over the included stimuli.
  std::vector<double> x, y, sd;
  std::vector<int> ids;
  for (const auto& m : metrics) {
    if (exclude.count(m.stimulus_id)) continue;
    ids.push_back(m.stimulus_id);
    x.push_back(m.pa);
    y.push_back(means.at(m.stimulus_id));
    sd.push_back(Describe(ratings, m.stimulus_id).sd);
  }
  const LinearFit fit = FitLine(x, y);
  std::string csv = "stimulus_id,PA,mean_annoyance,sd_annoyance,fit\n";
  char a[32], b[32], c[32], d[32];
  for (std::size_t i = 0; i < x.size(); ++i) {
    csv += std::to_string(ids[i]) + "," + Fmt(a, sizeof a, x[i]) + "," +
           Fmt(b, sizeof b, y[i]) + "," + Fmt(c, sizeof c, sd[i]) + "," +
           Fmt(d, sizeof d, fit.slope * x[i] + fit.intercept) + "\n";
  }
  files.scatter = out_dir / "scatter_pa.csv";
  WriteFileAtomic(files.scatter, csv);
  files.scatter_plot = out_dir / "scatter_pa.png";
  WriteImage(files.scatter_plot, RenderScatter(x, y, sd, fit));
  return files;
}

std::string SpectrogramCsv(const Spectrogram& spec) {
  std::string out = "frequency_hz";
  char buf[32];
  for (double t : spec.times) out += std::string(",") + Fmt(buf, sizeof buf, t);
  out += "\n";
  for (Eigen::Index b = 0; b < spec.psd_db.rows(); ++b) {
    out += Fmt(buf, sizeof buf, spec.frequencies[static_cast<std::size_t>(b)]);
    for (Eigen::Index f = 0; f < spec.psd_db.cols(); ++f) {
      out += std::string(",") + Fmt(buf, sizeof buf, spec.psd_db(b, f));
    }
    out += "\n";
  }
  return out;
}

}  // namespace evsound

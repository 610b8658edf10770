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

// evsound: synthesize warning-sound stimuli, measure them, analyse ratings
// and package listening sessions.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evsound/error.h"
#include "evsound/io.h"
#include "evsound/levels.h"
#include "evsound/pipeline.h"
#include "evsound/plot.h"
#include "evsound/session.h"
#include "evsound/study.h"
#include "evsound/wav.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace evsound;

namespace {

fs::path DefaultOutputDir() {
  const char* env = std::getenv("EVSOUND_OUTPUT_DIR");
  return (env && *env) ? fs::path(env) : fs::path("evsound_out");
}

void ReportError(const std::string& code, const std::string& message) {
  const nlohmann::json j{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
}

std::set<int> ParseIdList(const std::string& text) {
  std::set<int> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) {
      throw Error(errc::kInvalidArgument, "bad stimulus id '" + item + "' in --exclude");
    }
    ids.insert(v);
  }
  return ids;
}

TableFormat ParseFormat(const std::string& f) {
  return f == "json" ? TableFormat::kJson : TableFormat::kCsv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electric-vehicle warning sound stimuli and analysis"};
  app.require_subcommand(1);

  PipelineConfig config;
  std::string spec_file;
  fs::path out_dir = DefaultOutputDir();
  auto* synth = app.add_subcommand("synth", "Render stimuli to WAV files and a manifest");
  synth->add_option("--spec", spec_file, "Stimulus spec JSON (default: built-in table)")
      ->check(CLI::ExistingFile);
  synth->add_option("-o,--out", out_dir, "Output directory");
  synth->add_option("--seed", config.seed, "Seed for the noise beds");
  synth->add_option("--sample-rate", config.sample_rate, "Sample rate in Hz")
      ->check(CLI::PositiveNumber);
  synth->add_option("--target-dba", config.target_dba, "Normalization level in dBA");
  synth->add_option("--full-scale", config.full_scale, "Pa at digital full scale")
      ->check(CLI::PositiveNumber);

  fs::path audio_dir;
  std::string format = "csv";
  auto* metrics = app.add_subcommand("metrics", "Measure every stimulus of a synth output");
  metrics->add_option("audio_dir", audio_dir, "Directory written by synth")
      ->required()
      ->check(CLI::ExistingDirectory);
  metrics->add_option("-o,--out", out_dir, "Output directory");
  metrics->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  fs::path metrics_file;
  std::vector<fs::path> ratings_paths;
  std::string exclude = "14,15";
  auto* analyze = app.add_subcommand("analyze", "Correlate metrics with ratings");
  analyze->add_option("--metrics", metrics_file, "Metrics CSV or JSON")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--ratings", ratings_paths, "Ratings CSV/JSON files or directories")
      ->required()
      ->check(CLI::ExistingPath);
  analyze->add_option("--exclude", exclude, "Comma-separated stimulus ids to leave out");
  analyze->add_option("-o,--out", out_dir, "Output directory");
  analyze->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  fs::path audio_file;
  fs::path prefix;
  double full_scale = kDefaultFullScalePa;
  int window = 4096;
  double overlap = 0.75;
  double max_freq = 5000.0;
  auto* spectro = app.add_subcommand("spectrogram", "Spectrogram CSV and image of a WAV file");
  spectro->add_option("audio", audio_file, "WAV file")->required()->check(CLI::ExistingFile);
  spectro->add_option("-o,--out", prefix, "Output path prefix (default: <out dir>/<stem>)");
  spectro->add_option("--full-scale", full_scale, "Pa at digital full scale")
      ->check(CLI::PositiveNumber);
  spectro->add_option("--window", window, "FFT length")->check(CLI::Range(64, 1 << 20));
  spectro->add_option("--overlap", overlap, "Frame overlap")->check(CLI::Range(0.0, 0.95));
  spectro->add_option("--max-freq", max_freq, "Upper frequency of the image in Hz")
      ->check(CLI::PositiveNumber);

  std::uint64_t session_seed = 0;
  auto* session = app.add_subcommand("session", "Package a listening-session bundle");
  session->add_option("audio_dir", audio_dir, "Directory written by synth")
      ->required()
      ->check(CLI::ExistingDirectory);
  session->add_option("-o,--out", out_dir, "Bundle directory");
  session->add_option("--seed", session_seed, "Seed for the trial order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    ReportError("usage", e.what());
    return 2;
  }

  try {
    if (*synth) {
      std::vector<StimulusSpec> specs = BuiltinStimulusTable();
      fs::path spec_dir;
      if (!spec_file.empty()) {
        specs = StimulusSpecsFromJson(ReadFileBytes(spec_file));
        spec_dir = fs::path(spec_file).parent_path();
      }
      const StimulusManifest m = SynthesizeAll(specs, config, out_dir, spec_dir);
      std::cout << "wrote " << m.stimuli.size() << " stimuli to " << out_dir.string() << "\n";
    } else if (*metrics) {
      const std::vector<MetricSet> sets = MeasureAll(audio_dir);
      const fs::path path =
          out_dir / (ParseFormat(format) == TableFormat::kJson ? "metrics.json" : "metrics.csv");
      WriteFileAtomic(path, ParseFormat(format) == TableFormat::kJson ? MetricsToJson(sets)
                                                                      : MetricsToCsv(sets));
      std::cout << "wrote " << path.string() << "\n";
    } else if (*analyze) {
      const auto sets = LoadMetrics(metrics_file);
      const auto ratings = LoadRatings(ratings_paths);
      const AnalysisFiles files =
          Analyze(sets, ratings, ParseIdList(exclude), out_dir, ParseFormat(format));
      std::cout << "wrote " << files.correlation_table.string() << "\n";
    } else if (*spectro) {
      CalibratedSignal sig = ReadWav(audio_file, full_scale);
      if (sig.channels() > 1) {
        sig = CalibratedSignal::Mono(sig.sample_rate(), sig.samples().rowwise().mean());
      }
      const Spectrogram spec = ComputeSpectrogram(sig, window, overlap);
      if (prefix.empty()) prefix = out_dir / audio_file.stem();
      fs::path csv = prefix, png = prefix;
      csv += ".csv";
      png += ".png";
      WriteFileAtomic(csv, SpectrogramCsv(spec));
      WriteImage(png, RenderSpectrogram(spec, max_freq));
      std::cout << "wrote " << csv.string() << " and " << png.string() << "\n";
    } else if (*session) {
      const SessionManifest m = WriteSessionBundle(audio_dir, out_dir, session_seed);
      std::cout << "wrote " << m.trials.size() << " trials to " << out_dir.string() << "\n";
    }
  } catch (const Error& e) {
    ReportError(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    ReportError("internal", e.what());
    return 1;
  }
  return 0;
}

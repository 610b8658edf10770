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

#include "evsound/synth.h"

#include <cmath>
#include <numbers>

#include "evsound/dsp.h"
#include "evsound/error.h"
#include "evsound/levels.h"

namespace evsound {
namespace {

using std::numbers::pi;

Eigen::Index SampleCount(double duration, double sample_rate) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw Error(errc::kInvalidArgument, "duration must be positive");
  }
  if (!(sample_rate > 0.0)) {
    throw Error(errc::kInvalidArgument, "sample rate must be positive");
  }
  return static_cast<Eigen::Index>(std::llround(duration * sample_rate));
}

void CheckTone(double freq, double sample_rate) {
  if (!(freq > 0.0)) {
    throw Error(errc::kInvalidArgument, "frequency must be positive");
  }
  if (freq >= sample_rate / 2.0) {
    throw Error(errc::kNyquist,
                "frequency " + std::to_string(freq) +
                    " Hz is at or above the Nyquist frequency");
  }
}

void CheckAmplitude(double amplitude) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw Error(errc::kInvalidArgument, "amplitude must be non-negative");
  }
}

double RampedGate(double t, double length, double ramp) {
  return dsp::RaisedCosine(t, ramp) * dsp::RaisedCosine(length - t, ramp);
}

}  // namespace

std::string ToString(StimulusKind kind) {
  switch (kind) {
    case StimulusKind::kPure: return "pure";
    case StimulusKind::kIntermittent: return "intermittent";
    case StimulusKind::kCombined: return "combined";
    case StimulusKind::kDoubleBeep: return "double_beep";
    case StimulusKind::kFileBed: return "file_bed";
  }
  return "pure";
}

StimulusKind StimulusKindFromString(const std::string& name) {
  if (name == "pure") return StimulusKind::kPure;
  if (name == "intermittent") return StimulusKind::kIntermittent;
  if (name == "combined") return StimulusKind::kCombined;
  if (name == "double_beep") return StimulusKind::kDoubleBeep;
  if (name == "file_bed") return StimulusKind::kFileBed;
  throw Error(errc::kValidation, "unknown stimulus kind '" + name + "'");
}

std::string ToString(NoiseBedKind kind) {
  return kind == NoiseBedKind::kTyreSurrogate ? "tyre_surrogate"
                                              : "background_surrogate";
}

NoiseBedKind NoiseBedKindFromString(const std::string& name) {
  if (name == "tyre_surrogate") return NoiseBedKind::kTyreSurrogate;
  if (name == "background_surrogate") return NoiseBedKind::kBackgroundSurrogate;
  throw Error(errc::kValidation, "unknown noise bed kind '" + name + "'");
}

std::vector<BeepSegment> DefaultDoubleBeepPattern() {
  return {{240.0, 1800.0}, {10.0, std::nullopt}, {240.0, 1900.0},
          {1000.0, std::nullopt}};
}

std::vector<StimulusSpec> BuiltinStimulusTable() {
  std::vector<StimulusSpec> table;
  const double freqs[] = {350.0, 500.0, 1000.0, 2000.0};
  int id = 1;
  for (double f : freqs) {
    StimulusSpec s;
    s.id = id++;
    s.kind = StimulusKind::kPure;
    s.principal_freq = f;
    s.label = "Pure tone, continuous, " + std::to_string(static_cast<int>(f)) +
              " Hz";
    table.push_back(s);
  }
  for (double f : freqs) {
    StimulusSpec s;
    s.id = id++;
    s.kind = StimulusKind::kIntermittent;
    s.principal_freq = f;
    s.on_ms = 500.0;
    s.off_ms = 500.0;
    s.repetitions = 13;
    s.label = "Pure tone, intermittent (13 x [500 ms on, 500 ms off]), " +
              std::to_string(static_cast<int>(f)) + " Hz";
    table.push_back(s);
  }
  for (double f : freqs) {
    StimulusSpec s;
    s.id = id++;
    s.kind = StimulusKind::kCombined;
    s.principal_freq = f;
    s.label = "Combined tone, continuous, " +
              std::to_string(static_cast<int>(f)) + " Hz (+/-90 Hz)";
    table.push_back(s);
  }
  {
    StimulusSpec s;
    s.id = id++;
    s.kind = StimulusKind::kDoubleBeep;
    s.beep_pattern = DefaultDoubleBeepPattern();
    s.repetitions = 8;
    s.label = "Double beeps (8 x [240 ms beep, 10 ms pause, 240 ms beep, "
              "1000 ms pause]), 1800-1900 Hz";
    table.push_back(s);
  }
  {
    StimulusSpec s;
    s.id = id++;
    s.kind = StimulusKind::kFileBed;
    s.label = "Diesel engine";
    // Placeholder used when no engine recording is supplied.
    s.surrogate = NoiseBedSpec{NoiseBedKind::kTyreSurrogate, 1400, 1.0};
    table.push_back(s);
  }
  {
    StimulusSpec s;
    s.id = id++;
    s.kind = StimulusKind::kFileBed;
    s.label = "Tyres on asphalt";
    s.normalize = false;
    table.push_back(s);
  }
  return table;
}

CalibratedSignal SynthPureTone(double freq, double duration, double sample_rate,
                               double amplitude) {
  const Eigen::Index n = SampleCount(duration, sample_rate);
  CheckTone(freq, sample_rate);
  CheckAmplitude(amplitude);
  Eigen::ArrayXd x(n);
  const double w = 2.0 * pi * freq / sample_rate;
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(w * static_cast<double>(i));
  }
  return CalibratedSignal::Mono(sample_rate, std::move(x));
}

CalibratedSignal SynthIntermittent(double freq, double on_ms, double off_ms,
                                   double duration, double sample_rate,
                                   double amplitude, double ramp) {
  if (!(on_ms > 0.0) || !(off_ms > 0.0)) {
    throw Error(errc::kInvalidArgument, "on/off durations must be positive");
  }
  const double on = on_ms / 1000.0;
  const double period = (on_ms + off_ms) / 1000.0;
  const double r = std::min(ramp, on / 2.0);
  CalibratedSignal tone = SynthPureTone(freq, duration, sample_rate, amplitude);
  Eigen::ArrayXd x = tone.mono();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double phase = std::fmod(static_cast<double>(i) / sample_rate, period);
    x[i] *= phase < on ? RampedGate(phase, on, r) : 0.0;
  }
  return CalibratedSignal::Mono(sample_rate, std::move(x));
}

CalibratedSignal SynthCombined(double freq, double offset,
                               double secondary_gain, double duration,
                               double sample_rate, double amplitude) {
  if (!(offset >= 0.0) || offset >= freq) {
    throw Error(errc::kInvalidArgument,
                "secondary offset must be smaller than the principal frequency");
  }
  if (!(secondary_gain >= 0.0)) {
    throw Error(errc::kInvalidArgument, "secondary gain must be non-negative");
  }
  CalibratedSignal out = SynthPureTone(freq, duration, sample_rate, amplitude);
  if (secondary_gain == 0.0 || offset == 0.0) {
    return secondary_gain == 0.0
               ? out
               : out.scaled(1.0 + 2.0 * secondary_gain);
  }
  const CalibratedSignal lower = SynthPureTone(
      freq - offset, duration, sample_rate, amplitude * secondary_gain);
  const CalibratedSignal upper = SynthPureTone(
      freq + offset, duration, sample_rate, amplitude * secondary_gain);
  const CalibratedSignal parts[] = {out, lower, upper};
  const double gains[] = {1.0, 1.0, 1.0};
  return Mix(parts, gains);
}

CalibratedSignal SynthDoubleBeep(const std::vector<BeepSegment>& pattern,
                                 int repetitions, double duration,
                                 double sample_rate, double amplitude,
                                 double ramp) {
  if (pattern.empty()) {
    throw Error(errc::kInvalidArgument, "beep pattern is empty");
  }
  double cycle = 0.0;
  for (const BeepSegment& seg : pattern) {
    if (!(seg.duration_ms > 0.0)) {
      throw Error(errc::kInvalidArgument, "pattern durations must be positive");
    }
    if (seg.freq_hz) CheckTone(*seg.freq_hz, sample_rate);
    cycle += seg.duration_ms / 1000.0;
  }
  if (repetitions < 0) {
    throw Error(errc::kInvalidArgument, "repetitions must be non-negative");
  }
  if (repetitions * cycle > duration + 0.5 / sample_rate) {
    throw Error(errc::kInvalidArgument,
                "duration is shorter than the requested repetitions");
  }
  CheckAmplitude(amplitude);
  const Eigen::Index n = SampleCount(duration, sample_rate);
  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double phase = std::fmod(static_cast<double>(i) / sample_rate, cycle);
    for (const BeepSegment& seg : pattern) {
      const double len = seg.duration_ms / 1000.0;
      if (phase < len) {
        if (seg.freq_hz) {
          const double r = std::min(ramp, len / 2.0);
          x[i] = amplitude * RampedGate(phase, len, r) *
                 std::sin(2.0 * pi * *seg.freq_hz * phase);
        }
        break;
      }
      phase -= len;
    }
  }
  return CalibratedSignal::Mono(sample_rate, std::move(x));
}

CalibratedSignal SynthNoiseBed(const NoiseBedSpec& spec, double duration,
                               double sample_rate) {
  const Eigen::Index n = SampleCount(duration, sample_rate);
  if (!(spec.gain >= 0.0)) {
    throw Error(errc::kInvalidArgument, "bed gain must be non-negative");
  }
  // Extra leading samples let the shaping filters settle; they are dropped.
  const auto warmup = static_cast<Eigen::Index>(0.5 * sample_rate);
  dsp::Rng rng(spec.seed);
  Eigen::ArrayXd white(n + warmup);
  for (Eigen::Index i = 0; i < white.size(); ++i) white[i] = rng.Gaussian();

  std::vector<dsp::Biquad> shape;
  const double nyq = sample_rate / 2.0;
  if (spec.kind == NoiseBedKind::kTyreSurrogate) {
    // Broad hump between a few hundred Hz and ~1.5 kHz.
    shape = dsp::ButterworthHighpass(2, 250.0, sample_rate);
    for (const auto& s : dsp::ButterworthLowpass(4, std::min(1500.0, 0.45 * nyq),
                                                 sample_rate)) {
      shape.push_back(s);
    }
  } else {
    // Low-frequency rumble of a quiet street.
    shape = dsp::ButterworthHighpass(2, 30.0, sample_rate);
    for (const auto& s : dsp::ButterworthLowpass(2, std::min(400.0, 0.45 * nyq),
                                                 sample_rate)) {
      shape.push_back(s);
    }
  }
  const Eigen::ArrayXd shaped = dsp::FilterCascade(shape, white).tail(n).eval();
  const double rms = std::sqrt(shaped.square().mean());
  Eigen::ArrayXd out = shaped * (rms > 0.0 ? spec.gain / rms : 0.0);
  return CalibratedSignal::Mono(sample_rate, std::move(out));
}

CalibratedSignal SynthesizeSource(const StimulusSpec& spec, double duration,
                                  double sample_rate, double amplitude,
                                  const CalibratedSignal* file_bed) {
  switch (spec.kind) {
    case StimulusKind::kPure:
      return SynthPureTone(spec.principal_freq, duration, sample_rate,
                           amplitude);
    case StimulusKind::kIntermittent:
      if (spec.repetitions * (spec.on_ms + spec.off_ms) / 1000.0 >
          duration + 0.5 / sample_rate) {
        throw Error(errc::kInvalidArgument,
                    "duration is shorter than the requested repetitions");
      }
      return SynthIntermittent(spec.principal_freq, spec.on_ms, spec.off_ms,
                               duration, sample_rate, amplitude);
    case StimulusKind::kCombined:
      if (spec.principal_freq + spec.secondary_offset >= sample_rate / 2.0) {
        throw Error(errc::kNyquist,
                    "upper secondary tone is at or above the Nyquist frequency");
      }
      return SynthCombined(spec.principal_freq, spec.secondary_offset,
                           spec.secondary_gain, duration, sample_rate,
                           amplitude);
    case StimulusKind::kDoubleBeep:
      return SynthDoubleBeep(spec.beep_pattern, spec.repetitions, duration,
                             sample_rate, amplitude);
    case StimulusKind::kFileBed: {
      const Eigen::Index n = SampleCount(duration, sample_rate);
      const double rms = amplitude / std::sqrt(2.0);
      if (file_bed != nullptr) {
        RequireMono(*file_bed, "file bed");
        Eigen::ArrayXd src = file_bed->mono();
        if (file_bed->sample_rate() != sample_rate) {
          src = dsp::Resample(src, file_bed->sample_rate(), sample_rate);
        }
        if (src.size() == 0) throw Error(errc::kSilence, "file bed is empty");
        Eigen::ArrayXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x[i] = src[i % src.size()];
        const double bed_rms = std::sqrt(x.square().mean());
        if (!(bed_rms > 0.0)) throw Error(errc::kSilence, "file bed is silent");
        x *= rms / bed_rms;
        return CalibratedSignal::Mono(sample_rate, std::move(x));
      }
      if (spec.surrogate) {
        NoiseBedSpec bed = *spec.surrogate;
        bed.gain *= rms;
        return SynthNoiseBed(bed, duration, sample_rate);
      }
      return CalibratedSignal::Zeros(sample_rate, n);
    }
  }
  throw Error(errc::kInvalidArgument, "unknown stimulus kind");
}

CalibratedSignal ApplyEdgeRamps(const CalibratedSignal& signal, double ramp) {
  Eigen::ArrayXXd x = signal.samples();
  const double fs = signal.sample_rate();
  const double length = static_cast<double>(signal.frames()) / fs;
  const auto ramp_n = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(std::ceil(ramp * fs)), signal.frames());
  for (Eigen::Index i = 0; i < ramp_n; ++i) {
    const double t = static_cast<double>(i) / fs;
    x.row(i) *= dsp::RaisedCosine(t, ramp);
    const Eigen::Index j = signal.frames() - 1 - i;
    x.row(j) *= dsp::RaisedCosine(length - static_cast<double>(j + 1) / fs,
                                  ramp);
  }
  return CalibratedSignal(fs, std::move(x), signal.calibrated());
}

double LevelNormalizationGain(const CalibratedSignal& signal,
                              double target_dba) {
  const double current = LpAEq(signal);
  return std::pow(10.0, (target_dba - current) / 20.0);
}

CalibratedSignal NormalizeToLevel(const CalibratedSignal& signal,
                                  double target_dba) {
  return signal.scaled(LevelNormalizationGain(signal, target_dba));
}

}  // namespace evsound

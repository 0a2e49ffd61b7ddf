// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace phasecont {

// Mono audio. Samples are nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

// Throws kInput if the waveform is empty, has a non-positive rate or holds a
// non-finite sample.
void ValidateWaveform(const Waveform& w, const char* what);

// Reads PCM-16 or IEEE float-32 RIFF/WAVE (WAVE_FORMAT_EXTENSIBLE included).
// Multichannel input is averaged to mono; PCM-16 is scaled by 1/32768.
Waveform ReadWav(const std::filesystem::path& path);

// Writes 16-bit mono PCM with the canonical 44-byte header. Samples are
// clipped to [-1, 1] and mapped with round(x * 32767).
void WriteWav(const std::filesystem::path& path, const Waveform& waveform);

struct UtteranceTriple {
  std::string id;
  Waveform clean;
  std::optional<Waveform> noisy;
  Waveform enhanced;
};

// A file pairing before any audio is read.
struct PairedPaths {
  std::string id;
  std::filesystem::path clean;
  std::optional<std::filesystem::path> noisy;
  std::filesystem::path enhanced;
};

struct SkippedPair {
  std::string id;
  std::string reason;
};

struct Pairing {
  std::vector<PairedPaths> pairs;  // sorted by id
  std::vector<SkippedPair> skipped;
};

// Matches *.wav files by identical file name across directories. A clean file
// with no enhanced (or, when noisy_dir is given, no noisy) counterpart is
// listed in `skipped` instead of failing the whole run.
Pairing PairDirectories(const std::filesystem::path& clean_dir,
                        const std::filesystem::path& enhanced_dir,
                        const std::optional<std::filesystem::path>& noisy_dir);

// Largest length difference tolerated by AlignTriple.
inline constexpr std::size_t kMaxAlignmentSlack = 512;

// Enforces a single sample rate and truncates all waveforms to the shortest
// length. Throws kInput on rate mismatch or a length gap above the slack.
void AlignTriple(UtteranceTriple& triple);

// Reads the files of a pairing and aligns them.
UtteranceTriple LoadTriple(const PairedPaths& paths);

}  // namespace phasecont

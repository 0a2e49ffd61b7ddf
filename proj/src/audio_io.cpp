// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <set>

#include "phasecont/error.hpp"

namespace phasecont {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  ByteReader(const std::vector<unsigned char>& bytes, std::size_t begin,
             std::size_t end)
      : bytes_(bytes), pos_(begin), end_(end) {}

  bool has(std::size_t n) const { return pos_ + n <= end_; }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) { pos_ += n; }

  std::uint16_t u16() {
    Need(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::string tag() {
    Need(4);
    std::string t(reinterpret_cast<const char*>(&bytes_[pos_]), 4);
    pos_ += 4;
    return t;
  }

 private:
  void Need(std::size_t n) const {
    if (!has(n)) throw Error(ErrorKind::kFormat, "WAV: truncated header");
  }

  const std::vector<unsigned char>& bytes_;
  std::size_t pos_;
  std::size_t end_;
};

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

float FloatFromBits(std::uint32_t bits) { return std::bit_cast<float>(bits); }

void PutU16(std::ostream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void PutU32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF),
                     static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

}  // namespace

void ValidateWaveform(const Waveform& w, const char* what) {
  if (w.samples.empty())
    throw Error(ErrorKind::kInput, std::string(what) + ": empty waveform");
  if (w.sample_rate <= 0)
    throw Error(ErrorKind::kInput, std::string(what) + ": sample rate must be positive");
  for (double x : w.samples) {
    if (!std::isfinite(x))
      throw Error(ErrorKind::kInput, std::string(what) + ": non-finite sample");
  }
}

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());

  ByteReader riff(bytes, 0, bytes.size());
  if (!riff.has(12) || riff.tag() != "RIFF")
    throw Error(ErrorKind::kFormat, path.string() + ": missing RIFF header");
  riff.u32();  // declared size; trailing garbage and short files both occur
  if (riff.tag() != "WAVE")
    throw Error(ErrorKind::kFormat, path.string() + ": not a WAVE file");

  std::optional<FmtChunk> fmt;
  std::optional<std::pair<std::size_t, std::size_t>> data;  // offset, size
  while (riff.has(8)) {
    const std::string id = riff.tag();
    const std::uint32_t size = riff.u32();
    const std::size_t body = riff.pos();
    if (id == "fmt ") {
      ByteReader r(bytes, body, std::min(bytes.size(), body + size));
      FmtChunk f;
      f.format = r.u16();
      f.channels = r.u16();
      f.sample_rate = r.u32();
      r.u32();  // byte rate
      f.block_align = r.u16();
      f.bits = r.u16();
      if (f.format == kFormatExtensible) {
        r.u16();  // cbSize
        r.u16();  // valid bits
        r.u32();  // channel mask
        f.format = r.u16();  // leading two bytes of the subformat GUID
      }
      fmt = f;
    } else if (id == "data") {
      if (body + size > bytes.size())
        throw Error(ErrorKind::kFormat, path.string() + ": data chunk overruns file");
      data = {body, size};
    }
    riff.skip(size + (size & 1U));
  }

  if (!fmt) throw Error(ErrorKind::kFormat, path.string() + ": missing fmt chunk");
  if (!data) throw Error(ErrorKind::kFormat, path.string() + ": missing data chunk");
  if (fmt->channels == 0 || fmt->sample_rate == 0)
    throw Error(ErrorKind::kFormat, path.string() + ": zero channels or sample rate");

  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits == 16;
  const bool float32 = fmt->format == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !float32) {
    throw Error(ErrorKind::kUnsupportedFormat,
                path.string() + ": unsupported encoding (format " +
                    std::to_string(fmt->format) + ", " + std::to_string(fmt->bits) +
                    " bits)");
  }
  const std::size_t bytes_per_sample = fmt->bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
  if (fmt->block_align != frame_bytes)
    throw Error(ErrorKind::kFormat, path.string() + ": inconsistent block align");

  const std::size_t frames = data->second / frame_bytes;
  if (frames == 0) throw Error(ErrorKind::kEmptyWaveform, path.string() + ": no samples");

  Waveform w;
  w.sample_rate = static_cast<int>(fmt->sample_rate);
  w.samples.resize(frames);
  ByteReader r(bytes, data->first, data->first + data->second);
  const double inv_channels = 1.0 / fmt->channels;
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < fmt->channels; ++c) {
      if (pcm16) {
        acc += static_cast<std::int16_t>(r.u16()) / 32768.0;
      } else {
        acc += FloatFromBits(r.u32());
      }
    }
    w.samples[i] = fmt->channels == 1 ? acc : acc * inv_channels;
  }
  return w;
}

void WriteWav(const std::filesystem::path& path, const Waveform& waveform) {
  for (double x : waveform.samples) {
    if (!std::isfinite(x)) throw Error(ErrorKind::kInput, "WriteWav: non-finite sample");
  }
  if (waveform.sample_rate <= 0)
    throw Error(ErrorKind::kInput, "WriteWav: sample rate must be positive");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");

  const auto data_bytes = static_cast<std::uint32_t>(waveform.samples.size() * 2);
  const auto rate = static_cast<std::uint32_t>(waveform.sample_rate);
  out.write("RIFF", 4);
  PutU32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, rate);
  PutU32(out, rate * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out.write("data", 4);
  PutU32(out, data_bytes);
  for (double x : waveform.samples) {
    const double q = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
    PutU16(out, static_cast<std::uint16_t>(
                    static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0))));
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

Pairing PairDirectories(const std::filesystem::path& clean_dir,
                        const std::filesystem::path& enhanced_dir,
                        const std::optional<std::filesystem::path>& noisy_dir) {
  namespace fs = std::filesystem;
  auto list = [](const fs::path& dir) {
    if (!fs::is_directory(dir))
      throw Error(ErrorKind::kIo, "not a directory: " + dir.string());
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav")
        names.insert(entry.path().filename().string());
    }
    return names;
  };

  const auto clean = list(clean_dir);
  const auto enhanced = list(enhanced_dir);
  std::set<std::string> noisy;
  if (noisy_dir) noisy = list(*noisy_dir);

  Pairing out;
  for (const auto& name : clean) {  // std::set iterates in lexicographic order
    const std::string id = fs::path(name).stem().string();
    if (!enhanced.contains(name)) {
      out.skipped.push_back({id, "no enhanced counterpart"});
      continue;
    }
    if (noisy_dir && !noisy.contains(name)) {
      out.skipped.push_back({id, "no noisy counterpart"});
      continue;
    }
    PairedPaths p{id, clean_dir / name, std::nullopt, enhanced_dir / name};
    if (noisy_dir) p.noisy = *noisy_dir / name;
    out.pairs.push_back(std::move(p));
  }
  return out;
}

void AlignTriple(UtteranceTriple& triple) {
  std::vector<Waveform*> present = {&triple.clean, &triple.enhanced};
  if (triple.noisy) present.push_back(&*triple.noisy);

  std::size_t shortest = triple.clean.size();
  std::size_t longest = shortest;
  for (const Waveform* w : present) {
    if (w->sample_rate != triple.clean.sample_rate)
      throw Error(ErrorKind::kInput, triple.id + ": sample rate mismatch");
    shortest = std::min(shortest, w->size());
    longest = std::max(longest, w->size());
  }
  if (longest - shortest > kMaxAlignmentSlack)
    throw Error(ErrorKind::kInput, triple.id + ": length mismatch of " +
                                       std::to_string(longest - shortest) + " samples");
  if (shortest == 0) throw Error(ErrorKind::kEmptyWaveform, triple.id + ": empty waveform");
  for (Waveform* w : present) w->samples.resize(shortest);
}

UtteranceTriple LoadTriple(const PairedPaths& paths) {
  UtteranceTriple t;
  t.id = paths.id;
  t.clean = ReadWav(paths.clean);
  t.enhanced = ReadWav(paths.enhanced);
  if (paths.noisy) t.noisy = ReadWav(*paths.noisy);
  AlignTriple(t);
  return t;
}

}  // namespace phasecont

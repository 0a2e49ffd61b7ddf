// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "phasecont/audio_io.hpp"
#include "phasecont/error.hpp"
#include "test_support.hpp"

using namespace phasecont;
using phasecont::testing::TempDir;

namespace {

// Hand-rolled RIFF writer so that the reader is tested against bytes it did
// not produce itself.
void WriteRawWav(const std::filesystem::path& path, std::uint16_t format, std::uint16_t channels,
                 std::uint16_t bits, const std::vector<unsigned char>& data,
                 bool extensible = false) {
  std::ofstream out(path, std::ios::binary);
  auto u16 = [&](std::uint16_t v) { out.put(char(v & 0xFF)).put(char(v >> 8)); };
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put(char((v >> (8 * i)) & 0xFF));
  };
  const std::uint32_t fmt_size = extensible ? 40 : 16;
  out << "RIFF";
  u32(4 + 8 + fmt_size + 8 + static_cast<std::uint32_t>(data.size()));
  out << "WAVE" << "fmt ";
  u32(fmt_size);
  u16(extensible ? 0xFFFE : format);
  u16(channels);
  u32(16000);
  u32(16000u * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  if (extensible) {
    u16(22);
    u16(bits);
    u32(0);
    u16(format);
    for (int i = 0; i < 14; ++i) out.put(0);
  }
  out << "data";
  u32(static_cast<std::uint32_t>(data.size()));
  out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
}

std::vector<unsigned char> Pcm16Bytes(const std::vector<std::int16_t>& v) {
  std::vector<unsigned char> b;
  for (auto s : v) {
    const auto u = static_cast<std::uint16_t>(s);
    b.push_back(u & 0xFF);
    b.push_back(u >> 8);
  }
  return b;
}

std::vector<unsigned char> Float32Bytes(const std::vector<float>& v) {
  std::vector<unsigned char> b;
  for (float f : v) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    for (int i = 0; i < 4; ++i) b.push_back((u >> (8 * i)) & 0xFF);
  }
  return b;
}

}  // namespace

TEST_CASE("read_wav scales PCM-16 by 1/32768", "[audio_io]") {
  TempDir dir("wav");
  const auto path = dir.path() / "a.wav";
  WriteRawWav(path, 1, 1, 16, Pcm16Bytes({0, 16384, -16384}));
  const Waveform w = ReadWav(path);
  REQUIRE(w.sample_rate == 16000);
  REQUIRE(w.samples == std::vector<double>{0.0, 0.5, -0.5});
}

TEST_CASE("read_wav averages channels to mono", "[audio_io]") {
  TempDir dir("wav");
  const auto path = dir.path() / "stereo.wav";
  WriteRawWav(path, 3, 2, 32, Float32Bytes({1.0f, 0.0f, -0.5f, 0.25f}));
  const Waveform w = ReadWav(path);
  REQUIRE(w.samples.size() == 2);
  CHECK(w.samples[0] == 0.5);
  CHECK(w.samples[1] == -0.125);
}

TEST_CASE("read_wav accepts WAVE_FORMAT_EXTENSIBLE", "[audio_io]") {
  TempDir dir("wav");
  const auto path = dir.path() / "ext.wav";
  WriteRawWav(path, 1, 1, 16, Pcm16Bytes({8192}), true);
  CHECK(ReadWav(path).samples == std::vector<double>{0.25});
}

TEST_CASE("read_wav error paths", "[audio_io]") {
  TempDir dir("wav");
  auto kind_of = [](const std::filesystem::path& p) {
    try {
      ReadWav(p);
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::kIo;
  };

  SECTION("zero-length data chunk") {
    WriteRawWav(dir.path() / "empty.wav", 1, 1, 16, {});
    CHECK(kind_of(dir.path() / "empty.wav") == ErrorKind::kEmptyWaveform);
  }
  SECTION("compressed encoding") {
    WriteRawWav(dir.path() / "alaw.wav", 6, 1, 8, {1, 2, 3});
    CHECK(kind_of(dir.path() / "alaw.wav") == ErrorKind::kUnsupportedFormat);
  }
  SECTION("24-bit PCM") {
    WriteRawWav(dir.path() / "p24.wav", 1, 1, 24, {1, 2, 3});
    CHECK(kind_of(dir.path() / "p24.wav") == ErrorKind::kUnsupportedFormat);
  }
  SECTION("not RIFF") {
    std::ofstream(dir.path() / "junk.wav") << "hello world, not audio";
    CHECK(kind_of(dir.path() / "junk.wav") == ErrorKind::kFormat);
  }
  SECTION("truncated") {
    std::ofstream(dir.path() / "short.wav") << "RIFF";
    CHECK(kind_of(dir.path() / "short.wav") == ErrorKind::kFormat);
  }
  SECTION("missing file") { CHECK(kind_of(dir.path() / "nope.wav") == ErrorKind::kIo); }
}

TEST_CASE("write_wav full-scale mapping and clipping", "[audio_io]") {
  TempDir dir("wav");
  const auto path = dir.path() / "w.wav";
  WriteWav(path, {{1.0, -2.0, 0.0, -1.0, 3.0}, 8000});

  std::ifstream in(path, std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  REQUIRE(bytes.size() == 44 + 10);
  auto sample = [&](std::size_t i) {
    return static_cast<std::int16_t>(bytes[44 + 2 * i] | (bytes[45 + 2 * i] << 8));
  };
  CHECK(sample(0) == 32767);
  CHECK(sample(1) == -32768);
  CHECK(sample(2) == 0);
  CHECK(sample(3) == -32768);
  CHECK(sample(4) == 32767);
  CHECK(ReadWav(path).sample_rate == 8000);
}

TEST_CASE("write_wav rejects non-finite samples", "[audio_io]") {
  TempDir dir("wav");
  REQUIRE_THROWS_AS(WriteWav(dir.path() / "x.wav", {{0.0, std::nan("")}, 16000}), Error);
}

TEST_CASE("write/read round trip keeps length and 2^-15 accuracy", "[audio_io][property]") {
  TempDir dir("wav");
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 4000;
    auto x = phasecont::testing::RandomSignal(rng, n, 1.0);
    x[0] = 1.0;  // include the clipped extremes
    if (n > 1) x[1] = -1.0;
    const auto path = dir.path() / "rt.wav";
    WriteWav(path, {x, 16000});
    const Waveform back = ReadWav(path);
    REQUIRE(back.samples.size() == n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(back.samples[i] - x[i]));
    REQUIRE(worst <= std::ldexp(1.0, -15));
  }
}

TEST_CASE("pair_directories matches by file name in sorted order", "[audio_io]") {
  TempDir dir("pair");
  const auto clean = dir.path() / "clean";
  const auto enh = dir.path() / "enhanced";
  const auto noisy = dir.path() / "noisy";
  for (const auto& d : {clean, enh, noisy}) std::filesystem::create_directories(d);
  const Waveform w{{0.1, 0.2}, 16000};

  SECTION("set intersection with skips") {
    for (const char* n : {"b.wav", "a.wav"}) WriteWav(clean / n, w);
    WriteWav(enh / "a.wav", w);
    const Pairing p = PairDirectories(clean, enh, std::nullopt);
    REQUIRE(p.pairs.size() == 1);
    CHECK(p.pairs[0].id == "a");
    CHECK_FALSE(p.pairs[0].noisy.has_value());
    REQUIRE(p.skipped.size() == 1);
    CHECK(p.skipped[0].id == "b");
  }
  SECTION("empty directories") {
    const Pairing p = PairDirectories(clean, enh, std::nullopt);
    CHECK(p.pairs.empty());
    CHECK(p.skipped.empty());
  }
  SECTION("noisy present") {
    for (const auto& d : {clean, enh, noisy}) WriteWav(d / "x.wav", w);
    const Pairing p = PairDirectories(clean, enh, noisy);
    REQUIRE(p.pairs.size() == 1);
    REQUIRE(p.pairs[0].noisy.has_value());
    CHECK(p.pairs[0].noisy->filename() == "x.wav");
  }
  SECTION("ordering is lexicographic regardless of creation order") {
    for (const char* n : {"z.wav", "m.wav", "a10.wav", "a2.wav"}) {
      WriteWav(clean / n, w);
      WriteWav(enh / n, w);
    }
    std::ofstream(clean / "notes.txt") << "ignored";
    const Pairing p = PairDirectories(clean, enh, std::nullopt);
    std::vector<std::string> ids;
    for (const auto& pp : p.pairs) ids.push_back(pp.id);
    CHECK(ids == std::vector<std::string>{"a10", "a2", "m", "z"});
  }
}

TEST_CASE("AlignTriple truncates small mismatches and rejects large ones", "[audio_io]") {
  UtteranceTriple t;
  t.id = "u";
  t.clean = {std::vector<double>(1000, 0.1), 16000};
  t.enhanced = {std::vector<double>(1200, 0.1), 16000};
  t.noisy = Waveform{std::vector<double>(1100, 0.1), 16000};
  AlignTriple(t);
  CHECK(t.clean.size() == 1000);
  CHECK(t.enhanced.size() == 1000);
  CHECK(t.noisy->size() == 1000);

  t.enhanced.samples.resize(1000 + kMaxAlignmentSlack + 1, 0.0);
  CHECK_THROWS_AS(AlignTriple(t), Error);

  UtteranceTriple r;
  r.clean = {std::vector<double>(10, 0.1), 16000};
  r.enhanced = {std::vector<double>(10, 0.1), 8000};
  CHECK_THROWS_AS(AlignTriple(r), Error);
}

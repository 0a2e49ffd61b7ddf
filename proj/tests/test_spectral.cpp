// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>

#include "phasecont/error.hpp"
#include "phasecont/fft.hpp"
#include "phasecont/spectral.hpp"
#include "test_support.hpp"

using namespace phasecont;
namespace pt = phasecont::testing;

namespace {

double MaxRelative(const Grid<Complex>& got, const Grid<pt::Cplx>& want) {
  double scale = 0.0;
  for (const auto& z : want.flat()) scale = std::max(scale, std::abs(z));
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i)
    worst = std::max(worst, std::abs(got.flat()[i] - want.flat()[i]));
  return scale > 0 ? worst / scale : worst;
}

double Inner(const Grid<Complex>& a, const Grid<Complex>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a.flat()[i].real() * b.flat()[i].real() + a.flat()[i].imag() * b.flat()[i].imag();
  return s;
}

}  // namespace

TEST_CASE("FFT matches the naive DFT", "[spectral][fft]") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u, 8u, 64u, 512u}) {
    const FftPlan plan(n);
    std::vector<Complex> x(n);
    for (auto& v : x) v = {pt::RandomSignal(rng, 1)[0], pt::RandomSignal(rng, 1)[0]};
    auto y = x;
    plan.Forward(y);
    for (std::size_t k = 0; k < n; ++k) {
      Complex acc = 0.0;
      for (std::size_t m = 0; m < n; ++m)
        acc += x[m] * std::polar(1.0, -2.0 * pt::kPi * double((k * m) % n) / double(n));
      REQUIRE(std::abs(acc - y[k]) <= 1e-12 * double(n));
    }
  }
  CHECK_THROWS_AS(FftPlan(12), Error);
}

TEST_CASE("StftConfig validation and parsing", "[spectral]") {
  CHECK_NOTHROW(StftConfig{512, 128, 512}.Validate());
  CHECK_THROWS_AS((StftConfig{500, 128, 400}.Validate()), Error);
  CHECK_THROWS_AS((StftConfig{512, 0, 512}.Validate()), Error);
  CHECK_THROWS_AS((StftConfig{512, 300, 256}.Validate()), Error);
  CHECK_THROWS_AS((StftConfig{256, 64, 512}.Validate()), Error);

  const StftConfig c = ParseStftConfig("8:8:8:rect");
  CHECK(c == StftConfig{8, 8, 8, WindowKind::kRectangular});
  CHECK(ToString(c) == "8:8:8:rect");
  CHECK(ParseMultiResConfig(ToString(MultiResConfig::Default())) == MultiResConfig::Default());
  CHECK_THROWS_AS(ParseMultiResConfig("512:240:50,512:240:50"), Error);
  CHECK_THROWS_AS(ParseMultiResConfig(""), Error);
  CHECK_THROWS_AS(ParseStftConfig("512:x:50"), Error);

  const auto d = MultiResConfig::Default();
  REQUIRE(d.resolutions.size() == 3);
  CHECK(d.resolutions[0] == StftConfig{512, 50, 240});
  CHECK(d.resolutions[1] == StftConfig{1024, 120, 600});
  CHECK(d.resolutions[2] == StftConfig{2048, 240, 1200});
  for (const auto& r : d.resolutions) CHECK(r.SatisfiesCola());
  CHECK_FALSE((StftConfig{512, 300, 512}.SatisfiesCola()));
  CHECK((StftConfig{512, 512, 512, WindowKind::kRectangular}.SatisfiesCola()));
}

TEST_CASE("frame count and reflection indexing", "[spectral]") {
  const StftConfig cfg{512, 50, 240};
  CHECK(FrameCount(1000, cfg) == 1 + 1000 / 50);
  CHECK(ReflectIndex(-1, 5) == 1);
  CHECK(ReflectIndex(-4, 5) == 4);
  CHECK(ReflectIndex(5, 5) == 3);
  CHECK(ReflectIndex(-6, 5) == 2);  // repeated reflection for long pads
  CHECK(ReflectIndex(-3, 1) == 0);
  for (long long i = -50; i < 60; ++i) REQUIRE(ReflectIndex(i, 7) == pt::OracleReflect(i, 7));
}

TEST_CASE("stft of silence is silent", "[spectral]") {
  const auto s = Stft(std::vector<double>(300, 0.0), StftConfig{64, 16, 32});
  for (const auto& z : s.values.flat()) REQUIRE(z == Complex{});
  CHECK(s.values.bins() == 33);
}

TEST_CASE("stft of a bin-centred cosine", "[spectral]") {
  const StftConfig cfg{8, 8, 8, WindowKind::kRectangular};
  std::vector<double> x(24);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::cos(2.0 * pt::kPi * double(t) * 2.0 / 8.0);
  const auto s = Stft(x, cfg);
  // Frame 1 spans samples 4..11 exactly, no padding involved.
  for (std::size_t k = 0; k < 5; ++k) {
    if (k == 2) CHECK(std::abs(s.values(1, k)) == Catch::Approx(4.0).margin(1e-12));
    else CHECK(std::abs(s.values(1, k)) <= 1e-12);
  }
}

TEST_CASE("stft matches the naive windowed DFT", "[spectral]") {
  std::mt19937_64 rng(2);
  for (const StftConfig& cfg :
       {StftConfig{64, 16, 64}, StftConfig{32, 5, 20}, StftConfig{16, 16, 16, WindowKind::kRectangular},
        StftConfig{128, 32, 100}}) {
    const auto x = pt::RandomSignal(rng, 64);
    REQUIRE(MaxRelative(Stft(x, cfg).values, pt::NaiveStft(x, cfg)) <= 1e-10);
  }
  // Signals shorter than the reflection pad.
  const auto tiny = pt::RandomSignal(rng, 3);
  CHECK(MaxRelative(Stft(tiny, StftConfig{32, 8, 32}).values, pt::NaiveStft(tiny, {32, 8, 32})) <= 1e-10);
}

TEST_CASE("stft rejects non-finite and empty input", "[spectral]") {
  CHECK_THROWS_AS(Stft(std::vector<double>{0.0, INFINITY}, StftConfig{8, 2, 8}), Error);
  CHECK_THROWS_AS(Stft(std::vector<double>{}, StftConfig{8, 2, 8}), Error);
}

TEST_CASE("stft is linear", "[spectral][property]") {
  std::mt19937_64 rng(3);
  const StftConfig cfg{256, 64, 200};
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = pt::RandomSignal(rng, 500);
    const auto y = pt::RandomSignal(rng, 500);
    const double a = pt::RandomSignal(rng, 1, 2.0)[0];
    const double b = pt::RandomSignal(rng, 1, 2.0)[0];
    std::vector<double> z(500);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
    const auto sx = Stft(x, cfg), sy = Stft(y, cfg), sz = Stft(z, cfg);
    for (std::size_t i = 0; i < sz.values.size(); ++i)
      REQUIRE(std::abs(sz.values.flat()[i] - (a * sx.values.flat()[i] + b * sy.values.flat()[i])) <= 1e-12);
  }
}

TEST_CASE("istft inverts stft", "[spectral]") {
  std::mt19937_64 rng(4);
  SECTION("hann 512/512/128") {
    const auto x = pt::RandomSignal(rng, 1024);
    const auto y = Istft(Stft(x, StftConfig{512, 128, 512}));
    REQUIRE(y.samples.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(y.samples[i] - x[i]) <= 1e-10);
  }
  SECTION("every default resolution") {
    const auto x = pt::RandomSignal(rng, 3001);
    for (const auto& cfg : MultiResConfig::Default().resolutions) {
      const auto y = Istft(Stft(x, cfg));
      for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(y.samples[i] - x[i]) <= 1e-10);
    }
  }
  SECTION("all-zero spectrogram") {
    ComplexSpectrogram s;
    s.config = {64, 16, 64};
    s.source_length = 100;
    s.values = Grid<Complex>(FrameCount(100, s.config), s.config.bins());
    const auto y = Istft(s);
    REQUIRE(y.samples == std::vector<double>(100, 0.0));
  }
  SECTION("single frame holding the DFT of a rectangular window") {
    ComplexSpectrogram s;
    s.config = {8, 8, 8, WindowKind::kRectangular};
    s.source_length = 4;
    REQUIRE(FrameCount(4, s.config) == 1);
    s.values = Grid<Complex>(1, 5);
    s.values(0, 0) = 8.0;  // DFT of eight ones
    const auto y = Istft(s);
    for (double v : y.samples) REQUIRE(v == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("non-COLA config") {
    ComplexSpectrogram s;
    s.config = {64, 48, 64};
    s.source_length = 100;
    s.values = Grid<Complex>(FrameCount(100, s.config), s.config.bins());
    try {
      Istft(s);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kUnsupportedConfig);
    }
  }
}

TEST_CASE("stft adjoint", "[spectral]") {
  std::mt19937_64 rng(5);
  SECTION("zero gradient") {
    const StftConfig cfg{64, 16, 48};
    const auto g = StftAdjoint(Grid<Complex>(FrameCount(100, cfg), cfg.bins()), cfg, 100);
    REQUIRE(g == std::vector<double>(100, 0.0));
  }
  SECTION("inner-product identity") {
    for (const StftConfig& cfg :
         {StftConfig{64, 16, 48}, StftConfig{128, 50, 128}, StftConfig{32, 32, 32, WindowKind::kRectangular}}) {
      for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 20 + rng() % 300;
        const auto x = pt::RandomSignal(rng, n);
        Grid<Complex> g(FrameCount(n, cfg), cfg.bins());
        for (auto& v : g.flat()) v = {pt::RandomSignal(rng, 1)[0], pt::RandomSignal(rng, 1)[0]};
        const double lhs = Inner(Stft(x, cfg).values, g);
        const auto adj = StftAdjoint(g, cfg, n);
        double rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) rhs += x[i] * adj[i];
        REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
  SECTION("single-atom gradient equals finite differences") {
    const StftConfig cfg{32, 8, 24};
    const std::size_t n = 40;
    const auto x = pt::RandomSignal(rng, n);
    for (auto [t, k] : {std::pair{0, 0}, std::pair{2, 5}, std::pair{5, 16}}) {
      Grid<Complex> g(FrameCount(n, cfg), cfg.bins());
      g(t, k) = 1.0;  // L = Re S[t, k]
      const auto adj = StftAdjoint(g, cfg, n);
      auto loss = [&](std::span<const double> v) { return Stft(v, cfg).values(t, k).real(); };
      for (std::size_t i = 0; i < n; ++i)
        REQUIRE(adj[i] == Catch::Approx(pt::CentralDifference(loss, x, i, 1e-3)).margin(1e-9));
    }
  }
  SECTION("random weighted loss matches finite differences") {
    const StftConfig cfg{64, 16, 64};
    const std::size_t n = 256;
    const auto x = pt::RandomSignal(rng, n);
    Grid<Complex> g(FrameCount(n, cfg), cfg.bins());
    for (auto& v : g.flat()) v = {pt::RandomSignal(rng, 1)[0], pt::RandomSignal(rng, 1)[0]};
    auto loss = [&](std::span<const double> v) { return Inner(Stft(v, cfg).values, g); };
    const auto adj = StftAdjoint(g, cfg, n);
    for (std::size_t i = 0; i < n; ++i) {
      const double fd = pt::CentralDifference(loss, x, i, 1e-3);
      REQUIRE(std::abs(adj[i] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
  SECTION("shape mismatch") {
    const StftConfig cfg{64, 16, 48};
    CHECK_THROWS_AS(StftAdjoint(Grid<Complex>(3, 33), cfg, 100), Error);
  }
}

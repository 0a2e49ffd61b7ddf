// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/losses.hpp"

#include <cmath>
#include <string>

#include "phasecont/error.hpp"
#include "phasecont/phase.hpp"

namespace phasecont {
namespace {

void CheckPair(std::span<const double> target, std::span<const double> enhanced,
               const char* what) {
  if (target.size() != enhanced.size())
    throw Error(ErrorKind::kInput, std::string(what) + ": length mismatch (" +
                                       std::to_string(target.size()) + " vs " +
                                       std::to_string(enhanced.size()) + ")");
  if (target.empty()) throw Error(ErrorKind::kInput, std::string(what) + ": empty input");
}

void CheckShapes(const Grid<Complex>& a, const Grid<Complex>& b, const char* what) {
  if (!a.same_shape(b))
    throw Error(ErrorKind::kInput, std::string(what) + ": spectrogram shape mismatch");
}

double Sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Chain rule through z -> (Re z / |z|, Im z / |z|): given dL/dcos and dL/dsin
// returns dL/dRe + i dL/dIm.
Complex PhaseImageGradient(Complex z, double g_cos, double g_sin) {
  const double mag = Magnitude(z);
  if (mag <= kMagnitudeEpsilon) return {};
  const double re = z.real();
  const double im = z.imag();
  const double inv3 = 1.0 / (mag * mag * mag);
  return {im * (g_cos * im - g_sin * re) * inv3, re * (g_sin * re - g_cos * im) * inv3};
}

TermResult ToTerm(const SpectralTerm& s, const StftConfig& cfg, std::size_t length,
                  GradientMode mode) {
  TermResult r;
  r.value = s.value;
  r.degenerate = s.degenerate;
  if (mode == GradientMode::kCompute) r.gradient = StftAdjoint(s.gradient, cfg, length);
  return r;
}

}  // namespace

TermResult L1Loss(std::span<const double> target, std::span<const double> enhanced,
                  GradientMode mode) {
  CheckPair(target, enhanced, "l1_loss");
  const auto n = static_cast<double>(target.size());
  TermResult r;
  double sum = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) sum += std::abs(enhanced[i] - target[i]);
  r.value = sum / n;
  if (mode == GradientMode::kCompute) {
    r.gradient.resize(target.size());
    for (std::size_t i = 0; i < target.size(); ++i)
      r.gradient[i] = Sign(enhanced[i] - target[i]) / n;
  }
  return r;
}

MagnitudeTerms MagnitudeLossOnSpectra(const Grid<Complex>& target,
                                      const Grid<Complex>& enhanced, GradientMode mode) {
  CheckShapes(target, enhanced, "stft_loss");
  const auto t = target.flat();
  const auto e = enhanced.flat();
  const std::size_t count = t.size();

  double target_sq = 0.0;
  double diff_sq = 0.0;
  double log_sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double m = Magnitude(t[i]);
    const double mh = Magnitude(e[i]);
    target_sq += m * m;
    diff_sq += (m - mh) * (m - mh);
    log_sum += std::abs(std::log(m + kLogMagnitudeDelta) - std::log(mh + kLogMagnitudeDelta));
  }
  if (target_sq == 0.0)
    throw Error(ErrorKind::kUndefinedMetric,
                "spectral convergence undefined for an all-zero target");

  MagnitudeTerms out;
  const double target_norm = std::sqrt(target_sq);
  const double diff_norm = std::sqrt(diff_sq);
  out.spectral_convergence.value = diff_norm / target_norm;
  out.log_magnitude.value = log_sum / static_cast<double>(count);
  out.spectral_convergence.active_bins = count;
  out.log_magnitude.active_bins = count;

  if (mode == GradientMode::kCompute) {
    out.spectral_convergence.gradient = Grid<Complex>(target.frames(), target.bins());
    out.log_magnitude.gradient = Grid<Complex>(target.frames(), target.bins());
    auto gsc = out.spectral_convergence.gradient.flat();
    auto glm = out.log_magnitude.gradient.flat();
    const double sc_scale = diff_norm > 0.0 ? 1.0 / (diff_norm * target_norm) : 0.0;
    const double lm_scale = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double mh = Magnitude(e[i]);
      if (mh == 0.0) continue;
      const double m = Magnitude(t[i]);
      const Complex unit = e[i] / mh;  // d|z| = Re(conj(unit) dz)
      gsc[i] = (sc_scale * (mh - m)) * unit;
      const double dir = Sign(std::log(mh + kLogMagnitudeDelta) - std::log(m + kLogMagnitudeDelta));
      glm[i] = (lm_scale * dir / (mh + kLogMagnitudeDelta)) * unit;
    }
  }
  return out;
}

std::vector<ResolutionMagnitudeLoss> MultiResStftLoss(std::span<const double> target,
                                                      std::span<const double> enhanced,
                                                      const MultiResConfig& cfg,
                                                      GradientMode mode) {
  CheckPair(target, enhanced, "mrstft_loss");
  cfg.Validate();
  std::vector<ResolutionMagnitudeLoss> out;
  for (const StftConfig& res : cfg.resolutions) {
    const auto s = Stft(target, res);
    const auto sh = Stft(enhanced, res);
    const auto terms = MagnitudeLossOnSpectra(s.values, sh.values, mode);
    out.push_back({ToTerm(terms.spectral_convergence, res, target.size(), mode),
                   ToTerm(terms.log_magnitude, res, target.size(), mode)});
  }
  return out;
}

SpectralTerm PhaseLossOnSpectra(const Grid<Complex>& target, const Grid<Complex>& enhanced,
                                GradientMode mode, const Grid<Complex>* noisy) {
  CheckShapes(target, enhanced, "phase_loss");
  if (noisy) CheckShapes(target, *noisy, "phase_loss");
  const PhaseField p = ComputePhaseField(target);
  const PhaseField ph = ComputePhaseField(enhanced);
  std::optional<PhaseField> pn;
  if (noisy) pn = ComputePhaseField(*noisy);

  const auto c = p.cos_vals.flat();
  const auto s = p.sin_vals.flat();
  const auto ch = ph.cos_vals.flat();
  const auto sh = ph.sin_vals.flat();
  auto active = [&](std::size_t i) {
    return p.magnitude.flat()[i] > kMagnitudeEpsilon &&
           ph.magnitude.flat()[i] > kMagnitudeEpsilon &&
           (!pn || pn->magnitude.flat()[i] > kMagnitudeEpsilon);
  };

  SpectralTerm out;
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!active(i)) continue;
    ++out.active_bins;
    if (pn) {
      // cos/sin of (target - noisy) and (target - enhanced).
      const double cn = pn->cos_vals.flat()[i];
      const double sn = pn->sin_vals.flat()[i];
      const double ref_c = c[i] * cn + s[i] * sn;
      const double ref_s = s[i] * cn - c[i] * sn;
      const double est_c = c[i] * ch[i] + s[i] * sh[i];
      const double est_s = s[i] * ch[i] - c[i] * sh[i];
      sum += (ref_c - est_c) * (ref_c - est_c) + (ref_s - est_s) * (ref_s - est_s);
    } else {
      sum += (c[i] - ch[i]) * (c[i] - ch[i]) + (s[i] - sh[i]) * (s[i] - sh[i]);
    }
  }
  if (out.active_bins == 0) {
    out.degenerate = true;
    if (mode == GradientMode::kCompute)
      out.gradient = Grid<Complex>(target.frames(), target.bins());
    return out;
  }
  const double inv = 1.0 / static_cast<double>(out.active_bins);
  out.value = sum * inv;

  if (mode == GradientMode::kCompute) {
    out.gradient = Grid<Complex>(target.frames(), target.bins());
    auto g = out.gradient.flat();
    const auto e = enhanced.flat();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!active(i)) continue;
      double g_cos = 0.0;
      double g_sin = 0.0;
      if (pn) {
        const double cn = pn->cos_vals.flat()[i];
        const double sn = pn->sin_vals.flat()[i];
        const double dc = (c[i] * cn + s[i] * sn) - (c[i] * ch[i] + s[i] * sh[i]);
        const double ds = (s[i] * cn - c[i] * sn) - (s[i] * ch[i] - c[i] * sh[i]);
        g_cos = -2.0 * inv * (dc * c[i] + ds * s[i]);
        g_sin = -2.0 * inv * (dc * s[i] - ds * c[i]);
      } else {
        g_cos = 2.0 * inv * (ch[i] - c[i]);
        g_sin = 2.0 * inv * (sh[i] - s[i]);
      }
      g[i] = PhaseImageGradient(e[i], g_cos, g_sin);
    }
  }
  return out;
}

TermResult PhaseLoss(std::span<const double> target, std::span<const double> enhanced,
                     const StftConfig& cfg, GradientMode mode, PhaseLossMode phase_mode,
                     std::span<const double> noisy) {
  CheckPair(target, enhanced, "phase_loss");
  const auto s = Stft(target, cfg);
  const auto sh = Stft(enhanced, cfg);
  SpectralTerm term;
  if (phase_mode == PhaseLossMode::kNoisyReferenced) {
    CheckPair(target, noisy, "phase_loss (noisy reference)");
    const auto sn = Stft(noisy, cfg);
    term = PhaseLossOnSpectra(s.values, sh.values, mode, &sn.values);
  } else {
    term = PhaseLossOnSpectra(s.values, sh.values, mode);
  }
  return ToTerm(term, cfg, target.size(), mode);
}

SpectralTerm PhaseContinuityLossOnSpectra(const Grid<Complex>& target,
                                          const Grid<Complex>& enhanced, GradientMode mode) {
  CheckShapes(target, enhanced, "phase_continuity_loss");
  const PhaseField p = ComputePhaseField(target);
  const PhaseField ph = ComputePhaseField(enhanced);
  const std::size_t frames = p.frames();
  const std::size_t bins = p.bins();
  if (frames < 3 || bins < 3)
    throw Error(ErrorKind::kTooSmallField,
                "phase_continuity_loss: spectrogram smaller than 3x3 (" +
                    std::to_string(frames) + "x" + std::to_string(bins) + ")");

  // Kernel differences only depend on d = image^ - image, so the loss is
  // evaluated on that field without materializing both kernel stacks.
  Grid<double> dc(frames, bins);
  Grid<double> ds(frames, bins);
  for (std::size_t i = 0; i < dc.size(); ++i) {
    dc.flat()[i] = ph.cos_vals.flat()[i] - p.cos_vals.flat()[i];
    ds.flat()[i] = ph.sin_vals.flat()[i] - p.sin_vals.flat()[i];
  }

  SpectralTerm out;
  const std::size_t entries = 9 * (frames - 2) * (bins - 2);
  out.active_bins = (frames - 2) * (bins - 2);
  const double inv = 1.0 / static_cast<double>(entries);
  const bool grad = mode == GradientMode::kCompute;
  Grid<double> g_cos, g_sin;
  if (grad) {
    g_cos = Grid<double>(frames, bins);
    g_sin = Grid<double>(frames, bins);
  }

  double sum_cos = 0.0;
  double sum_sin = 0.0;
  for (std::size_t n = 1; n + 1 < frames; ++n) {
    for (std::size_t k = 1; k + 1 < bins; ++k) {
      const double c0 = dc(n, k);
      const double s0 = ds(n, k);
      for (std::size_t nn = n - 1; nn <= n + 1; ++nn) {
        for (std::size_t kk = k - 1; kk <= k + 1; ++kk) {
          if (nn == n && kk == k) continue;
          const double ec = dc(nn, kk) - c0;
          const double es = ds(nn, kk) - s0;
          sum_cos += ec * ec;
          sum_sin += es * es;
          if (grad) {
            g_cos(nn, kk) += 2.0 * inv * ec;
            g_cos(n, k) -= 2.0 * inv * ec;
            g_sin(nn, kk) += 2.0 * inv * es;
            g_sin(n, k) -= 2.0 * inv * es;
          }
        }
      }
    }
  }
  out.value = sum_cos * inv + sum_sin * inv;

  if (grad) {
    out.gradient = Grid<Complex>(frames, bins);
    const auto e = enhanced.flat();
    auto g = out.gradient.flat();
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = PhaseImageGradient(e[i], g_cos.flat()[i], g_sin.flat()[i]);
  }
  return out;
}

TermResult PhaseContinuityLoss(std::span<const double> target,
                               std::span<const double> enhanced, const StftConfig& cfg,
                               GradientMode mode) {
  CheckPair(target, enhanced, "phase_continuity_loss");
  const auto s = Stft(target, cfg);
  const auto sh = Stft(enhanced, cfg);
  return ToTerm(PhaseContinuityLossOnSpectra(s.values, sh.values, mode), cfg, target.size(),
                mode);
}

LossWeights LossWeights::PhaseLossOnly() { return {0.02, 1.0, 1.0, 1.0, 0.0}; }

LossWeights LossWeights::PhaseLossAndContinuity() { return {0.01, 1.0, 0.1, 1.0, 0.5}; }

void LossWeights::Validate() const {
  const double all[] = {lambda0, lambda1, lambda2, lambda_p, lambda_pc};
  bool any = false;
  for (double w : all) {
    if (!std::isfinite(w) || w < 0.0)
      throw Error(ErrorKind::kConfig, "loss weights must be finite and non-negative");
    any = any || w > 0.0;
  }
  if (!any) throw Error(ErrorKind::kConfig, "at least one loss weight must be positive");
}

TotalLossResult TotalLoss(std::span<const double> target, std::span<const double> enhanced,
                          std::span<const double> noisy, const LossWeights& weights,
                          const MultiResConfig& cfg, const TotalLossOptions& options) {
  CheckPair(target, enhanced, "total_loss");
  weights.Validate();
  cfg.Validate();
  const bool referenced = options.phase_mode == PhaseLossMode::kNoisyReferenced;
  if (referenced) CheckPair(target, noisy, "total_loss (noisy reference)");

  const GradientMode mode = options.gradient;
  const bool grad = mode == GradientMode::kCompute;
  const std::size_t length = target.size();
  const double resolutions = static_cast<double>(cfg.resolutions.size());

  TotalLossResult result;
  LossReport& report = result.report;
  const TermResult l1 = L1Loss(target, enhanced, mode);
  report.l1 = l1.value;
  if (grad) {
    result.gradient.resize(length);
    for (std::size_t i = 0; i < length; ++i) result.gradient[i] = weights.lambda0 * l1.gradient[i];
  }

  const double w_stft = weights.lambda1 / resolutions;
  const double w_pl = weights.lambda2 * weights.lambda_p / resolutions;
  const double w_pcl = weights.lambda2 * weights.lambda_pc / resolutions;
  double stft_sum = 0.0;
  double phase_sum = 0.0;
  for (const StftConfig& res : cfg.resolutions) {
    const auto s = Stft(target, res);
    const auto sh = Stft(enhanced, res);
    std::optional<ComplexSpectrogram> sn;
    if (referenced) sn = Stft(noisy, res);

    const MagnitudeTerms mag = MagnitudeLossOnSpectra(s.values, sh.values, mode);
    const SpectralTerm pl =
        PhaseLossOnSpectra(s.values, sh.values, mode, sn ? &sn->values : nullptr);
    const SpectralTerm pcl = PhaseContinuityLossOnSpectra(s.values, sh.values, mode);

    ResolutionLoss r;
    r.config = res;
    r.spectral_convergence = mag.spectral_convergence.value;
    r.log_magnitude = mag.log_magnitude.value;
    r.phase = pl.value;
    r.phase_continuity = pcl.value;
    r.phase_degenerate = pl.degenerate;
    report.resolutions.push_back(r);
    stft_sum += r.spectral_convergence + r.log_magnitude;
    phase_sum += weights.lambda_p * r.phase + weights.lambda_pc * r.phase_continuity;

    if (grad) {
      Grid<Complex> g(s.values.frames(), s.values.bins());
      auto gf = g.flat();
      for (std::size_t i = 0; i < gf.size(); ++i) {
        gf[i] = w_stft * (mag.spectral_convergence.gradient.flat()[i] +
                          mag.log_magnitude.gradient.flat()[i]) +
                w_pl * pl.gradient.flat()[i] + w_pcl * pcl.gradient.flat()[i];
      }
      const auto gx = StftAdjoint(g, res, length);
      for (std::size_t i = 0; i < length; ++i) result.gradient[i] += gx[i];
    }
  }
  report.stft = stft_sum / resolutions;
  report.phase = phase_sum / resolutions;
  report.total =
      weights.lambda0 * report.l1 + weights.lambda1 * report.stft + weights.lambda2 * report.phase;
  return result;
}

}  // namespace phasecont

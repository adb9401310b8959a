#include "ionphase/fitting.hpp"

#include <cmath>
#include <limits>

#include "ionphase/errors.hpp"

namespace ionphase::experiments {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

}  // namespace

double wrap_phase(double phase_rad) {
  double w = std::remainder(phase_rad, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y, double omega) {
  const std::size_t n = x.size();
  if (n != y.size()) throw FitError("fit_sinusoid: x and y differ in length");
  if (n < 3) throw FitError("fit_sinusoid: need at least 3 points");

  // Normal equations over the basis {1, cos(w x), sin(w x)}.
  double s[3][3] = {};
  double b[3] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const double basis[3] = {1.0, std::cos(omega * x[i]), std::sin(omega * x[i])};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) s[r][c] += basis[r] * basis[c];
      b[r] += basis[r] * y[i];
    }
  }
  const double det = s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) -
                     s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0]) +
                     s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0]);
  // The Gram determinant vanishes when the design collapses (all x equal,
  // or fewer than 3 distinct phases of the basis).
  if (std::abs(det) < 1e-9 * std::pow(static_cast<double>(n), 3)) {
    throw FitError("fit_sinusoid: degenerate design (x values do not span the basis)");
  }
  const auto solve = [&](int col) {
    double m[3][3];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] = (c == col) ? b[r] : s[r][c];
    }
    const double dd = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return dd / det;
  };
  const double offset = solve(0);
  const double a_cos = solve(1);
  const double a_sin = solve(2);

  SinusoidFit fit;
  fit.offset = offset;
  fit.amplitude = std::hypot(a_cos, a_sin);
  // y = off + A cos(w x + p) expands to a_cos = A cos(p), a_sin = -A sin(p).
  fit.phase_rad = wrap_phase(std::atan2(-a_sin, a_cos));
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double model = offset + a_cos * std::cos(omega * x[i]) + a_sin * std::sin(omega * x[i]);
    ss += (y[i] - model) * (y[i] - model);
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

GaussianDecayFit fit_gaussian_decay(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw FitError("fit_gaussian_decay: t and y differ in length");
  GaussianDecayFit fit;
  std::vector<double> u, v, w;  // t^2, log y, weights
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(y[i] > 0.0)) {
      ++fit.dropped;
      continue;
    }
    u.push_back(t[i] * t[i]);
    v.push_back(std::log(y[i]));
    w.push_back(y[i] * y[i]);  // first-order variance weighting of log data
  }
  if (u.size() < 3) throw FitError("fit_gaussian_decay: fewer than 3 positive samples");

  double sw = 0, su = 0, sv = 0, suu = 0, suv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sw += w[i];
    su += w[i] * u[i];
    sv += w[i] * v[i];
    suu += w[i] * u[i] * u[i];
    suv += w[i] * u[i] * v[i];
  }
  const double det = sw * suu - su * su;
  if (std::abs(det) < 1e-30) throw FitError("fit_gaussian_decay: degenerate design (all t equal)");
  const double slope = (sw * suv - su * sv) / det;
  const double intercept = (suu * sv - su * suv) / det;

  fit.scale = std::exp(intercept);
  fit.tau_s = slope < 0.0 ? 1.0 / std::sqrt(-slope) : std::numeric_limits<double>::infinity();
  double ss = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double model = fit.scale * std::exp(slope * t[i] * t[i]);
    ss += (y[i] - model) * (y[i] - model);
    ++used;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(used));
  return fit;
}

std::vector<double> unwrap_phases(std::span<const double> phases_rad) {
  std::vector<double> out(phases_rad.begin(), phases_rad.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    double d = out[i] - out[i - 1];
    d = wrap_phase(d);
    out[i] = out[i - 1] + d;
  }
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw FitError("fit_line: need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-30) throw FitError("fit_line: degenerate design (all x equal)");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace ionphase::experiments

#include "ionphase/tone.hpp"

#include <algorithm>
#include <stdexcept>

namespace ionphase::chain {

DriftProfile::DriftProfile(std::vector<double> times_s, std::vector<double> values_hz)
    : times_s_(std::move(times_s)), values_hz_(std::move(values_hz)) {
  if (times_s_.size() != values_hz_.size()) {
    throw std::invalid_argument("DriftProfile: times and values differ in length");
  }
  for (std::size_t i = 0; i < times_s_.size(); ++i) {
    if (!std::isfinite(times_s_[i]) || !std::isfinite(values_hz_[i])) {
      throw std::invalid_argument("DriftProfile: non-finite sample");
    }
    if (i > 0 && times_s_[i] <= times_s_[i - 1]) {
      throw std::invalid_argument("DriftProfile: sample times must be strictly increasing");
    }
  }
  cumulative_.resize(times_s_.size(), 0.0);
  for (std::size_t i = 1; i < times_s_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + values_hz_[i - 1] * (times_s_[i] - times_s_[i - 1]);
  }
}

double DriftProfile::value(double t_s) const {
  if (!std::isfinite(t_s)) throw std::invalid_argument("DriftProfile::value: non-finite time");
  if (times_s_.empty() || t_s < times_s_.front()) return bias_hz_;
  auto it = std::upper_bound(times_s_.begin(), times_s_.end(), t_s);
  return values_hz_[static_cast<std::size_t>(it - times_s_.begin()) - 1] + bias_hz_;
}

double DriftProfile::integral(double t_s) const {
  if (!std::isfinite(t_s) || t_s < 0.0) {
    throw std::invalid_argument("DriftProfile::integral: time must be finite and >= 0");
  }
  double base = bias_hz_ * t_s;
  if (times_s_.empty() || t_s <= times_s_.front()) return base;
  auto it = std::upper_bound(times_s_.begin(), times_s_.end(), t_s);
  std::size_t seg = static_cast<std::size_t>(it - times_s_.begin()) - 1;
  double full = cumulative_[seg] + values_hz_[seg] * (t_s - times_s_[seg]);
  if (times_s_.front() < 0.0) {
    // The closed form starts at the first sample; drop the part before t=0.
    auto it0 = std::upper_bound(times_s_.begin(), times_s_.end(), 0.0);
    std::size_t seg0 = static_cast<std::size_t>(it0 - times_s_.begin()) - 1;
    full -= cumulative_[seg0] + values_hz_[seg0] * (0.0 - times_s_[seg0]);
  }
  return base + full;
}

DriftProfile DriftProfile::with_bias(double bias_hz) const {
  DriftProfile out = *this;
  out.bias_hz_ += bias_hz;
  return out;
}

}  // namespace ionphase::chain

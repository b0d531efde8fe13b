#include "ells/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ells {

long long Profile::eval_units(const std::vector<int>& rows, long long t) {
  long long f = std::llabs(t);
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    const long long i = static_cast<long long>(idx) + 1;
    const long long li = rows[idx];
    f += std::llabs(t - (li - i + 1)) - std::llabs(t - (li - i));
    f += std::llabs(t + i) - std::llabs(t + i - 1);
  }
  return f;
}

Profile::Profile(const Partition& lam, double hbar) : hbar_(hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  const auto& rows = lam.rows();
  const long long lo = -static_cast<long long>(rows.size()) - 1;
  const long long hi = (rows.empty() ? 0 : rows[0]) + 1;
  // Evaluate on every integer in range; keep points where the slope turns.
  long long prev_f = eval_units(rows, lo);
  long long cur_f = eval_units(rows, lo + 1);
  long long prev_slope = cur_f - prev_f;
  for (long long t = lo + 1; t < hi; ++t) {
    const long long next_f = eval_units(rows, t + 1);
    const long long slope = next_f - cur_f;
    if (slope != prev_slope) {
      kx_.push_back(t);
      kf_.push_back(cur_f);
      prev_slope = slope;
    }
    cur_f = next_f;
  }
  if (kx_.empty()) {  // ∅: single kink of |x| at the origin
    kx_.push_back(0);
    kf_.push_back(0);
  }
}

double Profile::operator()(double x) const {
  const double t = x / hbar_;
  if (t <= double(kx_.front()) || t >= double(kx_.back())) {
    return std::abs(x);
  }
  auto it = std::upper_bound(kx_.begin(), kx_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - kx_.begin());
  // interpolate between kinks k-1 and k (slope is ±1 in units)
  const double x0 = double(kx_[k - 1]), f0 = double(kf_[k - 1]);
  const double slope = double(kf_[k] - kf_[k - 1]) / double(kx_[k] - kx_[k - 1]);
  return hbar_ * (f0 + slope * (t - x0));
}

BigRat Profile::excess_area_units() const {
  // g = f - |x| is piecewise linear with kinks only at integers in range.
  const long long lo = kx_.front(), hi = kx_.back();
  BigRat area = 0;
  // Rebuild unit values from the kink list (linear between kinks).
  auto f_at = [&](long long t) -> long long {
    auto it = std::upper_bound(kx_.begin(), kx_.end(), t);
    if (it == kx_.begin()) return std::llabs(t);
    std::size_t k = static_cast<std::size_t>(it - kx_.begin());
    if (k == kx_.size()) return std::llabs(t);
    const long long x0 = kx_[k - 1], f0 = kf_[k - 1];
    const long long dx = kx_[k] - x0, df = kf_[k] - f0;
    return f0 + df * (t - x0) / dx;
  };
  for (long long t = lo; t < hi; ++t) {
    const long long g0 = f_at(t) - std::llabs(t);
    const long long g1 = f_at(t + 1) - std::llabs(t + 1);
    area += BigRat(g0 + g1, 2);
  }
  return area;
}

double Profile::excess_area() const {
  return hbar_ * hbar_ * static_cast<double>(excess_area_units());
}

}  // namespace ells

#pragma once

#include <cstdint>
#include <vector>

#include "ells/bigint.hpp"
#include "ells/partition.hpp"

namespace ells {

/// Piecewise-linear diagram profile f_λ(x): the telescoping sum
///   f_λ(x) = |x| + Σ_i ( |x-ħ(λ_i-i+1)| - |x-ħ(λ_i-i)| + |x+ħi| - |x+ħ(i-1)| )
/// evaluated exactly. Kinks sit at integer multiples of ħ and are stored as
/// integers in ħ-units; floating point enters only on evaluation.
///
/// Invariants: f(x) = |x| outside [min kink, max kink], slopes alternate ±1,
/// f is 1-Lipschitz and f(x) ≥ |x| everywhere.
class Profile {
 public:
  Profile(const Partition& lam, double hbar);

  double hbar() const { return hbar_; }
  std::size_t kink_count() const { return kx_.size(); }
  double kink_x(std::size_t i) const { return hbar_ * double(kx_[i]); }
  double kink_f(std::size_t i) const { return hbar_ * double(kf_[i]); }
  long long kink_x_units(std::size_t i) const { return kx_[i]; }
  long long kink_f_units(std::size_t i) const { return kf_[i]; }

  /// f(x); |x| outside the kink range.
  double operator()(double x) const;

  /// ∫ (f_λ(x) - |x|) dx exactly, in units of ħ² (equals 2|λ|).
  BigRat excess_area_units() const;
  double excess_area() const;

  /// Exact value of the telescoping sum at integer argument t (ħ = 1 units).
  static long long eval_units(const std::vector<int>& rows, long long t);

 private:
  double hbar_;
  std::vector<long long> kx_;  // kink positions, ħ-units, ascending
  std::vector<long long> kf_;  // f at kinks, ħ-units
};

}  // namespace ells

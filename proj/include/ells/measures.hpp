#pragma once

#include <complex>
#include <functional>

#include "ells/bigint.hpp"
#include "ells/partition.hpp"

namespace ells {

enum class MeasureKind { PlancherelFixedN, Macrocanonical, Elliptic, BetaDeformed };

/// Parameter pack shared by the four measures.
///
/// The mass is stored through its real coordinate M: the measure's mass is
/// purely imaginary, m = i·M, which keeps the elliptic weight positive for
/// real q ∈ [0,1). All elliptic formulas below are written with m² = -M².
struct EnsembleParams {
  double q = 0.0;        // nome, 0 ≤ q < 1
  double M = 0.0;        // m = i·M
  double hbar = 1.0;     // ħ > 0
  double Lambda = 1.0;   // macrocanonical scale, Q = (Λ/ħ)²
  double Q = 1.0;        // macrocanonical fugacity, Q > 0
  double eps1 = 1.0;     // β-deformation parameters
  double eps2 = -1.0;

  static EnsembleParams macrocanonical(double Q, double hbar = 1.0);
  static EnsembleParams elliptic(double q, double M, double hbar = 1.0);
  /// Inozemtsev-matched elliptic parameters: M = -Λ q^{-1/2} (so that the
  /// q → 0 limit collapses onto the macrocanonical ensemble at scale Λ).
  static EnsembleParams inozemtsev(double q, double Lambda, double hbar = 1.0);

  void validate(MeasureKind kind) const;  // throws std::domain_error
};

/// Plancherel probability dim²/N! of λ among partitions of N = |λ|, exact.
BigRat plancherel_prob(const Partition& lam);

/// Unnormalized macrocanonical (Poissonized Plancherel) weight Q^{|λ|} ∏ 1/h².
/// Normalization over all λ is exp(Q).
double macrocanonical_weight(const Partition& lam, double Q);

/// Unnormalized elliptic weight q^{|λ|} ∏ (1 + M²/(ħ h)²); strictly positive.
double elliptic_weight(const Partition& lam, const EnsembleParams& p);

/// Unnormalized β-deformed weight
///   q^{|λ|} ∏ (1 + m/(ε₁(a+1) - ε₂ l)) (1 + m/(-ε₁ a + ε₂(l+1)))
/// with m = i·M; complex in general. At ε₁ = -ε₂ = ħ it reduces to the
/// elliptic weight. Throws std::domain_error on a vanishing denominator.
std::complex<double> beta_weight(const Partition& lam, const EnsembleParams& p);

std::complex<double> measure_weight(MeasureKind kind, const Partition& lam,
                                    const EnsembleParams& p);

/// D-truncated sum of weights, with the last size-increment as a truncation
/// error estimate.
struct TruncatedSum {
  std::complex<double> value{0.0, 0.0};
  double last_increment = 0.0;
  double real() const { return value.real(); }
};

TruncatedSum partition_function(MeasureKind kind, const EnsembleParams& p, int D);

/// Σ w·obs / Σ w over |λ| ≤ D. Throws std::domain_error if the normalization
/// vanishes. The reduction order is a fixed size-major enumeration, so the
/// result is identical across runs.
std::complex<double> expectation(
    MeasureKind kind, const EnsembleParams& p, int D,
    const std::function<std::complex<double>(const Partition&)>& observable);

}  // namespace ells

#pragma once

#include <complex>
#include <utility>

namespace ells {

using Cx = std::complex<double>;

/// Real nome q ∈ [0,1). τ is recovered on demand via q = e^{2πiτ}
/// (pure imaginary for real q). All q-series in this module are summed with
/// geometric tail bounds, not fixed term counts.
struct Nome {
  double q = 0.0;
  explicit Nome(double q_);
  /// τ = i·(-ln q)/(2π); requires q > 0.
  Cx tau() const;
};

/// θ(z;q) = (1-z) ∏_{n≥1} (1-q^n)(1-z q^n)(1-z^{-1} q^n), the product form.
/// Throws std::domain_error at z = 0.
Cx theta(Cx z, Nome q);

/// Sum form Σ_{n∈Z} (-z)^n q^{(n²-n)/2}; cross-check for the product form.
Cx theta_sum(Cx z, Nome q);

/// z·dθ/dz = Σ_{n∈Z} n (-z)^n q^{(n²-n)/2}.
Cx theta_z_dz(Cx z, Nome q);

/// Euler function φ(q) = ∏_{n≥1} (1-q^n).
double euler_phi(Nome q);

/// φ(q) via the pentagonal-number series (independent route, test oracle).
double euler_phi_pentagonal(Nome q);

/// Two-sided lattice sum F(z;q) = Σ_{n∈Z} z q^n / (1 - z q^n)².
/// Equals z·x'(z)/m; invariant under z ↦ qz and z ↦ 1/z.
/// Throws std::domain_error on the pole lattice z = q^n.
Cx f_kernel(Cx z, Nome q);

/// dF(q^{1/2} e^{iθ};q)/dθ, analytic term-by-term derivative.
Cx f_kernel_theta_deriv(double theta, Nome q);

/// Spectral-parameter map x(z) = -m z d/dz log θ(z;q) with m = i·M,
/// as the partial-fraction sum
///   m ( z/(1-z) + Σ_{n≥1} [ z q^n/(1-z q^n) + q^n/(q^n-z) ] ).
/// Quasiperiodicity: x(qz) = x(z) + m. Poles at z ∈ {q^n} ∪ {1}.
Cx x_from_z(Cx z, Nome q, double M);

/// g(c;q) = 2 Σ_{r∈Z≥0+1/2} q^r / (1 - 2 q^r c + q^{2r}).
double g_sum(double cos_theta, Nome q);

/// Cut parameterization X(θ) = sin θ · g(cos θ; q); odd in θ, X(0)=X(π)=0.
/// Equals -i·x(q^{1/2} e^{iθ})/m and is independent of the mass.
double X_of_theta(double theta, Nome q);

/// X'(θ) = F(q^{1/2} e^{iθ}); the imaginary residue is asserted < 1e-12
/// before being discarded (failure throws, it is never silently truncated).
double X_prime(double theta, Nome q);

/// X''(θ) from the analytic derivative of the F-kernel.
double X_second(double theta, Nome q);

/// Weierstrass function of the lattice Z + τZ in the Eisenstein (row-summed)
/// regularization:
///   ℘(v) = Σ_{n∈Z} π² / sin²(π(v - nτ)).
/// This normalization differs from the absolutely-convergent one by the
/// constant π²E₂(q)/3 and satisfies F(e^{2πiv};q) = -℘(v)/(4π²) exactly.
Cx weierstrass_p(Cx v, Nome q);

/// (1 - 504 Σ_{n≥1} n⁵ q^n/(1-q^n))^{-1/4} = E₆(q)^{-1/4}.
/// Throws std::domain_error when the radicand is not positive (which already
/// happens for q ≳ 0.002; callers must handle the branch failure).
double e6_inverse_quartic_root(Nome q);

/// Reduce z by an integer power of the nome into the fundamental cylinder
/// |q|^{1/2} < |z| ≤ |q|^{-1/2}; returns (z·q^n, n).
std::pair<Cx, long> canonicalize_cylinder(Cx z, Nome q);

}  // namespace ells

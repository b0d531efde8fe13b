#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ells/measures.hpp"
#include "ells/partition.hpp"
#include "ells/qseries.hpp"

namespace ells {

using Cx = std::complex<double>;

/// Evaluation at a point that coincides with a pole of the observable.
struct PoleError : std::domain_error {
  Box box;
  int box_content;
  PoleError(const std::string& msg, Box b)
      : std::domain_error(msg), box(b), box_content(content(b)) {}
};

struct YEvaluation {
  Cx x{};
  Cx value{};          // boundary-box form (fewer factors, stabler)
  Cx value_product{};  // full product over boxes, kept for cross-checks
  std::vector<Box> pole_flags;  // removable boxes with |x - ħc| < 1e-12
};

/// Y(x)|_λ in both forms:
///   x ∏_{□∈λ} ((x-ħc)² - ħ²)/(x-ħc)²  and  ∏_{∂₊λ}(x-ħc) / ∏_{∂₋λ}(x-ħc),
/// with content c = i-j. Returns the boundary-box value; throws PoleError
/// when x sits exactly on a pole.
YEvaluation y_eval(const Partition& lam, Cx x, double hbar);

/// Boundary-box form only (fast path). Throws PoleError at a pole.
Cx y_boundary(const Partition& lam, Cx x, double hbar);

/// χ(x)|_λ = Y(x)|_λ + Λ²/Y(x)|_λ. Throws std::domain_error when Y = 0.
Cx chi_rational(const Partition& lam, Cx x, double Lambda, double hbar);

/// Higher-times polynomial t̂(x) = Σ_k c_k x^k with t̂(0) = 0.
/// The weight function is always derived as t(x) = t̂(x) - t̂(x-m).
struct TimesPolynomial {
  std::vector<double> coeff;  // coeff[k-1] multiplies x^k

  bool is_zero() const;
  Cx hat_at(Cx x) const;            // t̂(x)
  Cx t_at(Cx x, Cx m) const;        // t̂(x) - t̂(x-m)
};

struct IdentityReport {
  std::string identity;
  int order = 0;
  int samples = 0;
  int rejected_samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> notes;
};

/// Expands ⟨χ(x)⟩ under the macrocanonical measure as a truncated series in
/// u = Λ² and checks that Num(u) - x·Den(u) vanishes through order u^D.
/// Residuals are measured relative to the cancelled mass at each order.
/// Samples closer than 1e-6 to a pole ħc, |c| ≤ D+1, are rejected (reported,
/// not failed).
IdentityReport verify_chi_rational_identity(int D, const std::vector<Cx>& xs,
                                            double hbar, double tol = 1e-9);

/// Elliptic qq-character of λ as a truncated q-series: the sum over
/// auxiliary diagrams ν (|ν| ≤ D) of q^{|ν|} ∏_{□∈ν}(1 + ħ²/(M h)²) times the
/// boundary-box Y-ratio ∏_{∂₊ν} Y(x+mc)|_λ / ∏_{∂₋ν} Y(x+mc)|_λ, m = i·M.
/// The auxiliary weights swap the roles of the mass and ħ relative to the
/// ensemble measure; the series is unnormalized (the auxiliary partition
/// function is divided out at the comparison step).
QSeries chi_elliptic(const Partition& lam, Cx x, const EnsembleParams& p, int D);

/// Checks Σ_{λ,ν} q^{|λ|+|ν|} W_λ Ŵ_ν R_ν(x)|_λ = x · Z_λ(q) · Z_ν(q)
/// through order q^D at each sample (the exact ⟨χ(x)⟩ = x identity).
IdentityReport verify_chi_elliptic_identity(const EnsembleParams& p, int D,
                                            const std::vector<Cx>& xs,
                                            double tol = 1e-9);

/// θ-transform Σ_n (-z)^n q^{(n²-n)/2} e^{±t̂-sums} χ(x+mn), exact at order D
/// (terms whose q-prefactor exceeds q^D are dropped; nothing else is cut).
/// chi_shift(n) must return the series of χ(x + m n).
QSeries theta_transform(const std::function<QSeries(int)>& chi_shift, Cx z,
                        int D, const TimesPolynomial& that, Cx x, Cx m);

/// Left-hand side of the factorization identity:
///   Y(x) ∏_{n≥0}(1 - z q^n e^{t̂(x+mn)} Y(x+(n+1)m)/Y(x+nm))
///        ∏_{n≥1}(1 - z⁻¹ q^n e^{-t̂(x-mn)} Y(x-nm)/Y(x-(n-1)m))
/// expanded to order q^D. product_factors defaults to D (factor n departs
/// from 1 only at order q^n); pass a larger count to re-verify sufficiency.
QSeries factorization_lhs(const std::function<Cx(Cx)>& Y, Cx x, Cx z, int D,
                          const TimesPolynomial& that, Cx m,
                          int product_factors = -1);

/// χ(x) built from an arbitrary Y by the column-ratio sum
///   Σ_λ q^{|λ|} ∏_{□∈λ} e^{t(x+mc_□)}
///       ∏_{j=1}^{λ₁} Y(x+m(λᵗ_j-j+1))/Y(x+m(λᵗ_j-j)) · Y(x-mλ₁).
QSeries chi_series_column_form(const std::function<Cx(Cx)>& Y, Cx x, Cx m,
                               int D, const TimesPolynomial& that);

/// Same character through boundary boxes of the auxiliary diagrams:
///   Σ_ν q^{|ν|} ∏_{□∈ν} e^{t(x+mc_□)} ∏_{∂₊ν}Y(x+mc)/∏_{∂₋ν}Y(x+mc).
/// Agrees with the column form term by term.
QSeries chi_series_boundary_form(const std::function<Cx(Cx)>& Y, Cx x, Cx m,
                                 int D, const TimesPolynomial& that);

/// Both sides of the factorization identity for one (Y, x, z, t̂) draw.
IdentityReport verify_factorization(const std::function<Cx(Cx)>& Y, Cx x, Cx z,
                                    int D, const TimesPolynomial& that, Cx m,
                                    double tol = 1e-9);

struct MasterEqReport {
  double q = 0.0;
  double M = 0.0;
  int samples = 0;
  double scale = 0.0;          // max |side| over the sample set
  double max_residual = 0.0;   // max |LHS-RHS| / scale
  double tolerance = 0.0;
  bool pass = false;
};

/// Numeric check of x·θ(z;q) + m·z·dθ/dz = φ(q)·[factorized product of Y]
/// at the given (x, z) samples, t̂ = 0. Y is any numeric function (the solved
/// limit-shape Y or a test function); products are cut by the geometric tail.
MasterEqReport verify_master_equation(const std::function<Cx(Cx)>& Y, double q,
                                      double M, const std::vector<Cx>& xs,
                                      const std::vector<Cx>& zs,
                                      double tol = 1e-6);

}  // namespace ells

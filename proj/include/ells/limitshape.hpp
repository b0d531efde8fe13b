#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ells/elliptic.hpp"

namespace ells {

/// Solved data of the critical angle and cut endpoint for one (q, M).
/// Sign convention: M < 0, so the physical cut [-x*, x*] is real with
/// x* = |M|·X(θ*) > 0. Inozemtsev matching uses M = -Λ q^{-1/2}.
struct CutFrame {
  double q = 0.0;
  double M = 0.0;
  double theta_star = 0.0;
  double x_star = 0.0;
};

/// Unique root of X'(θ) = 0 in (0, π). Validated for q ∈ (0, 0.95];
/// outside, or if the sign change X'(0) > 0 > X'(π) fails, throws
/// std::domain_error.
double solve_theta_star(Nome q);

/// x* = |M|·X(θ*); requires M < 0.
double cut_endpoint(Nome q, double M);

CutFrame solve_cut_frame(double q, double M);

/// Branch angles θ₊ ∈ (-θ*, θ*) and θ₋ ∈ (θ*, 2π-θ*) with
/// |M|X(θ±) = x, both continuous in x, θ±(x*) = θ*,
/// θ₋(-x*) - θ₊(-x*) = 2π. Throws std::domain_error for |x| ≥ x*.
std::pair<double, double> invert_branches(double x, const CutFrame& frame);

/// f''(x) = [1/X'(θ₊) - 1/X'(θ₋)] / (π|M|), real and positive on the cut.
double f_second(double x, const CutFrame& frame);

/// Fully solved limit shape on a Chebyshev-clustered grid.
class LimitShape {
 public:
  struct Node {
    double x;
    double theta_plus;
    double theta_minus;
    double f2;  // +inf at the exact endpoints
    double f1;
    double f;
  };

  const CutFrame& frame() const { return frame_; }
  double q() const { return frame_.q; }
  double M() const { return frame_.M; }
  double lambda_eff() const { return lambda_eff_; }  // q^{1/2}|M|
  double theta_star() const { return frame_.theta_star; }
  double x_star() const { return frame_.x_star; }
  /// Direct edge coefficient 2/(π sqrt(2|M||X''(θ*)|)):
  /// f''(x) ~ edge_coefficient()/sqrt(x*-x) at the cut ends.
  double edge_coefficient() const { return edge_coefficient_; }

  const std::vector<Node>& grid() const { return grid_; }

  double f_at(double x) const;   // |x| outside the cut, interpolated inside
  double f1_at(double x) const;  // sign(x) outside, interpolated inside
  double f2_at(double x) const { return f_second(x, frame_); }
  std::pair<double, double> branches_at(double x) const {
    return invert_branches(x, frame_);
  }

  /// ∫ f'' dx and ∫ f'' x² dx by the angular substitution (trapezoid in the
  /// Chebyshev angle; the integrand is analytic and periodic there).
  double mass(int quad_points = 2049) const;
  double second_moment(int quad_points = 2049) const;

  /// Y(x) = exp( (1/2π) ∮ log(x - y(θ)) dθ ) for x off the cut.
  Cx Y_at(Cx x) const;
  /// Physical zero branch z₀(x) = Y(x)/Y(x+m).
  Cx z0_at(Cx x) const;
  /// Diagnostic branches z_n(x) = q^n Y(x-nm)/Y(x+(1-n)m); never used in
  /// the solve itself.
  Cx z_branch(long n, Cx x) const;

  /// Integral of a function against f''(y) dy over the cut,
  /// (1/π) ∮ g(y(θ)) dθ on the stored circle grid.
  Cx integrate_against_f2(const std::function<Cx(double)>& g) const;

  friend LimitShape solve_limit_shape(double q, double M, int grid_n,
                                      int circle_n);

 private:
  CutFrame frame_;
  double lambda_eff_ = 0.0;
  double edge_coefficient_ = 0.0;
  std::vector<Node> grid_;
  std::vector<double> circle_y_;  // y(θ_k) = |M| X(θ_k), uniform θ grid
};

LimitShape solve_limit_shape(double q, double M, int grid_n = 513,
                             int circle_n = 4096);

/// Closed-form arcsin-law shape.
struct VKShape {
  double Lambda = 1.0;
  double f(double x) const;
  double f1(double x) const;
  double f2(double x) const;  // 0 outside |x| < 2Λ
};

VKShape vk_closed_form(double Lambda);

struct IntegralEqReport {
  int samples = 0;
  double max_residual = 0.0;      // relative, over the sample set
  double f2_mass = 0.0;           // ∫ f'' dx (should be 2)
  double decay_ratio = 0.0;       // c_LHS / c_RHS from the x² tail fit
  double decay_coefficient = 0.0; // c_LHS / m²  (≈ 1 + O((x*/x)²))
  bool pass = false;
};

/// Checks 1/F(z(x)) = (m/2)∫f''(y)/(x-y)dy - (m/2)∫f''(y)/(x-y+m)dy at
/// off-cut points (z drawn in the open cylinder, x = x(z)), plus the mass
/// ∫f'' = 2 and the (m/x)² tail, with z(x) = Y(x)/Y(x+m) at the tail point.
IntegralEqReport verify_integral_equation(const LimitShape& shape,
                                          int n_points = 20,
                                          std::uint64_t seed = 12345,
                                          double tol = 1e-6);

struct SeriesFit {
  // theta_star(q) = π/2 + a1 √q + a2 q^{3/2} + a3 q^{5/2}
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  // x*(q)/(2Λ) = 1 + b1 q + b3 q³
  double b1 = 0.0, b3 = 0.0;
  double theta_fit_rms = 0.0;
  double endpoint_fit_rms = 0.0;
  double theta_cond = 0.0;
  double endpoint_cond = 0.0;
};

/// Least-squares fit of the small-q expansions over the given nomes
/// (all must lie in (0, 1e-3]; at least 4 required).
SeriesFit fit_series_coefficients(const std::vector<double>& q_list);

struct LambertSolution {
  double Lambda_tilde = 0.0;
  double v_tilde = 0.0;
  double residual = 0.0;  // |Λ² - Λ̃² e^{-2 t₁ Λ̃²}|
};

/// Principal-branch solution of Λ² = Λ̃² e^{-2 t₁ Λ̃²} with Λ̃ → Λ as t₁ → 0,
/// and ṽ = -t₁ Λ̃². For t₁ > 0 a solution exists iff 2 t₁ Λ̃² ≤ 1, i.e.
/// Λ² ≤ 1/(2 e t₁); beyond that throws std::domain_error.
LambertSolution lambert_solve(double t1, double Lambda);

}  // namespace ells

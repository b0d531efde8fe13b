#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ells/measures.hpp"
#include "ells/partition.hpp"
#include "ells/rng.hpp"

namespace ells {

class LimitShape;

struct ChainConfig {
  EnsembleParams params;
  MeasureKind kind = MeasureKind::Elliptic;  // Macrocanonical or Elliptic
  long long steps = 0;
  long long burn_in = 0;
  std::uint64_t seed = 0;
  long long thinning = 1;
  /// If >= 0, proposals that would exceed this size are rejected (the chain
  /// stays put), which restricts the stationary law to {|λ| ≤ max_size}.
  int max_size = -1;
  std::vector<double> grid;       // snapshot grid for profiles (x values)
  std::vector<double> y_probes;   // off-cut real x where Y moments are taken
  bool track_visits = false;      // per-state counts (small state spaces)

  void validate() const;  // throws std::invalid_argument
};

struct MoveProposal {
  Box box;
  bool is_add = true;
  double forward_prob = 0.0;   // P(λ → λ')
  double backward_prob = 0.0;  // P(λ' → λ)
};

/// One-box move drawn uniformly from addable ∪ removable corners, with the
/// exact proposal probabilities needed for detailed balance.
MoveProposal propose_move(const Partition& lam, SplitMix64& rng);

/// Measure ratio w(λ+b)/w(λ) for an addable box b, computed incrementally:
/// adding (i,j) raises by one exactly the hooks in row i and column j.
/// O(λ₁ + ℓ).
double weight_ratio_add(const Partition& lam, Box b, const EnsembleParams& p,
                        MeasureKind kind);

/// w(to)/w(from) for partitions differing by one box (either direction).
/// Throws std::domain_error for a non-adjacent pair.
double weight_ratio(const Partition& from, const Partition& to,
                    const EnsembleParams& p, MeasureKind kind);

struct ChainTrace {
  // thinned records (step, |λ|, whether that step's proposal was accepted)
  std::vector<long long> step;
  std::vector<long long> size;
  std::vector<std::uint8_t> accepted;
  double acceptance_rate = 0.0;
  double mean_size = 0.0;  // over all post burn-in steps

  long long snapshots = 0;
  std::vector<double> grid;
  std::vector<double> profile_mean;  // per grid point, over snapshots
  std::vector<double> profile_m2;    // Welford sum of squared deviations

  std::vector<double> y_probes;
  std::vector<double> y_mean;
  std::vector<double> y2_mean;

  // per-state visit counts over post burn-in steps, split into batches
  // (batch means give honest standard errors for a correlated chain)
  std::map<std::vector<int>, long long> visits;
  std::vector<std::map<std::vector<int>, long long>> visit_batches;
  long long visit_steps = 0;
};

ChainTrace run_chain(const ChainConfig& cfg);

/// Independent chains with per-chain streams derived from (seed, index);
/// runs in parallel (capped by ELLS_THREADS) and returns traces in chain
/// order, so the aggregate is identical whatever the thread count.
std::vector<ChainTrace> run_chains(const ChainConfig& cfg, int n_chains);

struct EmpiricalProfile {
  std::vector<double> x;
  std::vector<double> mean;        // pooled over chains
  std::vector<double> std_error;   // between-chain
  std::vector<double> sample_var;  // within-chain single-sample variance
  int chains = 0;
  long long snapshots_per_chain = 0;
};

EmpiricalProfile aggregate_profiles(const std::vector<ChainTrace>& traces);

struct ComparisonReport {
  double x_star = 0.0;
  double sup_distance = 0.0;       // over |x| ≤ x*
  double sup_over_xstar = 0.0;
  double l2_distance = 0.0;
  double mean_size = 0.0;
  long long snapshots = 0;
  std::vector<double> probe_x;        // grid x values used below
  std::vector<double> probe_var;      // single-sample variance there
  std::vector<double> y_probe_x;
  std::vector<double> y_factorization;  // |⟨Y²⟩-⟨Y⟩²| / ⟨Y⟩²
};

/// Compares the pooled empirical profile against the analytic shape.
/// Throws std::invalid_argument when (q, M) of the chains and the shape
/// disagree.
ComparisonReport empirical_vs_analytic(const std::vector<ChainTrace>& traces,
                                       const LimitShape& shape,
                                       const ChainConfig& cfg);

}  // namespace ells

#include "ells/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "ells/limitshape.hpp"
#include "ells/observables.hpp"
#include "ells/profile.hpp"

namespace ells {

void ChainConfig::validate() const {
  if (steps <= 0) throw std::invalid_argument("steps must be positive");
  if (burn_in < 0 || burn_in >= steps)
    throw std::invalid_argument("need steps > burn_in >= 0");
  if (thinning < 1) throw std::invalid_argument("thinning must be >= 1");
  if (kind != MeasureKind::Macrocanonical && kind != MeasureKind::Elliptic)
    throw std::invalid_argument("sampler supports the macrocanonical and "
                                "elliptic measures");
  params.validate(kind);
}

MoveProposal propose_move(const Partition& lam, SplitMix64& rng) {
  auto [addable, removable] = lam.boundary();
  const std::size_t k = addable.size() + removable.size();
  const std::size_t pick = rng.below(k);
  MoveProposal mv;
  mv.is_add = pick < addable.size();
  mv.box = mv.is_add ? addable[pick] : removable[pick - addable.size()];
  mv.forward_prob = 1.0 / double(k);

  std::vector<int> rows = lam.rows();
  if (mv.is_add) {
    if (mv.box.i > lam.length()) rows.push_back(1);
    else rows[static_cast<std::size_t>(mv.box.i - 1)] += 1;
  } else {
    rows[static_cast<std::size_t>(mv.box.i - 1)] -= 1;
    if (rows.back() == 0) rows.pop_back();
  }
  const Partition next(rows);
  auto [na, nr] = next.boundary();
  mv.backward_prob = 1.0 / double(na.size() + nr.size());
  return mv;
}

namespace {
// per-hook factor of the measure weight
double hook_factor(double h, const EnsembleParams& p, MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Macrocanonical:
      return 1.0 / (h * h);
    case MeasureKind::Elliptic: {
      const double r2 = (p.M / p.hbar) * (p.M / p.hbar);
      return 1.0 + r2 / (h * h);
    }
    default:
      throw std::domain_error("incremental ratios support the macrocanonical "
                              "and elliptic measures");
  }
}

double size_factor(const EnsembleParams& p, MeasureKind kind) {
  return kind == MeasureKind::Macrocanonical ? p.Q : p.q;
}
}  // namespace

double weight_ratio_add(const Partition& lam, Box b, const EnsembleParams& p,
                        MeasureKind kind) {
  const int i = b.i, j = b.j;
  if (j != lam.row(i) + 1 || (i > 1 && lam.row(i - 1) < j))
    throw std::domain_error("box is not addable");
  double ratio = size_factor(p, kind) * hook_factor(1.0, p, kind);
  // row i: hooks of (i, j') for j' < j each grow by one
  for (int jp = 1; jp < j; ++jp) {
    const double h = double(lam.hook({i, jp}));
    ratio *= hook_factor(h + 1.0, p, kind) / hook_factor(h, p, kind);
  }
  // column j: every row above i reaches column j (the box is addable)
  for (int ip = 1; ip < i; ++ip) {
    const double h = double(lam.hook({ip, j}));
    ratio *= hook_factor(h + 1.0, p, kind) / hook_factor(h, p, kind);
  }
  return ratio;
}

double weight_ratio(const Partition& from, const Partition& to,
                    const EnsembleParams& p, MeasureKind kind) {
  const long long df = to.size() - from.size();
  if (std::abs(df) != 1)
    throw std::domain_error("partitions do not differ by one box");
  const Partition& small = df > 0 ? from : to;
  const Partition& large = df > 0 ? to : from;
  Box b{0, 0};
  bool found = false;
  for (int i = 1; i <= large.length(); ++i) {
    if (small.row(i) != large.row(i)) {
      if (found || large.row(i) != small.row(i) + 1)
        throw std::domain_error("partitions do not differ by one box");
      b = {i, large.row(i)};
      found = true;
    }
  }
  if (!found) throw std::domain_error("partitions are identical");
  const double r = weight_ratio_add(small, b, p, kind);
  return df > 0 ? r : 1.0 / r;
}

ChainTrace run_chain(const ChainConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.seed);
  ChainTrace tr;
  tr.grid = cfg.grid;
  tr.y_probes = cfg.y_probes;
  tr.profile_mean.assign(cfg.grid.size(), 0.0);
  tr.profile_m2.assign(cfg.grid.size(), 0.0);
  tr.y_mean.assign(cfg.y_probes.size(), 0.0);
  tr.y2_mean.assign(cfg.y_probes.size(), 0.0);
  constexpr int kVisitBatches = 100;
  if (cfg.track_visits) {
    tr.visit_batches.resize(kVisitBatches);
  }

  Partition cur;
  auto boundary_count = [](const Partition& lam) {
    auto [a, r] = lam.boundary();
    return a.size() + r.size();
  };

  long long accepted_total = 0;
  double size_accum = 0.0;
  long long size_steps = 0;

  for (long long step = 0; step < cfg.steps; ++step) {
    auto [addable, removable] = cur.boundary();
    const std::size_t k = addable.size() + removable.size();
    const std::size_t pick = rng.below(k);
    const bool is_add = pick < addable.size();
    const Box box =
        is_add ? addable[pick] : removable[pick - addable.size()];

    double alpha = 0.0;
    Partition next;
    if (is_add && cfg.max_size >= 0 && cur.size() + 1 > cfg.max_size) {
      alpha = 0.0;  // proposal leaves the truncated state space
    } else {
      std::vector<int> rows = cur.rows();
      if (is_add) {
        if (box.i > cur.length()) rows.push_back(1);
        else rows[static_cast<std::size_t>(box.i - 1)] += 1;
      } else {
        rows[static_cast<std::size_t>(box.i - 1)] -= 1;
        if (rows.back() == 0) rows.pop_back();
      }
      next = Partition(std::move(rows));
      const double ratio =
          is_add ? weight_ratio_add(cur, box, cfg.params, cfg.kind)
                 : 1.0 / weight_ratio_add(next, box, cfg.params, cfg.kind);
      const double kprime = double(boundary_count(next));
      alpha = std::min(1.0, ratio * double(k) / kprime);
    }
    const bool accept = rng.uniform01() < alpha;
    if (accept) {
      cur = std::move(next);
      ++accepted_total;
    }

    if (step % cfg.thinning == 0) {
      tr.step.push_back(step);
      tr.size.push_back(cur.size());
      tr.accepted.push_back(accept ? 1 : 0);
    }

    if (step >= cfg.burn_in) {
      size_accum += double(cur.size());
      ++size_steps;
      if (cfg.track_visits) {
        tr.visits[cur.rows()] += 1;
        const long long post = step - cfg.burn_in;
        const long long span = cfg.steps - cfg.burn_in;
        const std::size_t batch = static_cast<std::size_t>(
            std::min<long long>(kVisitBatches - 1, post * kVisitBatches / span));
        tr.visit_batches[batch][cur.rows()] += 1;
        ++tr.visit_steps;
      }
      if ((step - cfg.burn_in) % cfg.thinning == 0 &&
          (!cfg.grid.empty() || !cfg.y_probes.empty())) {
        ++tr.snapshots;
        if (!cfg.grid.empty()) {
          const Profile prof(cur, cfg.params.hbar);
          for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
            const double v = prof(cfg.grid[g]);
            const double d = v - tr.profile_mean[g];
            tr.profile_mean[g] += d / double(tr.snapshots);
            tr.profile_m2[g] += d * (v - tr.profile_mean[g]);
          }
        }
        for (std::size_t g = 0; g < cfg.y_probes.size(); ++g) {
          const double y =
              y_boundary(cur, Cx(cfg.y_probes[g], 0.0), cfg.params.hbar)
                  .real();
          tr.y_mean[g] += (y - tr.y_mean[g]) / double(tr.snapshots);
          tr.y2_mean[g] += (y * y - tr.y2_mean[g]) / double(tr.snapshots);
        }
      }
    }
  }
  tr.acceptance_rate = double(accepted_total) / double(cfg.steps);
  tr.mean_size = size_steps > 0 ? size_accum / double(size_steps) : 0.0;
  return tr;
}

std::vector<ChainTrace> run_chains(const ChainConfig& cfg, int n_chains) {
  if (n_chains <= 0) throw std::invalid_argument("need at least one chain");
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("ELLS_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) workers = std::min<unsigned>(workers, unsigned(cap));
  }
  workers = std::min<unsigned>(workers, unsigned(n_chains));

  std::vector<ChainTrace> traces(static_cast<std::size_t>(n_chains));
  std::vector<std::thread> pool;
  std::atomic<int> next_chain{0};
  auto work = [&]() {
    for (;;) {
      const int c = next_chain.fetch_add(1);
      if (c >= n_chains) return;
      ChainConfig local = cfg;
      SplitMix64 stream = SplitMix64::stream(cfg.seed, std::uint64_t(c));
      local.seed = stream();
      traces[static_cast<std::size_t>(c)] = run_chain(local);
    }
  };
  for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return traces;
}

EmpiricalProfile aggregate_profiles(const std::vector<ChainTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("no traces");
  const std::size_t n = traces.front().grid.size();
  EmpiricalProfile out;
  out.x = traces.front().grid;
  out.chains = static_cast<int>(traces.size());
  out.snapshots_per_chain = traces.front().snapshots;
  out.mean.assign(n, 0.0);
  out.std_error.assign(n, 0.0);
  out.sample_var.assign(n, 0.0);
  for (std::size_t g = 0; g < n; ++g) {
    double mean = 0.0;
    for (const auto& tr : traces) mean += tr.profile_mean[g];
    mean /= double(traces.size());
    double var_between = 0.0, var_within = 0.0;
    for (const auto& tr : traces) {
      var_between += (tr.profile_mean[g] - mean) * (tr.profile_mean[g] - mean);
      if (tr.snapshots > 1) var_within += tr.profile_m2[g] / double(tr.snapshots - 1);
    }
    out.mean[g] = mean;
    if (traces.size() > 1) {
      var_between /= double(traces.size() - 1);
      out.std_error[g] = std::sqrt(var_between / double(traces.size()));
    }
    out.sample_var[g] = var_within / double(traces.size());
  }
  return out;
}

ComparisonReport empirical_vs_analytic(const std::vector<ChainTrace>& traces,
                                       const LimitShape& shape,
                                       const ChainConfig& cfg) {
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  if (cfg.kind != MeasureKind::Elliptic || !close(cfg.params.q, shape.q()) ||
      !close(cfg.params.M, shape.M()))
    throw std::invalid_argument(
        "chain parameters do not match the analytic shape");

  const EmpiricalProfile emp = aggregate_profiles(traces);
  ComparisonReport rep;
  rep.x_star = shape.x_star();
  rep.snapshots = emp.snapshots_per_chain * emp.chains;
  double l2 = 0.0;
  for (std::size_t g = 0; g < emp.x.size(); ++g) {
    if (std::abs(emp.x[g]) > shape.x_star()) continue;
    const double d = std::abs(emp.mean[g] - shape.f_at(emp.x[g]));
    rep.sup_distance = std::max(rep.sup_distance, d);
    if (g + 1 < emp.x.size())
      l2 += d * d * (emp.x[g + 1] - emp.x[g]);
  }
  rep.l2_distance = std::sqrt(l2);
  rep.sup_over_xstar = rep.sup_distance / shape.x_star();

  double msize = 0.0;
  for (const auto& tr : traces) msize += tr.mean_size;
  rep.mean_size = msize / double(traces.size());

  // single-sample variance at a few interior probes
  for (double frac : {0.0, 0.25, 0.5, 0.75}) {
    const double target = frac * shape.x_star();
    std::size_t best = 0;
    for (std::size_t g = 1; g < emp.x.size(); ++g) {
      if (std::abs(emp.x[g] - target) < std::abs(emp.x[best] - target))
        best = g;
    }
    rep.probe_x.push_back(emp.x[best]);
    rep.probe_var.push_back(emp.sample_var[best]);
  }

  if (!traces.front().y_probes.empty()) {
    rep.y_probe_x = traces.front().y_probes;
    const std::size_t np = rep.y_probe_x.size();
    for (std::size_t g = 0; g < np; ++g) {
      double ym = 0.0, y2m = 0.0;
      for (const auto& tr : traces) {
        ym += tr.y_mean[g];
        y2m += tr.y2_mean[g];
      }
      ym /= double(traces.size());
      y2m /= double(traces.size());
      rep.y_factorization.push_back(std::abs(y2m - ym * ym) / (ym * ym));
    }
  }
  return rep;
}

}  // namespace ells

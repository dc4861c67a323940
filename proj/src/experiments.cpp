#include "beg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "beg/rng.hpp"

namespace beg {
namespace {

struct TrialOutcome {
  std::int64_t tested = 0;
  std::int64_t unstable = 0;
  std::int64_t zero_on = 0;
  std::int64_t erase = 0;
  std::int64_t flip = 0;
  std::int64_t active = 0;
};

/// Runs body(index, worker) for index in [0, count) on up to `threads`
/// workers. Rethrows the exception of the lowest failing index.
template <typename Body>
void parallel_for(int count, int threads, Body&& body) {
  const int workers = std::max(1, std::min(threads, count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto run = [&](int worker) {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i, worker);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <typename T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void validate_cell(const CellSpec& cell, const RunOptions& opts) {
  if (opts.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (opts.patterns_per_set < 1) throw std::invalid_argument("patterns per set must be at least 1");
  if (cell.n < 3) throw std::invalid_argument("N must be at least 3");
  if (!(cell.alpha > 0.0) || !std::isfinite(cell.alpha)) throw std::invalid_argument("alpha must be positive");
  if (!(cell.gamma >= 0.0) || !std::isfinite(cell.gamma)) throw std::invalid_argument("gamma must be non-negative");
}

}  // namespace

RunOptions ExperimentConfig::run_options() const {
  RunOptions o;
  o.trials = trials;
  o.patterns_per_set = patterns_per_set;
  o.threads = threads;
  o.record_timing = record_timing;
  o.limits.max_cells = max_cells;
  return o;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (cfg.patterns_per_set < 1) throw std::invalid_argument("patterns per set must be at least 1");
  if (cfg.threads < 1) throw std::invalid_argument("threads must be at least 1");
  if (cfg.n_list.empty()) throw std::invalid_argument("N list is empty");
  for (auto n : cfg.n_list)
    if (n < 3) throw std::invalid_argument("every N must be at least 3");
  for (double g : cfg.gamma_list)
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("every gamma must be non-negative");
  if (cfg.variant == Variant::thresholded && cfg.gamma_list.empty())
    throw std::invalid_argument("thresholded variant needs a gamma list");
  if (cfg.bisection) {
    const auto& b = *cfg.bisection;
    if (!(b.lo > 0.0) || !(b.hi > b.lo)) throw std::invalid_argument("bisection needs 0 < lo < hi");
    if (!(b.target_fraction > 0.0 && b.target_fraction < 1.0))
      throw std::invalid_argument("target fraction must lie in (0, 1)");
    if (b.max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  } else {
    if (cfg.alpha_list.empty()) throw std::invalid_argument("alpha list is empty");
    for (double a : cfg.alpha_list)
      if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("every alpha must be positive");
  }
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t n, double z) {
  if (n <= 0 || successes < 0 || successes > n) throw std::invalid_argument("invalid binomial counts");
  const double dn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / dn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / dn;
  const double center = (phat + z2 / (2.0 * dn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / dn + z2 / (4.0 * dn * dn)) / denom;
  const double lo = std::max(0.0, center - half);
  const double hi = std::min(1.0, center + half);
  return {std::min(lo, phat), std::max(hi, phat)};
}

ResultRow run_cell(const CellSpec& cell, const RunOptions& opts, std::uint64_t seed) {
  validate_cell(cell, opts);
  const auto start = std::chrono::steady_clock::now();
  const double gamma = cell.variant == Variant::original ? 0.0 : cell.gamma;
  const ModelParams params(cell.n, gamma, cell.alpha);
  const auto m = params.pattern_count();
  const auto tested_per_set = static_cast<std::int32_t>(std::min<std::int64_t>(opts.patterns_per_set, m));

  // Workers only write their own trial slot; reduction below is index-ordered.
  const int workers = std::max(1, std::min(opts.threads, opts.trials));
  std::vector<FieldWorkspace> workspaces(static_cast<std::size_t>(workers));
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(opts.trials));
  parallel_for(opts.trials, workers, [&](int t, int worker) {
    const auto ps = PatternSet::generate(params, derive_seed(seed, static_cast<std::uint64_t>(t)), opts.limits);
    auto& ws = workspaces[static_cast<std::size_t>(worker)];
    TrialOutcome out;
    for (std::int32_t mu = 0; mu < tested_per_set; ++mu) {
      const auto r = ws.check_stability(ps, mu, cell.variant, gamma);
      ++out.tested;
      out.unstable += r.stable ? 0 : 1;
      out.zero_on += r.zero_to_nonzero > 0 ? 1 : 0;
      out.erase += r.erased > 0 ? 1 : 0;
      out.flip += r.sign_flipped > 0 ? 1 : 0;
      out.active += r.k > 0 ? 1 : 0;
    }
    outcomes[static_cast<std::size_t>(t)] = out;
  });

  ResultRow row;
  row.n = cell.n;
  row.gamma = gamma;
  row.alpha = cell.alpha;
  row.m = m;
  row.trials = opts.trials;
  row.seed = seed;
  for (const auto& o : outcomes) {
    row.tested_patterns += o.tested;
    row.unstable += o.unstable;
    row.zero_on += o.zero_on;
    row.erase += o.erase;
    row.flip += o.flip;
    row.active_patterns += o.active;
  }
  const double tested = static_cast<double>(row.tested_patterns);
  row.unstable_fraction = static_cast<double>(row.unstable) / tested;
  row.zero_on_fraction = static_cast<double>(row.zero_on) / tested;
  row.erase_fraction = static_cast<double>(row.erase) / tested;
  row.flip_fraction = static_cast<double>(row.flip) / tested;
  std::tie(row.ci_lo, row.ci_hi) = wilson_interval(row.unstable, row.tested_patterns);
  if (opts.record_timing)
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<ResultRow> run_grid(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.alpha_list.empty()) throw std::invalid_argument("alpha list is empty");
  const auto ns = sorted(cfg.n_list);
  const auto gammas = cfg.variant == Variant::original ? std::vector<double>{0.0} : sorted(cfg.gamma_list);
  const auto alphas = sorted(cfg.alpha_list);
  const auto opts = cfg.run_options();

  std::vector<ResultRow> rows;
  std::uint64_t cell = 0;
  for (auto n : ns)
    for (double g : gammas)
      for (double a : alphas) rows.push_back(run_cell({cfg.variant, n, g, a}, opts, derive_seed(cfg.master_seed, cell++)));
  return rows;
}

CriticalEstimate estimate_critical_alpha(Variant variant, std::int64_t n, double gamma, const BisectionSpec& spec,
                                         const RunOptions& opts, std::uint64_t seed) {
  if (!(spec.lo > 0.0) || !(spec.hi > spec.lo)) throw std::invalid_argument("bisection needs 0 < lo < hi");
  if (!(spec.target_fraction > 0.0 && spec.target_fraction < 1.0))
    throw std::invalid_argument("target fraction must lie in (0, 1)");
  if (spec.max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");

  const double target = spec.target_fraction;
  CriticalEstimate est;
  auto eval = [&](double alpha) -> const ResultRow& {
    est.rows.push_back(run_cell({variant, n, gamma, alpha}, opts, seed));
    return est.rows.back();
  };

  double lo = spec.lo;
  double hi = spec.hi;
  const double f_lo = eval(lo).unstable_fraction;
  const double f_hi = eval(hi).unstable_fraction;
  if (!(f_lo < target && target < f_hi)) {
    throw StraddleError("bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "] does not straddle target " + std::to_string(target) + ": unstable fractions " +
                        std::to_string(f_lo) + " and " + std::to_string(f_hi),
                        std::move(est.rows));
  }

  for (int iter = 0; iter < spec.max_iters; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const auto& row = eval(mid);
    if (row.ci_lo <= target && target <= row.ci_hi) {
      est.alpha_hat = mid;
      return est;
    }
    if (row.unstable_fraction < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  est.alpha_hat = 0.5 * (lo + hi);
  return est;
}

std::vector<CriticalOutcome> run_critical(const ExperimentConfig& cfg) {
  validate(cfg);
  if (!cfg.bisection) throw std::invalid_argument("critical run needs a bisection spec");
  const auto ns = sorted(cfg.n_list);
  const auto gammas = cfg.variant == Variant::original ? std::vector<double>{0.0} : sorted(cfg.gamma_list);
  const auto opts = cfg.run_options();

  std::vector<CriticalOutcome> out;
  std::uint64_t pair = 0;
  for (auto n : ns) {
    for (double g : gammas) {
      CriticalOutcome o;
      o.n = n;
      o.gamma = g;
      try {
        auto est = estimate_critical_alpha(cfg.variant, n, g, *cfg.bisection, opts, derive_seed(cfg.master_seed, pair));
        o.alpha_hat = est.alpha_hat;
        o.rows = std::move(est.rows);
      } catch (const StraddleError& e) {
        o.error = e.what();
        o.rows = e.rows();
      }
      ++pair;
      out.push_back(std::move(o));
    }
  }
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman needs two equal-length samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mean = 0.5 * static_cast<double>(x.size() + 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

const char* to_string(Variant v) noexcept { return v == Variant::original ? "original" : "thresholded"; }

Variant parse_variant(const std::string& s) {
  if (s == "original") return Variant::original;
  if (s == "thresholded") return Variant::thresholded;
  throw std::invalid_argument("unknown variant '" + s + "' (expected original or thresholded)");
}

}  // namespace beg

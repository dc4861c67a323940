#include "beg/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace beg {
namespace {

void require_dimension(const PatternSet& ps, std::int32_t n) {
  if (n != ps.neuron_count())
    throw std::invalid_argument("probe dimension " + std::to_string(n) + " differs from N = " +
                                std::to_string(ps.neuron_count()));
}

kernels::ThetaTerms theta_terms(const PatternSet& ps, std::int64_t support, std::int64_t support_degrees) {
  const double p = ps.activity();
  return {p, static_cast<double>(support), static_cast<double>(support_degrees),
          static_cast<double>(ps.pattern_count()), 1.0 / ((1.0 - p) * (1.0 - p))};
}

}  // namespace

std::int8_t transfer(std::int64_t s, double theta, double tau) noexcept {
  const double v = (static_cast<double>(s < 0 ? -s : s) + theta) - tau;
  if (!(v >= 0.0)) return 0;
  return static_cast<std::int8_t>((s > 0) - (s < 0));
}

double firing_threshold(const PatternSet& ps, Variant variant, double gamma) {
  if (variant == Variant::original) return 0.0;
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be non-negative");
  return gamma * std::log(static_cast<double>(ps.neuron_count()));
}

void FieldWorkspace::evaluate(const PatternSet& ps, ConfigView probe) {
  require_dimension(ps, probe.n);
  const auto n = static_cast<std::size_t>(ps.neuron_count());
  const auto m = static_cast<std::size_t>(ps.pattern_count());
  const auto degrees = ps.degrees();

  // Overlap buffers are kept all-zero between calls; growing preserves that.
  if (overlap_count_.size() < m) {
    overlap_count_.resize(m, 0);
    overlap_sign_.resize(m, 0);
  }
  probe_.assign(n, 0);
  touched_.clear();

  std::int64_t support_degrees = 0;
  for (const auto& e : probe.entries) {
    probe_[static_cast<std::size_t>(e.index)] = e.spin;
    support_degrees += degrees[static_cast<std::size_t>(e.index)];
    for (const auto& occ : ps.occurrences(e.index)) {
      if (overlap_count_[static_cast<std::size_t>(occ.pattern)]++ == 0) touched_.push_back(occ.pattern);
      overlap_sign_[static_cast<std::size_t>(occ.pattern)] += e.spin * occ.sign;
    }
  }

  s_.assign(n, 0);
  cover_.assign(n, 0);
  for (const std::int32_t mu : touched_) {
    const auto idx = static_cast<std::size_t>(mu);
    const std::int32_t overlap = overlap_sign_[idx];
    const std::int32_t count = overlap_count_[idx];
    for (const auto& e : ps.pattern_entries(mu)) {
      s_[static_cast<std::size_t>(e.index)] += e.spin * overlap;
      cover_[static_cast<std::size_t>(e.index)] += count;
    }
    overlap_sign_[idx] = 0;
    overlap_count_[idx] = 0;
  }
  // Remove the j = i term: sum over mu of xi_i^mu xi_i^mu sigma_i = d_i sigma_i.
  for (const auto& e : probe.entries) s_[static_cast<std::size_t>(e.index)] -= degrees[static_cast<std::size_t>(e.index)] * e.spin;

  theta_.resize(n);
  const auto terms = theta_terms(ps, static_cast<std::int64_t>(probe.entries.size()), support_degrees);
  kernels::active_table().theta(cover_, degrees, probe_, terms, theta_);
}

void FieldWorkspace::apply(const PatternSet& ps, ConfigView probe, Variant variant, double gamma) {
  const double tau = firing_threshold(ps, variant, gamma);
  evaluate(ps, probe);
  out_.resize(s_.size());
  kernels::active_table().transfer(s_, theta_, tau, out_);
}

StabilityReport FieldWorkspace::check_stability(const PatternSet& ps, std::int32_t mu, Variant variant,
                                                double gamma) {
  if (mu < 0 || mu >= ps.pattern_count()) throw std::out_of_range("pattern id out of range");
  apply(ps, ps.pattern_view(mu), variant, gamma);
  const auto tally = kernels::active_table().tally(probe_, out_);
  StabilityReport r;
  r.mu = mu;
  r.k = ps.activity_of(mu);
  r.zero_to_nonzero = tally.zero_to_nonzero;
  r.erased = tally.erased;
  r.sign_flipped = tally.sign_flipped;
  r.stable = (tally.zero_to_nonzero + tally.erased + tally.sign_flipped) == 0;
  return r;
}

FieldPair local_fields(const PatternSet& ps, const TernaryConfig& probe, std::int32_t i) {
  require_dimension(ps, probe.dimension());
  if (i < 0 || i >= ps.neuron_count()) throw std::out_of_range("neuron id out of range");
  const auto dense = probe.to_dense();
  const auto degrees = ps.degrees();

  std::int64_t support_degrees = 0;
  for (const auto& e : probe.entries()) support_degrees += degrees[static_cast<std::size_t>(e.index)];

  // Gather: overlap of each pattern active at i with the probe.
  std::int64_t s = 0;
  std::int32_t cover = 0;
  for (const auto& occ : ps.occurrences(i)) {
    std::int64_t overlap = 0;
    for (const auto& e : ps.pattern_entries(occ.pattern)) {
      const auto sigma = dense[static_cast<std::size_t>(e.index)];
      if (sigma == 0) continue;
      overlap += e.spin * sigma;
      ++cover;
    }
    s += occ.sign * overlap;
  }
  const auto sigma_i = dense[static_cast<std::size_t>(i)];
  const auto d_i = degrees[static_cast<std::size_t>(i)];
  s -= static_cast<std::int64_t>(d_i) * sigma_i;

  const auto terms = theta_terms(ps, probe.support_size(), support_degrees);
  return {s, kernels::theta_lane(cover, d_i, sigma_i, terms)};
}

std::vector<FieldPair> all_fields(const PatternSet& ps, const TernaryConfig& probe) {
  FieldWorkspace ws;
  ws.evaluate(ps, probe.view());
  std::vector<FieldPair> out(ws.s().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {ws.s()[i], ws.theta()[i]};
  return out;
}

std::vector<FieldPair> dense_oracle_fields(const PatternSet& ps, const TernaryConfig& probe) {
  require_dimension(ps, probe.dimension());
  const std::int32_t n = ps.neuron_count();
  if (n > kDenseOracleMaxNeurons)
    throw std::invalid_argument("dense oracle limited to N <= " + std::to_string(kDenseOracleMaxNeurons));
  const std::int32_t m = ps.pattern_count();
  const double p = ps.activity();
  const auto N = static_cast<std::size_t>(n);

  std::vector<std::int8_t> xi(static_cast<std::size_t>(m) * N, 0);
  for (std::int32_t mu = 0; mu < m; ++mu)
    for (const auto& e : ps.pattern_entries(mu)) xi[static_cast<std::size_t>(mu) * N + static_cast<std::size_t>(e.index)] = e.spin;

  // J_ij = sum_mu xi_i xi_j, K_ij = (1-p)^-2 sum_mu eta_i eta_j, eta = xi^2 - p.
  std::vector<std::int64_t> J(N * N, 0);
  std::vector<double> K(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      if (i == j) continue;
      std::int64_t jsum = 0;
      double ksum = 0.0;
      for (std::int32_t mu = 0; mu < m; ++mu) {
        const auto a = xi[static_cast<std::size_t>(mu) * N + i];
        const auto b = xi[static_cast<std::size_t>(mu) * N + j];
        jsum += a * b;
        ksum += (static_cast<double>(a * a) - p) * (static_cast<double>(b * b) - p);
      }
      J[i * N + j] = jsum;
      K[i * N + j] = ksum / ((1.0 - p) * (1.0 - p));
    }
  }

  const auto sigma = probe.to_dense();
  std::vector<FieldPair> out(N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      if (i == j) continue;
      out[i].s += J[i * N + j] * sigma[j];
      out[i].theta += K[i * N + j] * static_cast<double>(sigma[j] * sigma[j]);
    }
  }
  return out;
}

TernaryConfig apply_map(const PatternSet& ps, const TernaryConfig& probe, Variant variant, double gamma) {
  FieldWorkspace ws;
  ws.apply(ps, probe.view(), variant, gamma);
  return TernaryConfig::from_dense(ws.output());
}

StabilityReport check_stability(const PatternSet& ps, std::int32_t mu, Variant variant, double gamma) {
  FieldWorkspace ws;
  return ws.check_stability(ps, mu, variant, gamma);
}

}  // namespace beg

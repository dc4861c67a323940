#include "beg/pattern_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <random>

#include "beg/rng.hpp"

namespace beg {
namespace {

constexpr char kSnapshotMagic[8] = {'B', 'E', 'G', 'P', 'S', 'E', 'T', '\0'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("truncated pattern snapshot");
  return v;
}

}  // namespace

PatternSet::PatternSet(const ModelParams& params, std::uint64_t seed, std::vector<std::int64_t> pattern_offsets,
                       std::vector<SpinEntry> entries)
    : params_(params),
      n_(static_cast<std::int32_t>(params.neuron_count())),
      m_(static_cast<std::int32_t>(params.pattern_count())),
      master_seed_(seed),
      pattern_offsets_(std::move(pattern_offsets)),
      entries_(std::move(entries)) {
  build_inverted_index();
}

PatternSet PatternSet::generate(const ModelParams& params, std::uint64_t master_seed,
                                const GenerationLimits& limits) {
  const std::int64_t n = params.neuron_count();
  const std::int64_t m = params.pattern_count();
  if (n > std::numeric_limits<std::int32_t>::max() || m > std::numeric_limits<std::int32_t>::max())
    throw BudgetExceeded("N or M exceeds 32-bit index range");
  const double cells = static_cast<double>(n) * static_cast<double>(m);
  if (cells > static_cast<double>(limits.max_cells))
    throw BudgetExceeded("M*N = " + std::to_string(static_cast<std::uint64_t>(cells)) + " exceeds budget " +
                         std::to_string(limits.max_cells));

  const double p = params.activity();
  std::vector<std::int64_t> offsets;
  offsets.reserve(static_cast<std::size_t>(m) + 1);
  offsets.push_back(0);
  std::vector<SpinEntry> entries;
  entries.reserve(static_cast<std::size_t>(cells * p * 1.05) + 16);

  // Geometric gaps between successive active neurons give exactly i.i.d.
  // Bernoulli(p) activity in O(N p) draws per pattern.
  for (std::int64_t mu = 0; mu < m; ++mu) {
    SplitMix64 rng(derive_seed(master_seed, static_cast<std::uint64_t>(mu)));
    std::geometric_distribution<std::int64_t> gap(p);
    std::int64_t pos = -1;
    for (;;) {
      pos += gap(rng) + 1;
      if (pos >= n) break;
      const std::int8_t spin = (rng() >> 63) ? std::int8_t{1} : std::int8_t{-1};
      entries.push_back({static_cast<std::int32_t>(pos), spin});
    }
    offsets.push_back(static_cast<std::int64_t>(entries.size()));
  }
  return PatternSet(params, master_seed, std::move(offsets), std::move(entries));
}

PatternSet PatternSet::from_patterns(const ModelParams& params, std::span<const TernaryConfig> patterns,
                                     std::uint64_t master_seed) {
  if (static_cast<std::int64_t>(patterns.size()) != params.pattern_count())
    throw std::invalid_argument("pattern list size differs from the parameter pattern count");
  std::vector<std::int64_t> offsets{0};
  std::vector<SpinEntry> entries;
  for (const auto& pat : patterns) {
    if (pat.dimension() != params.neuron_count()) throw std::invalid_argument("pattern dimension mismatch");
    entries.insert(entries.end(), pat.entries().begin(), pat.entries().end());
    offsets.push_back(static_cast<std::int64_t>(entries.size()));
  }
  return PatternSet(params, master_seed, std::move(offsets), std::move(entries));
}

void PatternSet::build_inverted_index() {
  degrees_.assign(static_cast<std::size_t>(n_), 0);
  for (const auto& e : entries_) ++degrees_[static_cast<std::size_t>(e.index)];

  neuron_offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (std::int32_t i = 0; i < n_; ++i) neuron_offsets_[i + 1] = neuron_offsets_[i] + degrees_[i];

  // Filling in mu order keeps every neuron's list sorted by pattern id.
  occurrences_.resize(entries_.size());
  std::vector<std::int64_t> cursor(neuron_offsets_.begin(), neuron_offsets_.end() - 1);
  for (std::int32_t mu = 0; mu < m_; ++mu) {
    for (const auto& e : pattern_entries(mu)) {
      occurrences_[static_cast<std::size_t>(cursor[e.index]++)] = {mu, e.spin};
    }
  }
}

TernaryConfig PatternSet::pattern(std::int32_t mu) const {
  if (mu < 0 || mu >= m_) throw std::out_of_range("pattern id out of range");
  auto e = pattern_entries(mu);
  return TernaryConfig(n_, std::vector<SpinEntry>(e.begin(), e.end()));
}

std::int64_t PatternSet::activity_of(std::int32_t mu) const {
  if (mu < 0 || mu >= m_) throw std::out_of_range("pattern id out of range");
  return pattern_offsets_[mu + 1] - pattern_offsets_[mu];
}

void PatternSet::save(std::ostream& out) const {
  out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  write_pod(out, kSnapshotVersion);
  write_pod(out, params_.n_);
  write_pod(out, params_.pattern_count_);
  write_pod(out, params_.activity_);
  write_pod(out, params_.gamma_);
  write_pod(out, params_.alpha_);
  write_pod(out, master_seed_);
  write_pod(out, static_cast<std::int64_t>(entries_.size()));
  for (std::int32_t mu = 0; mu < m_; ++mu) write_pod(out, static_cast<std::int32_t>(activity_of(mu)));
  for (const auto& e : entries_) {
    write_pod(out, e.index);
    write_pod(out, e.spin);
  }
  if (!out) throw std::runtime_error("failed to write pattern snapshot");
}

PatternSet PatternSet::load(std::istream& in) {
  char magic[sizeof(kSnapshotMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a pattern snapshot");
  if (read_pod<std::uint32_t>(in) != kSnapshotVersion) throw std::runtime_error("unsupported snapshot version");
  ModelParams params;
  params.n_ = read_pod<std::int64_t>(in);
  params.pattern_count_ = read_pod<std::int64_t>(in);
  params.activity_ = read_pod<double>(in);
  params.gamma_ = read_pod<double>(in);
  params.alpha_ = read_pod<double>(in);
  if (params.n_ < 3 || params.n_ > std::numeric_limits<std::int32_t>::max() || params.pattern_count_ < 1 ||
      params.pattern_count_ > std::numeric_limits<std::int32_t>::max() ||
      !(params.activity_ > 0.0 && params.activity_ < 1.0))
    throw std::runtime_error("corrupt snapshot header");
  const auto seed = read_pod<std::uint64_t>(in);
  const auto total = read_pod<std::int64_t>(in);
  if (total < 0 || total > params.n_ * params.pattern_count_) throw std::runtime_error("corrupt snapshot header");

  std::vector<std::int64_t> offsets{0};
  offsets.reserve(static_cast<std::size_t>(params.pattern_count_) + 1);
  for (std::int64_t mu = 0; mu < params.pattern_count_; ++mu)
    offsets.push_back(offsets.back() + read_pod<std::int32_t>(in));
  if (offsets.back() != total) throw std::runtime_error("corrupt snapshot: activity sum mismatch");

  std::vector<SpinEntry> entries(static_cast<std::size_t>(total));
  for (auto& e : entries) {
    e.index = read_pod<std::int32_t>(in);
    e.spin = read_pod<std::int8_t>(in);
  }
  // Validate through TernaryConfig's checks, pattern by pattern.
  for (std::int64_t mu = 0; mu < params.pattern_count_; ++mu) {
    std::vector<SpinEntry> pat(entries.begin() + offsets[mu], entries.begin() + offsets[mu + 1]);
    TernaryConfig checked(static_cast<std::int32_t>(params.n_), pat);
    if (!std::equal(pat.begin(), pat.end(), checked.entries().begin()))
      throw std::runtime_error("corrupt snapshot: unsorted pattern entries");
  }
  return PatternSet(params, seed, std::move(offsets), std::move(entries));
}

}  // namespace beg

#include "netbandit/exposure.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace netbandit {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b, bool& saturated) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) {
    saturated = true;
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp, bool& saturated) {
  std::uint64_t r = 1;
  for (std::uint64_t e = 0; e < exp; ++e) r = saturating_mul(r, base, saturated);
  return r;
}

std::optional<std::size_t> ExposureArmSpace::find(const ExposureSuperArm& s) const {
  auto it = std::lower_bound(arms_.begin(), arms_.end(), s);
  if (it == arms_.end() || !(*it == s)) return std::nullopt;
  return static_cast<std::size_t>(it - arms_.begin());
}

ExposureContext::ExposureContext(ExposureMapSpec spec, AdjacencyMatrix h, Clustering clustering,
                                 int num_arms, std::size_t budget)
    : spec_(std::move(spec)),
      h_(std::move(h)),
      clustering_(std::move(clustering)),
      k_(num_arms),
      budget_(budget) {
  const std::size_t n = clustering_.num_units();
  if (n == 0) throw std::invalid_argument("exposure: no units");
  if (h_.size() != n) throw std::invalid_argument("exposure: network/clustering size mismatch");
  if (k_ < 2) throw std::invalid_argument("exposure: need at least 2 arms per unit");
  if (spec_.variant == MappingVariant::NeighborhoodThreshold) {
    if (!(spec_.threshold > 0.0 && spec_.threshold <= 1.0))
      throw std::invalid_argument("exposure: threshold must lie in (0, 1]");
    neighbor_sums_.resize(n);
    for (std::size_t i = 0; i < n; ++i) neighbor_sums_[i] = h_.neighbor_weight_sum(i);
  }
  build_codomain();
  build_sum_tables();
  if (spec_.variant == MappingVariant::NeighborhoodThreshold) {
    bool sat = false;
    const std::uint64_t total = saturating_pow(static_cast<std::uint64_t>(k_), n, sat);
    if (!sat && total <= budget_) brute_force_sweep();
  }
}

void ExposureContext::build_codomain() {
  codomain_.clear();
  const std::size_t n = clustering_.num_units();
  switch (spec_.variant) {
    case MappingVariant::PerUnitArm:
      for (int a = 0; a < k_; ++a) codomain_.push_back(Rational::integer(a));
      break;
    case MappingVariant::GlobalProportion: {
      const int smax = (k_ - 1) * static_cast<int>(n);
      for (int s = 0; s <= smax; ++s) codomain_.emplace_back(s, static_cast<std::int64_t>(n));
      break;
    }
    case MappingVariant::NeighborhoodThreshold:
      codomain_.push_back(Rational::integer(0));
      codomain_.push_back(Rational::integer(1));
      break;
    case MappingVariant::ClusterProportion: {
      std::set<Rational> labels;
      for (std::size_t q = 0; q < clustering_.num_clusters(); ++q) {
        const auto sz = static_cast<std::int64_t>(clustering_.members(q).size());
        for (int s = 0; s <= (k_ - 1) * sz; ++s) labels.insert(Rational(s, sz));
      }
      codomain_.assign(labels.begin(), labels.end());
      break;
    }
  }
}

void ExposureContext::build_sum_tables() {
  std::size_t max_group = 0;
  if (spec_.variant == MappingVariant::GlobalProportion) {
    max_group = clustering_.num_units();
  } else if (spec_.variant == MappingVariant::ClusterProportion) {
    for (std::size_t q = 0; q < clustering_.num_clusters(); ++q)
      max_group = std::max(max_group, clustering_.members(q).size());
  } else {
    return;
  }
  ways_.resize(max_group + 1);
  ways_[0] = {1.0L};
  for (std::size_t m = 1; m <= max_group; ++m) {
    const std::size_t rmax = static_cast<std::size_t>(k_ - 1) * m;
    ways_[m].assign(rmax + 1, 0.0L);
    for (std::size_t r = 0; r <= rmax; ++r) {
      long double acc = 0.0L;
      for (int a = 0; a < k_ && static_cast<std::size_t>(a) <= r; ++a) {
        const std::size_t rem = r - static_cast<std::size_t>(a);
        if (rem < ways_[m - 1].size()) acc += ways_[m - 1][rem];
      }
      ways_[m][r] = acc;
    }
  }
}

std::size_t ExposureContext::label_index(const Rational& label) const {
  auto it = std::lower_bound(codomain_.begin(), codomain_.end(), label);
  if (it == codomain_.end() || !(*it == label))
    throw std::invalid_argument("exposure: label not in codomain");
  return static_cast<std::size_t>(it - codomain_.begin());
}

Rational ExposureContext::apply(std::size_t unit, const SuperArm& a) const {
  const std::size_t n = clustering_.num_units();
  if (unit >= n) throw std::out_of_range("exposure: unit out of range");
  if (a.size() != n) throw std::invalid_argument("exposure: super arm has wrong dimension");
  for (int v : a.actions)
    if (v < 0 || v >= k_) throw std::invalid_argument("exposure: arm index out of range");
  switch (spec_.variant) {
    case MappingVariant::PerUnitArm:
      return Rational::integer(a.actions[unit]);
    case MappingVariant::GlobalProportion: {
      std::int64_t total = 0;
      for (int v : a.actions) total += v;
      return Rational(total, static_cast<std::int64_t>(n));
    }
    case MappingVariant::NeighborhoodThreshold: {
      const double denom = neighbor_sums_[unit];
      if (denom <= 0.0)
        throw std::invalid_argument("exposure: isolated unit under neighborhood mapping");
      double num = 0.0;
      for (std::size_t j = 0; j < n; ++j) num += h_.weight(unit, j) * a.actions[j];
      return Rational::integer(num / denom < spec_.threshold ? 1 : 0);
    }
    case MappingVariant::ClusterProportion: {
      const auto& mem = clustering_.members(static_cast<std::size_t>(clustering_.cluster_of(unit)));
      std::int64_t total = 0;
      for (std::size_t j : mem) total += a.actions[j];
      return Rational(total, static_cast<std::int64_t>(mem.size()));
    }
  }
  throw std::logic_error("exposure: unknown variant");
}

ExposureSuperArm ExposureContext::exposure_profile(const SuperArm& a) const {
  const std::size_t n = clustering_.num_units();
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i)
    labels[i] = static_cast<int>(label_index(apply(i, a)));
  return ExposureSuperArm(std::move(labels));
}

namespace {

bool cluster_constant(const std::vector<int>& labels, const Clustering& c) {
  for (std::size_t q = 0; q < c.num_clusters(); ++q) {
    const auto& mem = c.members(q);
    for (std::size_t j : mem)
      if (labels[j] != labels[mem[0]]) return false;
  }
  return true;
}

}  // namespace

void ExposureContext::brute_force_sweep() {
  const std::size_t n = clustering_.num_units();
  std::vector<int> arm(n, 0);
  std::vector<double> weighted(n, 0.0);
  std::vector<int> labels(n);
  std::set<std::vector<int>> distinct_profiles;
  for (std::size_t i = 0; i < n; ++i)
    if (neighbor_sums_[i] <= 0.0)
      throw std::invalid_argument("exposure: isolated unit under neighborhood mapping");
  bool done = false;
  while (!done) {
    for (std::size_t i = 0; i < n; ++i)
      labels[i] = weighted[i] / neighbor_sums_[i] < spec_.threshold ? 1 : 0;
    distinct_profiles.insert(labels);
    if (cluster_constant(labels, clustering_)) {
      auto& bucket = compat_cache_[labels];
      bucket.emplace_back(arm);
    }
    // Odometer step with incremental weighted-sum maintenance.
    std::size_t p = n;
    while (p > 0) {
      --p;
      if (arm[p] + 1 < k_) {
        arm[p] += 1;
        for (std::size_t i = 0; i < n; ++i) weighted[i] += h_.weight(i, p);
        break;
      }
      for (std::size_t i = 0; i < n; ++i) weighted[i] -= h_.weight(i, p) * arm[p];
      arm[p] = 0;
      if (p == 0) done = true;
    }
    if (n == 0) break;
  }
  swept_realizable_ = distinct_profiles.size();
  swept_ = true;
}

ExposureArmSpace ExposureContext::enumerate_exposure_space() const {
  const std::size_t n = clustering_.num_units();
  const std::size_t c = clustering_.num_clusters();
  ExposureArmSpace space;
  bool sat = false;

  // Restriction filter precomputed per codomain index.
  std::vector<bool> allowed(codomain_.size(), true);
  if (spec_.restrict_labels) {
    for (std::size_t idx = 0; idx < codomain_.size(); ++idx) {
      bool ok = false;
      for (double v : *spec_.restrict_labels)
        if (codomain_[idx].matches(v)) ok = true;
      allowed[idx] = ok;
    }
  }
  auto keep = [&](const std::vector<int>& labels) {
    for (int idx : labels)
      if (!allowed[static_cast<std::size_t>(idx)]) return false;
    return true;
  };

  switch (spec_.variant) {
    case MappingVariant::PerUnitArm: {
      const std::uint64_t total = saturating_pow(static_cast<std::uint64_t>(k_), c, sat);
      if (sat || total > budget_)
        throw std::runtime_error("exposure: enumeration budget exceeded (per-unit space)");
      std::vector<int> tuple(c, 0);
      std::vector<int> labels(n);
      bool done = false;
      while (!done) {
        for (std::size_t i = 0; i < n; ++i)
          labels[i] = tuple[static_cast<std::size_t>(clustering_.cluster_of(i))];
        if (keep(labels)) space.arms_.emplace_back(labels);
        std::size_t p = c;
        done = true;
        while (p > 0) {
          --p;
          if (tuple[p] + 1 < k_) {
            tuple[p] += 1;
            std::fill(tuple.begin() + static_cast<std::ptrdiff_t>(p) + 1, tuple.end(), 0);
            done = false;
            break;
          }
        }
      }
      space.u_c_ = saturating_pow(static_cast<std::uint64_t>(k_), c, space.saturated_);
      space.u_o_ = saturating_pow(static_cast<std::uint64_t>(k_), n, space.saturated_);
      break;
    }
    case MappingVariant::GlobalProportion: {
      const int smax = (k_ - 1) * static_cast<int>(n);
      if (static_cast<std::size_t>(smax) + 1 > budget_)
        throw std::runtime_error("exposure: enumeration budget exceeded (proportion grid)");
      for (int s = 0; s <= smax; ++s) {
        const int idx = static_cast<int>(label_index(Rational(s, static_cast<std::int64_t>(n))));
        std::vector<int> labels(n, idx);
        if (keep(labels)) space.arms_.emplace_back(std::move(labels));
      }
      space.u_c_ = saturating_pow(codomain_.size(), c, space.saturated_);
      space.u_o_ = static_cast<std::uint64_t>(smax) + 1;
      break;
    }
    case MappingVariant::ClusterProportion: {
      std::uint64_t total = 1;
      for (std::size_t q = 0; q < c; ++q)
        total = saturating_mul(
            total, static_cast<std::uint64_t>(k_ - 1) * clustering_.members(q).size() + 1, sat);
      if (sat || total > budget_)
        throw std::runtime_error("exposure: enumeration budget exceeded (cluster grid)");
      std::vector<int> sums(c, 0);
      std::vector<int> labels(n);
      bool done = false;
      while (!done) {
        for (std::size_t q = 0; q < c; ++q) {
          const auto& mem = clustering_.members(q);
          const int idx = static_cast<int>(
              label_index(Rational(sums[q], static_cast<std::int64_t>(mem.size()))));
          for (std::size_t j : mem) labels[j] = idx;
        }
        if (keep(labels)) space.arms_.emplace_back(labels);
        std::size_t p = c;
        done = true;
        while (p > 0) {
          --p;
          const int cap = (k_ - 1) * static_cast<int>(clustering_.members(p).size());
          if (sums[p] + 1 <= cap) {
            sums[p] += 1;
            std::fill(sums.begin() + static_cast<std::ptrdiff_t>(p) + 1, sums.end(), 0);
            done = false;
            break;
          }
        }
      }
      space.u_c_ = saturating_pow(codomain_.size(), c, space.saturated_);
      space.u_o_ = total;
      break;
    }
    case MappingVariant::NeighborhoodThreshold: {
      if (!swept_)
        throw std::runtime_error(
            "exposure: enumeration budget exceeded and no analytic path for neighborhood mapping");
      for (const auto& [labels, bucket] : compat_cache_) {
        (void)bucket;
        if (keep(labels)) space.arms_.emplace_back(labels);
      }
      space.u_c_ = saturating_pow(2, c, space.saturated_);
      space.u_o_ = swept_realizable_;
      break;
    }
  }

  std::sort(space.arms_.begin(), space.arms_.end());
  space.arms_.erase(std::unique(space.arms_.begin(), space.arms_.end()), space.arms_.end());
  if (space.arms_.size() < 2)
    throw std::invalid_argument("exposure: |U_E| < 2 violates the exposure-space condition");
  return space;
}

int ExposureContext::label_sum_from_rational(const Rational& r, std::size_t group_size) const {
  // Label r = s / group_size exactly; recover s and verify it is on the grid.
  const auto g = static_cast<std::int64_t>(group_size);
  if (r.den <= 0 || g % r.den != 0)
    throw std::invalid_argument("exposure: label not realizable for this group");
  const std::int64_t s = r.num * (g / r.den);
  if (s < 0 || s > static_cast<std::int64_t>(k_ - 1) * g)
    throw std::invalid_argument("exposure: label outside achievable range");
  return static_cast<int>(s);
}

long double ExposureContext::compatible_count(const ExposureSuperArm& s) const {
  const std::size_t n = clustering_.num_units();
  if (s.size() != n) throw std::invalid_argument("exposure: profile has wrong dimension");
  switch (spec_.variant) {
    case MappingVariant::PerUnitArm:
      return 1.0L;
    case MappingVariant::GlobalProportion: {
      const Rational r = codomain_.at(static_cast<std::size_t>(s.labels[0]));
      return ways_[n][static_cast<std::size_t>(label_sum_from_rational(r, n))];
    }
    case MappingVariant::ClusterProportion: {
      long double total = 1.0L;
      for (std::size_t q = 0; q < clustering_.num_clusters(); ++q) {
        const auto& mem = clustering_.members(q);
        const Rational r = codomain_.at(static_cast<std::size_t>(s.labels[mem[0]]));
        total *= ways_[mem.size()][static_cast<std::size_t>(label_sum_from_rational(r, mem.size()))];
      }
      return total;
    }
    case MappingVariant::NeighborhoodThreshold: {
      if (!swept_) throw std::runtime_error("exposure: compatible sets unavailable above budget");
      auto it = compat_cache_.find(s.labels);
      if (it == compat_cache_.end())
        throw std::invalid_argument("exposure: profile not realizable");
      return static_cast<long double>(it->second.size());
    }
  }
  throw std::logic_error("exposure: unknown variant");
}

void ExposureContext::enumerate_fixed_sum(std::size_t count, int target,
                                          const std::vector<std::size_t>& positions,
                                          SuperArm& scratch, std::vector<SuperArm>& out,
                                          std::size_t budget) const {
  // Depth-first over positions in order; arms come out lexicographic.
  auto rec = [&](auto&& self, std::size_t depth, int remaining) -> void {
    if (depth == count) {
      if (out.size() >= budget)
        throw std::runtime_error("exposure: compatible set exceeds enumeration budget");
      out.push_back(scratch);
      return;
    }
    const int left = static_cast<int>(count - depth - 1);
    for (int a = 0; a < k_; ++a) {
      const int rem = remaining - a;
      if (rem < 0 || rem > (k_ - 1) * left) continue;
      scratch.actions[positions[depth]] = a;
      self(self, depth + 1, rem);
    }
  };
  rec(rec, 0, target);
}

std::vector<SuperArm> ExposureContext::compatible_super_arms(const ExposureSuperArm& s) const {
  const std::size_t n = clustering_.num_units();
  if (s.size() != n) throw std::invalid_argument("exposure: profile has wrong dimension");
  const long double total = compatible_count(s);
  if (total > static_cast<long double>(budget_))
    throw std::runtime_error("exposure: compatible set exceeds enumeration budget");
  std::vector<SuperArm> out;
  switch (spec_.variant) {
    case MappingVariant::PerUnitArm: {
      SuperArm a;
      a.actions.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        a.actions[i] = static_cast<int>(codomain_.at(static_cast<std::size_t>(s.labels[i])).num);
      out.push_back(std::move(a));
      break;
    }
    case MappingVariant::GlobalProportion: {
      const Rational r = codomain_.at(static_cast<std::size_t>(s.labels[0]));
      const int target = label_sum_from_rational(r, n);
      std::vector<std::size_t> positions(n);
      for (std::size_t i = 0; i < n; ++i) positions[i] = i;
      SuperArm scratch;
      scratch.actions.assign(n, 0);
      enumerate_fixed_sum(n, target, positions, scratch, out, budget_);
      break;
    }
    case MappingVariant::ClusterProportion: {
      // Per-cluster fixed-sum lists, then a product across clusters.
      const std::size_t c = clustering_.num_clusters();
      std::vector<std::vector<SuperArm>> parts(c);
      for (std::size_t q = 0; q < c; ++q) {
        const auto& mem = clustering_.members(q);
        const Rational r = codomain_.at(static_cast<std::size_t>(s.labels[mem[0]]));
        const int target = label_sum_from_rational(r, mem.size());
        SuperArm scratch;
        scratch.actions.assign(n, 0);
        enumerate_fixed_sum(mem.size(), target, mem, scratch, parts[q], budget_);
      }
      std::vector<std::size_t> pick(c, 0);
      bool done = false;
      while (!done) {
        SuperArm a;
        a.actions.assign(n, 0);
        for (std::size_t q = 0; q < c; ++q) {
          const auto& mem = clustering_.members(q);
          for (std::size_t j : mem) a.actions[j] = parts[q][pick[q]].actions[j];
        }
        out.push_back(std::move(a));
        std::size_t p = c;
        done = true;
        while (p > 0) {
          --p;
          if (pick[p] + 1 < parts[p].size()) {
            pick[p] += 1;
            std::fill(pick.begin() + static_cast<std::ptrdiff_t>(p) + 1, pick.end(), 0);
            done = false;
            break;
          }
        }
      }
      std::sort(out.begin(), out.end());
      break;
    }
    case MappingVariant::NeighborhoodThreshold: {
      if (!swept_) throw std::runtime_error("exposure: compatible sets unavailable above budget");
      auto it = compat_cache_.find(s.labels);
      if (it == compat_cache_.end())
        throw std::invalid_argument("exposure: profile not realizable");
      out = it->second;
      break;
    }
  }
  if (out.empty()) throw std::invalid_argument("exposure: profile not realizable");
  return out;
}

void ExposureContext::sample_fixed_sum(std::size_t count, int target, Rng& rng,
                                       const std::vector<std::size_t>& positions,
                                       SuperArm& out) const {
  int remaining = target;
  for (std::size_t idx = 0; idx < count; ++idx) {
    const std::size_t m = count - idx;  // units still to assign, including this one
    if (m == 1) {
      out.actions[positions[idx]] = remaining;
      remaining = 0;
      continue;
    }
    const long double total = ways_[m][static_cast<std::size_t>(remaining)];
    long double u = static_cast<long double>(rng.uniform()) * total;
    int chosen = -1;
    for (int a = 0; a < k_; ++a) {
      const int rem = remaining - a;
      if (rem < 0 || static_cast<std::size_t>(rem) >= ways_[m - 1].size()) continue;
      const long double w = ways_[m - 1][static_cast<std::size_t>(rem)];
      if (w <= 0.0L) continue;
      chosen = a;
      u -= w;
      if (u < 0.0L) break;
    }
    out.actions[positions[idx]] = chosen;
    remaining -= chosen;
  }
}

void ExposureContext::sample_compatible_into(const ExposureSuperArm& s, Rng& rng,
                                             SuperArm& out) const {
  const std::size_t n = clustering_.num_units();
  if (s.size() != n) throw std::invalid_argument("exposure: profile has wrong dimension");
  out.actions.resize(n);
  switch (spec_.variant) {
    case MappingVariant::PerUnitArm:
      for (std::size_t i = 0; i < n; ++i)
        out.actions[i] = static_cast<int>(codomain_.at(static_cast<std::size_t>(s.labels[i])).num);
      return;
    case MappingVariant::GlobalProportion: {
      const Rational r = codomain_.at(static_cast<std::size_t>(s.labels[0]));
      const int target = label_sum_from_rational(r, n);
      std::vector<std::size_t> positions(n);
      for (std::size_t i = 0; i < n; ++i) positions[i] = i;
      sample_fixed_sum(n, target, rng, positions, out);
      return;
    }
    case MappingVariant::ClusterProportion: {
      for (std::size_t q = 0; q < clustering_.num_clusters(); ++q) {
        const auto& mem = clustering_.members(q);
        const Rational r = codomain_.at(static_cast<std::size_t>(s.labels[mem[0]]));
        const int target = label_sum_from_rational(r, mem.size());
        sample_fixed_sum(mem.size(), target, rng, mem, out);
      }
      return;
    }
    case MappingVariant::NeighborhoodThreshold: {
      if (!swept_) throw std::runtime_error("exposure: compatible sets unavailable above budget");
      auto it = compat_cache_.find(s.labels);
      if (it == compat_cache_.end())
        throw std::invalid_argument("exposure: profile not realizable");
      const auto& bucket = it->second;
      out = bucket[rng.uniform_int(bucket.size())];
      return;
    }
  }
  throw std::logic_error("exposure: unknown variant");
}

SuperArm ExposureContext::sample_compatible(const ExposureSuperArm& s, Rng& rng) const {
  SuperArm out;
  sample_compatible_into(s, rng, out);
  return out;
}

bool is_one_to_one(const ExposureContext& ctx, const ExposureArmSpace& space) {
  for (const auto& s : space.arms())
    if (ctx.compatible_count(s) != 1.0L) return false;
  return true;
}

}  // namespace netbandit

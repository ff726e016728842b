#pragma once

// Exposure mappings S(i, A, H) and the restricted exposure space
// U_E = U_C (cluster-constant profiles) ∩ U_O (realizable profiles).
//
// Built-in variants:
//   PerUnitArm             S(i, A, H) = a_i
//   GlobalProportion       S(i, A, H) = (sum_j a_j) / N
//   NeighborhoodThreshold  S(i, A, H) = 1{ (sum_j h_ij a_j) / (sum_j h_ij) < threshold }
//   ClusterProportion      S(i, A, H) = (sum_{j in cluster(i)} a_j) / |cluster(i)|
//
// The first, second and fourth admit analytic enumerators and closed-form
// uniform samplers of the compatible set; NeighborhoodThreshold is brute force
// only and is gated by the enumeration budget. Proportion labels are exact
// rationals so deduplication and restriction matching never hit float ties.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "netbandit/network.hpp"
#include "netbandit/rational.hpp"
#include "netbandit/rng.hpp"

namespace netbandit {

struct SuperArm {
  std::vector<int> actions;

  SuperArm() = default;
  explicit SuperArm(std::vector<int> a) : actions(std::move(a)) {}

  std::size_t size() const { return actions.size(); }
  friend bool operator==(const SuperArm& x, const SuperArm& y) { return x.actions == y.actions; }
  friend bool operator<(const SuperArm& x, const SuperArm& y) { return x.actions < y.actions; }
};

struct ExposureSuperArm {
  std::vector<int> labels;  // indices into the codomain, one per unit

  ExposureSuperArm() = default;
  explicit ExposureSuperArm(std::vector<int> l) : labels(std::move(l)) {}

  std::size_t size() const { return labels.size(); }
  friend bool operator==(const ExposureSuperArm& x, const ExposureSuperArm& y) {
    return x.labels == y.labels;
  }
  friend bool operator<(const ExposureSuperArm& x, const ExposureSuperArm& y) {
    return x.labels < y.labels;
  }
};

enum class MappingVariant { PerUnitArm, GlobalProportion, NeighborhoodThreshold, ClusterProportion };

struct ExposureMapSpec {
  MappingVariant variant = MappingVariant::PerUnitArm;
  double threshold = 0.5;  // NeighborhoodThreshold only, in (0, 1]
  std::optional<std::vector<double>> restrict_labels;
};

inline constexpr std::size_t kDefaultEnumerationBudget = std::size_t(1) << 20;

// U_E with deterministic lexicographic order (by label indices) plus the
// cardinalities of the ambient sets for reporting. Counts saturate at 2^64-1.
class ExposureArmSpace {
 public:
  const std::vector<ExposureSuperArm>& arms() const { return arms_; }
  std::size_t size() const { return arms_.size(); }
  const ExposureSuperArm& arm(std::size_t idx) const { return arms_.at(idx); }
  std::optional<std::size_t> find(const ExposureSuperArm& s) const;

  std::uint64_t cluster_profile_count() const { return u_c_; }  // |U_C|
  std::uint64_t realizable_count() const { return u_o_; }       // |U_O|
  bool counts_saturated() const { return saturated_; }

 private:
  friend class ExposureContext;
  std::vector<ExposureSuperArm> arms_;
  std::uint64_t u_c_ = 0;
  std::uint64_t u_o_ = 0;
  bool saturated_ = false;
};

// Binds a mapping spec to (H, clustering, K) and owns the derived codomain and
// any sampler tables. Immutable after construction; sample_compatible draws
// from a caller-supplied stream, so concurrent use is safe.
class ExposureContext {
 public:
  ExposureContext(ExposureMapSpec spec, AdjacencyMatrix h, Clustering clustering, int num_arms,
                  std::size_t budget = kDefaultEnumerationBudget);

  std::size_t num_units() const { return clustering_.num_units(); }
  int num_arms() const { return k_; }
  std::size_t budget() const { return budget_; }
  const ExposureMapSpec& spec() const { return spec_; }
  const AdjacencyMatrix& network() const { return h_; }
  const Clustering& clustering() const { return clustering_; }

  // Ordered distinct labels the mapping can produce (d_s entries).
  const std::vector<Rational>& codomain() const { return codomain_; }
  std::size_t label_index(const Rational& label) const;

  Rational apply(std::size_t unit, const SuperArm& a) const;
  ExposureSuperArm exposure_profile(const SuperArm& a) const;

  // U_E, intersected with spec().restrict_labels when present. Throws when the
  // enumeration exceeds the budget or the result violates 2 <= |U_E|.
  ExposureArmSpace enumerate_exposure_space() const;

  // Exact compatible set {A : exposure_profile(A) = S}; budget-gated.
  std::vector<SuperArm> compatible_super_arms(const ExposureSuperArm& s) const;
  long double compatible_count(const ExposureSuperArm& s) const;

  // Uniform draw over the compatible set without enumerating it (except for
  // the brute-force variant, which draws from its cached set).
  SuperArm sample_compatible(const ExposureSuperArm& s, Rng& rng) const;
  void sample_compatible_into(const ExposureSuperArm& s, Rng& rng, SuperArm& out) const;

 private:
  void build_codomain();
  void build_sum_tables();
  void brute_force_sweep();
  int label_sum_from_rational(const Rational& r, std::size_t group_size) const;
  void sample_fixed_sum(std::size_t count, int target, Rng& rng,
                        const std::vector<std::size_t>& positions, SuperArm& out) const;
  void enumerate_fixed_sum(std::size_t count, int target,
                           const std::vector<std::size_t>& positions, SuperArm& scratch,
                           std::vector<SuperArm>& out, std::size_t budget) const;

  ExposureMapSpec spec_;
  AdjacencyMatrix h_;
  Clustering clustering_;
  int k_ = 2;
  std::size_t budget_ = kDefaultEnumerationBudget;

  std::vector<Rational> codomain_;
  std::vector<double> neighbor_sums_;  // NeighborhoodThreshold row sums

  // ways_[m][r] = #assignments of m units with arms in [0, K) summing to r.
  // Serves GlobalProportion (m up to N) and ClusterProportion (m up to the
  // largest cluster). long double holds the counts exactly at relevant scales.
  std::vector<std::vector<long double>> ways_;

  // Brute-force caches (NeighborhoodThreshold only, built when K^N <= budget).
  bool swept_ = false;
  std::map<std::vector<int>, std::vector<SuperArm>> compat_cache_;
  std::uint64_t swept_realizable_ = 0;
};

// True when every exposure arm in the space has a unique compatible super arm.
bool is_one_to_one(const ExposureContext& ctx, const ExposureArmSpace& space);

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b, bool& saturated);
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp, bool& saturated);

}  // namespace netbandit

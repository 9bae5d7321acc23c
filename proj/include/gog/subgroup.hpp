#ifndef GOG_SUBGROUP_HPP
#define GOG_SUBGROUP_HPP

#include <memory>
#include <optional>
#include <vector>

#include "gog/stallings.hpp"
#include "gog/word.hpp"

namespace gog {

struct MembershipResult {
  Cert cert = Cert::Unknown;
  // Product expression over the subgroup's generator list, valid when Yes.
  Formal witness;
};

/// A finitely generated subgroup of the ambient group, given by generator
/// words. Over a free base everything is answered exactly through the folded
/// graph; otherwise a bounded element closure is cached and queries outside
/// it come back Unknown. "unknown" is a first-class outcome here, never a
/// guess.
class SubgroupSpec {
 public:
  SubgroupSpec() = default;
  SubgroupSpec(const BasePresentation* base, std::vector<GWord> gens,
               long closure_budget = 5000);

  static SubgroupSpec whole_group(const BasePresentation& base);
  static SubgroupSpec trivial(const BasePresentation& base);

  const BasePresentation& base() const { return *base_; }
  const std::vector<GWord>& generators() const { return gens_; }
  bool valid() const { return base_ != nullptr; }

  MembershipResult membership(const GWord& w) const;
  Cert coset_eq(const GWord& a, const GWord& b) const;

  /// Shortlex-minimal canonical representative of the left coset w * H.
  GWord coset_rep(const GWord& w) const;

  /// Shortlex-minimal canonical representative of the double coset
  /// H * w * K; exact over a free base, enumerated when both finite.
  GWord double_coset_rep(const GWord& w, const SubgroupSpec& right) const;

  SubgroupSpec conjugate(const GWord& x) const; // x * H * x^-1
  SubgroupSpec intersect(const SubgroupSpec& other) const;
  /// Generators of H intersect (x * K * x^-1).
  SubgroupSpec intersect_conjugate(const SubgroupSpec& other, const GWord& x) const;

  /// Some element of H in the coset x * K (witness for double-coset
  /// equality); nullopt when the intersection is empty or unknown.
  std::optional<GWord> element_in_coset(const SubgroupSpec& k, const GWord& x) const;

  Cert contains_subgroup(const SubgroupSpec& other) const;
  Cert equals(const SubgroupSpec& other) const;

  /// nullopt = unknown within budget.
  std::optional<bool> is_finite() const;
  std::optional<long> order() const;          // finite case only
  std::optional<long> index_in_ambient() const;
  bool is_trivial_group() const;

  /// Free rank when the base is free (subgroups of free groups are free).
  std::optional<int> free_rank() const;

  /// This subgroup must be contained in `big`; returns [big : this] or
  /// nullopt when infinite/unknown.
  std::optional<long> index_in(const SubgroupSpec& big) const;
  /// Left-coset representatives of this in `big` (finite index required).
  std::vector<GWord> transversal_in(const SubgroupSpec& big) const;

  /// Element list for finite subgroups (canonical forms), when closed
  /// within budget.
  std::optional<std::vector<GWord>> elements() const;

  const FoldedGraph* folded() const; // free base only, else nullptr

  /// Canonical identity: sorted canonical generator words (used for
  /// deterministic serialization, not for equality testing).
  std::string display() const;

 private:
  const BasePresentation* base_ = nullptr;
  std::vector<GWord> gens_;
  long closure_budget_ = 5000;
  // Non-free cache: canonical element words and derivations over gens_.
  struct Closure {
    bool complete = false;
    std::vector<GWord> elems;
    std::vector<Formal> witness;
  };
  void ensure_folded() const;
  void ensure_closure() const;
  mutable std::shared_ptr<FoldedGraph> fg_;
  mutable std::shared_ptr<Closure> closure_;
};

} // namespace gog

#endif

#include "gog/subgroup.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace gog {

SubgroupSpec::SubgroupSpec(const BasePresentation* base, std::vector<GWord> gens,
                           long closure_budget)
    : base_(base), gens_(std::move(gens)), closure_budget_(closure_budget) {
  for (const GWord& g : gens_) {
    auto rep = base_->well_formed(g);
    if (!rep.ok) throw invalid_input("subgroup generator malformed: " + rep.rule);
    if (g.base != base_->base_vertex() || base_->end_vertex(g) != base_->base_vertex()) {
      throw invalid_input("subgroup generator is not a closed word at the base vertex");
    }
  }
}

SubgroupSpec SubgroupSpec::whole_group(const BasePresentation& base) {
  return SubgroupSpec(&base, base.group_generators());
}

SubgroupSpec SubgroupSpec::trivial(const BasePresentation& base) {
  return SubgroupSpec(&base, {});
}

void SubgroupSpec::ensure_folded() const {
  if (fg_ || !base_->is_free()) return;
  std::vector<Letters> ls;
  for (const GWord& g : gens_) ls.push_back(base_->letters(base_->normal_form(g)));
  fg_ = std::make_shared<FoldedGraph>(
      fold_subgroup(*base_, base_->base_vertex(), ls));
}

void SubgroupSpec::ensure_closure() const {
  if (closure_ || base_->is_free()) return;
  auto cl = std::make_shared<Closure>();
  // Bounded closure of the generated set under multiplication, with
  // canonical forms as identity keys and derivations as witnesses.
  std::map<std::string, size_t> seen;
  auto key = [&](const GWord& w) { return base_->to_string(w); };
  GWord id = base_->identity();
  cl->elems.push_back(id);
  cl->witness.push_back({});
  seen[key(id)] = 0;
  std::queue<size_t> frontier;
  frontier.push(0);
  long steps = 0;
  bool complete = true;
  std::vector<GWord> step_words;
  std::vector<int> step_sign;
  for (size_t i = 0; i < gens_.size(); ++i) {
    step_words.push_back(base_->canonical_form(gens_[i]));
    step_sign.push_back(static_cast<int>(i) + 1);
    step_words.push_back(base_->canonical_form(base_->inv(gens_[i])));
    step_sign.push_back(-(static_cast<int>(i) + 1));
  }
  while (!frontier.empty()) {
    size_t cur = frontier.front();
    frontier.pop();
    for (size_t k = 0; k < step_words.size(); ++k) {
      if (++steps > closure_budget_) {
        complete = false;
        break;
      }
      GWord nxt = base_->canonical_form(base_->mul(cl->elems[cur], step_words[k]));
      std::string kk = key(nxt);
      if (seen.count(kk)) continue;
      seen[kk] = cl->elems.size();
      Formal wit = cl->witness[cur];
      wit.push_back(step_sign[k]);
      cl->elems.push_back(nxt);
      cl->witness.push_back(reduce_formal(std::move(wit)));
      frontier.push(cl->elems.size() - 1);
    }
    if (!complete) break;
  }
  cl->complete = complete;
  closure_ = std::move(cl);
}

const FoldedGraph* SubgroupSpec::folded() const {
  ensure_folded();
  return fg_.get();
}

MembershipResult SubgroupSpec::membership(const GWord& w) const {
  MembershipResult r;
  if (w.base != base_->base_vertex() || base_->end_vertex(w) != base_->base_vertex()) {
    throw invalid_input("membership: word is not closed at the base vertex");
  }
  if (base_->is_free()) {
    ensure_folded();
    Letters ls = reduce_letters(base_->graph(), base_->letters(base_->normal_form(w)));
    auto wit = fg_->witness(ls);
    if (wit) {
      r.cert = Cert::Yes;
      r.witness = *wit;
    } else {
      r.cert = Cert::No;
    }
    return r;
  }
  ensure_closure();
  GWord cw = base_->canonical_form(w);
  for (size_t i = 0; i < closure_->elems.size(); ++i) {
    if (closure_->elems[i] == cw) {
      r.cert = Cert::Yes;
      r.witness = closure_->witness[i];
      return r;
    }
  }
  r.cert = closure_->complete ? Cert::No : Cert::Unknown;
  return r;
}

Cert SubgroupSpec::coset_eq(const GWord& a, const GWord& b) const {
  return membership(base_->mul(base_->inv(a), b)).cert;
}

GWord SubgroupSpec::coset_rep(const GWord& w) const {
  if (base_->is_free()) {
    ensure_folded();
    Letters ls = base_->letters(base_->normal_form(w));
    Letters rep = min_coset_rep(*fg_, ls);
    return base_->from_letters(rep);
  }
  ensure_closure();
  if (!closure_->complete) {
    throw budget_exhausted("coset_rep: non-free base with unbounded subgroup");
  }
  GWord best = base_->canonical_form(w);
  for (const GWord& h : closure_->elems) {
    GWord cand = base_->canonical_form(base_->mul(w, h));
    if (BasePresentation::shortlex_less(cand, best)) best = cand;
  }
  return best;
}

GWord SubgroupSpec::double_coset_rep(const GWord& w, const SubgroupSpec& right) const {
  if (base_->is_free()) {
    ensure_folded();
    right.ensure_folded();
    Letters ls = base_->letters(base_->normal_form(w));
    Letters rep = min_double_rep(*fg_, ls, *right.fg_);
    return base_->from_letters(rep);
  }
  ensure_closure();
  right.ensure_closure();
  if (!closure_->complete || !right.closure_->complete) {
    throw budget_exhausted("double_coset_rep: non-free base with unbounded subgroup");
  }
  GWord best = base_->canonical_form(w);
  bool first = true;
  for (const GWord& h : closure_->elems) {
    GWord hw = base_->mul(h, w);
    for (const GWord& k : right.closure_->elems) {
      GWord cand = base_->canonical_form(base_->mul(hw, k));
      if (first || BasePresentation::shortlex_less(cand, best)) {
        best = cand;
        first = false;
      }
    }
  }
  return best;
}

SubgroupSpec SubgroupSpec::conjugate(const GWord& x) const {
  std::vector<GWord> gens;
  for (const GWord& g : gens_) gens.push_back(base_->normal_form(base_->conj(x, g)));
  return SubgroupSpec(base_, std::move(gens), closure_budget_);
}

SubgroupSpec SubgroupSpec::intersect(const SubgroupSpec& other) const {
  if (base_->is_free()) {
    ensure_folded();
    other.ensure_folded();
    auto gens = intersect_subgroups(*fg_, *other.fg_);
    std::vector<GWord> out;
    for (const Letters& l : gens) out.push_back(base_->from_letters(l));
    return SubgroupSpec(base_, std::move(out), closure_budget_);
  }
  ensure_closure();
  other.ensure_closure();
  if (!closure_->complete || !other.closure_->complete) {
    throw budget_exhausted("intersect: non-free base with unbounded subgroup");
  }
  std::set<std::string> right;
  for (const GWord& k : other.closure_->elems) right.insert(base_->to_string(k));
  std::vector<GWord> out;
  for (const GWord& h : closure_->elems) {
    if (right.count(base_->to_string(h)) && !base_->is_identity(h)) out.push_back(h);
  }
  return SubgroupSpec(base_, std::move(out), closure_budget_);
}

SubgroupSpec SubgroupSpec::intersect_conjugate(const SubgroupSpec& other,
                                               const GWord& x) const {
  return intersect(other.conjugate(x));
}

std::optional<GWord> SubgroupSpec::element_in_coset(const SubgroupSpec& k,
                                                    const GWord& x) const {
  // Element of this in x * K.
  if (base_->is_free()) {
    ensure_folded();
    k.ensure_folded();
    // this cap (x K x^-1) x = elements of this in x K ... direct search:
    // u in this with x^-1 u in K  <=>  u in (xKx^-1) x ... we use the tube:
    // u in C*h with C = x K x^-1 and h = x.
    SubgroupSpec c = k.conjugate(x);
    c.ensure_folded();
    Letters h = base_->letters(base_->normal_form(x));
    auto found = find_in_subgroup_coset(*fg_, *c.fg_, h);
    if (!found) return std::nullopt;
    return base_->from_letters(*found);
  }
  ensure_closure();
  k.ensure_closure();
  if (!closure_->complete || !k.closure_->complete) {
    throw budget_exhausted("element_in_coset: non-free base with unbounded subgroup");
  }
  std::set<std::string> mine;
  for (const GWord& h : closure_->elems) mine.insert(base_->to_string(h));
  for (const GWord& kk : k.closure_->elems) {
    GWord cand = base_->canonical_form(base_->mul(x, kk));
    if (mine.count(base_->to_string(cand))) return cand;
  }
  return std::nullopt;
}

Cert SubgroupSpec::contains_subgroup(const SubgroupSpec& other) const {
  Cert acc = Cert::Yes;
  for (const GWord& g : other.gens_) {
    Cert c = membership(g).cert;
    if (c == Cert::No) return Cert::No;
    if (c == Cert::Unknown) acc = Cert::Unknown;
  }
  return acc;
}

Cert SubgroupSpec::equals(const SubgroupSpec& other) const {
  Cert a = contains_subgroup(other);
  if (a == Cert::No) return Cert::No;
  Cert b = other.contains_subgroup(*this);
  if (b == Cert::No) return Cert::No;
  if (a == Cert::Unknown || b == Cert::Unknown) return Cert::Unknown;
  return Cert::Yes;
}

std::optional<bool> SubgroupSpec::is_finite() const {
  if (base_->is_free()) {
    ensure_folded();
    return fg_->rank() == 0; // subgroups of free groups: finite = trivial
  }
  ensure_closure();
  if (closure_->complete) return true;
  return std::nullopt;
}

std::optional<long> SubgroupSpec::order() const {
  if (base_->is_free()) {
    ensure_folded();
    if (fg_->rank() == 0) return 1;
    return std::nullopt;
  }
  ensure_closure();
  if (closure_->complete) return static_cast<long>(closure_->elems.size());
  return std::nullopt;
}

bool SubgroupSpec::is_trivial_group() const {
  auto o = order();
  return o && *o == 1;
}

std::optional<long> SubgroupSpec::index_in_ambient() const {
  if (base_->is_free()) {
    ensure_folded();
    return fg_->index_in_ambient();
  }
  // Finite subgroup of an infinite ambient group has infinite index; the
  // only finite ambients here are single-vertex base graphs.
  throw budget_exhausted("index_in_ambient: non-free base");
}

std::optional<int> SubgroupSpec::free_rank() const {
  if (!base_->is_free()) return std::nullopt;
  ensure_folded();
  return fg_->rank();
}

std::optional<std::vector<GWord>> SubgroupSpec::elements() const {
  if (base_->is_free()) {
    ensure_folded();
    if (fg_->rank() == 0) return std::vector<GWord>{base_->identity()};
    return std::nullopt;
  }
  ensure_closure();
  if (!closure_->complete) return std::nullopt;
  return closure_->elems;
}

namespace {

// Wedge presentation of a free group of the given rank, used to re-fold
// subgroups rewritten over a basis.
std::shared_ptr<BasePresentation> wedge_base(int rank) {
  GraphOfGroups g;
  int v = g.add_vertex(FiniteGroup(), "w");
  for (int i = 0; i < rank; ++i) {
    FiniteGroup t;
    g.add_edge_pair(v, v, t, Morphism::identity(t), Morphism::identity(t),
                    "b" + std::to_string(i));
  }
  return std::make_shared<BasePresentation>(std::move(g), 0);
}

Letters formal_to_wedge(const Formal& f) {
  Letters out;
  for (int x : f) {
    int k = std::abs(x) - 1;
    out.push_back(x > 0 ? 2 * k : 2 * k + 1);
  }
  return out;
}

} // namespace

std::optional<long> SubgroupSpec::index_in(const SubgroupSpec& big) const {
  if (!base_->is_free()) {
    auto so = order();
    auto bo = big.order();
    if (so && bo) return *bo / *so;
    throw budget_exhausted("index_in: non-free base with unbounded subgroup");
  }
  ensure_folded();
  big.ensure_folded();
  int r = big.fg_->rank();
  if (r == 0) return fg_->rank() == 0 ? std::optional<long>(1) : std::nullopt;
  auto wedge = wedge_base(r);
  std::vector<Letters> rewritten;
  for (const GWord& g : gens_) {
    Letters ls = base_->letters(base_->normal_form(g));
    auto sp = big.fg_->spell_in_basis(ls);
    if (!sp) throw invalid_input("index_in: subgroup not contained in the bigger one");
    rewritten.push_back(formal_to_wedge(*sp));
  }
  FoldedGraph sub = fold_subgroup(*wedge, 0, rewritten);
  return sub.index_in_ambient();
}

std::vector<GWord> SubgroupSpec::transversal_in(const SubgroupSpec& big) const {
  if (!base_->is_free()) {
    auto so = elements();
    auto bo = big.elements();
    if (!so || !bo) throw budget_exhausted("transversal_in: non-free base");
    // Greedy: pick coset representatives by canonical form.
    std::vector<GWord> reps;
    std::set<std::string> covered;
    for (const GWord& b : *bo) {
      GWord rep = coset_rep(b);
      std::string k = base_->to_string(rep);
      if (!covered.count(k)) {
        covered.insert(k);
        reps.push_back(rep);
      }
    }
    std::sort(reps.begin(), reps.end(), BasePresentation::shortlex_less);
    return reps;
  }
  ensure_folded();
  big.ensure_folded();
  int r = big.fg_->rank();
  if (r == 0) return {base_->identity()};
  auto wedge = wedge_base(r);
  std::vector<Letters> rewritten;
  for (const GWord& g : gens_) {
    Letters ls = base_->letters(base_->normal_form(g));
    auto sp = big.fg_->spell_in_basis(ls);
    if (!sp) throw invalid_input("transversal_in: not a subgroup");
    rewritten.push_back(formal_to_wedge(*sp));
  }
  FoldedGraph sub = fold_subgroup(*wedge, 0, rewritten);
  if (!sub.complete()) {
    throw invalid_input("transversal_in: infinite index");
  }
  auto basis = big.fg_->basis();
  std::vector<GWord> out;
  for (const Letters& t : sub.coset_transversal()) {
    // Substitute basis words for wedge letters.
    Letters full;
    for (int letter : t) {
      int pair = letter / 2;
      bool fwd = letter % 2 == 0;
      Letters b = basis[pair];
      if (!fwd) b = invert_letters(base_->graph(), b);
      full.insert(full.end(), b.begin(), b.end());
    }
    out.push_back(base_->from_letters(reduce_letters(base_->graph(), full)));
  }
  std::sort(out.begin(), out.end(), BasePresentation::shortlex_less);
  return out;
}

std::string SubgroupSpec::display() const {
  std::vector<std::string> parts;
  for (const GWord& g : gens_) parts.push_back(base_->to_string(base_->canonical_form(g)));
  std::sort(parts.begin(), parts.end());
  std::ostringstream os;
  os << "<";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) os << ",";
    os << parts[i];
  }
  os << ">";
  return os.str();
}

} // namespace gog

#ifndef GLCM_ALGEBRA_HPP_
#define GLCM_ALGEBRA_HPP_

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "group.hpp"

namespace glcm {

/// Cap on the atom count a d-closure run may produce. Group orders are
/// bounded by kMaxGroupOrder so this can only trip on misuse, but the
/// failure mode is structured rather than an allocation blowup.
inline constexpr int kMaxAtoms = 1 << 16;

/// A left-translation-invariant Boolean algebra of subsets of a finite
/// group, represented by its atom partition. Block-unions of the atoms are
/// exactly the members of the algebra.
struct GAlgebra {
  GroupPtr group;
  std::vector<GSubset> atoms;
  std::vector<int> atom_of;  // element -> atom index

  int n_atoms() const { return static_cast<int>(atoms.size()); }

  bool is_member(GSubset const& u) const {
    Bits covered(group->order());
    for (auto const& a : atoms) {
      if (a.bits.intersects(u.bits)) {
        if (!a.bits.is_subset_of(u.bits)) return false;
        covered |= a.bits;
      }
    }
    return covered == u.bits;
  }

  /// Set of atoms contained in u, assuming u is a block-union.
  Bits atoms_inside(GSubset const& u) const {
    Bits out(n_atoms());
    for (int i = 0; i < n_atoms(); ++i) {
      if (atoms[i].bits.is_subset_of(u.bits)) out.set(i);
    }
    return out;
  }

  /// Atoms with nonempty intersection with u (no block-union assumption).
  Bits atoms_meeting(GSubset const& u) const {
    Bits out(n_atoms());
    for (int i = 0; i < n_atoms(); ++i) {
      if (atoms[i].bits.intersects(u.bits)) out.set(i);
    }
    return out;
  }

  GSubset union_of_atoms(Bits const& atom_set) const {
    Bits out(group->order());
    atom_set.for_each([&](int i) { out |= atoms[i].bits; });
    return GSubset(group, out);
  }
};

namespace detail {

/// Partition of the carrier by equality of the signatures x -> x S^{-1}
/// across all seeds. Membership of x in a left translate gS is equivalent
/// to g in x S^{-1}, so equal signatures mean "lies in exactly the same
/// translates", and the resulting partition is automatically left-invariant.
inline std::vector<int> refine_by_seeds(FiniteGroup const& g, std::vector<Bits> const& seeds) {
  int n = g.order();
  std::vector<int> cls(static_cast<size_t>(n), 0);
  int n_classes = 1;
  for (auto const& seed : seeds) {
    // precompute S^{-1}
    std::vector<int> sinv;
    Bits tmp(n);
    for (int s = 0; s < n; ++s) {
      if (seed.test(s)) tmp.set(g.inv(s));
    }
    sinv = tmp.to_vector();

    std::map<std::pair<int, Bits>, int> next_index;
    std::vector<int> next(static_cast<size_t>(n));
    for (int x = 0; x < n; ++x) {
      Bits sig(n);
      for (int t : sinv) sig.set(g.mul(x, t));
      auto key = std::make_pair(cls[x], sig);
      auto it = next_index.find(key);
      if (it == next_index.end()) {
        it = next_index.emplace(std::move(key), static_cast<int>(next_index.size())).first;
      }
      next[x] = it->second;
    }
    cls = std::move(next);
    n_classes = static_cast<int>(next_index.size());
    if (n_classes == n) break;  // singletons, no further refinement possible
  }
  (void)n_classes;
  return cls;
}

inline GAlgebra algebra_from_classes(GroupPtr const& group, std::vector<int> const& cls) {
  int n = group->order();
  int k = *std::max_element(cls.begin(), cls.end()) + 1;
  // renumber atoms by their least element for a canonical order
  std::vector<int> least(static_cast<size_t>(k), n);
  for (int x = 0; x < n; ++x) least[cls[x]] = std::min(least[cls[x]], x);
  std::vector<int> order(static_cast<size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return least[a] < least[b]; });
  std::vector<int> rank(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) rank[order[i]] = i;

  GAlgebra alg;
  alg.group = group;
  alg.atom_of.resize(static_cast<size_t>(n));
  std::vector<Bits> blocks(static_cast<size_t>(k), Bits(n));
  for (int x = 0; x < n; ++x) {
    int a = rank[cls[x]];
    alg.atom_of[x] = a;
    blocks[a].set(x);
  }
  alg.atoms.reserve(static_cast<size_t>(k));
  for (auto& b : blocks) alg.atoms.emplace_back(group, std::move(b));
  return alg;
}

}  // namespace detail

/// Smallest left-invariant partition all of whose block-unions contain the
/// seeds and their left translates; computed as the common refinement of the
/// translate-membership signatures.
inline GAlgebra generate_algebra(GroupPtr const& group, std::vector<GSubset> const& seeds) {
  if (seeds.empty()) throw std::invalid_argument("generate_algebra: need at least one seed");
  std::vector<Bits> seed_bits;
  for (auto const& s : seeds) {
    if (s.group.get() != group.get()) {
      throw std::invalid_argument("generate_algebra: seed over a different group");
    }
    seed_bits.push_back(s.bits);
  }
  return detail::algebra_from_classes(group, detail::refine_by_seeds(*group, seed_bits));
}

inline bool is_left_invariant(GAlgebra const& alg) {
  for (int g = 0; g < alg.group->order(); ++g) {
    for (auto const& a : alg.atoms) {
      if (!alg.is_member(left_translate(g, a))) return false;
    }
  }
  return true;
}

/// d_q(U) = {g : g^{-1} U contains the atom of q} = {g : g A_q is a subset
/// of U}. U must be a block-union of the algebra.
inline GSubset d_operator(GAlgebra const& alg, int q, GSubset const& u) {
  if (q < 0 || q >= alg.n_atoms()) throw std::invalid_argument("d_operator: atom index out of range");
  if (!alg.is_member(u)) throw std::invalid_argument("d_operator: U is not a member of the algebra");
  int n = alg.group->order();
  Bits out(n);
  auto const& grp = *alg.group;
  auto const& aq = alg.atoms[static_cast<size_t>(q)].bits;
  for (int g = 0; g < n; ++g) {
    bool inside = true;
    aq.for_each([&](int x) { inside = inside && u.bits.test(grp.mul(g, x)); });
    if (inside) out.set(g);
  }
  return GSubset(alg.group, out);
}

namespace detail {

/// R_{A,B} = {g : B contained in gA}. An algebra is d-closed iff every such
/// set is a block-union: R_{A,B}^c = d_{q_A}(B^c), and d of a general
/// block-union decomposes through the atom patterns of the translates gA.
inline std::vector<Bits> translate_pattern_sets(GAlgebra const& alg) {
  int n = alg.group->order();
  int k = alg.n_atoms();
  auto const& grp = *alg.group;
  std::vector<Bits> r(static_cast<size_t>(k) * k, Bits(n));
  Bits ga(n);
  for (int ai = 0; ai < k; ++ai) {
    auto const& a = alg.atoms[static_cast<size_t>(ai)].bits;
    for (int g = 0; g < n; ++g) {
      ga.clear();
      a.for_each([&](int x) { ga.set(grp.mul(g, x)); });
      for (int bi = 0; bi < k; ++bi) {
        if (alg.atoms[static_cast<size_t>(bi)].bits.is_subset_of(ga)) {
          r[static_cast<size_t>(ai) * k + bi].set(g);
        }
      }
    }
  }
  return r;
}

}  // namespace detail

inline bool is_d_closed(GAlgebra const& alg) {
  auto r = detail::translate_pattern_sets(alg);
  for (auto const& s : r) {
    if (s.none()) continue;
    if (!alg.is_member(GSubset(alg.group, s))) return false;
  }
  return true;
}

/// Least d-closed refinement of the algebra: repeatedly adjoin the sets
/// {g : B contained in gA} for atom pairs (A, B) and regenerate until the
/// partition is a fixpoint.
inline GAlgebra d_closure(GAlgebra const& alg) {
  GAlgebra current = alg;
  for (;;) {
    auto r = detail::translate_pattern_sets(current);
    std::vector<GSubset> seeds;
    seeds.reserve(current.atoms.size() + r.size());
    for (auto const& a : current.atoms) seeds.push_back(a);
    std::unordered_map<Bits, bool, BitsHash> seen;
    bool all_members = true;
    for (auto const& s : r) {
      if (s.none()) continue;
      if (!seen.emplace(s, true).second) continue;
      GSubset gs(current.group, s);
      if (!current.is_member(gs)) {
        all_members = false;
        seeds.push_back(gs);
      }
    }
    if (all_members) return current;
    GAlgebra next = generate_algebra(current.group, seeds);
    if (next.n_atoms() > kMaxAtoms) {
      throw std::runtime_error("d_closure: atom budget exceeded (" +
                               std::to_string(next.n_atoms()) + " atoms)");
    }
    if (next.n_atoms() == current.n_atoms()) return next;
    current = std::move(next);
  }
}

// ---------------------------------------------------------------------
// Stone semigroup of a d-closed algebra
// ---------------------------------------------------------------------

/// The semigroup on the atoms of a d-closed algebra: U lies in p*q iff
/// d_q(U) lies in p. For a d-closed algebra this is total, associative,
/// extends the group action through `embed`, and is computed here via
/// representatives after the coherence of the action has been verified.
struct StoneSemigroup {
  GAlgebra algebra;
  std::vector<int> op;          // k*k table
  std::vector<int> embed;       // element -> atom index
  std::vector<Bits> filtration; // filtration[i] = atoms inside X^{i+1}

  int n_atoms() const { return algebra.n_atoms(); }
  int at(int p, int q) const { return op[static_cast<size_t>(p) * n_atoms() + q]; }
  int level_count() const { return static_cast<int>(filtration.size()); }
};

inline StoneSemigroup stone_semigroup(GAlgebra const& alg, std::vector<GSubset> const& x_powers) {
  if (!is_d_closed(alg)) {
    throw std::invalid_argument("stone_semigroup: algebra is not d-closed");
  }
  int n = alg.group->order();
  int k = alg.n_atoms();
  auto const& grp = *alg.group;

  // Coherence of the translation action: every element of an atom moves
  // every atom into the same image atom. Both directions follow from
  // d-closedness; violations mean the input partition was not d-closed.
  std::vector<int> rep(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) rep[i] = alg.atoms[static_cast<size_t>(i)].bits.first();
  for (int q = 0; q < k; ++q) {
    auto const& aq = alg.atoms[static_cast<size_t>(q)].bits;
    for (int g = 0; g < n; ++g) {
      int target = alg.atom_of[static_cast<size_t>(grp.mul(g, rep[q]))];
      bool ok = true;
      aq.for_each([&](int x) { ok = ok && alg.atom_of[static_cast<size_t>(grp.mul(g, x))] == target; });
      if (!ok) {
        throw std::invalid_argument("stone_semigroup: atom image splits; algebra not d-closed");
      }
      if (alg.atom_of[static_cast<size_t>(g)] != alg.atom_of[static_cast<size_t>(rep[alg.atom_of[static_cast<size_t>(g)]])]) {
        throw std::logic_error("stone_semigroup: inconsistent atom_of");
      }
    }
    // left-argument coherence: elements of one atom induce the same map
    for (int c = 0; c < k; ++c) {
      int expect = alg.atom_of[static_cast<size_t>(grp.mul(rep[c], rep[q]))];
      bool ok = true;
      alg.atoms[static_cast<size_t>(c)].bits.for_each(
          [&](int g) { ok = ok && alg.atom_of[static_cast<size_t>(grp.mul(g, rep[q]))] == expect; });
      if (!ok) {
        throw std::invalid_argument("stone_semigroup: atom action not constant on atoms");
      }
    }
  }

  StoneSemigroup s;
  s.algebra = alg;
  s.op.resize(static_cast<size_t>(k) * k);
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q)
      s.op[static_cast<size_t>(p) * k + q] = alg.atom_of[static_cast<size_t>(grp.mul(rep[p], rep[q]))];

  // cross-check against the defining formula on atoms: p*q is the unique
  // atom B with A_p inside d_q(B)
  for (int q = 0; q < k; ++q) {
    for (int b = 0; b < k; ++b) {
      GSubset dqb = d_operator(alg, q, alg.atoms[static_cast<size_t>(b)]);
      for (int p = 0; p < k; ++p) {
        bool pin = alg.atoms[static_cast<size_t>(p)].bits.is_subset_of(dqb.bits);
        if (pin != (s.at(p, q) == b)) {
          throw std::logic_error("stone_semigroup: representative product disagrees with d-formula");
        }
      }
    }
  }

  // associativity (exhaustive up to 512 atoms, sampled above)
  auto assoc = [&](int a, int b, int c) {
    if (s.at(s.at(a, b), c) != s.at(a, s.at(b, c))) {
      throw std::logic_error("stone_semigroup: operation is not associative");
    }
  };
  if (k <= 512) {
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) assoc(a, b, c);
  } else {
    std::mt19937_64 rng(0xda942042e4dd58b5ull);
    std::uniform_int_distribution<int> d(0, k - 1);
    for (long i = 0; i < 100000; ++i) assoc(d(rng), d(rng), d(rng));
  }

  s.embed.assign(alg.atom_of.begin(), alg.atom_of.end());
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      if (s.at(s.embed[g], s.embed[h]) != s.embed[static_cast<size_t>(grp.mul(g, h))]) {
        throw std::logic_error("stone_semigroup: operation does not extend the group law");
      }
    }
  }

  s.filtration.reserve(x_powers.size());
  for (auto const& xp : x_powers) {
    if (!alg.is_member(xp)) {
      throw std::invalid_argument("stone_semigroup: a power of X is not a member of the algebra");
    }
    s.filtration.push_back(alg.atoms_inside(xp));
  }
  for (size_t i = 1; i < s.filtration.size(); ++i) {
    if (!s.filtration[i - 1].is_subset_of(s.filtration[i])) {
      throw std::logic_error("stone_semigroup: filtration is not upward closed");
    }
  }
  return s;
}

/// Algebra dump: atoms as sorted element lists.
inline nlohmann::json algebra_dump(GAlgebra const& alg) {
  nlohmann::json atoms = nlohmann::json::array();
  for (auto const& a : alg.atoms) atoms.push_back(a.bits.to_vector());
  return nlohmann::json{{"atoms", atoms}};
}

/// Dump the operation table as a text matrix, one row per atom.
inline std::string dump_op_table(StoneSemigroup const& s) {
  std::ostringstream os;
  int k = s.n_atoms();
  for (int p = 0; p < k; ++p) {
    for (int q = 0; q < k; ++q) {
      if (q) os << ' ';
      os << s.at(p, q);
    }
    os << '\n';
  }
  return os.str();
}

/// The assignment p -> l_p with l_p(q) = p*q, reported with injectivity and
/// closure-under-composition of the image.
struct TranslationRepresentation {
  std::vector<std::vector<int>> maps;  // maps[p][q] = p*q
  bool injective = false;
  bool image_closed_under_composition = false;
};

inline TranslationRepresentation left_translation_representation(StoneSemigroup const& s) {
  TranslationRepresentation out;
  int k = s.n_atoms();
  out.maps.resize(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(k)));
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q) out.maps[static_cast<size_t>(p)][static_cast<size_t>(q)] = s.at(p, q);
  std::map<std::vector<int>, int> seen;
  out.injective = true;
  for (int p = 0; p < k; ++p) {
    if (!seen.emplace(out.maps[static_cast<size_t>(p)], p).second) out.injective = false;
  }
  out.image_closed_under_composition = true;
  for (int p = 0; p < k && out.image_closed_under_composition; ++p) {
    for (int q = 0; q < k; ++q) {
      std::vector<int> comp(static_cast<size_t>(k));
      for (int r = 0; r < k; ++r) {
        comp[static_cast<size_t>(r)] =
            out.maps[static_cast<size_t>(p)][static_cast<size_t>(out.maps[static_cast<size_t>(q)][static_cast<size_t>(r)])];
      }
      if (seen.find(comp) == seen.end()) {
        out.image_closed_under_composition = false;
        break;
      }
    }
  }
  return out;
}

}  // namespace glcm

#endif  // GLCM_ALGEBRA_HPP_

#ifndef GLCM_ELLIS_HPP_
#define GLCM_ELLIS_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "algebra.hpp"
#include "group.hpp"

namespace glcm {

/// A finite semigroup given by its operation table. `g_images` marks the
/// elements that are images of the acting group (needed for the circle
/// operation and the tau-topology); Stone semigroups tag every atom, raw
/// fixtures such as Rees matrix semigroups carry no tags.
struct FiniteSemigroup {
  int order = 0;
  std::vector<int> op;
  std::optional<Bits> g_images;
  std::vector<Bits> filtration;  // optional: filtration[i] = elements at level i+1
  std::vector<std::string> labels;

  int at(int a, int b) const { return op[static_cast<size_t>(a) * order + b]; }
  bool tagged(int a) const { return g_images && g_images->test(a); }

  void verify_associative() const {
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c)
          if (at(at(a, b), c) != at(a, at(b, c)))
            throw std::invalid_argument("FiniteSemigroup: not associative");
  }

  std::string label(int a) const {
    return labels.empty() ? std::to_string(a) : labels[static_cast<size_t>(a)];
  }
};

inline FiniteSemigroup semigroup_of(StoneSemigroup const& s) {
  FiniteSemigroup out;
  out.order = s.n_atoms();
  out.op = s.op;
  Bits tags(out.order);
  for (int v : s.embed) tags.set(v);  // every atom contains group elements
  out.g_images = tags;
  out.filtration = s.filtration;
  return out;
}

/// Rees matrix semigroup M(A; I, Lambda; P): elements (i, a, l) with
/// (i,a,l)(j,b,m) = (i, a p[l][j] b, m). Its minimal left ideals are the
/// sets I x A x {l}, with |I| idempotents each and all groups isomorphic
/// to A.
inline FiniteSemigroup rees_matrix_semigroup(GroupPtr const& a, int n_i, int n_lambda,
                                             std::vector<std::vector<int>> const& sandwich) {
  if (static_cast<int>(sandwich.size()) != n_lambda) {
    throw std::invalid_argument("rees_matrix_semigroup: sandwich matrix has wrong row count");
  }
  for (auto const& row : sandwich) {
    if (static_cast<int>(row.size()) != n_i) {
      throw std::invalid_argument("rees_matrix_semigroup: sandwich matrix has wrong column count");
    }
  }
  int na = a->order();
  int n = n_i * na * n_lambda;
  auto idx = [&](int i, int x, int l) { return (i * na + x) * n_lambda + l; };
  FiniteSemigroup s;
  s.order = n;
  s.op.resize(static_cast<size_t>(n) * n);
  s.labels.resize(static_cast<size_t>(n));
  for (int i = 0; i < n_i; ++i)
    for (int x = 0; x < na; ++x)
      for (int l = 0; l < n_lambda; ++l) {
        s.labels[static_cast<size_t>(idx(i, x, l))] =
            "(" + std::to_string(i) + "," + a->label(x) + "," + std::to_string(l) + ")";
        for (int j = 0; j < n_i; ++j)
          for (int y = 0; y < na; ++y)
            for (int m = 0; m < n_lambda; ++m) {
              int prod = a->mul(a->mul(x, sandwich[l][j]), y);
              s.op[static_cast<size_t>(idx(i, x, l)) * n + idx(j, y, m)] = idx(i, prod, m);
            }
      }
  return s;
}

/// Full transformation monoid on `points` points, with (f g)(x) = f(g(x)).
inline FiniteSemigroup full_transformation_monoid(int points) {
  if (points < 1 || points > 5) {
    throw std::invalid_argument("full_transformation_monoid: supported for 1..5 points");
  }
  int n = 1;
  for (int i = 0; i < points; ++i) n *= points;
  auto digit = [&](int f, int x) {
    for (int i = 0; i < x; ++i) f /= points;
    return f % points;
  };
  FiniteSemigroup s;
  s.order = n;
  s.op.resize(static_cast<size_t>(n) * n);
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g) {
      int comp = 0, pow = 1;
      for (int x = 0; x < points; ++x) {
        comp += digit(f, digit(g, x)) * pow;
        pow *= points;
      }
      s.op[static_cast<size_t>(f) * n + g] = comp;
    }
  return s;
}

inline FiniteSemigroup semigroup_of_group(GroupPtr const& g) {
  FiniteSemigroup s;
  s.order = g->order();
  s.op.resize(static_cast<size_t>(s.order) * s.order);
  for (int a = 0; a < s.order; ++a)
    for (int b = 0; b < s.order; ++b) s.op[static_cast<size_t>(a) * s.order + b] = g->mul(a, b);
  return s;
}

// ---------------------------------------------------------------------
// Minimal left ideals and Ellis groups
// ---------------------------------------------------------------------

/// Principal left ideal S^1 s = {s} union S s.
inline Bits principal_left_ideal(FiniteSemigroup const& s, int x) {
  Bits out(s.order);
  out.set(x);
  for (int t = 0; t < s.order; ++t) out.set(s.at(t, x));
  return out;
}

inline bool is_left_ideal(FiniteSemigroup const& s, Bits const& m) {
  bool ok = true;
  m.for_each([&](int x) {
    for (int t = 0; t < s.order && ok; ++t) ok = m.test(s.at(t, x));
  });
  return ok && m.any();
}

/// All minimal left ideals. A left ideal is minimal iff the principal ideal
/// of each of its members recovers the whole set, so minimality of every
/// returned ideal is verified by definition.
inline std::vector<Bits> minimal_left_ideals(FiniteSemigroup const& s) {
  std::vector<Bits> principals(static_cast<size_t>(s.order), Bits(0));
  for (int x = 0; x < s.order; ++x) principals[static_cast<size_t>(x)] = principal_left_ideal(s, x);
  std::set<Bits> out;
  for (int x = 0; x < s.order; ++x) {
    auto const& m = principals[static_cast<size_t>(x)];
    bool minimal = true;
    m.for_each([&](int t) {
      if (minimal && principals[static_cast<size_t>(t)] != m) minimal = false;
    });
    if (minimal) out.insert(m);
  }
  std::vector<Bits> v(out.begin(), out.end());
  for (auto const& m : v) {
    if (!is_left_ideal(s, m)) throw std::logic_error("minimal_left_ideals: produced a non-ideal");
  }
  return v;
}

/// A group component u M of a minimal left ideal, with its induced
/// operation repackaged as a verified FiniteGroup over local indices.
struct GroupComponent {
  int idempotent = -1;
  std::vector<int> elems;  // global indices, elems[local] = global
  GroupPtr table;          // verified group on local indices
  std::vector<int> local_of_global;

  int local(int global) const { return local_of_global[static_cast<size_t>(global)]; }
};

inline std::vector<int> idempotents_in(FiniteSemigroup const& s, Bits const& m) {
  std::vector<int> out;
  m.for_each([&](int u) {
    if (s.at(u, u) == u) out.push_back(u);
  });
  return out;
}

/// J(M) plus the group components u M for u in J(M); verifies the group
/// axioms for every component and that M is their disjoint union.
inline std::pair<std::vector<int>, std::vector<GroupComponent>> idempotents_and_groups(
    FiniteSemigroup const& s, Bits const& m) {
  if (!is_left_ideal(s, m)) throw std::invalid_argument("idempotents_and_groups: M is not a left ideal");
  std::vector<int> j = idempotents_in(s, m);
  if (j.empty()) throw std::logic_error("idempotents_and_groups: minimal ideal without idempotents");
  std::vector<GroupComponent> comps;
  Bits covered(s.order);
  for (int u : j) {
    GroupComponent c;
    c.idempotent = u;
    Bits members(s.order);
    m.for_each([&](int x) { members.set(s.at(u, x)); });
    c.elems = members.to_vector();
    c.local_of_global.assign(static_cast<size_t>(s.order), -1);
    for (size_t i = 0; i < c.elems.size(); ++i) c.local_of_global[static_cast<size_t>(c.elems[i])] = static_cast<int>(i);
    int k = static_cast<int>(c.elems.size());
    std::vector<std::vector<int>> table(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(k)));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        int prod = s.at(c.elems[static_cast<size_t>(a)], c.elems[static_cast<size_t>(b)]);
        int local = c.local_of_global[static_cast<size_t>(prod)];
        if (local < 0) throw std::logic_error("idempotents_and_groups: component not closed");
        table[static_cast<size_t>(a)][static_cast<size_t>(b)] = local;
      }
    // FiniteGroup::from_table re-verifies associativity, identity, inverses
    c.table = FiniteGroup::from_table(table);
    if (c.elems[static_cast<size_t>(c.table->identity())] != u) {
      throw std::logic_error("idempotents_and_groups: identity of u M is not u");
    }
    for (int x : c.elems) {
      if (covered.test(x)) throw std::logic_error("idempotents_and_groups: components overlap");
      covered.set(x);
    }
    comps.push_back(std::move(c));
  }
  if (!(covered == m)) {
    throw std::logic_error("idempotents_and_groups: components do not cover the ideal");
  }
  return {j, comps};
}

namespace detail {

/// Tries phi as a map source -> target on local indices; returns true if it
/// is a verified isomorphism.
inline bool verify_group_iso(GroupComponent const& a, GroupComponent const& b,
                             std::vector<int> const& phi) {
  int k = a.table->order();
  if (b.table->order() != k) return false;
  std::vector<bool> hit(static_cast<size_t>(k), false);
  for (int x = 0; x < k; ++x) {
    if (phi[static_cast<size_t>(x)] < 0 || phi[static_cast<size_t>(x)] >= k) return false;
    if (hit[static_cast<size_t>(phi[static_cast<size_t>(x)])]) return false;
    hit[static_cast<size_t>(phi[static_cast<size_t>(x)])] = true;
  }
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (phi[static_cast<size_t>(a.table->mul(x, y))] !=
          b.table->mul(phi[static_cast<size_t>(x)], phi[static_cast<size_t>(y)]))
        return false;
  return true;
}

/// Backtracking isomorphism search on generator images, pruned by element
/// orders. Groups handled here have order <= 64.
inline std::optional<std::vector<int>> brute_force_group_iso(GroupPtr const& ga,
                                                             GroupPtr const& gb) {
  int k = ga->order();
  if (gb->order() != k) return std::nullopt;
  auto order_of = [](GroupPtr const& g, int x) {
    int e = g->identity(), cur = x, o = 1;
    while (cur != e) {
      cur = g->mul(cur, x);
      ++o;
    }
    return o;
  };
  std::vector<int> oa(static_cast<size_t>(k)), ob(static_cast<size_t>(k));
  for (int x = 0; x < k; ++x) {
    oa[static_cast<size_t>(x)] = order_of(ga, x);
    ob[static_cast<size_t>(x)] = order_of(gb, x);
  }
  {
    auto sa = oa, sb = ob;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }

  // minimal generating sequence of a by greedy closure
  std::vector<int> gens;
  {
    Bits closed(k);
    closed.set(ga->identity());
    int covered = 1;
    while (covered < k) {
      int pick = -1;
      for (int x = 0; x < k; ++x) {
        if (!closed.test(x)) {
          pick = x;
          break;
        }
      }
      gens.push_back(pick);
      // close under current generators
      std::vector<int> frontier = closed.to_vector();
      frontier.push_back(pick);
      closed.set(pick);
      for (size_t head = 0; head < frontier.size(); ++head) {
        for (int g : gens) {
          int nx = ga->mul(frontier[head], g);
          if (!closed.test(nx)) {
            closed.set(nx);
            frontier.push_back(nx);
          }
          nx = ga->mul(g, frontier[head]);
          if (!closed.test(nx)) {
            closed.set(nx);
            frontier.push_back(nx);
          }
        }
      }
      covered = closed.count();
    }
  }

  std::vector<int> phi(static_cast<size_t>(k), -1);
  std::vector<bool> used(static_cast<size_t>(k), false);
  phi[static_cast<size_t>(ga->identity())] = gb->identity();
  used[static_cast<size_t>(gb->identity())] = true;

  // words in the generators expressed as: every element as (prev elem, gen)
  // rebuilt per candidate assignment via closure
  std::function<bool(size_t)> assign = [&](size_t gi) -> bool {
    if (gi == gens.size()) return true;
    int g = gens[gi];
    for (int img = 0; img < k; ++img) {
      if (used[static_cast<size_t>(img)] || ob[static_cast<size_t>(img)] != oa[static_cast<size_t>(g)]) continue;
      // tentatively map the closure of previous assignment + g
      auto phi_saved = phi;
      auto used_saved = used;
      phi[static_cast<size_t>(g)] = img;
      used[static_cast<size_t>(img)] = true;
      bool consistent = true;
      // propagate: repeatedly define phi(x*y) = phi(x)*phi(y) where known
      bool changed = true;
      while (changed && consistent) {
        changed = false;
        for (int x = 0; x < k && consistent; ++x) {
          if (phi[static_cast<size_t>(x)] < 0) continue;
          for (int y = 0; y < k; ++y) {
            if (phi[static_cast<size_t>(y)] < 0) continue;
            int xy = ga->mul(x, y);
            int im = gb->mul(phi[static_cast<size_t>(x)], phi[static_cast<size_t>(y)]);
            if (phi[static_cast<size_t>(xy)] < 0) {
              if (used[static_cast<size_t>(im)]) {
                consistent = false;
                break;
              }
              phi[static_cast<size_t>(xy)] = im;
              used[static_cast<size_t>(im)] = true;
              changed = true;
            } else if (phi[static_cast<size_t>(xy)] != im) {
              consistent = false;
              break;
            }
          }
        }
      }
      if (consistent && assign(gi + 1)) return true;
      phi = phi_saved;
      used = used_saved;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  for (int x = 0; x < k; ++x) {
    if (phi[static_cast<size_t>(x)] < 0) return std::nullopt;
  }
  // final verification
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (phi[static_cast<size_t>(ga->mul(x, y))] !=
          gb->mul(phi[static_cast<size_t>(x)], phi[static_cast<size_t>(y)]))
        return std::nullopt;
  return phi;
}

}  // namespace detail

/// Explicit isomorphism between two abstract groups (order <= 64), or
/// nullopt when none exists.
inline std::optional<std::vector<int>> find_group_isomorphism(GroupPtr const& a,
                                                              GroupPtr const& b) {
  return detail::brute_force_group_iso(a, b);
}

/// Explicit isomorphism between two Ellis group components: the structured
/// candidate x -> (v x v)(v u v)^{-1} first (the classical conjugation-style
/// map), brute-force search as a fallback. Returned maps are verified.
inline std::vector<int> group_component_isomorphism(FiniteSemigroup const& s,
                                                    GroupComponent const& a,
                                                    GroupComponent const& b) {
  int k = a.table->order();
  if (b.table->order() == k) {
    int u = a.idempotent, v = b.idempotent;
    int vuv = s.at(s.at(v, u), v);
    int vuv_local = b.local_of_global[static_cast<size_t>(vuv)];
    if (vuv_local >= 0) {
      int inv_vuv = b.elems[static_cast<size_t>(b.table->inv(vuv_local))];
      std::vector<int> phi(static_cast<size_t>(k), -1);
      bool in_range = true;
      for (int x = 0; x < k; ++x) {
        int gx = a.elems[static_cast<size_t>(x)];
        int image = s.at(s.at(s.at(v, gx), v), inv_vuv);
        int local = b.local_of_global[static_cast<size_t>(image)];
        if (local < 0) {
          in_range = false;
          break;
        }
        phi[static_cast<size_t>(x)] = local;
      }
      if (in_range && detail::verify_group_iso(a, b, phi)) return phi;
    }
  }
  auto brute = detail::brute_force_group_iso(a.table, b.table);
  if (!brute) {
    throw std::logic_error("group_component_isomorphism: no isomorphism found (components of a minimal ideal must be isomorphic)");
  }
  return *brute;
}

// ---------------------------------------------------------------------
// Circle operation, tau topology, H(uM)
// ---------------------------------------------------------------------

/// p o Q in finite-discrete semantics: nets converge iff eventually
/// constant, so the limits collapse to {t q : t a G-image equal to p}.
/// Requires p to be a G-image.
inline Bits circle(FiniteSemigroup const& s, int p, Bits const& q_set) {
  if (!s.g_images) throw std::invalid_argument("circle: semigroup carries no G-tags");
  if (!s.tagged(p)) throw std::invalid_argument("circle: p is not a G-image");
  Bits out(s.order);
  q_set.for_each([&](int q) { out.set(s.at(p, q)); });
  return out;
}

/// cl_tau(Q) = (u M) intersect (u o Q) = u (u o Q), for Q inside u M.
/// Both expressions are computed and compared.
inline Bits tau_closure(FiniteSemigroup const& s, Bits const& um, int u, Bits const& q_set) {
  if (s.at(u, u) != u) throw std::invalid_argument("tau_closure: u is not idempotent");
  if (!q_set.is_subset_of(um)) throw std::invalid_argument("tau_closure: Q is not a subset of uM");
  Bits uoq = circle(s, u, q_set);
  Bits via_mult(s.order);
  uoq.for_each([&](int r) { via_mult.set(s.at(u, r)); });
  Bits via_intersect = uoq & um;
  if (!(via_mult == via_intersect)) {
    throw std::logic_error("tau_closure: u(u o Q) differs from (uM) intersect (u o Q)");
  }
  return via_mult;
}

/// H(uM) together with the quotient group uM / H(uM) and its projection.
struct HQuotient {
  Bits h;                        // subgroup of uM (global indices)
  GroupPtr quotient;             // group on coset indices
  std::vector<int> pi_of_global; // uM element -> quotient element (-1 off uM)
};

/// H(uM) = intersection of cl_tau(V) over tau-neighborhoods V of u. In a
/// finite space the minimal neighborhood of u is {w : u in cl_tau({w})}
/// (the circle operation is pointwise, so cl_tau is additive), which turns
/// the intersection into a single closure computation.
inline HQuotient h_subgroup_and_quotient(FiniteSemigroup const& s, GroupComponent const& comp) {
  int u = comp.idempotent;
  Bits um(s.order);
  for (int e : comp.elems) um.set(e);

  Bits vmin(s.order);
  for (int w : comp.elems) {
    Bits single(s.order);
    single.set(w);
    if (tau_closure(s, um, u, single).test(u)) vmin.set(w);
  }
  if (!vmin.test(u)) throw std::logic_error("h_subgroup_and_quotient: minimal neighborhood misses u");
  Bits h = tau_closure(s, um, u, vmin);

  // verify: subgroup, normal in uM
  auto lm = [&](int a, int b) { return s.at(a, b); };
  h.for_each([&](int a) {
    h.for_each([&](int b) {
      if (!h.test(lm(a, b))) throw std::logic_error("h_subgroup_and_quotient: H not closed");
    });
  });
  if (!h.test(u)) throw std::logic_error("h_subgroup_and_quotient: H misses u");
  for (int x : comp.elems) {
    int xl = comp.local(x);
    int xinv = comp.elems[static_cast<size_t>(comp.table->inv(xl))];
    bool ok = true;
    h.for_each([&](int a) { ok = ok && h.test(lm(lm(x, a), xinv)); });
    if (!ok) throw std::logic_error("h_subgroup_and_quotient: H not normal in uM");
  }

  // cosets
  HQuotient out;
  out.h = h;
  out.pi_of_global.assign(static_cast<size_t>(s.order), -1);
  std::vector<Bits> cosets;
  for (int x : comp.elems) {
    if (out.pi_of_global[static_cast<size_t>(x)] >= 0) continue;
    Bits coset(s.order);
    h.for_each([&](int a) { coset.set(lm(x, a)); });
    int id = static_cast<int>(cosets.size());
    coset.for_each([&](int y) { out.pi_of_global[static_cast<size_t>(y)] = id; });
    cosets.push_back(coset);
  }
  int q = static_cast<int>(cosets.size());
  std::vector<std::vector<int>> table(static_cast<size_t>(q), std::vector<int>(static_cast<size_t>(q)));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      int ra = cosets[static_cast<size_t>(a)].first();
      int rb = cosets[static_cast<size_t>(b)].first();
      table[static_cast<size_t>(a)][static_cast<size_t>(b)] = out.pi_of_global[static_cast<size_t>(lm(ra, rb))];
    }
  out.quotient = FiniteGroup::from_table(table);  // re-verifies the group axioms
  return out;
}

// ---------------------------------------------------------------------
// Full decomposition
// ---------------------------------------------------------------------

struct EllisDecomposition {
  std::vector<Bits> ideals;
  std::vector<std::vector<int>> idempotents;          // per ideal
  std::vector<std::vector<GroupComponent>> components; // per ideal
  // iso_witnesses[{i,j},{k,l}] maps component (i,j) locals to (k,l) locals
  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, std::vector<int>> iso_witnesses;
  std::optional<HQuotient> hq;  // for the first component of the first ideal, when tagged
};

inline EllisDecomposition ellis_decomposition(FiniteSemigroup const& s, bool want_isos = true) {
  EllisDecomposition dec;
  dec.ideals = minimal_left_ideals(s);
  if (dec.ideals.empty()) throw std::logic_error("ellis_decomposition: no minimal left ideal");
  for (auto const& m : dec.ideals) {
    auto [j, comps] = idempotents_and_groups(s, m);
    dec.idempotents.push_back(std::move(j));
    dec.components.push_back(std::move(comps));
  }
  if (want_isos) {
    // witness for every pair of components across all ideals
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < static_cast<int>(dec.components.size()); ++i)
      for (int j = 0; j < static_cast<int>(dec.components[static_cast<size_t>(i)].size()); ++j)
        all.emplace_back(i, j);
    for (size_t a = 0; a < all.size(); ++a)
      for (size_t b = a + 1; b < all.size(); ++b) {
        auto const& ca = dec.components[static_cast<size_t>(all[a].first)][static_cast<size_t>(all[a].second)];
        auto const& cb = dec.components[static_cast<size_t>(all[b].first)][static_cast<size_t>(all[b].second)];
        dec.iso_witnesses[{all[a], all[b]}] = group_component_isomorphism(s, ca, cb);
      }
  }
  if (s.g_images) {
    dec.hq = h_subgroup_and_quotient(s, dec.components[0][0]);
  }
  return dec;
}

/// Structured decomposition report: ideal count and sizes, idempotents per
/// ideal, group component orders, the isomorphism-witness matrix, and (for
/// tagged semigroups) the order of H and the quotient table.
inline nlohmann::json decomposition_report(EllisDecomposition const& dec) {
  nlohmann::json out;
  out["ideal_count"] = dec.ideals.size();
  nlohmann::json ideals = nlohmann::json::array();
  for (size_t i = 0; i < dec.ideals.size(); ++i) {
    nlohmann::json ideal;
    ideal["size"] = dec.ideals[i].count();
    ideal["idempotents"] = dec.idempotents[i];
    nlohmann::json comps = nlohmann::json::array();
    for (auto const& c : dec.components[i]) {
      comps.push_back({{"idempotent", c.idempotent}, {"order", c.table->order()}});
    }
    ideal["components"] = comps;
    ideals.push_back(std::move(ideal));
  }
  out["ideals"] = ideals;
  nlohmann::json isos = nlohmann::json::array();
  for (auto const& [key, phi] : dec.iso_witnesses) {
    isos.push_back({{"from", {key.first.first, key.first.second}},
                    {"to", {key.second.first, key.second.second}},
                    {"map", phi}});
  }
  out["iso_witnesses"] = isos;
  if (dec.hq) {
    out["h_order"] = dec.hq->h.count();
    int q = dec.hq->quotient->order();
    std::vector<std::vector<int>> table(static_cast<size_t>(q), std::vector<int>(static_cast<size_t>(q)));
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) table[static_cast<size_t>(a)][static_cast<size_t>(b)] = dec.hq->quotient->mul(a, b);
    out["quotient_table"] = table;
  }
  return out;
}

}  // namespace glcm

#endif  // GLCM_ELLIS_HPP_

#ifndef GLCM_QUASIHOM_HPP_
#define GLCM_QUASIHOM_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pipeline.hpp"

namespace glcm {

/// Default search bound for minimal witnesses (n, m, l, k). Existence is
/// what the calculus needs; minimality below the bound is diagnostic.
inline constexpr int kWitnessBound = 8;

inline bool is_conjugation_closed(GSubset const& s) {
  auto const& g = *s.group;
  bool ok = true;
  s.bits.for_each([&](int y) {
    for (int z = 0; z < g.order() && ok; ++z) {
      if (!s.contains(g.mul(g.mul(z, y), g.inv(z)))) ok = false;
    }
  });
  return ok;
}

/// A quasi-homomorphism between finite groups with a designated symmetric,
/// conjugation-closed error base; `err_exp` is the verified exponent with
/// error_r and error_l inside base^err_exp. Scans above 10^6 pairs are
/// sampled and flagged.
struct QuasiHom {
  GroupPtr source;
  GroupPtr target;
  std::vector<int> value;
  GSubset error_base;
  int err_exp = 1;
  bool sampled_scan = false;

  int operator()(int g) const { return value[static_cast<size_t>(g)]; }

  GSubset error_set() const {
    SubsetPowers p(target, error_base.bits);
    return GSubset(target, p.pow(err_exp));
  }
};

namespace detail {

/// Smallest exponent e <= bound with error_r(f) and error_l(f) inside
/// base^e, or -1.
inline int scan_error_exponent(GroupPtr const& src, GroupPtr const& tgt,
                               std::vector<int> const& value, GSubset const& base, int bound,
                               bool* sampled) {
  SubsetPowers pows(tgt, base.bits);
  long long n = src->order();
  *sampled = n * n > 1000000;
  std::mt19937_64 rng(0x853c49e6748fea9bull);
  auto errs_ok = [&](Bits const& target_set) {
    auto one = [&](int g, int h) {
      int fg = value[static_cast<size_t>(g)], fh = value[static_cast<size_t>(h)];
      int fgh = value[static_cast<size_t>(src->mul(g, h))];
      int er = tgt->mul(tgt->mul(tgt->inv(fh), tgt->inv(fg)), fgh);
      int el = tgt->mul(fgh, tgt->mul(tgt->inv(fh), tgt->inv(fg)));
      return target_set.test(er) && target_set.test(el);
    };
    if (!*sampled) {
      for (int g = 0; g < src->order(); ++g)
        for (int h = 0; h < src->order(); ++h)
          if (!one(g, h)) return false;
      return true;
    }
    std::uniform_int_distribution<int> d(0, src->order() - 1);
    for (long i = 0; i < 1000000; ++i)
      if (!one(d(rng), d(rng))) return false;
    return true;
  };
  for (int e = 0; e <= bound; ++e) {
    if (errs_ok(pows.pow(e))) return e;
  }
  return -1;
}

}  // namespace detail

inline QuasiHom make_quasihom(GroupPtr const& source, GroupPtr const& target,
                              std::vector<int> value, GSubset error_base,
                              int bound = kWitnessBound) {
  if (static_cast<int>(value.size()) != source->order()) {
    throw std::invalid_argument("make_quasihom: value map has wrong length");
  }
  if (error_base.group.get() != target.get()) {
    throw std::invalid_argument("make_quasihom: error base lives in the wrong group");
  }
  if (!is_symmetric(error_base)) throw std::invalid_argument("make_quasihom: error base not symmetric");
  if (!is_conjugation_closed(error_base)) {
    throw std::invalid_argument("make_quasihom: error base not closed under conjugation");
  }
  QuasiHom q;
  q.source = source;
  q.target = target;
  q.value = std::move(value);
  q.error_base = std::move(error_base);
  int e = detail::scan_error_exponent(source, target, q.value, q.error_base, bound, &q.sampled_scan);
  if (e < 0) {
    throw std::invalid_argument("make_quasihom: errors escape base^" + std::to_string(bound));
  }
  q.err_exp = e;
  return q;
}

// ---------------------------------------------------------------------
// Model checking (the quasi-homomorphism-with-error-set conditions)
// ---------------------------------------------------------------------

/// Verdict of the model checker: preimage bound, the recorded auto-pass of
/// the image-compactness item, and the separation witness l.
struct GlcmVerdict {
  bool pass = false;
  int i_bound = -1;       // G = f^{-1}[H] inside X^{i_bound}
  bool item2_auto = true; // images of X^i are finite, recorded not computed
  int l_min = -1;         // smallest l <= bound with the separation property
  bool l2_holds = false;  // the l = 2 instance specifically
  nlohmann::json counterexample;
};

/// Checks that f : G -> H with error set C is a model for X: every
/// preimage of a subset of H lies in a power of X (witnessed on the full
/// target), and C^l-separated subsets have algebra-separated preimages.
/// Singleton target pairs are scanned exhaustively; separators for general
/// pairs assemble from singleton separators by union and intersection.
inline GlcmVerdict check_glcm(QuasiHom const& f, GSubset const& x, GSubset const& c,
                              GAlgebra const& algebra, int bound = kWitnessBound) {
  if (c.group.get() != f.target.get()) throw std::invalid_argument("check_glcm: C in wrong group");
  if (!is_symmetric(c)) throw std::invalid_argument("check_glcm: C not symmetric");
  if (!is_conjugation_closed(c)) throw std::invalid_argument("check_glcm: C not normal");
  GlcmVerdict v;

  // error containment in C
  auto const& tgt = *f.target;
  for (int g = 0; g < f.source->order(); ++g) {
    for (int h = 0; h < f.source->order(); ++h) {
      int fg = f(g), fh = f(h), fgh = f(f.source->mul(g, h));
      int er = tgt.mul(tgt.mul(tgt.inv(fh), tgt.inv(fg)), fgh);
      int el = tgt.mul(fgh, tgt.mul(tgt.inv(fh), tgt.inv(fg)));
      if (!c.contains(er) || !c.contains(el)) {
        v.counterexample = {{"item", "error"}, {"g", g}, {"h", h}};
        return v;
      }
    }
  }

  // (1): the whole group is a preimage of the (compact) target
  auto powers = power_filtration(x, x.group->order());
  v.i_bound = -1;
  for (int i = 0; i < static_cast<int>(powers.size()); ++i) {
    if (powers[static_cast<size_t>(i)].count() == x.group->order()) {
      v.i_bound = i + 1;
      break;
    }
  }
  if (v.i_bound < 0) {
    v.counterexample = {{"item", 1}, {"reason", "X does not generate the group"}};
    return v;
  }

  // (3): smallest l with the separation property over singleton pairs
  std::vector<Bits> fibers(static_cast<size_t>(tgt.order()), Bits(f.source->order()));
  for (int g = 0; g < f.source->order(); ++g) fibers[static_cast<size_t>(f(g))].set(g);
  SubsetPowers cpow(f.target, c.bits);
  for (int l = 1; l <= bound; ++l) {
    Bits cl = cpow.pow(l);
    std::vector<Bits> cly(static_cast<size_t>(tgt.order()), Bits(tgt.order()));
    for (int y = 0; y < tgt.order(); ++y) {
      cl.for_each([&](int cc) { cly[static_cast<size_t>(y)].set(tgt.mul(cc, y)); });
    }
    bool ok = true;
    for (int y = 0; y < tgt.order() && ok; ++y) {
      for (int z = 0; z < tgt.order(); ++z) {
        if (cly[static_cast<size_t>(y)].intersects(cly[static_cast<size_t>(z)])) continue;
        // candidate separator: union of atoms meeting the y-fiber
        Bits d(f.source->order());
        for (auto const& atom : algebra.atoms) {
          if (atom.bits.intersects(fibers[static_cast<size_t>(y)])) d |= atom.bits;
        }
        if (!fibers[static_cast<size_t>(y)].is_subset_of(d) || d.intersects(fibers[static_cast<size_t>(z)])) {
          ok = false;
          v.counterexample = {{"item", 3}, {"l", l}, {"y", y}, {"z", z}};
          break;
        }
      }
    }
    if (ok) {
      if (v.l_min < 0) v.l_min = l;
      if (l == 2) v.l2_holds = true;
      if (l >= 2) break;
    }
  }
  v.pass = v.l_min >= 0;
  if (v.pass) v.counterexample = nlohmann::json();
  return v;
}

/// Witnesses for the good-quasi-homomorphism conditions of a map
/// h : H -> L with error set T, relative to (H, S): items (1) and (2) are
/// finite and recorded as auto-passes; (3) is the least n with h[S] inside
/// T^n; (4) the least m such that T^m-separated compact pairs pull back to
/// S-separated preimages (singleton scan; unions reduce to it).
struct GoodVerdict {
  bool pass = false;
  bool items12_auto = true;
  int n = -1;
  int m = -1;
  nlohmann::json counterexample;
};

inline GoodVerdict check_good(QuasiHom const& h, GSubset const& s, GSubset const& t,
                              int bound = kWitnessBound) {
  if (s.group.get() != h.source.get()) throw std::invalid_argument("check_good: S in wrong group");
  if (t.group.get() != h.target.get()) throw std::invalid_argument("check_good: T in wrong group");
  GoodVerdict v;
  auto const& tgt = *h.target;

  Bits hs(tgt.order());
  s.bits.for_each([&](int a) { hs.set(h(a)); });
  SubsetPowers tpow(h.target, t.bits);
  for (int n = 0; n <= bound; ++n) {
    if (hs.is_subset_of(tpow.pow(n))) {
      v.n = n;
      break;
    }
  }
  if (v.n < 0) {
    v.counterexample = {{"item", 3}, {"reason", "h[S] escapes T^bound"}};
    return v;
  }

  std::vector<Bits> fibers(static_cast<size_t>(tgt.order()), Bits(h.source->order()));
  for (int a = 0; a < h.source->order(); ++a) fibers[static_cast<size_t>(h(a))].set(a);
  auto const& src = *h.source;
  auto s_thicken = [&](Bits const& set) {
    Bits out(src.order());
    s.bits.for_each([&](int a) { set.for_each([&](int b) { out.set(src.mul(a, b)); }); });
    return out;
  };
  std::vector<Bits> sfib(static_cast<size_t>(tgt.order()), Bits(src.order()));
  for (int y = 0; y < tgt.order(); ++y) sfib[static_cast<size_t>(y)] = s_thicken(fibers[static_cast<size_t>(y)]);

  for (int m = 1; m <= bound; ++m) {
    Bits tm = tpow.pow(m);
    std::vector<Bits> tmy(static_cast<size_t>(tgt.order()), Bits(tgt.order()));
    for (int y = 0; y < tgt.order(); ++y) {
      tm.for_each([&](int cc) { tmy[static_cast<size_t>(y)].set(tgt.mul(cc, y)); });
    }
    bool ok = true;
    std::pair<int, int> bad{-1, -1};
    for (int y = 0; y < tgt.order() && ok; ++y) {
      for (int z = 0; z < tgt.order(); ++z) {
        if (tmy[static_cast<size_t>(y)].intersects(tmy[static_cast<size_t>(z)])) continue;
        if (sfib[static_cast<size_t>(y)].intersects(sfib[static_cast<size_t>(z)])) {
          ok = false;
          bad = {y, z};
          break;
        }
      }
    }
    if (ok) {
      v.m = m;
      break;
    }
    if (m == bound) v.counterexample = {{"item", 4}, {"y", bad.first}, {"z", bad.second}};
  }
  v.pass = v.n >= 0 && v.m >= 0;
  return v;
}

// ---------------------------------------------------------------------
// Symbolic exponent ledger
// ---------------------------------------------------------------------

/// Named exponents with the identity that produced each one. Every derived
/// value is recomputable from its recorded inputs; the exact-scan checks
/// downstream treat the symbolic value as sufficient, never as tight.
struct ErrorBudget {
  struct Entry {
    long long value;
    std::string identity;
  };
  std::map<std::string, Entry> entries;

  void set(std::string const& name, long long value, std::string identity) {
    entries[name] = Entry{value, std::move(identity)};
  }
  long long get(std::string const& name) const {
    auto it = entries.find(name);
    if (it == entries.end()) throw std::invalid_argument("ErrorBudget: unknown exponent " + name);
    return it->second.value;
  }

  /// n_m = m*n + (m-1)*e, unfolding h[S^m] into h[S^{m-1}] h[S] T^e.
  long long derive_n_m(long long n, long long e, long long m) {
    long long v = m * n + (m - 1) * e;
    set("n_" + std::to_string(m), v, "n_m = m*n + (m-1)*e");
    return v;
  }

  /// k_n = n_{n-1} + e, the exponent with h[S^{n-1} h^{-1}[Y]] in T^{k_n} Y.
  long long derive_k_n(long long n, long long nbase, long long e) {
    long long n_prev = derive_n_m(nbase, e, n - 1);
    long long v = n_prev + e;
    set("k_" + std::to_string(n), v, "k_n = n_{n-1} + e");
    return v;
  }

  /// m_n = k_n + m.
  long long derive_m_n(long long n, long long nbase, long long e, long long m) {
    long long v = derive_k_n(n, nbase, e) + m;
    set("m_" + std::to_string(n), v, "m_n = k_n + m");
    return v;
  }

  /// Composite morphism exponent k = 4 k2 + k2 n_{k1}.
  long long derive_compose_k(long long k2, long long n_k1) {
    long long v = 4 * k2 + k2 * n_k1;
    set("k", v, "k = 4*k2 + k2*n_{k1}");
    return v;
  }

  /// Uniqueness bound n = 4 * max(m2, k + 12(4l+1)).
  long long derive_uniqueness_n(long long m2, long long k, long long l) {
    long long v = 4 * std::max(m2, k + 12 * (4 * l + 1));
    set("n_unique", v, "n = 4*max(m2, k + 12(4l+1))");
    return v;
  }

  /// Equivalence-of-composites exponent k2'*n_{l1} + l2 + k2'.
  long long derive_category_exp(long long k2p, long long n_l1, long long l2) {
    long long v = k2p * n_l1 + l2 + k2p;
    set("cat_exp", v, "k2'*n_{l1} + l2 + k2'");
    return v;
  }

  nlohmann::json to_json() const {
    nlohmann::json out;
    for (auto const& [name, e] : entries) out[name] = {{"value", e.value}, {"identity", e.identity}};
    return out;
  }
};

// ---------------------------------------------------------------------
// Morphisms and composition
// ---------------------------------------------------------------------

/// A model f : G -> H with error set C, as consumed by the morphism
/// calculus. Pipeline instances convert via model_of().
struct Model {
  GroupPtr source;  // G
  GroupPtr target;  // H
  std::vector<int> f;
  GSubset x;  // approximate subgroup of G
  GSubset c;  // error set in H
};

inline Model model_of(PipelineInstance const& inst, FTower const& tower) {
  Model m;
  m.source = inst.group;
  m.target = inst.quotient;
  m.f = inst.f;
  m.x = inst.x;
  m.c = GSubset(inst.quotient, tower.c_set);
  return m;
}

/// A morphism rho from model f1 to model f2: a good quasi-homomorphism
/// H1 -> H2 with error set T^k (T the error set of f2) such that
/// rho(f1(g)) lies in f2(g) T^k.
struct MorphismWitness {
  std::vector<int> rho;
  long long k = 0;
  GoodVerdict good;
};

/// Verifies the two defining containments for a candidate morphism with
/// given exponent k; returns false with a counterexample instead of
/// throwing, so the composition tests can report exact failures.
inline bool verify_morphism(Model const& f1, Model const& f2, std::vector<int> const& rho,
                            long long k, nlohmann::json* why = nullptr) {
  auto const& h2 = *f2.target;
  SubsetPowers tpow(f2.target, f2.c.bits);
  Bits tk = tpow.pow(k);
  // shift containment rho(f1(g)) in f2(g) T^k
  for (int g = 0; g < f1.source->order(); ++g) {
    int lhs = rho[static_cast<size_t>(f1.f[static_cast<size_t>(g)])];
    int base = f2.f[static_cast<size_t>(g)];
    if (!tk.test(h2.mul(h2.inv(base), lhs))) {
      if (why) *why = {{"containment", "shift"}, {"g", g}};
      return false;
    }
  }
  // error containment: error of rho inside T^k
  auto const& h1 = *f1.target;
  for (int a = 0; a < h1.order(); ++a) {
    for (int b = 0; b < h1.order(); ++b) {
      int ra = rho[static_cast<size_t>(a)], rb = rho[static_cast<size_t>(b)];
      int rab = rho[static_cast<size_t>(h1.mul(a, b))];
      int er = h2.mul(h2.mul(h2.inv(rb), h2.inv(ra)), rab);
      if (!tk.test(er)) {
        if (why) *why = {{"containment", "error"}, {"a", a}, {"b", b}};
        return false;
      }
    }
  }
  return true;
}

/// Composite of two verified morphisms with the exponent k = 4 k2 + k2
/// n_{k1}; both defining containments are re-verified exactly.
inline MorphismWitness compose_morphisms(Model const& f1, Model const& f2, Model const& f3,
                                         MorphismWitness const& rho, MorphismWitness const& delta,
                                         ErrorBudget& budget) {
  // n_{k1} for delta as a good quasi-homomorphism for (H2, S2) with error
  // set S3^{k2}: delta[S2] is contained in S3^{n}; then S2^{k1} unfolds.
  SubsetPowers s3(f3.target, f3.c.bits);
  Bits ds2(f3.target->order());
  f2.c.bits.for_each([&](int a) { ds2.set(delta.rho[static_cast<size_t>(a)]); });
  long long nbase = -1;
  for (long long n = 0; n <= 4 * (delta.k + 1) + kWitnessBound; ++n) {
    if (ds2.is_subset_of(s3.pow(n))) {
      nbase = n;
      break;
    }
  }
  if (nbase < 0) throw std::invalid_argument("compose_morphisms: delta[S2] escapes all scanned powers");
  budget.set("n", nbase, "least n with delta[S2] in S3^n");
  budget.set("e", delta.k, "error exponent of delta (S3^k2)");
  long long n_k1 = budget.derive_n_m(nbase, delta.k, rho.k);
  long long k = budget.derive_compose_k(delta.k, n_k1);

  MorphismWitness out;
  out.k = k;
  out.rho.resize(static_cast<size_t>(f1.target->order()));
  for (int a = 0; a < f1.target->order(); ++a) {
    out.rho[static_cast<size_t>(a)] = delta.rho[static_cast<size_t>(rho.rho[static_cast<size_t>(a)])];
  }
  nlohmann::json why;
  if (!verify_morphism(f1, f3, out.rho, out.k, &why)) {
    throw std::logic_error("compose_morphisms: composite fails its exponent: " + why.dump());
  }
  return out;
}

// ---------------------------------------------------------------------
// Universality and uniqueness
// ---------------------------------------------------------------------

/// The finite-scale universality construction: h_M picks (deterministically,
/// or by seed) a value from h over each atom, h* and h-bar factor through
/// atoms, h~ picks through the quotient fibers. Every ledger containment is
/// verified by exact scan.
struct UniversalityResult {
  bool pass = false;
  long long l = 0;
  std::vector<int> h_m;      // atom -> H
  std::vector<int> h_star;   // G -> H
  std::vector<int> h_bar;    // atom -> H
  std::vector<int> h_tilde;  // quotient elem -> H
  bool hstar_err_ok = false;     // S^{4l+1}
  bool hbar_err_ok = false;      // S^{4l+1} over the atom semigroup
  bool lift_shift_ok = false;    // h~(pi p) in h_bar(p) S^{12(4l+1)}
  bool htilde_err_ok = false;    // S^{37(4l+1)}
  bool factor_shift_ok = false;  // h~(f(g)) in h(g) S^{16(4l+1)}
  ErrorBudget budget;
};

inline UniversalityResult universality_construct(PipelineInstance const& inst, Model const& h,
                                                 long long l,
                                                 std::optional<uint64_t> seed = std::nullopt) {
  if (h.source.get() != inst.group.get()) {
    throw std::invalid_argument("universality_construct: h is not a model over the same group");
  }
  if (l < 0) throw std::invalid_argument("universality_construct: missing separation witness l");
  UniversalityResult r;
  r.l = l;
  auto const& tgt = *h.target;
  int k = inst.stone.n_atoms();

  std::mt19937_64 rng(seed.value_or(0));
  r.h_m.resize(static_cast<size_t>(k));
  for (int p = 0; p < k; ++p) {
    auto members = inst.algebra.atoms[static_cast<size_t>(p)].bits.to_vector();
    int pick = members.front();
    if (seed) pick = members[static_cast<size_t>(rng() % members.size())];
    r.h_m[static_cast<size_t>(p)] = h.f[static_cast<size_t>(pick)];
  }
  r.h_star.resize(static_cast<size_t>(inst.group->order()));
  for (int g = 0; g < inst.group->order(); ++g) {
    r.h_star[static_cast<size_t>(g)] = r.h_m[static_cast<size_t>(inst.algebra.atom_of[static_cast<size_t>(g)])];
  }
  r.h_bar = r.h_m;

  int qn = inst.quotient->order();
  r.h_tilde.assign(static_cast<size_t>(qn), -1);
  for (int p = 0; p < k; ++p) {
    if (!inst.um.test(p)) continue;
    int y = inst.pi[static_cast<size_t>(p)];
    if (r.h_tilde[static_cast<size_t>(y)] < 0) r.h_tilde[static_cast<size_t>(y)] = r.h_bar[static_cast<size_t>(p)];
  }
  if (seed) {
    for (int y = 0; y < qn; ++y) {
      std::vector<int> fiber;
      inst.um.for_each([&](int p) {
        if (inst.pi[static_cast<size_t>(p)] == y) fiber.push_back(p);
      });
      r.h_tilde[static_cast<size_t>(y)] = r.h_bar[static_cast<size_t>(fiber[rng() % fiber.size()])];
    }
  }

  SubsetPowers spow(h.target, h.c.bits);
  long long e1 = 4 * l + 1;
  r.budget.set("4l+1", e1, "h* and h-bar error exponent");
  r.budget.set("12(4l+1)", 12 * e1, "coset-representative shift");
  r.budget.set("37(4l+1)", 37 * e1, "h~ error exponent");
  r.budget.set("16(4l+1)", 16 * e1, "h~ o f against h shift");

  auto err_in = [&](std::vector<int> const& fn, GroupPtr const& dom_group,
                    std::vector<int> const* table_op, int dom_order, Bits const& allowed) {
    for (int a = 0; a < dom_order; ++a) {
      for (int b = 0; b < dom_order; ++b) {
        int ab = table_op ? (*table_op)[static_cast<size_t>(a) * dom_order + b] : dom_group->mul(a, b);
        int er = tgt.mul(tgt.mul(tgt.inv(fn[static_cast<size_t>(b)]), tgt.inv(fn[static_cast<size_t>(a)])),
                         fn[static_cast<size_t>(ab)]);
        if (!allowed.test(er)) return false;
      }
    }
    return true;
  };

  r.hstar_err_ok = err_in(r.h_star, inst.group, nullptr, inst.group->order(), spow.pow(e1));
  r.hbar_err_ok = err_in(r.h_bar, nullptr, &inst.stone.op, k, spow.pow(e1));

  r.lift_shift_ok = true;
  Bits lift = spow.pow(12 * e1);
  inst.um.for_each([&](int p) {
    int y = inst.pi[static_cast<size_t>(p)];
    int d = tgt.mul(tgt.inv(r.h_bar[static_cast<size_t>(p)]), r.h_tilde[static_cast<size_t>(y)]);
    if (!lift.test(d)) r.lift_shift_ok = false;
  });

  {
    Bits allowed = spow.pow(37 * e1);
    r.htilde_err_ok = true;
    for (int a = 0; a < qn; ++a) {
      for (int b = 0; b < qn; ++b) {
        int ab = inst.quotient->mul(a, b);
        int er = tgt.mul(
            tgt.mul(tgt.inv(r.h_tilde[static_cast<size_t>(b)]), tgt.inv(r.h_tilde[static_cast<size_t>(a)])),
            r.h_tilde[static_cast<size_t>(ab)]);
        if (!allowed.test(er)) {
          r.htilde_err_ok = false;
          break;
        }
      }
      if (!r.htilde_err_ok) break;
    }
  }

  {
    Bits allowed = spow.pow(16 * e1);
    r.factor_shift_ok = true;
    for (int g = 0; g < inst.group->order(); ++g) {
      int lhs = r.h_tilde[static_cast<size_t>(inst.f[static_cast<size_t>(g)])];
      int d = tgt.mul(tgt.inv(h.f[static_cast<size_t>(g)]), lhs);
      if (!allowed.test(d)) {
        r.factor_shift_ok = false;
        break;
      }
    }
  }

  r.pass = r.hstar_err_ok && r.hbar_err_ok && r.lift_shift_ok && r.htilde_err_ok && r.factor_shift_ok;
  return r;
}

/// The approximate-uniqueness bound: rho(p/H) in h~(p/H) S^n with
/// n = 4 max(m2, k + 12(4l+1)), verified exactly over the quotient.
struct UniquenessResult {
  bool pass = false;
  long long n = 0;
  nlohmann::json counterexample;
};

inline UniquenessResult uniqueness_bound(PipelineInstance const& inst, Model const& h,
                                         MorphismWitness const& rho,
                                         std::vector<int> const& h_tilde, long long l,
                                         long long m2, ErrorBudget& budget) {
  UniquenessResult out;
  out.n = budget.derive_uniqueness_n(m2, rho.k, l);
  auto const& tgt = *h.target;
  SubsetPowers spow(h.target, h.c.bits);
  Bits allowed = spow.pow(out.n);
  out.pass = true;
  for (int y = 0; y < inst.quotient->order(); ++y) {
    int d = tgt.mul(tgt.inv(h_tilde[static_cast<size_t>(y)]), rho.rho[static_cast<size_t>(y)]);
    if (!allowed.test(d)) {
      out.pass = false;
      out.counterexample = {{"quotient_elem", y}};
      break;
    }
  }
  return out;
}

/// Equivalence of composites: if rho1 ~ rho1' (within T2^{l1}) and
/// rho2 ~ rho2' (within T3^{l2}), then the composites agree within
/// T3^{k2' n_{l1} + l2 + k2'}. Verified pointwise on H1.
struct CategoryLawResult {
  bool pass = false;
  long long exponent = 0;
  nlohmann::json counterexample;
};

inline CategoryLawResult category_laws(Model const& f1, Model const& f2, Model const& f3,
                                       MorphismWitness const& rho1, MorphismWitness const& rho1p,
                                       MorphismWitness const& rho2, MorphismWitness const& rho2p,
                                       long long l1, long long l2, ErrorBudget& budget) {
  CategoryLawResult out;
  // n_{l1} for rho2' : least n with rho2'[S2^{l1}] in S3^n, then unfolded
  SubsetPowers s2(f2.target, f2.c.bits);
  SubsetPowers s3(f3.target, f3.c.bits);
  Bits image(f3.target->order());
  s2.pow(l1).for_each([&](int a) { image.set(rho2p.rho[static_cast<size_t>(a)]); });
  long long n_l1 = -1;
  for (long long n = 0; n <= l1 * (rho2p.k + 4) + kWitnessBound; ++n) {
    if (image.is_subset_of(s3.pow(n))) {
      n_l1 = n;
      break;
    }
  }
  if (n_l1 < 0) throw std::invalid_argument("category_laws: image escapes scanned powers");
  budget.set("n_l1", n_l1, "least n with rho2'[S2^{l1}] in S3^n");
  out.exponent = budget.derive_category_exp(rho2p.k, n_l1, l2);

  auto const& h3 = *f3.target;
  Bits allowed = s3.pow(out.exponent);
  out.pass = true;
  for (int p = 0; p < f1.target->order(); ++p) {
    int a = rho2.rho[static_cast<size_t>(rho1.rho[static_cast<size_t>(p)])];
    int b = rho2p.rho[static_cast<size_t>(rho1p.rho[static_cast<size_t>(p)])];
    if (!allowed.test(h3.mul(h3.inv(a), b))) {
      out.pass = false;
      out.counterexample = {{"p", p}};
      break;
    }
  }
  return out;
}

}  // namespace glcm

#endif  // GLCM_QUASIHOM_HPP_

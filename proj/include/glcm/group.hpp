#ifndef GLCM_GROUP_HPP_
#define GLCM_GROUP_HPP_

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bits.hpp"

namespace glcm {

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Groups above this order are rejected outright; the subset-product and
/// atom-refinement kernels are tuned for dense bitset words at this scale.
inline constexpr int kMaxGroupOrder = 4096;

/// How a group was constructed. Mostly diagnostic; central extensions keep
/// the pair decomposition around for labels.
enum class Provenance { table, permutation_generators, matrix_generators, central_extension };

/// A finite group on indices 0..order-1 with dense multiplication and
/// inverse tables. Immutable after construction; all operations are pure.
class FiniteGroup : public std::enable_shared_from_this<FiniteGroup> {
 public:
  int order() const { return order_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return mul_[static_cast<size_t>(a) * order_ + b]; }
  int inv(int a) const { return inv_[a]; }
  Provenance provenance() const { return provenance_; }

  std::string label(int a) const {
    if (!labels_.empty()) return labels_[a];
    return std::to_string(a);
  }
  bool has_labels() const { return !labels_.empty(); }

  /// Builds a group from a full multiplication table. Associativity is
  /// checked exhaustively up to order 512 and on >= 1e5 random triples above.
  static GroupPtr from_table(std::vector<std::vector<int>> const& table,
                             std::vector<std::string> labels = {});

  static GroupPtr cyclic(int n);
  static GroupPtr dihedral(int n);  // order 2n
  static GroupPtr direct_product(GroupPtr const& a, GroupPtr const& b);
  static GroupPtr symmetric(int n);

  /// Closure of a set of permutations of {0..degree-1} under composition.
  /// When `gen_indices` is given, it receives the element index of each
  /// generator in the built group.
  static GroupPtr from_permutations(int degree, std::vector<std::vector<int>> const& gens,
                                    std::vector<int>* gen_indices = nullptr);

  /// Closure of dim x dim matrices over Z/p (p prime, p <= 13).
  static GroupPtr from_matrices(int p, int dim, std::vector<std::vector<int>> const& gens_rowmajor,
                                std::vector<int>* gen_indices = nullptr);

  /// Central extension of `base` by Z/m along a normalized 2-cocycle
  /// c : base x base -> Z/m. Elements are pairs (a, t) indexed a*m + t with
  /// (a1,t1)(a2,t2) = (a1 a2, t1 + t2 + c(a1,a2)). The cocycle identity
  /// c(a,b) + c(ab,x) = c(a,bx) + c(b,x) is verified before building.
  static GroupPtr central_extension(GroupPtr const& base, int m,
                                    std::vector<std::vector<int>> const& cocycle);

  /// Elements of the subgroup generated by `gens`, in BFS order from e.
  std::vector<int> generated_subgroup(std::vector<int> const& gens) const;

 private:
  FiniteGroup() = default;

  void finish_and_verify(bool skip_assoc = false);

  int order_ = 0;
  int identity_ = 0;
  std::vector<int> mul_;
  std::vector<int> inv_;
  std::vector<std::string> labels_;
  Provenance provenance_ = Provenance::table;
};

/// A subset of a group carrier as an index bitset. This is the universal
/// currency for X, its powers, difference sets and preimages.
struct GSubset {
  GroupPtr group;
  Bits bits;

  GSubset() = default;
  GSubset(GroupPtr g, Bits b) : group(std::move(g)), bits(std::move(b)) {
    if (bits.size() != group->order()) {
      throw std::invalid_argument("GSubset: bitset length must equal group order");
    }
  }

  int count() const { return bits.count(); }
  bool contains(int g) const { return bits.test(g); }
  bool operator==(GSubset const& other) const { return bits == other.bits; }

  static GSubset empty(GroupPtr const& g) { return GSubset(g, Bits(g->order())); }
  static GSubset full(GroupPtr const& g) {
    Bits b(g->order());
    for (int i = 0; i < g->order(); ++i) b.set(i);
    return GSubset(g, b);
  }
  static GSubset singleton(GroupPtr const& g, int e) {
    Bits b(g->order());
    b.set(e);
    return GSubset(g, b);
  }
  static GSubset of(GroupPtr const& g, std::vector<int> const& elems) {
    return GSubset(g, Bits::from_vector(g->order(), elems));
  }
};

/// Witness that X is a K-approximate subgroup: a set F with |F| = K and
/// X X contained in F X.
struct ApproxWitness {
  int K = 0;
  GSubset F;
  std::vector<int> translates() const { return F.bits.to_vector(); }
};

namespace detail {

inline void require_same_group(GSubset const& a, GSubset const& b, char const* op) {
  if (a.group.get() != b.group.get()) {
    throw std::invalid_argument(std::string(op) + ": operands live over different groups");
  }
}

inline std::string set_to_string(GSubset const& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  s.bits.for_each([&](int e) {
    if (!first) os << ",";
    os << s.group->label(e);
    first = false;
  });
  os << "}";
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------
// FiniteGroup construction
// ---------------------------------------------------------------------

inline void FiniteGroup::finish_and_verify(bool skip_assoc) {
  int const n = order_;
  if (n <= 0) throw std::invalid_argument("FiniteGroup: empty carrier");
  if (n > kMaxGroupOrder) {
    throw std::invalid_argument("FiniteGroup: order " + std::to_string(n) + " exceeds cap " +
                                std::to_string(kMaxGroupOrder));
  }

  // locate the identity
  identity_ = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw std::invalid_argument("FiniteGroup: no two-sided identity");

  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (mul(a, b) == identity_ && mul(b, a) == identity_) {
        inv_[a] = b;
        break;
      }
    }
    if (inv_[a] < 0) {
      throw std::invalid_argument("FiniteGroup: element " + std::to_string(a) +
                                  " has no two-sided inverse");
    }
  }

  if (skip_assoc) return;
  auto check = [&](int a, int b, int c) {
    if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
      throw std::invalid_argument("FiniteGroup: associativity fails at (" + std::to_string(a) +
                                  "," + std::to_string(b) + "," + std::to_string(c) + ")");
    }
  };
  if (n <= 512) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) check(a, b, c);
  } else {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> d(0, n - 1);
    for (long i = 0; i < 100000; ++i) check(d(rng), d(rng), d(rng));
  }
}

inline GroupPtr FiniteGroup::from_table(std::vector<std::vector<int>> const& table,
                                        std::vector<std::string> labels) {
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  int n = static_cast<int>(table.size());
  g->order_ = n;
  g->mul_.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(table[a].size()) != n) {
      throw std::invalid_argument("FiniteGroup: multiplication table is not square");
    }
    for (int b = 0; b < n; ++b) {
      int v = table[a][b];
      if (v < 0 || v >= n) throw std::invalid_argument("FiniteGroup: table entry out of range");
      g->mul_[static_cast<size_t>(a) * n + b] = v;
    }
  }
  g->labels_ = std::move(labels);
  g->provenance_ = Provenance::table;
  g->finish_and_verify();
  return g;
}

inline GroupPtr FiniteGroup::cyclic(int n) {
  if (n <= 0) throw std::invalid_argument("cyclic: n must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return from_table(t);
}

inline GroupPtr FiniteGroup::dihedral(int n) {
  // elements r^a s^f indexed a + n*f
  if (n <= 0) throw std::invalid_argument("dihedral: n must be positive");
  int order = 2 * n;
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  auto idx = [&](int a, int f) { return ((a % n) + n) % n + n * f; };
  for (int a = 0; a < n; ++a) {
    for (int f = 0; f < 2; ++f) {
      for (int b = 0; b < n; ++b) {
        for (int g2 = 0; g2 < 2; ++g2) {
          // (r^a s^f)(r^b s^g) = r^(a + b*(-1)^f) s^(f+g)
          int exp = f ? a - b : a + b;
          t[idx(a, f)][idx(b, g2)] = idx(exp, (f + g2) % 2);
        }
      }
    }
  }
  return from_table(t);
}

inline GroupPtr FiniteGroup::direct_product(GroupPtr const& a, GroupPtr const& b) {
  int n = a->order() * b->order();
  if (n > kMaxGroupOrder) throw std::invalid_argument("direct_product: order exceeds cap");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  int bo = b->order();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      int x1 = x / bo, x2 = x % bo, y1 = y / bo, y2 = y % bo;
      t[x][y] = a->mul(x1, y1) * bo + b->mul(x2, y2);
    }
  }
  return from_table(t);
}

inline GroupPtr FiniteGroup::symmetric(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("symmetric: supported for 1 <= n <= 7");
  std::vector<std::vector<int>> gens;
  if (n >= 2) {
    std::vector<int> transposition(n), cycle(n);
    std::iota(transposition.begin(), transposition.end(), 0);
    std::swap(transposition[0], transposition[1]);
    for (int i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
    gens = {transposition, cycle};
  } else {
    gens = {{0}};
  }
  return from_permutations(n, gens);
}

inline GroupPtr FiniteGroup::from_permutations(int degree,
                                               std::vector<std::vector<int>> const& gens,
                                               std::vector<int>* gen_indices) {
  if (degree <= 0) throw std::invalid_argument("from_permutations: degree must be positive");
  for (auto const& p : gens) {
    if (static_cast<int>(p.size()) != degree) {
      throw std::invalid_argument("from_permutations: generator has wrong degree");
    }
    std::vector<bool> seen(degree, false);
    for (int v : p) {
      if (v < 0 || v >= degree || seen[v]) {
        throw std::invalid_argument("from_permutations: generator is not a permutation");
      }
      seen[v] = true;
    }
  }

  std::vector<int> id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> elems = {id};
  std::map<std::vector<int>, int> index = {{id, 0}};
  auto compose = [&](std::vector<int> const& f, std::vector<int> const& g2) {
    std::vector<int> out(degree);
    for (int i = 0; i < degree; ++i) out[i] = f[g2[i]];
    return out;
  };
  for (size_t head = 0; head < elems.size(); ++head) {
    for (auto const& gen : gens) {
      auto next = compose(elems[head], gen);
      if (index.emplace(next, static_cast<int>(elems.size())).second) {
        elems.push_back(next);
        if (static_cast<int>(elems.size()) > kMaxGroupOrder) {
          throw std::invalid_argument("from_permutations: closure exceeds order cap");
        }
      }
    }
  }

  int n = static_cast<int>(elems.size());
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->order_ = n;
  g->mul_.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g->mul_[static_cast<size_t>(a) * n + b] = index.at(compose(elems[a], elems[b]));
  g->provenance_ = Provenance::permutation_generators;
  // associativity is inherited from function composition
  g->finish_and_verify(/*skip_assoc=*/true);
  if (gen_indices) {
    gen_indices->clear();
    for (auto const& gen : gens) gen_indices->push_back(index.at(gen));
  }
  return g;
}

inline GroupPtr FiniteGroup::from_matrices(int p, int dim,
                                           std::vector<std::vector<int>> const& gens_rowmajor,
                                           std::vector<int>* gen_indices) {
  if (p < 2 || p > 13) throw std::invalid_argument("from_matrices: prime p must satisfy 2 <= p <= 13");
  for (int d = 2; d < p; ++d) {
    if (p % d == 0) throw std::invalid_argument("from_matrices: p must be prime");
  }
  if (dim < 1 || dim > 3) throw std::invalid_argument("from_matrices: dim must be 1, 2 or 3");
  size_t cells = static_cast<size_t>(dim) * dim;
  for (auto const& m : gens_rowmajor) {
    if (m.size() != cells) throw std::invalid_argument("from_matrices: generator has wrong shape");
  }

  using Mat = std::vector<int>;
  Mat id(cells, 0);
  for (int i = 0; i < dim; ++i) id[static_cast<size_t>(i) * dim + i] = 1;
  auto matmul = [&](Mat const& a, Mat const& b) {
    Mat out(cells, 0);
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k)
        for (int j = 0; j < dim; ++j)
          out[static_cast<size_t>(i) * dim + j] =
              (out[static_cast<size_t>(i) * dim + j] +
               a[static_cast<size_t>(i) * dim + k] * b[static_cast<size_t>(k) * dim + j]) % p;
    return out;
  };

  std::vector<Mat> elems = {id};
  std::map<Mat, int> index = {{id, 0}};
  std::vector<Mat> norm_gens;
  for (auto m : gens_rowmajor) {
    for (auto& v : m) v = ((v % p) + p) % p;
    norm_gens.push_back(m);
  }
  for (size_t head = 0; head < elems.size(); ++head) {
    for (auto const& gen : norm_gens) {
      auto next = matmul(elems[head], gen);
      if (index.emplace(next, static_cast<int>(elems.size())).second) {
        elems.push_back(next);
        if (static_cast<int>(elems.size()) > kMaxGroupOrder) {
          throw std::invalid_argument("from_matrices: closure exceeds order cap");
        }
      }
    }
  }
  // invertibility check: closure of invertible generators stays invertible,
  // but reject generators that are singular (their closure is no group).
  int n = static_cast<int>(elems.size());
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->order_ = n;
  g->mul_.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g->mul_[static_cast<size_t>(a) * n + b] = index.at(matmul(elems[a], elems[b]));
  g->provenance_ = Provenance::matrix_generators;
  g->finish_and_verify(/*skip_assoc=*/true);  // matrix multiplication is associative
  if (gen_indices) {
    gen_indices->clear();
    for (auto const& gen : norm_gens) gen_indices->push_back(index.at(gen));
  }
  return g;
}

inline GroupPtr FiniteGroup::central_extension(GroupPtr const& base, int m,
                                               std::vector<std::vector<int>> const& cocycle) {
  int bn = base->order();
  if (m <= 0) throw std::invalid_argument("central_extension: m must be positive");
  if (static_cast<int>(cocycle.size()) != bn) {
    throw std::invalid_argument("central_extension: cocycle table has wrong size");
  }
  auto c = [&](int a, int b) { return ((cocycle[a][b] % m) + m) % m; };
  int e = base->identity();
  for (int a = 0; a < bn; ++a) {
    if (c(e, a) != 0 || c(a, e) != 0) {
      throw std::invalid_argument("central_extension: cocycle must be normalized (c(e,.) = c(.,e) = 0)");
    }
  }
  // 2-cocycle identity; exhaustive up to order 128, sampled above
  auto id_check = [&](int a, int b, int x) {
    if ((c(a, b) + c(base->mul(a, b), x)) % m != (c(a, base->mul(b, x)) + c(b, x)) % m) {
      throw std::invalid_argument("central_extension: 2-cocycle identity fails at (" +
                                  std::to_string(a) + "," + std::to_string(b) + "," +
                                  std::to_string(x) + ")");
    }
  };
  if (bn <= 128) {
    for (int a = 0; a < bn; ++a)
      for (int b = 0; b < bn; ++b)
        for (int x = 0; x < bn; ++x) id_check(a, b, x);
  } else {
    std::mt19937_64 rng(0x2545f4914f6cdd1dull);
    std::uniform_int_distribution<int> d(0, bn - 1);
    for (long i = 0; i < 100000; ++i) id_check(d(rng), d(rng), d(rng));
  }

  int n = bn * m;
  if (n > kMaxGroupOrder) throw std::invalid_argument("central_extension: order exceeds cap");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  std::vector<std::string> labels(static_cast<size_t>(n));
  for (int a = 0; a < bn; ++a) {
    for (int s = 0; s < m; ++s) {
      labels[static_cast<size_t>(a) * m + s] = "(" + base->label(a) + "," + std::to_string(s) + ")";
      for (int b = 0; b < bn; ++b) {
        for (int u = 0; u < m; ++u) {
          t[a * m + s][b * m + u] = base->mul(a, b) * m + (s + u + c(a, b)) % m;
        }
      }
    }
  }
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->order_ = n;
  g->mul_.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g->mul_[static_cast<size_t>(a) * n + b] = t[a][b];
  g->labels_ = std::move(labels);
  g->provenance_ = Provenance::central_extension;
  g->finish_and_verify();  // associativity re-verified, forced by the cocycle identity
  return g;
}

inline std::vector<int> FiniteGroup::generated_subgroup(std::vector<int> const& gens) const {
  Bits seen(order_);
  std::vector<int> out = {identity_};
  seen.set(identity_);
  for (size_t head = 0; head < out.size(); ++head) {
    for (int g : gens) {
      int next = mul(out[head], g);
      if (!seen.test(next)) {
        seen.set(next);
        out.push_back(next);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------
// Subset calculus
// ---------------------------------------------------------------------

/// {ab : a in A, b in B}.
inline GSubset product(GSubset const& a, GSubset const& b) {
  detail::require_same_group(a, b, "product");
  Bits out(a.group->order());
  auto const& g = *a.group;
  a.bits.for_each([&](int x) { b.bits.for_each([&](int y) { out.set(g.mul(x, y)); }); });
  return GSubset(a.group, out);
}

/// {a^{-1} : a in A}.
inline GSubset inverse_set(GSubset const& a) {
  Bits out(a.group->order());
  a.bits.for_each([&](int x) { out.set(a.group->inv(x)); });
  return GSubset(a.group, out);
}

inline GSubset left_translate(int g, GSubset const& a) {
  Bits out(a.group->order());
  a.bits.for_each([&](int x) { out.set(a.group->mul(g, x)); });
  return GSubset(a.group, out);
}

inline GSubset right_translate(GSubset const& a, int g) {
  Bits out(a.group->order());
  a.bits.for_each([&](int x) { out.set(a.group->mul(x, g)); });
  return GSubset(a.group, out);
}

inline bool is_symmetric(GSubset const& a) { return inverse_set(a) == a; }

/// [X, X^2, ..., X^{n_max}]. Requires e in X and X symmetric, so the chain
/// is an increasing filtration that stabilizes at the subgroup <X>.
inline std::vector<GSubset> power_filtration(GSubset const& x, int n_max) {
  if (!x.contains(x.group->identity())) {
    throw std::invalid_argument("power_filtration: X must contain the identity");
  }
  if (!is_symmetric(x)) {
    throw std::invalid_argument("power_filtration: X must be symmetric");
  }
  if (n_max < 1) throw std::invalid_argument("power_filtration: n_max must be >= 1");
  std::vector<GSubset> out;
  out.reserve(static_cast<size_t>(n_max));
  out.push_back(x);
  for (int n = 2; n <= n_max; ++n) {
    if (out.back().count() == x.group->order()) {
      out.push_back(out.back());  // already everything
    } else {
      out.push_back(product(out.back(), x));
    }
  }
  return out;
}

namespace detail {

/// Greedy cover of `target` by left translates g*tile with g drawn from
/// `candidates`; ties broken toward smaller g for determinism.
inline std::vector<int> greedy_translate_cover(GSubset const& target, GSubset const& tile,
                                               std::vector<int> const& candidates) {
  std::vector<int> chosen;
  Bits uncovered = target.bits;
  std::vector<Bits> translate_bits;
  translate_bits.reserve(candidates.size());
  for (int g : candidates) translate_bits.push_back(left_translate(g, tile).bits);
  while (uncovered.any()) {
    int best = -1, best_gain = 0;
    for (size_t i = 0; i < candidates.size(); ++i) {
      int gain = (translate_bits[i] & uncovered).count();
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) return {};  // not coverable from candidates
    chosen.push_back(candidates[best]);
    uncovered -= translate_bits[best];
  }
  return chosen;
}

/// Exhaustive search for a size-k translate cover; candidate count is capped
/// by the caller. Returns empty when no cover of size k exists.
inline std::vector<int> exact_translate_cover(GSubset const& target, GSubset const& tile,
                                              std::vector<int> const& candidates, int k) {
  std::vector<Bits> tb;
  tb.reserve(candidates.size());
  for (int g : candidates) tb.push_back(left_translate(g, tile).bits);
  std::vector<int> pick;
  std::vector<int> result;
  std::function<bool(size_t, Bits)> rec = [&](size_t start, Bits uncovered) {
    if (uncovered.none()) {
      result = pick;
      return true;
    }
    if (static_cast<int>(pick.size()) == k) return false;
    for (size_t i = start; i < candidates.size(); ++i) {
      if (!tb[i].intersects(uncovered)) continue;
      pick.push_back(candidates[i]);
      if (rec(i + 1, uncovered - tb[i])) return true;
      pick.pop_back();
    }
    return false;
  };
  rec(0, target.bits);
  std::sort(result.begin(), result.end());
  return result;
}

inline double binom_estimate(size_t n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= static_cast<double>(n - i) / (i + 1);
  return v;
}

}  // namespace detail

/// Smallest-found F with X X contained in F X. Greedy cover first, then
/// exhaustive refinement for answers of size <= 4 (set cover minima are only
/// chased when they are tiny). The returned witness always re-verifies.
inline ApproxWitness doubling_witness(GSubset const& x) {
  if (!x.contains(x.group->identity()) || !is_symmetric(x)) {
    throw std::invalid_argument("doubling_witness: X must be symmetric with e in X");
  }
  GSubset xx = product(x, x);
  // g X meets X X iff g lies in X X X^{-1} = X^3
  GSubset x3 = product(xx, x);
  std::vector<int> candidates = x3.bits.to_vector();

  std::vector<int> best = detail::greedy_translate_cover(xx, x, candidates);
  if (best.empty()) throw std::logic_error("doubling_witness: greedy cover failed");  // cannot happen
  for (int k = 1; k < static_cast<int>(best.size()) && k <= 4; ++k) {
    if (detail::binom_estimate(candidates.size(), k) > 2e6) break;
    auto exact = detail::exact_translate_cover(xx, x, candidates, k);
    if (!exact.empty()) {
      best = exact;
      break;
    }
  }
  ApproxWitness w;
  w.K = static_cast<int>(best.size());
  w.F = GSubset::of(x.group, best);
  if (!xx.bits.is_subset_of(product(w.F, x).bits)) {
    throw std::logic_error("doubling_witness: produced witness fails containment");
  }
  return w;
}

/// Closure of a subset under products, inverses and the identity.
inline GSubset subgroup_closure(GSubset const& s) {
  auto const& g = *s.group;
  Bits out = s.bits;
  out.set(g.identity());
  s.bits.for_each([&](int e) { out.set(g.inv(e)); });
  bool grew = true;
  while (grew) {
    grew = false;
    Bits next = out;
    out.for_each([&](int a) {
      out.for_each([&](int b) {
        int ab = g.mul(a, b);
        if (!next.test(ab)) {
          next.set(ab);
          grew = true;
        }
      });
    });
    out = next;
  }
  return GSubset(s.group, out);
}

/// Smallest symmetric, conjugation-closed set containing s and the identity.
inline GSubset normal_symmetric_closure(GSubset const& s) {
  auto const& g = *s.group;
  Bits out = s.bits;
  out.set(g.identity());
  bool grew = true;
  while (grew) {
    grew = false;
    Bits next = out;
    out.for_each([&](int a) {
      int ia = g.inv(a);
      if (!next.test(ia)) {
        next.set(ia);
        grew = true;
      }
      for (int z = 0; z < g.order(); ++z) {
        int c = g.mul(g.mul(z, a), g.inv(z));
        if (!next.test(c)) {
          next.set(c);
          grew = true;
        }
      }
    });
    out = next;
  }
  return GSubset(s.group, out);
}

inline bool is_normal_subgroup(GSubset const& n) {
  auto const& g = *n.group;
  if (!n.contains(g.identity())) return false;
  bool ok = true;
  n.bits.for_each([&](int a) {
    if (!n.contains(g.inv(a))) ok = false;
    n.bits.for_each([&](int b) {
      if (!n.contains(g.mul(a, b))) ok = false;
    });
    for (int z = 0; z < g.order() && ok; ++z) {
      if (!n.contains(g.mul(g.mul(z, a), g.inv(z)))) ok = false;
    }
  });
  return ok;
}

/// Quotient by a verified normal subgroup, with the projection map.
struct Quotient {
  GroupPtr group;
  std::vector<int> proj;  // element -> coset index
};

inline Quotient quotient_by(GroupPtr const& g, GSubset const& n) {
  if (n.group.get() != g.get()) throw std::invalid_argument("quotient_by: subgroup over wrong group");
  if (!is_normal_subgroup(n)) throw std::invalid_argument("quotient_by: not a normal subgroup");
  Quotient out;
  out.proj.assign(static_cast<size_t>(g->order()), -1);
  std::vector<int> reps;
  for (int a = 0; a < g->order(); ++a) {
    if (out.proj[static_cast<size_t>(a)] >= 0) continue;
    int id = static_cast<int>(reps.size());
    n.bits.for_each([&](int h) { out.proj[static_cast<size_t>(g->mul(a, h))] = id; });
    reps.push_back(a);
  }
  int q = static_cast<int>(reps.size());
  std::vector<std::vector<int>> table(static_cast<size_t>(q), std::vector<int>(static_cast<size_t>(q)));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      table[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          out.proj[static_cast<size_t>(g->mul(reps[static_cast<size_t>(a)], reps[static_cast<size_t>(b)]))];
  out.group = FiniteGroup::from_table(table);
  return out;
}

/// Covers `target` by left translates of `tile`. Greedy count, refined to the
/// exact minimum when the greedy answer is <= 3.
inline std::pair<int, std::vector<int>> covering_number(GSubset const& target,
                                                        GSubset const& tile) {
  detail::require_same_group(target, tile, "covering_number");
  if (tile.bits.none()) throw std::invalid_argument("covering_number: tile is empty");
  if (target.bits.none()) return {0, {}};

  std::vector<int> candidates;
  for (int g = 0; g < target.group->order(); ++g) {
    if (left_translate(g, tile).bits.intersects(target.bits)) candidates.push_back(g);
  }
  std::vector<int> greedy = detail::greedy_translate_cover(target, tile, candidates);
  if (greedy.empty()) {
    throw std::invalid_argument("covering_number: target not coverable by translates of tile");
  }
  std::vector<int> best = greedy;
  if (best.size() <= 3) {
    for (int k = 1; k < static_cast<int>(best.size()); ++k) {
      if (detail::binom_estimate(candidates.size(), k) > 2e6) break;
      auto exact = detail::exact_translate_cover(target, tile, candidates, k);
      if (!exact.empty()) {
        best = exact;
        break;
      }
    }
  }
  // re-verify
  Bits covered(target.group->order());
  for (int g : best) covered |= left_translate(g, tile).bits;
  if (!target.bits.is_subset_of(covered)) {
    throw std::logic_error("covering_number: cover fails re-verification");
  }
  return {static_cast<int>(best.size()), best};
}

}  // namespace glcm

#endif  // GLCM_GROUP_HPP_

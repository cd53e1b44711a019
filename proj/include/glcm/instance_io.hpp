#ifndef GLCM_INSTANCE_IO_HPP_
#define GLCM_INSTANCE_IO_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <optional>

#include "pipeline.hpp"

namespace glcm {

/// A parsed instance file: the group, X, the horizon, extra algebra seeds,
/// the equivalence mode, the check selection, and the echoed seed. Parsing
/// either yields a buildable instance or throws a diagnostic naming the
/// first violated precondition.
struct InstanceFile {
  GroupPtr group;
  GSubset x;
  PipelineOptions options;
  std::vector<std::string> checks;  // empty = all
  uint64_t seed = 0;

  /// Optional quasi-homomorphism given as a value table, to be checked
  /// against the definition over this instance's algebra.
  struct QuasiHomInput {
    GroupPtr target;
    std::vector<int> values;
    std::vector<int> error_base;
  };
  std::optional<QuasiHomInput> quasihom;
};

namespace detail {

[[noreturn]] inline void instance_fail(std::string const& field, std::string const& what) {
  throw std::invalid_argument("instance file: field '" + field + "': " + what);
}

inline GroupPtr parse_group(nlohmann::json const& j, std::vector<int>* gen_indices) {
  if (!j.is_object() || !j.contains("kind")) instance_fail("group", "object with 'kind' expected");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "cyclic") return FiniteGroup::cyclic(j.at("n").get<int>());
  if (kind == "dihedral") return FiniteGroup::dihedral(j.at("n").get<int>());
  if (kind == "symmetric") return FiniteGroup::symmetric(j.at("n").get<int>());
  if (kind == "table") {
    return FiniteGroup::from_table(j.at("table").get<std::vector<std::vector<int>>>());
  }
  if (kind == "perm") {
    return FiniteGroup::from_permutations(j.at("degree").get<int>(),
                                          j.at("generators").get<std::vector<std::vector<int>>>(),
                                          gen_indices);
  }
  if (kind == "matrix") {
    return FiniteGroup::from_matrices(j.at("p").get<int>(), j.value("dim", 2),
                                      j.at("generators").get<std::vector<std::vector<int>>>(),
                                      gen_indices);
  }
  if (kind == "extension") {
    GroupPtr base = parse_group(j.at("base"), nullptr);
    return FiniteGroup::central_extension(base, j.at("m").get<int>(),
                                          j.at("cocycle").get<std::vector<std::vector<int>>>());
  }
  if (kind == "direct") {
    auto const& factors = j.at("factors");
    if (!factors.is_array() || factors.size() < 2) instance_fail("group.factors", "need two factors");
    GroupPtr g = parse_group(factors[0], nullptr);
    for (size_t i = 1; i < factors.size(); ++i) g = FiniteGroup::direct_product(g, parse_group(factors[i], nullptr));
    return g;
  }
  instance_fail("group.kind", "unknown kind '" + kind + "'");
}

/// Words over the declared generators: 'a' is the first generator, 'b' the
/// second, and so on; uppercase letters are inverses; "" is the identity.
inline int element_of_word(GroupPtr const& g, std::vector<int> const& gen_indices,
                           std::string const& word) {
  int e = g->identity();
  for (char ch : word) {
    int gi;
    bool invert = false;
    if (ch >= 'a' && ch <= 'z') {
      gi = ch - 'a';
    } else if (ch >= 'A' && ch <= 'Z') {
      gi = ch - 'A';
      invert = true;
    } else {
      instance_fail("x.words", std::string("bad letter '") + ch + "'");
    }
    if (gi >= static_cast<int>(gen_indices.size())) {
      instance_fail("x.words", std::string("letter '") + ch + "' has no matching generator");
    }
    int elem = gen_indices[static_cast<size_t>(gi)];
    e = g->mul(e, invert ? g->inv(elem) : elem);
  }
  return e;
}

}  // namespace detail

inline InstanceFile parse_instance(nlohmann::json const& j) {
  if (!j.is_object()) throw std::invalid_argument("instance file: top-level object expected");
  std::string schema = j.value("schema", "");
  if (schema != kInstanceSchema) {
    throw std::invalid_argument("instance file: field 'schema': expected '" +
                                std::string(kInstanceSchema) + "', got '" + schema + "'");
  }
  InstanceFile f;
  std::vector<int> gen_indices;
  if (!j.contains("group")) detail::instance_fail("group", "missing");
  f.group = detail::parse_group(j.at("group"), &gen_indices);

  if (!j.contains("x")) detail::instance_fail("x", "missing");
  auto const& jx = j.at("x");
  std::vector<int> xs;
  if (jx.is_array()) {
    xs = jx.get<std::vector<int>>();
  } else if (jx.is_object() && jx.contains("indices")) {
    xs = jx.at("indices").get<std::vector<int>>();
  } else if (jx.is_object() && jx.contains("words")) {
    for (auto const& w : jx.at("words")) {
      xs.push_back(detail::element_of_word(f.group, gen_indices, w.get<std::string>()));
    }
  } else {
    detail::instance_fail("x", "array of indices, {\"indices\": ...} or {\"words\": ...} expected");
  }
  for (int e : xs) {
    if (e < 0 || e >= f.group->order()) detail::instance_fail("x", "element index out of range");
  }
  f.x = GSubset::of(f.group, xs);
  if (!f.x.contains(f.group->identity())) detail::instance_fail("x", "must contain the identity");
  if (!is_symmetric(f.x)) detail::instance_fail("x", "must be symmetric");

  f.options.n_max = j.value("n_max", 34);
  if (f.options.n_max < 1) detail::instance_fail("n_max", "must be positive");

  std::string mode = j.value("equivalence_mode", "atoms");
  if (mode == "atoms") {
    f.options.mode = EquivalenceMode::atoms;
  } else if (mode == "coarse-atoms") {
    f.options.mode = EquivalenceMode::coarse_atoms;
  } else {
    detail::instance_fail("equivalence_mode", "must be 'atoms' or 'coarse-atoms'");
  }

  if (j.contains("seeds")) {
    for (auto const& js : j.at("seeds")) {
      auto elems = js.get<std::vector<int>>();
      for (int e : elems) {
        if (e < 0 || e >= f.group->order()) detail::instance_fail("seeds", "element index out of range");
      }
      f.options.extra_seeds.push_back(GSubset::of(f.group, elems));
    }
  }

  if (j.contains("checks")) {
    for (auto const& c : j.at("checks")) {
      std::string id = c.get<std::string>();
      if (id != "all" && check_registry().find(id) == check_registry().end()) {
        detail::instance_fail("checks", "unknown check id '" + id + "'");
      }
      if (id != "all") f.checks.push_back(id);
    }
  }
  if (j.contains("quasihom")) {
    auto const& jq = j.at("quasihom");
    InstanceFile::QuasiHomInput q;
    q.target = detail::parse_group(jq.at("target"), nullptr);
    q.values = jq.at("values").get<std::vector<int>>();
    if (static_cast<int>(q.values.size()) != f.group->order()) {
      detail::instance_fail("quasihom.values", "value table must cover the whole group");
    }
    for (int v : q.values) {
      if (v < 0 || v >= q.target->order()) detail::instance_fail("quasihom.values", "value out of range");
    }
    q.error_base = jq.at("error_base").get<std::vector<int>>();
    for (int v : q.error_base) {
      if (v < 0 || v >= q.target->order()) detail::instance_fail("quasihom.error_base", "value out of range");
    }
    f.quasihom = std::move(q);
  }
  f.seed = j.value("seed", uint64_t(0));
  return f;
}

inline InstanceFile load_instance(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (nlohmann::json::parse_error const& e) {
    throw std::invalid_argument("instance file " + path + ": " + e.what());
  }
  return parse_instance(j);
}

/// The per-instance certificate document, with the instance echo and the
/// check results; byte-identical across runs for identical (file, seed).
inline nlohmann::json certificate_document(InstanceFile const& file, PipelineInstance const& inst,
                                           Certificate const& cert) {
  nlohmann::json doc = cert.to_json();
  doc["instance"] = {
      {"group_order", file.group->order()},
      {"generated_order", inst.group->order()},
      {"x_size", inst.x.count()},
      {"n_max", inst.n_max},
      {"equivalence_mode", to_string(inst.mode)},
      {"atoms", inst.algebra.n_atoms()},
      {"quotient_order", inst.quotient->order()},
      {"seed", file.seed},
  };
  return doc;
}

}  // namespace glcm

#endif  // GLCM_INSTANCE_IO_HPP_

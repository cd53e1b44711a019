#include <catch2/catch_amalgamated.hpp>

#include "glcm/ellis.hpp"
#include "glcm/pipeline.hpp"
#include "oracles.hpp"

using namespace glcm;

TEST_CASE("minimal left ideals of a group") {
  auto g = FiniteGroup::symmetric(3);
  auto s = semigroup_of_group(g);
  auto ideals = minimal_left_ideals(s);
  REQUIRE(ideals.size() == 1);
  REQUIRE(ideals[0].count() == 6);
  auto brute = oracles::brute_minimal_left_ideals(s);
  REQUIRE(brute == ideals);
}

TEST_CASE("minimal left ideals of the transformation monoid on 3 points") {
  auto s = full_transformation_monoid(3);
  REQUIRE(s.order == 27);
  s.verify_associative();
  auto ideals = minimal_left_ideals(s);
  auto brute = oracles::brute_minimal_left_ideals(s);
  {
    auto a = ideals;
    auto b = brute;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    REQUIRE(a == b);
  }
  REQUIRE(ideals.size() == 1);
  REQUIRE(ideals[0].count() == 3);  // the constant maps
  auto [j, comps] = idempotents_and_groups(s, ideals[0]);
  REQUIRE(j.size() == 3);
  for (auto const& c : comps) REQUIRE(c.table->order() == 1);
}

TEST_CASE("Rees matrix semigroup M(Z/2; 2, 2; id)") {
  auto z2 = FiniteGroup::cyclic(2);
  auto s = rees_matrix_semigroup(z2, 2, 2, {{0, 0}, {0, 0}});
  s.verify_associative();
  auto ideals = minimal_left_ideals(s);
  REQUIRE(ideals.size() == 2);
  for (auto const& m : ideals) REQUIRE(m.count() == 4);
  {
    auto brute = oracles::brute_minimal_left_ideals(s);
    auto a = ideals;
    std::sort(a.begin(), a.end());
    std::sort(brute.begin(), brute.end());
    REQUIRE(a == brute);
  }
  for (auto const& m : ideals) {
    auto [j, comps] = idempotents_and_groups(s, m);
    REQUIRE(j.size() == 2);
    for (auto const& c : comps) {
      REQUIRE(c.table->order() == 2);
      REQUIRE(find_group_isomorphism(c.table, z2).has_value());
    }
  }
}

TEST_CASE("group components are pairwise isomorphic with verified witnesses") {
  auto s3 = FiniteGroup::symmetric(3);
  auto s = rees_matrix_semigroup(s3, 2, 2, {{0, 0}, {0, 1}});
  auto dec = ellis_decomposition(s);
  REQUIRE(dec.ideals.size() == 2);
  // every pair of components carries a verified isomorphism
  size_t n_comps = 0;
  for (auto const& comps : dec.components) n_comps += comps.size();
  REQUIRE(dec.iso_witnesses.size() == n_comps * (n_comps - 1) / 2);
  for (auto const& [key, phi] : dec.iso_witnesses) {
    auto const& a = dec.components[static_cast<size_t>(key.first.first)][static_cast<size_t>(key.first.second)];
    auto const& b = dec.components[static_cast<size_t>(key.second.first)][static_cast<size_t>(key.second.second)];
    REQUIRE(phi.size() == static_cast<size_t>(a.table->order()));
    for (int x = 0; x < a.table->order(); ++x)
      for (int y = 0; y < a.table->order(); ++y)
        REQUIRE(phi[static_cast<size_t>(a.table->mul(x, y))] ==
                b.table->mul(phi[static_cast<size_t>(x)], phi[static_cast<size_t>(y)]));
  }
}

TEST_CASE("idempotents_and_groups rejects non-ideals") {
  auto z2 = FiniteGroup::cyclic(2);
  auto s = rees_matrix_semigroup(z2, 2, 2, {{0, 0}, {0, 0}});
  Bits not_ideal(s.order);
  not_ideal.set(0);
  REQUIRE_THROWS_AS(idempotents_and_groups(s, not_ideal), std::invalid_argument);
}

static PipelineInstance coset_instance() {
  auto z6 = FiniteGroup::cyclic(6);
  PipelineOptions opts;
  opts.extra_seeds = {GSubset::of(z6, {0, 2, 4})};
  return make_pipeline_instance(z6, GSubset::full(z6), opts);
}

TEST_CASE("circle and tau closure on a Stone semigroup") {
  auto inst = coset_instance();
  auto const& sg = inst.sg;
  SECTION("circle is the guarded translation action") {
    Bits q(sg.order);
    q.set(0);
    q.set(1);
    for (int p = 0; p < sg.order; ++p) {
      Bits c = circle(sg, p, q);
      Bits direct(sg.order);
      q.for_each([&](int t) { direct.set(sg.at(p, t)); });
      REQUIRE(c == direct);
    }
    REQUIRE(circle(sg, 0, Bits(sg.order)).none());
  }
  SECTION("tau closure is a closure operator and discrete here") {
    Bits um = inst.um;
    for (int w = 0; w < sg.order; ++w) {
      Bits single(sg.order);
      single.set(w);
      Bits cl = tau_closure(sg, um, inst.u, single);
      REQUIRE(cl == single);  // extensive + discrete
      REQUIRE(tau_closure(sg, um, inst.u, cl) == cl);  // idempotent
    }
    // monotone
    Bits small(sg.order), big(sg.order);
    small.set(inst.u);
    big.set(inst.u);
    big.set(1 - inst.u);
    REQUIRE(tau_closure(sg, um, inst.u, small).is_subset_of(tau_closure(sg, um, inst.u, big)));
    REQUIRE(tau_closure(sg, um, inst.u, um) == um);
  }
  SECTION("preconditions") {
    Bits bad(sg.order);
    bad.set(0);
    bad.set(1);
    Bits not_um(sg.order);
    not_um.set(0);
    REQUIRE_THROWS_AS(tau_closure(sg, not_um, inst.u, bad), std::invalid_argument);
  }
}

TEST_CASE("circle calculus identities on tagged instances") {
  auto inst = coset_instance();
  auto const& sg = inst.sg;
  // (p o R) q = p o (R q) and p R inside p o R
  for (int p = 0; p < sg.order; ++p) {
    for (int q = 0; q < sg.order; ++q) {
      Bits r(sg.order);
      r.set(0);
      Bits lhs(sg.order);
      circle(sg, p, r).for_each([&](int t) { lhs.set(sg.at(t, q)); });
      Bits rq(sg.order);
      r.for_each([&](int t) { rq.set(sg.at(t, q)); });
      REQUIRE(lhs == circle(sg, p, rq));
      Bits pr(sg.order);
      r.for_each([&](int t) { pr.set(sg.at(p, t)); });
      REQUIRE(pr.is_subset_of(circle(sg, p, r)));
    }
  }
}

TEST_CASE("H subgroup and quotient") {
  auto inst = coset_instance();
  auto const& hq = *inst.dec.hq;
  REQUIRE(hq.h.count() == 1);
  REQUIRE(hq.h.test(inst.u));
  REQUIRE(hq.quotient->order() == 2);
  // quotient order divides |uM|
  REQUIRE(inst.um.count() % hq.quotient->order() == 0);
}

TEST_CASE("untagged semigroups refuse the tau machinery") {
  auto z2 = FiniteGroup::cyclic(2);
  auto s = rees_matrix_semigroup(z2, 1, 1, {{0}});
  Bits q(s.order);
  q.set(0);
  REQUIRE_THROWS_AS(circle(s, 0, q), std::invalid_argument);
}

TEST_CASE("decomposition invariants: S*p = M and disjoint components") {
  auto z3 = FiniteGroup::cyclic(3);
  auto s = rees_matrix_semigroup(z3, 3, 2, {{0, 1, 2}, {2, 0, 0}});
  auto dec = ellis_decomposition(s);
  for (size_t i = 0; i < dec.ideals.size(); ++i) {
    auto const& m = dec.ideals[i];
    m.for_each([&](int p) {
      Bits sp(s.order);
      for (int t = 0; t < s.order; ++t) sp.set(s.at(t, p));
      sp.set(p);
      REQUIRE(sp == m);
    });
    Bits seen(s.order);
    for (auto const& comp : dec.components[i]) {
      for (int e : comp.elems) {
        REQUIRE(!seen.test(e));
        seen.set(e);
      }
    }
    REQUIRE(seen == m);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <set>

using namespace ruthkit;

static std::vector<LiePair> point_pairs() {
  return {abelian_pair(3, 1), sl2_borel_pair(), sl2_cartan_pair(), heisenberg_pair(), aff1_pair(), so3_pair()};
}

static std::vector<CMat> random_gamma(const LiePair& p, int k, Rng& rng) {
  std::vector<CMat> g;
  for (int i = 0; i < p.rank_L(); ++i) g.push_back(random_cmat(*p.L->alg, k, k, rng, 0.5));
  return g;
}

/// A = span(x d/dx) over jet(1, order), L = A + span(u) with u inert and [a, u] = u.
static LiePair euler_line(int order) {
  auto alg = std::make_shared<const CoeffAlgebra>(jet_algebra(1, order));
  LieAlgebroid L = make_algebroid(alg, 2);
  L.names = {"a", "u"};
  L.anchor[0][0] = basis_element(*alg, monomial_index(*alg, {1}));
  set_bracket(L, 0, 1, 1, unit_element(*alg));
  finalize(L);
  return make_pair(L, 1);
}

TEST_CASE("double: flat, and the cocycle vanishes for every seed") {
  Rng rng(41);
  for (const auto& p : point_pairs())
    for (int k = 1; k <= 2; ++k) {
      DoubleResult d = build_double(p, random_gamma(p, k, rng), k % 2);
      CHECK(validate_flat(d.DA).flat);
      CHECK(validate_structure(d.DA).empty());
      CHECK(is_zero(atiyah_cocycle(d.ext)));
    }
  LiePair j = jet_line_pair(2, Q(1));
  DoubleResult d = build_double(j, random_gamma(j, 2, rng));
  CHECK(validate_flat(d.DA).flat);
  CHECK(is_zero(atiyah_cocycle(d.ext)));
}

TEST_CASE("normal complex: flat, and basic connection covers Bott") {
  Rng rng(42);
  std::vector<LiePair> pairs = point_pairs();
  pairs.push_back(jet_line_pair(2, Q(1)));
  pairs.push_back(jet_plane_pair(2, 2));
  for (const auto& p : pairs)
    for (int t = 0; t < 2; ++t) {
      std::vector<CMat> seed;
      if (t == 1)
        for (int j = 0; j < p.rank_L(); ++j) seed.push_back(random_cmat(*p.L->alg, p.rank_A(), p.rank_A(), rng, 0.4));
      NormalResult n = build_normal(p, seed);
      CHECK(validate_flat(n.DA).flat);
      CHECK(validate_structure(n.DA).empty());
      const CoeffAlgebra& alg = *p.L->alg;
      CMat proj = cmat_constant(alg, choose_splitting(p).proj);
      auto bott = bott_connection(p);
      for (int a = 0; a < p.rank_A(); ++a)
        CHECK(cmat_mul(alg, proj, n.basic.basic_L[a]) == cmat_mul(alg, bott[a], proj));
      CHECK(n.curvature_in_A);
    }
}

TEST_CASE("adjoint complex over jets") {
  SUBCASE("zero anchor on A: isotropy is all of A") {
    LiePair p = jet_line_pair(2, Q(1));
    AdjointResult r = build_adjoint(p);
    CHECK(r.regular);
    CHECK(r.isotropy_rank == 1);
    CHECK(validate_flat(r.DA).flat);
    // A[2] -> A[1] is the identity of the isotropy, A[1] -> TM is zero
    CMat del = get_del(r.DA);
    CHECK(cmat_entry(del, 1, 0) == unit_element(*p.L->alg));
    CHECK(is_zero(cmat_entry(del, 2, 1)));
  }
  SUBCASE("Euler field: no isotropy summand, still flat") {
    for (int order : {2, 3}) {
      AdjointResult r = build_adjoint(euler_line(order));
      CHECK(r.isotropy_rank == 0);
      CHECK(validate_flat(r.DA).flat);
      CHECK(validate_structure(r.DA).empty());
    }
  }
  SUBCASE("seeded plane") {
    Rng rng(43);
    LiePair p = jet_plane_pair(2, 2);
    std::vector<CMat> seed;
    for (int v = 0; v < 2; ++v) seed.push_back(random_cmat(*p.L->alg, 2, 2, rng, 0.4));
    AdjointResult r = build_adjoint(p, seed);
    CHECK(validate_flat(r.DA).flat);
    CHECK(is_zero(verify_cocycle(build_s(p, r.DA), atiyah_cocycle(r.ext))));
    CHECK_NOTHROW(extend(p, r.DA, r.ext.DL));
  }
}

TEST_CASE("random generators produce valid instances") {
  Rng rng(44);
  for (int t = 0; t < 12; ++t) {
    LiePair p = random_pair(rng);
    CHECK(validate_lie_pair(*p.L, p.sub_rank).empty());
    SuperConnection r = random_resolution(p, rng, t % 3 == 0);
    CHECK(validate_flat(r).flat);
    CHECK(r.bundle.max_degree() == 0);
    std::set<std::string> names;
    for (const auto& s : r.bundle.names()) names.insert(s);
    CHECK(names.size() == static_cast<std::size_t>(r.bundle.total_rank()));
    SuperConnection u = random_ruth(p, rng);
    CHECK(validate_flat(u).flat);
    SuperConnection seed = random_extension_seed(p, u, rng);
    CHECK_NOTHROW(extend(p, u, seed));
  }
}

TEST_CASE("change of basis preserves the pair and refuses to move A") {
  LiePair p = heisenberg_pair();
  MatQ P = MatQ::Identity(3, 3);
  P(0, 1) = 2;
  P(1, 2) = Q(-1, 3);
  LiePair c = change_basis(p, P);
  CHECK(validate_lie_pair(*c.L, c.sub_rank).empty());
  MatQ bad = MatQ::Identity(3, 3);
  bad(2, 0) = 1;
  CHECK_THROWS_AS(change_basis(p, bad), std::invalid_argument);
}

TEST_CASE("direct sum of flat modules is flat and sorted by degree") {
  Rng rng(45);
  LiePair p = sl2_borel_pair();
  SuperConnection a = build_normal(p).DA;
  SuperConnection b = random_flat_module(p, rng);
  SuperConnection s = direct_sum(a, b);
  CHECK(validate_flat(s).flat);
  auto g = s.grading();
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(s.bundle.total_rank() == a.bundle.total_rank() + b.bundle.total_rank());
}

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <string>

#include "connect_later/augmentation_graph.hpp"
#include "connect_later/errors.hpp"
#include "connect_later/linalg.hpp"

using namespace connect_later;

namespace {

GraphParams defaults(bool swapped) {
  GraphParams p;
  p.swapped = swapped;
  return p;
}

// Triple loop straight from the definition.
double s_plus_oracle(const AugmentationGraph& g, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += g.p_u()[k] * g.a_pre()(k, i) * g.a_pre()(k, j);
  return s;
}

std::string validation_message(const GraphParams& p) {
  try {
    p.validate();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("default graph edges") {
  const auto mis = build_connect_later_graph(defaults(true));
  const auto al = build_connect_later_graph(defaults(false));
  // inputs are 1-based in the construction, nodes 0-based here
  CHECK(mis.a_pre()(0, 3) == 0.2);
  CHECK(mis.a_pre()(0, 2) == 0.05);
  CHECK(al.a_pre()(0, 2) == 0.2);
  CHECK(al.a_pre()(0, 3) == 0.05);
  CHECK(mis.a_pre()(1, 2) == 0.2);
  CHECK(mis.a_pre()(1, 3) == 0.05);

  for (const auto* g : {&mis, &al}) {
    CHECK(g->size() == 8);
    CHECK(g->source_nodes() == std::vector<std::size_t>{0, 1});
    CHECK(g->target_nodes() == std::vector<std::size_t>{2, 3, 4, 5, 6, 7});
    CHECK(g->num_classes() == 2);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(g->class_of(i) == (i % 2 == 0 ? 1 : 2));
      CHECK(g->p_u()[i] == 0.125);
      double row = 0.0;
      for (std::size_t j = 0; j < 8; ++j) {
        row += g->a_pre()(i, j);
        CHECK(g->a_pre()(i, j) == g->a_pre()(j, i));
      }
      CHECK(std::abs(row - 1.0) <= 1e-12);
      CHECK(g->a_pre()(i, i) == 0.4);
    }
  }
}

TEST_CASE("each node has one self, two alpha, one beta and two gamma incidences") {
  for (bool swapped : {false, true}) {
    const auto g = build_connect_later_graph(defaults(swapped));
    for (std::size_t i = 0; i < 8; ++i) {
      int alpha = 0, beta = 0, gamma = 0, zero = 0;
      for (std::size_t j = 0; j < 8; ++j) {
        if (i == j) continue;
        const double v = g.a_pre()(i, j);
        alpha += v == 0.2;
        beta += v == 0.1;
        gamma += v == 0.05;
        zero += v == 0.0;
      }
      CHECK(alpha == 2);
      CHECK(beta == 1);
      CHECK(gamma == 2);
      CHECK(zero == 2);
    }
  }
}

TEST_CASE("literal {2,5} edge breaks row-stochasticity") {
  GraphParams p = defaults(true);
  p.literal_edge_2_5 = true;
  const Matrix k = connect_later_kernel(p);
  double worst = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 8; ++j) row += k(i, j);
    worst = std::max(worst, std::abs(row - 1.0));
  }
  CHECK(worst > 1e-3);
  CHECK_THROWS_AS(build_connect_later_graph(p), ValidationError);
}

TEST_CASE("GraphParams validation") {
  GraphParams p;
  CHECK_NOTHROW(p.validate());
  p.rho = 0.15;  // rho < alpha
  CHECK(validation_message(p).find("rho") != std::string::npos);
  p = GraphParams{};
  p.gamma = 0.1;
  p.rho = 0.3;  // min(alpha, beta) = gamma
  CHECK(validation_message(p).find("gamma") != std::string::npos);
  p = GraphParams{};
  p.rho = 0.41;  // rows no longer sum to 1
  CHECK(!validation_message(p).empty());
  p = GraphParams{0.0, 0.2, 0.1, 0.05};
  CHECK(!validation_message(p).empty());
  // another valid parameterization
  CHECK_NOTHROW((GraphParams{0.3, 0.2, 0.16, 0.07}.validate()));
  CHECK_THROWS_AS(build_connect_later_graph(GraphParams{0.5, 0.2, 0.1, 0.05}), ValidationError);
}

TEST_CASE("AugmentationGraph constructor checks") {
  const Matrix id = Matrix::identity(2);
  const std::vector<Domain> dom{Domain::source, Domain::target};
  CHECK_NOTHROW(AugmentationGraph({1, 2}, dom, id, {0.5, 0.5}));
  CHECK_THROWS_AS(AugmentationGraph({1, 2}, dom, Matrix{{0.5, 0.4}, {0, 1}}, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(AugmentationGraph({1, 2}, dom, Matrix{{1.5, -0.5}, {0, 1}}, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(AugmentationGraph({1, 2}, dom, id, {0.6, 0.5}), ValidationError);
  CHECK_THROWS_AS(AugmentationGraph({1, 2}, {Domain::source, Domain::source}, id, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(AugmentationGraph({1, 3}, dom, id, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(AugmentationGraph({1}, dom, id, {0.5, 0.5}), ValidationError);
}

TEST_CASE("interpolate_graphs") {
  const auto al = build_connect_later_graph(defaults(false));
  const auto mis = build_connect_later_graph(defaults(true));
  CHECK(interpolate_graphs(al, mis, 0.0).a_pre() == al.a_pre());
  CHECK(interpolate_graphs(al, mis, 1.0).a_pre() == mis.a_pre());
  const auto half = interpolate_graphs(al, mis, 0.5);
  CHECK(half.a_pre()(0, 2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(half.a_pre()(0, 3) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK_THROWS_AS(interpolate_graphs(al, mis, 1.5), ValidationError);
  CHECK_THROWS_AS(interpolate_graphs(al, mis, -0.1), ValidationError);

  const Matrix id = Matrix::identity(2);
  const AugmentationGraph small({1, 2}, {Domain::source, Domain::target}, id, {0.5, 0.5});
  CHECK_THROWS_AS(interpolate_graphs(al, small, 0.5), ValidationError);
}

TEST_CASE("positive_pair_matrix matches the triple-loop oracle") {
  for (bool swapped : {false, true}) {
    const auto g = build_connect_later_graph(defaults(swapped));
    const auto sp = positive_pair_matrix(g);
    double total = 0.0;
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) {
        CHECK(std::abs(sp(i, j) - s_plus_oracle(g, i, j)) <= 1e-15);
        CHECK(sp(i, j) == sp(j, i));
        total += sp(i, j);
      }
    CHECK(std::abs(total - 1.0) <= 1e-12);
    for (double w : sp.marginals()) CHECK(std::abs(w - 0.125) <= 1e-15);
  }
}

TEST_CASE("identity kernel gives a scaled identity") {
  const std::size_t n = 4;
  const AugmentationGraph g({1, 2, 1, 2}, {Domain::source, Domain::source, Domain::target, Domain::target},
                            Matrix::identity(n), Vector(n, 0.25));
  const auto sp = positive_pair_matrix(g);
  CHECK(sp.matrix() == 0.25 * Matrix::identity(n));
  CHECK(max_abs_diff(normalized_adjacency(sp), Matrix::identity(n)) <= 1e-15);
}

TEST_CASE("PositivePairMatrix invariants") {
  CHECK_THROWS_AS(PositivePairMatrix(Matrix{{0.5, 0.1}, {0.2, 0.2}}), ValidationError);
  CHECK_THROWS_AS(PositivePairMatrix(Matrix{{0.6, 0.0}, {0.0, 0.6}}), ValidationError);
  CHECK_THROWS_AS(PositivePairMatrix(Matrix{{1.2, -0.1}, {-0.1, 0.0}}), ValidationError);
  const PositivePairMatrix isolated(Matrix{{1.0, 0.0}, {0.0, 0.0}});
  try {
    normalized_adjacency(isolated);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("node 2") != std::string::npos);
  }
}

TEST_CASE("normalized adjacency spectrum") {
  for (bool swapped : {false, true}) {
    const auto sp = positive_pair_matrix(build_connect_later_graph(defaults(swapped)));
    const Matrix a = normalized_adjacency(sp);
    CHECK(asymmetry(a) == 0.0);
    const auto e = sym_eig(a);
    CHECK(std::abs(e.values[0] - 1.0) <= 1e-8);
    const Vector w = sp.marginals();
    double norm = 0.0;
    for (double x : w) norm += x;
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(e.vectors(i, 0) - std::sqrt(w[i] / norm)) <= 1e-8);
    const Vector expected{1, .36, .25, .25, .09, .09, 0, 0};
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(e.values[i] - expected[i]) <= 1e-10);
  }
}

TEST_CASE("permutation equivariance of positive pairs and adjacency") {
  // Non-uniform p_u so the permutation is visible in the marginals too.
  const auto base = build_connect_later_graph(defaults(true));
  const Vector p_u{0.05, 0.1, 0.15, 0.2, 0.1, 0.15, 0.05, 0.2};
  const AugmentationGraph g(base.classes(), base.domains(), base.a_pre(), p_u);
  const std::vector<std::size_t> perm{3, 0, 6, 1, 7, 2, 5, 4};

  std::vector<Label> classes(8);
  std::vector<Domain> domains(8);
  Matrix k(8, 8);
  Vector q(8);
  for (std::size_t i = 0; i < 8; ++i) {
    classes[i] = g.class_of(perm[i]);
    domains[i] = g.domain_of(perm[i]);
    q[i] = p_u[perm[i]];
    for (std::size_t j = 0; j < 8; ++j) k(i, j) = g.a_pre()(perm[i], perm[j]);
  }
  const AugmentationGraph h(classes, domains, k, q);
  const auto sg = positive_pair_matrix(g), sh = positive_pair_matrix(h);
  const Matrix ag = normalized_adjacency(sg), ah = normalized_adjacency(sh);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(std::abs(sh(i, j) - sg(perm[i], perm[j])) <= 1e-15);
      CHECK(std::abs(ah(i, j) - ag(perm[i], perm[j])) <= 1e-14);
    }
}

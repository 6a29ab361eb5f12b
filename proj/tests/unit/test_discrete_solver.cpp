#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sturmgraph/discrete_solver.hpp"
#include "sturmgraph/errors.hpp"
#include "sturmgraph/metric_solver.hpp"

using namespace sturmgraph;

namespace {

const double kPi = std::acos(-1.0);

ModelSpec unit_comb(double theta = 0.0) { return ModelSpec::comb(1.0, 1.0, SturmianParameters::golden(theta)); }

}  // namespace

TEST_SUITE("discrete_solver") {
  TEST_CASE("small dense matrices") {
    SymmetricMatrix m(2);
    m(0, 0) = m(1, 1) = 1;
    m(0, 1) = m(1, 0) = -1;
    const auto v = symmetric_eigenvalues(m);
    CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(2.0));

    // P3 normalized Laplacian, characteristic polynomial -x(x-1)(x-2)
    SymmetricMatrix p3(3);
    const double s = -1.0 / std::sqrt(2.0);
    p3(0, 0) = p3(1, 1) = p3(2, 2) = 1;
    p3(0, 1) = p3(1, 0) = p3(1, 2) = p3(2, 1) = s;
    const auto e = symmetric_eigenvalues(p3);
    CHECK(e[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e[1] == doctest::Approx(1.0));
    CHECK(e[2] == doctest::Approx(2.0));

    SymmetricMatrix id(5);
    for (int i = 0; i < 5; ++i) id(i, i) = 1;
    for (double x : symmetric_eigenvalues(id)) CHECK(x == doctest::Approx(1.0));

    SymmetricMatrix bad(2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(symmetric_eigenvalues(bad), InputError);
  }

  TEST_CASE("random symmetric matrices against Eigen") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> size(2, 40);
    for (int trial = 0; trial < 10; ++trial) {
      const ModelSpec m = unit_comb(std::uniform_real_distribution<double>(0, 1)(rng));
      const auto g = build_discrete_truncation(m, model_word(m, size(rng)));
      const auto lib = discrete_spectrum(g).values;
      const auto ref = oracle::discrete_eigenvalues(g);
      REQUIRE(lib.size() == ref.size());
      for (std::size_t i = 0; i < lib.size(); ++i) CHECK(std::abs(lib[i] - ref[i]) < 1e-10);
    }
  }

  TEST_CASE("tridiagonal solver") {
    // free path with Dirichlet ends: 2 - 2 cos(pi j / (n + 1))
    const int n = 30;
    std::vector<double> d(n, 2.0), e(n - 1, -1.0);
    const auto v = tridiagonal_eigenvalues(d, e);
    for (int j = 1; j <= n; ++j) CHECK(v[static_cast<std::size_t>(j - 1)] == doctest::Approx(2 - 2 * std::cos(kPi * j / (n + 1))));
  }

  TEST_CASE("comb spectra") {
    const ModelSpec m = unit_comb();
    const auto s = discrete_spectrum(m, Word::from_string("11"));
    REQUIRE(s.values.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(s.values[i] + s.values[3 - i] == doctest::Approx(2.0));
    const auto p = discrete_spectrum(m, Word::from_string("00"));
    CHECK(p.values[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p.values[1] == doctest::Approx(2.0));
  }

  TEST_CASE("every comb truncation is bipartite") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      const ModelSpec m = unit_comb(std::uniform_real_distribution<double>(0, 1)(rng));
      const auto s = discrete_spectrum(m, model_word(m, 5 + 7 * trial));
      CHECK(static_cast<int>(s.values.size()) == s.vertex_count);
      CHECK(s.values.back() == doctest::Approx(2.0));
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        CHECK(s.values[i] >= -1e-9);
        CHECK(s.values[i] <= 2 + 1e-9);
        CHECK(std::abs(s.values[i] + s.values[s.values.size() - 1 - i] - 2.0) < 1e-9);
      }
    }
  }

  TEST_CASE("dispersion branches") {
    CHECK(dispersion_k(1.0, 0) == doctest::Approx(kPi / 2));
    CHECK(dispersion_k(0.0, 0) == doctest::Approx(0.0));
    CHECK(dispersion_k(0.0, 1) == doctest::Approx(2 * kPi));
    CHECK(dispersion_k(2.0, 0) == doctest::Approx(kPi));
    CHECK(dispersion_k(0.5, 1) > dispersion_k(1.5, 1));  // odd branches decrease
    CHECK_THROWS_AS(dispersion_k(2.5, 0), InputError);
  }

  TEST_CASE("metric spectrum through the correspondence") {
    SUBCASE("triangle") {
      DiscreteSpectrum ds;
      ds.vertex_count = 3;
      ds.values = {0.0, 1.5, 1.5};
      const auto s = metric_spectrum_via_correspondence(ds, 3, kPi + 0.1);
      CHECK(s.count_at_most(kPi * kPi * (1 + 1e-9)) == 3);
      CHECK(s.eigenvalues[1].lambda == doctest::Approx(std::pow(2 * kPi / 3, 2)));
      CHECK(s.eigenvalues[1].multiplicity == 2);
    }
    SUBCASE("single edge") {
      DiscreteSpectrum ds;
      ds.vertex_count = 2;
      ds.values = {0.0, 2.0};
      const auto s = metric_spectrum_via_correspondence(ds, 1, kPi + 0.1);
      CHECK(s.count_at_most(kPi * kPi * (1 + 1e-9)) == 2);
    }
    SUBCASE("comb 11 against the general solver up to 3 pi") {
      const ModelSpec m = unit_comb();
      const Word w = Word::from_string("11");
      const double k_max = 3 * kPi - 0.05;
      const auto via = metric_spectrum_via_correspondence(discrete_spectrum(m, w), 3, k_max).flattened();
      SolveOptions o;
      o.k_max = k_max;
      const auto direct = metric_spectrum_general(build_metric_truncation(m, w), o).flattened();
      REQUIRE(via.size() == direct.size());
      for (std::size_t i = 0; i < via.size(); ++i) CHECK(std::abs(via[i] - direct[i]) < 1e-8);
    }
  }

  TEST_CASE("endpoint counts on small graphs") {
    // count at (pi m)^2 = |E| m + multiplicity of 1 - cos(pi m)
    struct G {
      int n;
      std::vector<std::pair<int, int>> edges;
    };
    const std::vector<G> graphs = {{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}},
                                   {3, {{0, 1}, {1, 2}, {2, 0}}},
                                   {4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
                                   {4, {{0, 1}, {0, 2}, {0, 3}}}};
    for (const auto& gdef : graphs) {
      CompactMetricGraph mg;
      DiscreteGraph dg;
      mg.vertices.resize(static_cast<std::size_t>(gdef.n));
      dg.adjacency.resize(static_cast<std::size_t>(gdef.n));
      for (auto [u, v] : gdef.edges) {
        mg.edges.push_back({u, v, 1.0});
        dg.adjacency[static_cast<std::size_t>(u)].push_back(v);
        dg.adjacency[static_cast<std::size_t>(v)].push_back(u);
      }
      SolveOptions o;
      o.k_max = 2 * kPi + 0.3;
      const auto s = metric_spectrum_general(mg, o);
      const auto mu = oracle::discrete_eigenvalues(dg);
      for (int mm : {1, 2}) {
        const double end = 1 - std::cos(kPi * mm);
        const long M = std::count_if(mu.begin(), mu.end(), [&](double x) { return std::abs(x - end) < 1e-9; });
        CHECK(static_cast<long>(s.count_at_most(kPi * kPi * mm * mm * (1 + 1e-9))) ==
              static_cast<long>(gdef.edges.size()) * mm + M);
      }
    }
  }

  TEST_CASE("discrete IDS") {
    ModelSpec path = ModelSpec::bare_chain(1.0, SturmianParameters::golden());
    const auto r = discrete_ids(path, {250, 499});
    REQUIRE(r.curves.size() == 2);
    CHECK(std::abs(r.curves[1](1.0) - 0.5) < 0.01);
    CHECK(r.curves[1](2.0 + 1e-12) == 1.0);
    CHECK(r.curves[1](-1e-12) == 0.0);
    CHECK(r.sup_distance.size() == 1);
    CHECK_THROWS_AS(discrete_ids(path, {10, 5}), InputError);
  }
}

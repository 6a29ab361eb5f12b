#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sturmgraph/errors.hpp"
#include "sturmgraph/metric_solver.hpp"

using namespace sturmgraph;

namespace {

const double kPi = std::acos(-1.0);

CompactMetricGraph from_edges(int n, std::vector<GraphEdge> edges) {
  CompactMetricGraph g;
  g.vertices.resize(static_cast<std::size_t>(n));
  g.edges = std::move(edges);
  return g;
}

SolveOptions up_to(double k_max) {
  SolveOptions o;
  o.k_max = k_max;
  return o;
}

ModelSpec random_comb(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return ModelSpec::comb(0.6 + u(rng), 0.4 + 1.5 * u(rng), SturmianParameters::golden(u(rng)));
}

}  // namespace

TEST_SUITE("metric_solver") {
  TEST_CASE("interval and cycle spectra") {
    const auto interval = metric_spectrum_general(from_edges(2, {{0, 1, 1.0}}), up_to(3 * kPi + 0.1));
    REQUIRE(interval.eigenvalues.size() == 4);
    for (int j = 0; j < 4; ++j) {
      CHECK(interval.eigenvalues[static_cast<std::size_t>(j)].lambda == doctest::Approx(std::pow(kPi * j, 2)).epsilon(1e-10));
    }
    const auto tri = metric_spectrum_general(from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}), up_to(5.0));
    REQUIRE(tri.eigenvalues.size() == 3);
    CHECK(tri.eigenvalues[1].multiplicity == 2);
    CHECK(tri.eigenvalues[1].lambda == doctest::Approx(std::pow(2 * kPi / 3, 2)));
    CHECK(tri.eigenvalues[2].multiplicity == 2);
  }

  TEST_CASE("Dirichlet and Robin vertices") {
    auto g = from_edges(2, {{0, 1, 1.0}});
    g.vertices[0].condition = VertexCondition::Dirichlet;
    const auto dn = metric_spectrum_general(g, up_to(5.0));
    REQUIRE(dn.eigenvalues.size() == 2);
    CHECK(dn.eigenvalues[0].lambda == doctest::Approx(kPi * kPi / 4));
    CHECK(count_eigenvalues(g, 0.5).at_most == 0);
    CHECK(count_eigenvalues(g, 3.0).at_most == 1);

    auto r = from_edges(2, {{0, 1, 1.0}});
    r.vertices[0].condition = VertexCondition::Robin;
    r.vertices[0].robin = -1.0;  // attracting: one negative eigenvalue
    CHECK(count_eigenvalues(r, -1e-9).below == 1);
    CHECK(count_eigenvalues(r, -10.0).below == 0);
  }

  TEST_CASE("eigenvalue counts agree with the spectrum") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
      const ModelSpec m = random_comb(rng);
      const auto g = build_metric_truncation(m, model_word(m, 6));
      const auto s = metric_spectrum_general(g, up_to(7.0));
      std::uniform_real_distribution<double> e(0.1, 48.0);
      for (int i = 0; i < 10; ++i) {
        const double E = e(rng);
        CHECK(count_eigenvalues(g, E).at_most == s.count_at_most(E));
      }
    }
  }

  TEST_CASE("returned eigenvalues are secular roots") {
    const ModelSpec m = ModelSpec::comb(1.0, 1.0, SturmianParameters::golden());
    const auto g = build_metric_truncation(m, model_word(m, 5));
    for (const auto& e : metric_spectrum_general(g, up_to(9.0)).eigenvalues) {
      if (e.lambda > 0) CHECK(secular_residual(g, std::sqrt(e.lambda)) < 1e-8);
    }
  }

  TEST_CASE("scattering matrix is unitary") {
    const auto g = from_edges(4, {{0, 1, 1.0}, {0, 2, 0.6}, {0, 3, 1.4}, {1, 2, 0.9}});
    const ComplexMatrix S = bond_scattering_matrix(g);
    double worst = 0.0;
    for (int i = 0; i < S.n; ++i) {
      for (int j = 0; j < S.n; ++j) {
        std::complex<double> dot = 0.0;
        for (int r = 0; r < S.n; ++r) dot += std::conj(S(r, i)) * S(r, j);
        worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-12);
    auto robin = g;
    robin.vertices[1].condition = VertexCondition::Robin;
    CHECK_THROWS_AS(bond_scattering_matrix(robin), InputError);
  }

  TEST_CASE("fast comb solver matches the general solver") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
      const ModelSpec m = random_comb(rng);
      const Word w = model_word(m, 3 + trial);
      for (CutCondition cut : {CutCondition::Kirchhoff, CutCondition::Dirichlet}) {
        const auto fast = comb_spectrum_fast(m, w, cut, up_to(8.0)).flattened();
        const auto general = metric_spectrum_general(build_metric_truncation(m, w, cut), up_to(8.0)).flattened();
        REQUIRE(fast.size() == general.size());
        for (std::size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast[i] - general[i]) < 1e-9);
      }
    }
  }

  TEST_CASE("general solver against finite differences") {
    SUBCASE("unit interval") {
      const auto fd = oracle::fd_eigenvalues(from_edges(2, {{0, 1, 1.0}}), 1e-3, 2);
      CHECK(std::abs(fd[1] - kPi * kPi) < 1e-4);
    }
    SUBCASE("triangle doublet at two mesh sizes") {
      const auto g = from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
      const auto coarse = oracle::fd_eigenvalues(g, 2e-3, 3);
      const auto fine = oracle::fd_eigenvalues(g, 1e-3, 3);
      CHECK(std::abs(fine[1] - std::pow(2 * kPi / 3, 2)) < 1e-3);
      CHECK(std::abs(fine[2] - fine[1]) < 1e-6);
      CHECK(std::abs(coarse[1] - fine[1]) < 1e-3);
    }
    SUBCASE("comb 101") {
      const ModelSpec m = ModelSpec::comb(1.0, 1.0, SturmianParameters::golden());
      const auto g = build_metric_truncation(m, Word::from_string("101"));
      const auto fast = comb_spectrum_fast(m, Word::from_string("101"), CutCondition::Kirchhoff, up_to(12.0)).flattened();
      const auto fd = oracle::fd_eigenvalues(g, 1e-3, 10);
      REQUIRE(fast.size() >= 10);
      for (int i = 0; i < 10; ++i) CHECK(std::abs(fd[static_cast<std::size_t>(i)] - fast[static_cast<std::size_t>(i)]) < 1e-3 * std::max(1.0, fast[static_cast<std::size_t>(i)] / 10));
    }
    CHECK_THROWS_AS(oracle::fd_eigenvalues(from_edges(2, {{0, 1, 1.0}}), 0.2, 2), std::invalid_argument);
  }

  TEST_CASE("one Dirichlet point moves each count by at most one") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      const ModelSpec m = random_comb(rng);
      const Word w = model_word(m, 6);
      auto g = build_metric_truncation(m, w);
      auto d = g;
      d.vertices[static_cast<std::size_t>(g.chain[3])].condition = VertexCondition::Dirichlet;
      const auto sg = metric_spectrum_general(g, up_to(6.0));
      const auto sd = metric_spectrum_general(d, up_to(6.0));
      for (double E = 0.25; E < 36.0; E += 0.37) {
        const long diff = static_cast<long>(sg.count_at_most(E)) - static_cast<long>(sd.count_at_most(E));
        CHECK(diff >= 0);
        CHECK(diff <= 1);
      }
    }
  }

  TEST_CASE("Weyl law at k_max") {
    const ModelSpec m = ModelSpec::comb(1.0, 1.0, SturmianParameters::golden());
    const auto g = build_metric_truncation(m, model_word(m, 40));
    const double k = 40.0;
    const auto s = comb_spectrum_fast(m, model_word(m, 40), CutCondition::Kirchhoff, up_to(k));
    const double weyl = k * g.total_length() / kPi;
    CHECK(std::abs(static_cast<double>(s.total()) / weyl - 1.0) < 0.05);
  }

  TEST_CASE("tooth Robin coefficient and decoration data") {
    CHECK(tooth_robin(1.0, 0.5) == doctest::Approx(std::tan(0.5)));
    CHECK_THROWS_AS(tooth_robin(kPi / 2, 1.0), NumericalError);
    const auto dd = dirichlet_decoration_energies(Decoration::tooth(1, 1.0), 8.0);
    REQUIRE(dd.eigenvalues.size() == 3);
    CHECK(dd.eigenvalues[0].lambda == doctest::Approx(kPi * kPi / 4));
    CHECK(dd.eigenvalues[1].lambda == doctest::Approx(9 * kPi * kPi / 4));
    CHECK(dirichlet_decoration_energies(Decoration::point(0), 8.0).eigenvalues.empty());
    Decoration loop;
    loop.vertex_count = 1;
    loop.edges = {{0, 0, 1.0}};
    const auto dl = dirichlet_decoration_energies(loop, 7.0);
    REQUIRE(dl.eigenvalues.size() == 2);
    CHECK(dl.eigenvalues[0].lambda == doctest::Approx(kPi * kPi));
    CHECK(dl.eigenvalues[1].lambda == doctest::Approx(4 * kPi * kPi));
    // tooth m-function: sum of outgoing derivatives of cos(k(l - x)) / cos(kl)
    CHECK(decoration_m_function(Decoration::tooth(1, 1.0), 1.0) == doctest::Approx(std::tan(1.0)));
    CHECK(decoration_m_function(Decoration::point(0), 3.0) == 0.0);
  }

  TEST_CASE("half-line data") {
    const ModelSpec bare = ModelSpec::bare_chain(1.0, SturmianParameters::golden());
    const Word w = model_word(bare, 200);
    const auto h = half_line_solution_data(bare, w, -1.0, 10, 40);
    for (std::size_t i = 0; i <= 10; ++i) CHECK(h.ratio_right(i) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK_THROWS_AS(half_line_solution_data(bare, w, 2.0, 10, 40), NumericalError);
    CHECK_THROWS_AS(half_line_solution_data(bare, w, -1.0, 20, 40), InputError);

    const ModelSpec comb = ModelSpec::comb(1.0, 1.0, SturmianParameters::golden());
    const Word cw = model_word(comb, 1024);
    const auto a = half_line_solution_data(comb, cw, 1.8, 5, 100);
    const auto b = half_line_solution_data(comb, cw, 1.8, 5, 200);
    for (std::size_t i = 0; i <= 5; ++i) CHECK(std::abs(a.ratio_right(i) - b.ratio_right(i)) < 1e-6);
  }

  TEST_CASE("option validation") {
    SolveOptions o;
    o.k_max = -1.0;
    CHECK_THROWS_AS(o.validate(), InputError);
  }
}

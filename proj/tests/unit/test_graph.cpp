#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "netcon/errors.hpp"
#include "netcon/graph.hpp"
#include "test_helpers.hpp"

using namespace netcon;

TEST_CASE("incidence of a single edge") {
    Graph g(2, {{1, 2}});
    const Matrix b = incidence_matrix(g);
    CHECK(b.rows() == 2);
    CHECK(b.cols() == 1);
    CHECK(b(0, 0) == 1.0);
    CHECK(b(1, 0) == -1.0);
}

TEST_CASE("path graph: B B^T equals the Laplacian, hand-multiplied") {
    Graph g(3, {{1, 2}, {2, 3}});
    const Matrix b = incidence_matrix(g);
    const Matrix l = b * b.transposed();
    // Hand multiplication: [[1,-1,0],[-1,2,-1],[0,-1,1]].
    const double expect[3][3] = {{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(l(i, j) == doctest::Approx(expect[i][j]));
    const Matrix l2 = laplacian(g, false);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(l(i, j) == doctest::Approx(l2(i, j)).epsilon(1e-12));
}

TEST_CASE("empty edge set") {
    Graph g(3, {});
    CHECK(incidence_matrix(g).cols() == 0);
    CHECK(laplacian(g, false).max_abs() == 0.0);
}

TEST_CASE("laplacian values") {
    Graph k3(3, {{1, 2}, {2, 3}, {1, 3}});
    const Matrix l = laplacian(k3, false);
    for (int i = 0; i < 3; ++i) CHECK(l(i, i) == doctest::Approx(2.0));
    CHECK(l(0, 1) == doctest::Approx(-1.0));

    Graph weighted(2, {{1, 2}}, {5.0});
    const Matrix lw = laplacian(weighted, true);
    CHECK(lw(0, 0) == doctest::Approx(5.0));
    CHECK(lw(0, 1) == doctest::Approx(-5.0));

    // Weighted star: off-diagonal sum cancels the diagonal exactly.
    Graph star(4, {{1, 2}, {1, 3}, {1, 4}}, {0.3, 1.7, 2.9});
    const Matrix ls = laplacian(star, true);
    for (std::size_t i = 0; i < 4; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < 4; ++j)
            if (j != i) off += ls(i, j);
        CHECK(off + ls(i, i) == 0.0);
    }
}

TEST_CASE("graph invariants rejected at construction") {
    CHECK_THROWS_AS(Graph(2, {{1, 1}}), InputError);              // self loop
    CHECK_THROWS_AS(Graph(2, {{1, 2}, {2, 1}}), InputError);      // duplicate
    CHECK_THROWS_AS(Graph(2, {{1, 3}}), InputError);              // out of range
    CHECK_THROWS_AS(Graph(2, {{1, 2}}, {-1.0}), InputError);      // bad weight
}

TEST_CASE("connectivity") {
    CHECK(is_connected(Graph(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}})));
    CHECK_FALSE(is_connected(Graph(4, {{1, 2}, {3, 4}})));
    CHECK(is_connected(Graph(1, {})));
}

TEST_CASE("symmetric spectra of small Laplacians") {
    // P3 characteristic polynomial: -l(l-1)(l-3) => {0, 1, 3}.
    const auto p3 = symmetric_eigenvalues(laplacian(Graph(3, {{1, 2}, {2, 3}}), false));
    CHECK(p3.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(p3.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(p3.eigenvalues[2] == doctest::Approx(3.0));

    // K3: det(L - l I) = -l(l-3)^2 => {0, 3, 3}.
    const auto k3 = symmetric_eigenvalues(laplacian(Graph(3, {{1, 2}, {2, 3}, {1, 3}}), false));
    CHECK(k3.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(k3.eigenvalues[1] == doctest::Approx(3.0));
    CHECK(k3.eigenvalues[2] == doctest::Approx(3.0));

    const auto zero = symmetric_eigenvalues(Matrix(4, 4));
    for (double ev : zero.eigenvalues) CHECK(ev == 0.0);
}

TEST_CASE("non-symmetric input rejected") {
    Matrix a = Matrix::identity(3);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(symmetric_eigenvalues(a), InputError);
}

TEST_CASE("spectrum sums to the trace") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const Graph g = testing::random_connected_graph(rng);
        const Matrix l = laplacian(g, false);
        const auto spec = symmetric_eigenvalues(l);
        double sum = 0.0;
        for (double ev : spec.eigenvalues) {
            sum += ev;
            CHECK(ev >= -1e-9);
        }
        CHECK(sum == doctest::Approx(l.trace()).epsilon(1e-10));
    }
}

TEST_CASE("disagreement basis properties") {
    // n = 2: the single column is (1, -1)/sqrt(2) up to sign.
    const Matrix s2 = disagreement_basis(2);
    CHECK(std::abs(s2(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s2(0, 0) == doctest::Approx(-s2(1, 0)));

    for (std::size_t n : {2u, 3u, 5u, 9u}) {
        const Matrix s = disagreement_basis(n);
        // 1^T S = 0 and S^T S = I.
        for (std::size_t k = 0; k + 1 < n; ++k) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) col += s(i, k);
            CHECK(col == doctest::Approx(0.0).epsilon(1e-14));
        }
        const Matrix sts = s.transposed() * s;
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = 0; j + 1 < n; ++j)
                CHECK(sts(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
        // S S^T = I - (1/n) 1 1^T within 1e-12.
        const Matrix sst = s * s.transposed();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double want = (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(n);
                CHECK(std::abs(sst(i, j) - want) < 1e-12);
            }
    }
    CHECK_THROWS_AS(disagreement_basis(1), InputError);
}

TEST_CASE("L equals B B^T on random graphs") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const Graph g = testing::random_connected_graph(rng);
        const Matrix b = incidence_matrix(g);
        const Matrix bbt = b * b.transposed();
        const Matrix l = laplacian(g, false);
        for (std::size_t i = 0; i < l.rows(); ++i)
            for (std::size_t j = 0; j < l.cols(); ++j)
                CHECK(std::abs(bbt(i, j) - l(i, j)) < 1e-12);

        const auto spec = symmetric_eigenvalues(l);
        CHECK(std::abs(spec.eigenvalues[0]) < 1e-8);
        CHECK(spec.eigenvalues[1] > 0.0);
    }
}

TEST_CASE("Laplacian quadratic form is positive semidefinite") {
    std::mt19937 rng(13);
    const Graph g = testing::random_connected_graph(rng, 5, 8);
    const Matrix l = laplacian(g, false);
    const Matrix bt = incidence_matrix(g).transposed();
    for (int rep = 0; rep < 100; ++rep) {
        const Vec x = testing::random_vec(rng, l.rows(), -3.0, 3.0);
        const double q = dot(x, l * x);
        CHECK(q >= -1e-12);
        if (q < 1e-12) CHECK(inf_norm(bt * x) < 1e-5);
    }
    // Equality case: the all-ones direction.
    const Vec ones_vec(l.rows(), 1.0);
    CHECK(std::abs(dot(ones_vec, l * ones_vec)) < 1e-12);
}

TEST_CASE("graph CSV round trip") {
    const std::string path = "test_graph_tmp.csv";
    {
        std::ofstream out(path);
        out << "i,j,weight\n1,2,2.5\n2,3,1.0\n";
    }
    const Graph g = load_graph_csv(path);
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.weights()[0] == doctest::Approx(2.5));
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "i,j\n1,4\n";
    }
    const Graph g2 = load_graph_csv(path);
    CHECK(g2.vertex_count() == 4);
    CHECK(g2.weights()[0] == 1.0);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_graph_csv("does_not_exist.csv"), InputError);
}

#include <doctest.h>

#include <random>

#include "netcon/linalg.hpp"

using namespace netcon;

TEST_CASE("matrix multiply and transpose") {
    Matrix a(2, 3);
    a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
    a(1, 0) = 4; a(1, 1) = 5; a(1, 2) = 6;
    const Matrix at = a.transposed();
    CHECK(at.rows() == 3);
    CHECK(at(2, 1) == 6);

    const Matrix g = a * at;  // 2x2 Gram matrix
    CHECK(g(0, 0) == doctest::Approx(14));
    CHECK(g(0, 1) == doctest::Approx(32));
    CHECK(g(1, 1) == doctest::Approx(77));
}

TEST_CASE("matrix-vector product and norms") {
    Matrix a = Matrix::identity(3);
    a(0, 2) = -2.0;
    const Vec v = a * Vec{1.0, 2.0, 3.0};
    CHECK(v[0] == doctest::Approx(-5.0));
    CHECK(v[1] == doctest::Approx(2.0));
    CHECK(a.inf_norm() == doctest::Approx(3.0));
    CHECK(a.trace() == doctest::Approx(3.0));
}

TEST_CASE("set_block bounds") {
    Matrix a(4, 4);
    a.set_block(2, 2, Matrix::identity(2));
    CHECK(a(3, 3) == 1.0);
    CHECK_THROWS(a.set_block(3, 3, Matrix::identity(2)));
}

TEST_CASE("symmetry detection") {
    Matrix a = Matrix::identity(3);
    CHECK(a.is_symmetric(1e-12));
    a(0, 1) = 1e-9;
    CHECK_FALSE(a.is_symmetric(1e-10));
    CHECK(a.is_symmetric(1e-8));
}

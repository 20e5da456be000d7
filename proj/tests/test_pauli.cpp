#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "seplab/pauli.hpp"
#include "seplab/pauli_sum.hpp"
#include "seplab/rng.hpp"

using namespace seplab;

namespace {

PauliOperator random_pauli(int n, std::mt19937_64& rng) {
    PauliOperator p(n);
    std::uniform_int_distribution<int> d4(0, 3);
    for (int q = 0; q < n; ++q) {
        int t = d4(rng);
        p.set_x(q, t == 1 || t == 3);
        p.set_z(q, t == 2 || t == 3);
    }
    p.set_phase_exponent(d4(rng));
    return p;
}

}  // namespace

TEST_CASE("single qubit products") {
    auto X = PauliOperator::x(1, 0);
    auto Y = PauliOperator::y(1, 0);
    auto Z = PauliOperator::z(1, 0);

    // X Z = -i Y
    auto xz = multiply(X, Z);
    CHECK(xz.same_mask(Y));
    CHECK(xz.str() == "-iY0");

    // P * I = P
    auto I = PauliOperator::identity(1);
    CHECK(multiply(X, I) == X);
    CHECK(multiply(I, Y) == Y);

    // (X0 Z1)^2 = +I : disjoint supports commute
    PauliOperator p = PauliOperator::parse("+X0 Z1", 2);
    auto sq = multiply(p, p);
    CHECK(sq.is_identity_mask());
    CHECK(sq.phase_exponent() == 0);
}

TEST_CASE("commutation predicate") {
    auto xx = PauliOperator::parse("+X0 X1", 2);
    auto zz = PauliOperator::parse("+Z0 Z1", 2);
    CHECK(commutes(xx, zz));  // two anticommuting overlaps
    CHECK_FALSE(commutes(PauliOperator::x(1, 0), PauliOperator::z(1, 0)));
    CHECK(commutes(PauliOperator::identity(3), PauliOperator::parse("+Y1", 3)));
}

TEST_CASE("multiply matches commutation sign") {
    std::mt19937_64 rng = make_engine(11);
    for (int it = 0; it < 200; ++it) {
        auto a = random_pauli(5, rng);
        auto b = random_pauli(5, rng);
        auto ab = multiply(a, b);
        auto ba = multiply(b, a);
        CHECK(ab.same_mask(ba));
        int expected = commutes(a, b) ? ba.phase_exponent() : (ba.phase_exponent() + 2) % 4;
        CHECK(ab.phase_exponent() == expected);
    }
}

TEST_CASE("associativity with exact phases") {
    std::mt19937_64 rng = make_engine(12);
    for (int it = 0; it < 200; ++it) {
        auto a = random_pauli(4, rng);
        auto b = random_pauli(4, rng);
        auto c = random_pauli(4, rng);
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    }
}

TEST_CASE("dense export basics") {
    // X on a single qubit
    MatrixXcd mx = PauliOperator::x(1, 0).to_dense();
    CHECK(std::abs(mx(0, 1) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(mx(1, 0) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(mx(0, 0)) < 1e-15);

    // Z on qubit 0 of 2: qubit 0 is the most significant bit -> diag(1,1,-1,-1)
    MatrixXcd mz = PauliOperator::z(2, 0).to_dense();
    CHECK(mz(0, 0).real() == doctest::Approx(1));
    CHECK(mz(1, 1).real() == doctest::Approx(1));
    CHECK(mz(2, 2).real() == doctest::Approx(-1));
    CHECK(mz(3, 3).real() == doctest::Approx(-1));
}

TEST_CASE("dense representation is faithful: product oracle at n=6") {
    std::mt19937_64 rng = make_engine(2024);
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
        auto a = random_pauli(6, rng);
        auto b = random_pauli(6, rng);
        MatrixXcd lhs = multiply(a, b).to_dense();
        MatrixXcd rhs = a.to_dense() * b.to_dense();
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("squares and hermiticity") {
    std::mt19937_64 rng = make_engine(5);
    for (int it = 0; it < 100; ++it) {
        auto a = random_pauli(4, rng);
        auto sq = multiply(a, a);
        CHECK(sq.is_identity_mask());
        // every Pauli squares to +-I
        CHECK((sq.phase_exponent() == 0 || sq.phase_exponent() == 2));
        // squares_to_identity <-> hermitian
        MatrixXcd d = a.to_dense();
        bool herm = (d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-14;
        CHECK(a.squares_to_identity() == herm);
    }
}

TEST_CASE("parser round trip") {
    std::mt19937_64 rng = make_engine(77);
    for (int it = 0; it < 200; ++it) {
        auto a = random_pauli(9, rng);
        auto b = PauliOperator::parse(a.str(), 9);
        CHECK(a == b);
    }
    CHECK(PauliOperator::parse("+X0 Z3 Z4", 5).str() == "+X0 Z3 Z4");
    CHECK(PauliOperator::parse("-iY2", 3).str() == "-iY2");
    CHECK(PauliOperator::parse("+I", 2).str() == "+I");
    CHECK_THROWS_AS(PauliOperator::parse("+Q0", 2), std::invalid_argument);
    CHECK_THROWS_AS(PauliOperator::parse("+X7", 2), std::invalid_argument);
}

TEST_CASE("size mismatch rejected") {
    CHECK_THROWS_AS(multiply(PauliOperator::x(2, 0), PauliOperator::x(3, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(commutes(PauliOperator::x(2, 0), PauliOperator::x(3, 0)),
                    std::invalid_argument);
}

TEST_CASE("dense cap enforced") {
    PauliOperator big(15);
    CHECK_THROWS_AS(big.to_dense(), std::runtime_error);
}

TEST_CASE("pauli sums: exact algebra") {
    // (X + Z)/sqrt-free check: work with 2*(X+Z) style integer coefficients.
    auto X = PauliSum::from_pauli(PauliOperator::x(1, 0));
    auto Z = PauliSum::from_pauli(PauliOperator::z(1, 0));
    auto S = X + Z;
    auto S2 = S * S;  // = 2 I
    S2.normalize();
    CHECK(S2.term_count() == 1);
    CHECK_FALSE(S2.is_identity());  // it is 2I, not I

    // i^{(1 - Z0 Z1)/2} = (1+i)/2 I + (1-i)/2 Z0 Z1 squares to Z0 Z1
    auto zz = PauliSum::from_pauli(PauliOperator::parse("+Z0 Z1", 2));
    auto half = PauliSum::scaled_pauli(PauliOperator::identity(2), 1, 1, 1) +
                PauliSum::scaled_pauli(PauliOperator::parse("+Z0 Z1", 2), 1, -1, 1);
    auto hsq = half * half;
    auto diff = hsq - zz;
    diff.normalize();
    CHECK(diff.is_zero());

    // dense cross-check
    MatrixXcd hd = half.to_dense();
    MatrixXcd err = hd * hd - zz.to_dense();
    CHECK(err.cwiseAbs().maxCoeff() < 1e-14);
}

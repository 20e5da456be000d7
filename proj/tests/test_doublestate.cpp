#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include <Eigen/Eigenvalues>

#include "seplab/doublestate.hpp"
#include "seplab/fock.hpp"
#include "seplab/rng.hpp"

using namespace seplab;

namespace {

MatrixXd random_kernel_covariance(int n_modes, std::mt19937_64& rng, double scale = 0.7) {
    std::normal_distribution<double> g(0, scale);
    MatrixXd k = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < 2 * n_modes; ++i)
        for (int j = i + 1; j < 2 * n_modes; ++j) {
            k(i, j) = g(rng);
            k(j, i) = -k(i, j);
        }
    return kernel_to_covariance(k);
}

MatrixXcd random_parity_even_density(int n_modes, std::mt19937_64& rng) {
    const std::size_t dim = std::size_t(1) << n_modes;
    std::normal_distribution<double> g(0, 1);
    MatrixXcd a = MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
    MatrixXcd rho = a * a.adjoint();
    // zero out odd coherences (parity = occupation parity of the basis index)
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if ((std::popcount(i) + std::popcount(j)) % 2 == 1) rho(i, j) = 0;
    rho /= rho.trace();
    return rho;
}

}  // namespace

TEST_CASE("purify: pure input gives an unentangled double state") {
    std::mt19937_64 rng = make_engine(8);
    MatrixXd k = random_kernel_covariance(3, rng);
    // make it pure
    MatrixXd pure = antisymmetric_function(k, [](double nu) { return nu > 0 ? 1.0 : -1.0; });
    MajoranaCovariance m(3, pure);
    DoubledGaussianState d = purify_covariance(m, /*linear=*/true);
    CHECK(MajoranaCovariance(6, d.gamma).is_pure(1e-10));
    CHECK((d.ket_block() - pure).cwiseAbs().maxCoeff() < 1e-12);
    // ket-bra coupling blocks vanish: product of two unentangled pure states
    CHECK(d.gamma.topRightCorner(6, 6).cwiseAbs().maxCoeff() < 1e-12);
    // the bra copy is the sigma-swapped conjugate state
    MatrixXd sig = MatrixXd::Zero(6, 6);
    for (int j = 0; j < 3; ++j) {
        sig(2 * j, 2 * j + 1) = 1.0;
        sig(2 * j + 1, 2 * j) = 1.0;
    }
    CHECK((d.gamma.bottomRightCorner(6, 6) + sig * pure * sig).cwiseAbs().maxCoeff() < 1e-12);
    // dense cross-check of the whole 4N covariance
    MatrixXcd rho = density_from_covariance(pure);
    Eigen::VectorXcd v = double_state_dense(rho, 3);
    v.normalize();
    CHECK((d.gamma - covariance_of_state(v)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("purify: maximally mixed input gives N maximally entangled pairs") {
    MajoranaCovariance zero(3);
    DoubledGaussianState d = purify_covariance(zero, true);
    CHECK(MajoranaCovariance(6, d.gamma).is_pure(1e-10));
    CHECK(d.ket_block().cwiseAbs().maxCoeff() < 1e-10);
    // every ket mode is fully entangled with its bra partner
    for (int j = 0; j < 3; ++j) {
        MatrixXd sub = restrict_modes(d.gamma, {j, 3 + j});
        CHECK(MajoranaCovariance(2, sub).is_pure(1e-10));
    }
}

TEST_CASE("purify vs dense double state, both weightings, N = 3") {
    std::mt19937_64 rng = make_engine(9);
    for (bool linear : {true, false}) {
        MatrixXd m = random_kernel_covariance(3, rng);
        MajoranaCovariance cov(3, m);
        MatrixXcd rho = density_from_covariance(m);
        MatrixXcd op = rho;
        if (!linear) {
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
            op = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                 es.eigenvectors().adjoint();
        }
        Eigen::VectorXcd v = double_state_dense(op, 3);
        v.normalize();
        MatrixXd dense = covariance_of_state(v);
        DoubledGaussianState d = purify_covariance(cov, linear);
        INFO("linear=", linear);
        CHECK((d.gamma - dense).cwiseAbs().maxCoeff() < 1e-10);
        // trace identity for the ket block
        CHECK((d.ket_block() - doubled_ket_covariance(cov, linear)).cwiseAbs().maxCoeff() < 1e-10);
        if (!linear) CHECK((d.ket_block() - m).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("transport identities hold to 1e-12") {
    std::mt19937_64 rng = make_engine(10);
    for (int n : {1, 2, 3}) {
        MatrixXcd rho = random_parity_even_density(n, rng);
        auto rep = cj_transport_rules_dense(rho, n);
        INFO("n=", n);
        CHECK(rep.max_dev_rho_c < 1e-12);
        CHECK(rep.max_dev_rho_cdag < 1e-12);
        CHECK(rep.max_dev_kraus < 1e-12);
    }
    // |0><0| of one mode: exact identities
    MatrixXcd vac = MatrixXcd::Zero(2, 2);
    vac(0, 0) = 1.0;
    auto rep = cj_transport_rules_dense(vac, 1);
    CHECK(rep.max_dev_rho_c < 1e-14);
    // maximally mixed: exact as well
    auto rep2 = cj_transport_rules_dense(MatrixXcd(0.5 * MatrixXcd::Identity(2, 2)), 1);
    CHECK(rep2.max_dev_rho_cdag < 1e-14);
}

TEST_CASE("parity-odd inputs are rejected") {
    MatrixXcd rho = MatrixXcd::Zero(2, 2);
    rho(0, 0) = rho(1, 1) = 0.5;
    rho(0, 1) = rho(1, 0) = 0.3;  // odd coherence |0><1|
    CHECK_THROWS_AS(cj_transport_rules_dense(rho, 1), std::invalid_argument);
}

TEST_CASE("naive map counterexample") {
    auto rep = naive_map_counterexample();
    CHECK(rep.naive_nonidempotency > 0.1);
    CHECK(rep.channel_idempotency_dev < 1e-12);
    CHECK(rep.corrected_vs_channel_dev < 1e-12);
}

TEST_CASE("corrected CJ operator reproduces purify(channel(M)) on covariances") {
    std::mt19937_64 rng = make_engine(11);
    const int n = 3;
    MatrixXd m = random_kernel_covariance(n, rng);
    double p = 0.2;
    MatrixXcd rho = density_from_covariance(m);
    Eigen::VectorXcd v = double_state_dense(rho, n);
    v = apply_cj_channel_dense(v, n, p);
    v.normalize();
    MatrixXd dense = covariance_of_state(v);
    MajoranaCovariance mp = apply_majorana_channel(MajoranaCovariance(n, m), p);
    DoubledGaussianState d = purify_covariance(mp, true);
    CHECK((d.gamma - dense).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fermionic transpose: definition and properties") {
    std::mt19937_64 rng = make_engine(12);
    const int n = 2;
    // diagonal rho is a fixed point
    MatrixXcd diag = MatrixXcd::Zero(4, 4);
    diag(0, 0) = 0.4;
    diag(1, 1) = 0.3;
    diag(2, 2) = 0.2;
    diag(3, 3) = 0.1;
    MatrixXcd dt = fermionic_transpose_dense(diag, n);
    CHECK((dt - diag).cwiseAbs().maxCoeff() < 1e-12);

    // pure Gaussian 2-mode: covariance maps as -Lambda M Lambda
    MatrixXd m = random_kernel_covariance(n, rng);
    MatrixXcd rho = density_from_covariance(m);
    MatrixXcd rt = fermionic_transpose_dense(rho, n);
    CHECK(std::abs(rt.trace().real() - 1.0) < 1e-12);
    MatrixXd mt = covariance_of_density(rt);
    CHECK((mt - fermionic_transpose_covariance_prediction(m)).cwiseAbs().maxCoeff() < 1e-12);

    // double transpose = parity twist of the substitution rule: (rho^T)^T = P rho P
    std::normal_distribution<double> g(0, 1);
    MatrixXcd a = MatrixXcd::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(rng), g(rng));
    MatrixXcd rho_odd = a * a.adjoint();
    rho_odd /= rho_odd.trace();  // generic: contains odd coherences
    MatrixXcd rtt = fermionic_transpose_dense(fermionic_transpose_dense(rho_odd, n), n);
    MatrixXcd parity = MatrixXcd::Identity(4, 4);
    for (int j = 0; j < n; ++j)
        parity = parity * (Complex(0, -1) * majorana_dense(n, 2 * j) * majorana_dense(n, 2 * j + 1));
    CHECK((rtt - parity * rho_odd * parity).cwiseAbs().maxCoeff() < 1e-12);

    // bosonic-convention transpose differs on odd-parity coherences
    MatrixXcd rto = fermionic_transpose_dense(rho_odd, n);
    double gap = (rto - rho_odd.transpose()).cwiseAbs().maxCoeff();
    CHECK(gap > 1e-3);
    // ... and coincides with it on parity-even states
    MatrixXcd even = random_parity_even_density(n, rng);
    CHECK((fermionic_transpose_dense(even, n) - even.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("double-state spectrum: small cylinder sanity") {
    BdgModel cyl;
    cyl.lx = 10;
    cyl.ly = 4;
    cyl.periodic_y = false;

    EspecResult s0 = double_state_entanglement_spectrum(cyl, 0.0, 2);
    REQUIRE(s0.momentum_resolved);
    // nu -> -nu symmetry of the double-state spectrum
    std::vector<double> sorted = s0.plain;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        CHECK(sorted[i] == doctest::Approx(-sorted[sorted.size() - 1 - i]).epsilon(1e-8));

    // decoherence opens a gap
    EspecResult s1 = double_state_entanglement_spectrum(cyl, 0.1, 2);
    CHECK(min_abs_nu(s1) > min_abs_nu(s0));

    // p = 0.5: the ket marginal is maximally mixed -> flat nu = 0 there
    EspecResult sk = double_state_ket_sector_spectrum(cyl, 0.5);
    for (double v : sk.plain) CHECK(std::abs(v) < 1e-10);
    // spatial half-cut of intact ket-bra pairs is pure: nu = +-1
    EspecResult sh = double_state_entanglement_spectrum(cyl, 0.5, 2);
    for (double v : sh.plain) CHECK(std::abs(std::abs(v) - 1.0) < 1e-10);
}

TEST_CASE("double state of a 4-mode decohered chain matches dense, p = 0.5 limit") {
    // dense validation of the trivial limit quoted for the double state
    BdgModel tiny;
    tiny.lx = 2;
    tiny.ly = 2;
    MajoranaCovariance m0 = ground_state_covariance(tiny);
    MajoranaCovariance mp = apply_majorana_channel(m0, 0.5);
    CHECK(mp.m.cwiseAbs().maxCoeff() == 0.0);
    DoubledGaussianState d = purify_covariance(mp, true);
    MatrixXcd rho = density_from_covariance(mp.m);
    Eigen::VectorXcd v = double_state_dense(rho, 4);
    v.normalize();
    CHECK((d.gamma - covariance_of_state(v)).cwiseAbs().maxCoeff() < 1e-10);
}

#include "seplab/doublestate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "seplab/fock.hpp"

namespace seplab {

namespace {

// Thouless matrix of |Phi> = prod_j (1 + c^+_j d^+_j)|0> on 2N modes.
MatrixXcd phi_pairing_matrix(int n) {
    MatrixXcd z = MatrixXcd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        z(j, n + j) = 1.0;
        z(n + j, j) = -1.0;
    }
    return z;
}

}  // namespace

DoubledGaussianState purify_covariance(const MajoranaCovariance& m, bool linear_weighting) {
    m.validate();
    const int n = m.n_modes;
    DoubledGaussianState out;
    out.n_modes = n;
    out.linear_weighting = linear_weighting;

    // Exactly pure input: |rho> = |Psi> ox |conj>, no ket-bra coupling, and
    // the bra copy carries -sigma M sigma with sigma the per-mode swap of the
    // two Majoranas (transport identities applied to eta_a eta_b). The
    // Moebius route below would push an ill-conditioned kernel through an
    // inverse, so the pure limit gets its own exact branch.
    VectorXd nu = imaj_spectrum(m.m);
    double min_abs = 1e300;
    for (Eigen::Index i = 0; i < nu.size(); ++i) min_abs = std::min(min_abs, std::abs(nu(i)));
    if (min_abs > 1.0 - 1e-10) {
        out.gamma = MatrixXd::Zero(4 * n, 4 * n);
        out.gamma.topLeftCorner(2 * n, 2 * n) = m.m;
        MatrixXd sig = MatrixXd::Zero(2 * n, 2 * n);
        for (int j = 0; j < n; ++j) {
            sig(2 * j, 2 * j + 1) = 1.0;
            sig(2 * j + 1, 2 * j) = 1.0;
        }
        out.gamma.bottomRightCorner(2 * n, 2 * n) = -(sig * m.m * sig);
        return out;
    }

    AtanhMapResult km = covariance_to_kernel(m.m, 1e-13);
    out.n_clipped = km.n_clipped;
    // |rho^{1/2}> evolves |Phi> with exp(-H_rho/2); |rho> with exp(-H_rho)
    MatrixXd kexp = linear_weighting ? MatrixXd(2.0 * km.k) : km.k;

    // The kernel acts on ket modes only; assemble the doubled-system
    // propagator from the ket propagator and identity on the bra copy.
    MatrixXcd gk = nambu_half_exponential(kexp);
    MatrixXcd gd = MatrixXcd::Identity(4 * n, 4 * n);
    gd.block(0, 0, n, n) = gk.topLeftCorner(n, n);
    gd.block(0, 2 * n, n, n) = gk.topRightCorner(n, n);
    gd.block(2 * n, 0, n, n) = gk.bottomLeftCorner(n, n);
    gd.block(2 * n, 2 * n, n, n) = gk.bottomRightCorner(n, n);

    MatrixXcd z = thouless_update_from_propagator(gd, phi_pairing_matrix(n));
    out.gamma = covariance_from_pairing_matrix(z);
    return out;
}

MatrixXd doubled_ket_covariance(const MajoranaCovariance& m, bool linear_weighting) {
    if (!linear_weighting) return m.m;
    // <rho|O_ket|rho>/<rho|rho> is the rho^2-normalized state: nu -> 2nu/(1+nu^2)
    return antisymmetric_function(m.m, [](double nu) { return 2.0 * nu / (1.0 + nu * nu); });
}

Eigen::VectorXcd double_state_dense(const MatrixXcd& op, int n_modes) {
    const int nn = 2 * n_modes;
    const std::size_t dim = std::size_t(1) << nn;
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(dim);
    phi(0) = 1.0;
    for (int j = 0; j < n_modes; ++j) {
        MatrixXcd ck = annihilator_dense(nn, j).adjoint();
        MatrixXcd dk = annihilator_dense(nn, n_modes + j).adjoint();
        phi = phi + ck * (dk * phi);
    }
    const std::size_t dbra = std::size_t(1) << n_modes;
    MatrixXcd big = Eigen::kroneckerProduct(op, MatrixXcd::Identity(dbra, dbra));
    return big * phi;
}

CjTransportReport cj_transport_rules_dense(const MatrixXcd& rho, int n_modes) {
    const std::size_t dim = std::size_t(1) << n_modes;
    if (rho.rows() != Eigen::Index(dim))
        throw std::invalid_argument("cj_transport_rules_dense: dimension mismatch");
    // parity check: the derivation uses [rho, P] = 0
    MatrixXcd parity = MatrixXcd::Identity(dim, dim);
    for (int j = 0; j < n_modes; ++j) {
        MatrixXcd g1 = majorana_dense(n_modes, 2 * j), g2 = majorana_dense(n_modes, 2 * j + 1);
        parity = parity * (Complex(0, -1) * g1 * g2);
    }
    if ((rho * parity - parity * rho).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument(
            "cj_transport_rules_dense: rho does not preserve fermion parity");

    CjTransportReport rep;
    const int nn = 2 * n_modes;
    Eigen::VectorXcd vrho = double_state_dense(rho, n_modes);
    for (int a = 0; a < n_modes; ++a) {
        MatrixXcd ca = annihilator_dense(n_modes, a);
        MatrixXcd da = annihilator_dense(nn, n_modes + a);
        Eigen::VectorXcd lhs1 = double_state_dense(MatrixXcd(rho * ca), n_modes);
        Eigen::VectorXcd rhs1 = da.adjoint() * vrho;
        rep.max_dev_rho_c = std::max(rep.max_dev_rho_c, (lhs1 - rhs1).cwiseAbs().maxCoeff());
        Eigen::VectorXcd lhs2 = double_state_dense(MatrixXcd(rho * ca.adjoint()), n_modes);
        Eigen::VectorXcd rhs2 = -(da * vrho);
        rep.max_dev_rho_cdag = std::max(rep.max_dev_rho_cdag, (lhs2 - rhs2).cwiseAbs().maxCoeff());
        // Kraus-side invariance: |K rho K^+> = K_ket |rho K^+>
        MatrixXcd k = majorana_dense(n_modes, 2 * a);
        Eigen::VectorXcd lhs3 = double_state_dense(MatrixXcd(k * rho * k), n_modes);
        const std::size_t dbra = std::size_t(1) << n_modes;
        MatrixXcd kket = Eigen::kroneckerProduct(k, MatrixXcd::Identity(dbra, dbra));
        Eigen::VectorXcd rhs3 = kket * double_state_dense(MatrixXcd(rho * k), n_modes);
        rep.max_dev_kraus = std::max(rep.max_dev_kraus, (lhs3 - rhs3).cwiseAbs().maxCoeff());
    }
    return rep;
}

NaiveMapReport naive_map_counterexample() {
    NaiveMapReport rep;
    const int n = 1, nn = 2;
    const double p = 0.5;
    MatrixXcd gamma = majorana_dense(nn, 0);           // gamma of the ket mode
    MatrixXcd eta_p = majorana_dense(nn, 3);           // -i(d - d^+) partner
    const std::size_t dim = 4;

    // naive guess (1-p) I + p gamma (x) gammabar -> (1-p) I + p gamma eta
    MatrixXcd naive = (1 - p) * MatrixXcd::Identity(dim, dim) + p * gamma * eta_p;
    rep.naive_nonidempotency = (naive * naive - naive).cwiseAbs().maxCoeff();

    // the channel itself is idempotent at p = 1/2
    auto channel = [&](const MatrixXcd& rho) {
        MatrixXcd g = majorana_dense(n, 0);
        return MatrixXcd((1 - p) * rho + p * g * rho * g);
    };
    // corrected operator: (1-p) I + p (-i gamma eta)
    MatrixXcd corrected =
        (1 - p) * MatrixXcd::Identity(dim, dim) + p * (Complex(0, -1) * gamma * eta_p);

    std::mt19937_64 seed_rng(17);
    std::normal_distribution<double> g(0, 1);
    for (int trial = 0; trial < 10; ++trial) {
        MatrixXcd a = MatrixXcd::Zero(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a(i, j) = Complex(g(seed_rng), g(seed_rng));
        MatrixXcd rho = a * a.adjoint();
        // project to parity-even (drop odd coherences)
        rho(0, 1) = rho(1, 0) = 0;
        rho /= rho.trace();
        rep.channel_idempotency_dev = std::max(
            rep.channel_idempotency_dev,
            (channel(channel(rho)) - channel(rho)).cwiseAbs().maxCoeff());
        Eigen::VectorXcd lhs = double_state_dense(channel(rho), n);
        Eigen::VectorXcd rhs = corrected * double_state_dense(rho, n);
        rep.corrected_vs_channel_dev =
            std::max(rep.corrected_vs_channel_dev, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return rep;
}

Eigen::VectorXcd apply_cj_channel_dense(const Eigen::VectorXcd& doubled, int n_modes, double p) {
    const int nn = 2 * n_modes;
    Eigen::VectorXcd v = doubled;
    for (int j = 0; j < n_modes; ++j) {
        // Kraus gamma_{2j} (x-type): N = -i gamma eta_p ; gamma_{2j+1}: N = -i gamma eta_x
        MatrixXcd gx = majorana_dense(nn, 2 * j);
        MatrixXcd gp = majorana_dense(nn, 2 * j + 1);
        MatrixXcd ex = majorana_dense(nn, 2 * (n_modes + j));
        MatrixXcd ep = majorana_dense(nn, 2 * (n_modes + j) + 1);
        const std::size_t dim = v.size();
        MatrixXcd nx = (1 - p) * MatrixXcd::Identity(dim, dim) + p * (Complex(0, -1) * gx * ep);
        MatrixXcd np = (1 - p) * MatrixXcd::Identity(dim, dim) + p * (Complex(0, -1) * gp * ex);
        v = nx * v;
        v = np * v;
    }
    return v;
}

MatrixXcd fermionic_transpose_dense(const MatrixXcd& rho, int n_modes, int max_modes) {
    if (n_modes > max_modes)
        throw std::runtime_error("fermionic_transpose_dense: mode cap exceeded");
    const int n3 = 3 * n_modes;
    const std::size_t d3 = std::size_t(1) << n3;
    const std::size_t dn = std::size_t(1) << n_modes;

    auto ket_vec = [&](std::size_t mbits) {
        Eigen::VectorXcd s = Eigen::VectorXcd::Zero(d3);
        s(0) = 1.0;
        for (int j = 0; j < n_modes; ++j) {
            MatrixXcd a1 = annihilator_dense(n3, j).adjoint();
            MatrixXcd a2 = annihilator_dense(n3, n_modes + j).adjoint();
            s = s + a1 * (a2 * s);
        }
        for (int j = 0; j < n_modes; ++j)
            if ((mbits >> (n_modes - 1 - j)) & 1) s = annihilator_dense(n3, 2 * n_modes + j).adjoint() * s;
        return s;
    };
    auto bra_vec = [&](std::size_t mbits) {
        Eigen::VectorXcd s = Eigen::VectorXcd::Zero(d3);
        s(0) = 1.0;
        for (int j = 0; j < n_modes; ++j)
            if ((mbits >> (n_modes - 1 - j)) & 1) s = annihilator_dense(n3, j).adjoint() * s;
        for (int j = 0; j < n_modes; ++j) {
            MatrixXcd a1 = annihilator_dense(n3, n_modes + j).adjoint();
            MatrixXcd a2 = annihilator_dense(n3, 2 * n_modes + j).adjoint();
            s = s + a1 * (a2 * s);
        }
        return s;
    };

    // Jordan-Wigner-faithful embedding of rho on the middle copy: permute the
    // middle modes to the front, apply as a leading block, permute back.
    // (A plain Kronecker product would drop the strings of parity-odd
    // components.)
    std::vector<int> perm;
    for (int j = 0; j < n_modes; ++j) perm.push_back(n_modes + j);
    for (int j = 0; j < n_modes; ++j) perm.push_back(j);
    for (int j = 0; j < n_modes; ++j) perm.push_back(2 * n_modes + j);
    MatrixXcd u = mode_permutation_unitary(n3, perm);
    MatrixXcd mid = u.adjoint() *
                    MatrixXcd(Eigen::kroneckerProduct(
                        rho, MatrixXcd::Identity(std::size_t(1) << (2 * n_modes),
                                                 std::size_t(1) << (2 * n_modes)))) *
                    u;

    MatrixXcd out(dn, dn);
    for (std::size_t m = 0; m < dn; ++m) {
        Eigen::VectorXcd mv = mid * ket_vec(m);
        for (std::size_t mp = 0; mp < dn; ++mp) out(mp, m) = (bra_vec(mp).adjoint() * mv)(0, 0);
    }
    return out;
}

MatrixXd fermionic_transpose_covariance_prediction(const MatrixXd& m) {
    const int n = int(m.rows()) / 2;
    VectorXd lam = VectorXd::Ones(2 * n);
    for (int j = 0; j < n; ++j) lam(2 * j + 1) = -1.0;
    return -(lam.asDiagonal() * m * lam.asDiagonal());
}

// ---------------------------------------------------------------------------
// double-state entanglement spectra
// ---------------------------------------------------------------------------

namespace {

DoubledGaussianState decohered_double_state(const BdgModel& cylinder, double p,
                                            const MajoranaCovariance* ground) {
    if (p < 0.0 || p > 0.5)
        throw std::invalid_argument("double_state: p in [0, 0.5]");
    MajoranaCovariance m0 = ground ? *ground : ground_state_covariance(cylinder);
    MajoranaCovariance mp = apply_majorana_channel(m0, p);
    return purify_covariance(mp, /*linear_weighting=*/true);
}

}  // namespace

EspecResult double_state_entanglement_spectrum(const BdgModel& cylinder, double p, int rows,
                                               const MajoranaCovariance* ground) {
    if (rows < 1 || rows >= cylinder.ly)
        throw std::invalid_argument("double_state_entanglement_spectrum: rows in [1, Ly)");
    DoubledGaussianState d = decohered_double_state(cylinder, p, ground);
    // doubled-mode layout == an lx x (2 ly) lattice: ket rows then bra rows
    std::vector<int> region_rows;
    for (int y = 0; y < rows; ++y) region_rows.push_back(y);
    for (int y = 0; y < rows; ++y) region_rows.push_back(cylinder.ly + y);
    MajoranaCovariance gam(2 * cylinder.n_modes(), d.gamma);
    return entanglement_spectrum(gam, cylinder.lx, 2 * cylinder.ly, region_rows,
                                 /*momentum_resolved=*/true, cylinder.antiperiodic_x);
}

EspecResult double_state_ket_sector_spectrum(const BdgModel& cylinder, double p) {
    DoubledGaussianState d = decohered_double_state(cylinder, p, nullptr);
    std::vector<int> region_rows;
    for (int y = 0; y < cylinder.ly; ++y) region_rows.push_back(y);
    MajoranaCovariance gam(2 * cylinder.n_modes(), d.gamma);
    return entanglement_spectrum(gam, cylinder.lx, 2 * cylinder.ly, region_rows,
                                 /*momentum_resolved=*/false, cylinder.antiperiodic_x);
}

}  // namespace seplab

#include "seplab/selftest.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "seplab/bdg.hpp"
#include "seplab/clock.hpp"
#include "seplab/doublestate.hpp"
#include "seplab/fock.hpp"
#include "seplab/gaussian.hpp"
#include "seplab/gibbs.hpp"
#include "seplab/lattice.hpp"
#include "seplab/rng.hpp"
#include "seplab/statmech.hpp"

namespace seplab {

namespace {

void add(SelftestReport& rep, const std::string& module, const std::string& name, double dev,
         double tol) {
    rep.checks.push_back({module, name, dev < tol, dev, tol});
}

MatrixXd random_mixed_cov(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0, 0.6);
    MatrixXd k = MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i + 1; j < 2 * n; ++j) {
            k(i, j) = g(rng);
            k(j, i) = -k(i, j);
        }
    return kernel_to_covariance(k);
}

}  // namespace

SelftestReport selftest(bool mutate_modcomm) {
    SelftestReport rep;
    std::mt19937_64 rng = make_engine(0xC0FFEE);
    double saved_scale = detail::modcomm_scale;
    if (mutate_modcomm) detail::modcomm_scale = 1.02;

    // pauli: dense representation is faithful
    {
        double worst = 0;
        for (int it = 0; it < 20; ++it) {
            PauliOperator a(5), b(5);
            for (int q = 0; q < 5; ++q) {
                int t = int(rng() & 3);
                a.set_x(q, t == 1 || t == 3);
                a.set_z(q, t == 2 || t == 3);
                t = int(rng() & 3);
                b.set_x(q, t == 1 || t == 3);
                b.set_z(q, t == 2 || t == 3);
            }
            worst = std::max(worst, (multiply(a, b).to_dense() - a.to_dense() * b.to_dense())
                                        .cwiseAbs()
                                        .maxCoeff());
        }
        add(rep, "pauli", "dense product oracle (n=5)", worst, 1e-12);
    }

    // gibbs: channel -> Gibbs on the 1d cluster and the Kitaev chain
    add(rep, "gibbs", "cluster_1d(3) channel vs Gibbs, p=0.3",
        dense_channel_oracle(cluster_1d(3).model, 0.3).max_abs_deviation, 1e-10);
    add(rep, "gibbs", "kitaev_chain(4) channel vs Gibbs, p=0.2",
        dense_channel_oracle(kitaev_chain(4).model, 0.2).max_abs_deviation, 1e-10);

    // levin-gu exact algebra
    {
        auto lg = levin_gu(3);
        auto v = validate_model_exact(lg.n_qubits, lg.terms, lg.flips);
        add(rep, "gibbs", "levin_gu(3) exact term algebra", v.ok() ? 0.0 : 1.0, 0.5);
    }

    // Z_N clock channel, N = 3
    {
        auto m = zn_paramagnet(2, 3);
        auto r = zn_channel_to_gibbs(m, 0.2);
        add(rep, "gibbs", "Z3 clock channel is Gibbs", r.gibbs_fit_max_dev + r.offdiag_max, 1e-10);
    }

    // models: closed form vs exact sector average
    {
        auto lm = cluster_1d(3);
        std::vector<double> p(lm.n_terms());
        for (int j = 0; j < lm.n_terms(); ++j) p[j] = (j % 2 == 0) ? 0.25 : 0.15;
        PauliOperator s = string_1d(lm, 0, 0, 1);
        double dev = std::abs(state_observable(lm, p, s) - string_order_1d_exact(0.25, 2));
        add(rep, "models", "string order closed form vs exact trace", dev, 1e-10);
    }

    // statmech: transfer matrix and the L=2 enumeration
    {
        auto c = ising1d_correlation_exact(std::atanh(0.5), 4);
        add(rep, "statmech", "1d transfer matrix vs tanh^d",
            std::abs(c.transfer_matrix_value - 0.0625), 1e-10);
        McParams mc;
        mc.n_disorder = 120;
        mc.therm_sweeps = 60;
        mc.measure_sweeps = 300;
        mc.pt_rungs = 1;
        mc.seed = 314;
        auto e = rbim_average_string(0.25, 2, 1, mc);
        double exact = enumerate_oracle_2d(0.25, 2, 1);
        add(rep, "statmech", "RBIM MC vs enumeration (L=2, 3 sigma)",
            std::abs(e.mean - exact), 3 * e.std_error);
    }

    // gaussian: channel law, CDA, route agreement
    {
        MatrixXd m = random_mixed_cov(3, rng);
        double dev = (dense_channel_oracle_fermionic(m, 0.3) -
                      apply_majorana_channel(MajoranaCovariance(3, m), 0.3).m)
                         .cwiseAbs()
                         .maxCoeff();
        add(rep, "gaussian", "covariance channel law vs dense Kraus", dev, 1e-10);
    }
    {
        std::normal_distribution<double> g(0, 0.6);
        const int n = 4;
        MatrixXd k = MatrixXd::Zero(2 * n, 2 * n);
        for (int i = 0; i < 2 * n; ++i)
            for (int j = i + 1; j < 2 * n; ++j) {
                k(i, j) = g(rng);
                k(j, i) = -k(i, j);
            }
        std::vector<int> occ = {1, 0, 1, 0};
        CdaResult res = cda_state_covariance(k, occ);
        const std::size_t dim = 1 << n;
        MatrixXcd h = MatrixXcd::Zero(dim, dim);
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j)
                if (k(i, j) != 0)
                    h += Complex(0, 0.5) * k(i, j) * (majorana_dense(n, i) * majorana_dense(n, j));
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
        Eigen::VectorXd w = (-0.5 * es.eigenvalues().array()).exp();
        Eigen::VectorXcd psi =
            es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint() * occupation_state(n, occ);
        add(rep, "gaussian", "CDA Moebius vs dense exp(-H/2)|m>",
            (res.cov.m - covariance_of_state(psi)).cwiseAbs().maxCoeff(), 1e-8);
    }
    {
        BdgModel m;
        m.lx = 4;
        m.ly = 2;
        double dev = (ground_state_covariance(m).m - ground_state_covariance_kspace(m).m)
                         .cwiseAbs()
                         .maxCoeff();
        add(rep, "gaussian", "ground covariance: k-space vs real-space", dev, 1e-9);
        std::vector<int> vac(m.n_modes(), 0);
        double dev2 = (cda_state_covariance(m, 0.15, vac).cov.m -
                       cda_vacuum_covariance_pairing_route(m, 0.15).m)
                          .cwiseAbs()
                          .maxCoeff();
        add(rep, "gaussian", "CDA vacuum: pairing route vs Moebius route", dev2, 1e-8);
    }

    // modular commutator vs dense (mutation target)
    {
        const int n = 5;
        MatrixXd a = random_mixed_cov(n, rng);
        MatrixXd pure = antisymmetric_function(a, [](double nu) { return nu > 0 ? 1.0 : -1.0; });
        std::vector<int> ra = {0}, rb = {1, 2}, rc = {3};
        auto lib = modular_commutator(MajoranaCovariance(n, pure), ra, rb, rc);
        MatrixXcd rho = density_from_covariance(pure);
        auto logm = [](const MatrixXcd& x) {
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(x);
            Eigen::VectorXd lv = es.eigenvalues();
            for (Eigen::Index i = 0; i < lv.size(); ++i) lv(i) = std::log(std::max(lv(i), 1e-300));
            return MatrixXcd(es.eigenvectors() * lv.asDiagonal() * es.eigenvectors().adjoint());
        };
        std::vector<int> ab = {0, 1, 2}, bc = {1, 2, 3}, abc = {0, 1, 2, 3};
        MatrixXcd rho_abc = reduced_density(rho, n, abc);
        auto embed = [&](const MatrixXcd& lr, const std::vector<int>& sub) {
            std::vector<int> perm;
            for (int s : sub)
                perm.push_back(int(std::find(abc.begin(), abc.end(), s) - abc.begin()));
            for (int i = 0; i < int(abc.size()); ++i)
                if (std::find(perm.begin(), perm.end(), i) == perm.end()) perm.push_back(i);
            MatrixXcd u = mode_permutation_unitary(int(abc.size()), perm);
            const std::size_t dr = std::size_t(1) << (abc.size() - sub.size());
            MatrixXcd big = MatrixXcd::Zero(lr.rows() * dr, lr.cols() * dr);
            for (Eigen::Index r = 0; r < lr.rows(); ++r)
                for (Eigen::Index c = 0; c < lr.cols(); ++c)
                    big.block(r * dr, c * dr, dr, dr) =
                        lr(r, c) * MatrixXcd::Identity(dr, dr);
            return MatrixXcd(u.adjoint() * big * u);
        };
        MatrixXcd ln_ab = embed(logm(reduced_density(rho, n, ab)), ab);
        MatrixXcd ln_bc = embed(logm(reduced_density(rho, n, bc)), bc);
        Complex jd = (rho_abc * (ln_ab * ln_bc - ln_bc * ln_ab)).trace() * Complex(0, 1);
        add(rep, "gaussian", "modular commutator: Gaussian formula vs dense",
            std::abs(lib.j - jd.real()), 1e-6);
    }

    // doublestate: purification, transport, counterexample
    {
        MatrixXd m = random_mixed_cov(3, rng);
        MatrixXcd rho = density_from_covariance(m);
        Eigen::VectorXcd v = double_state_dense(rho, 3);
        v.normalize();
        DoubledGaussianState d = purify_covariance(MajoranaCovariance(3, m), true);
        add(rep, "doublestate", "purified covariance vs dense double state",
            (d.gamma - covariance_of_state(v)).cwiseAbs().maxCoeff(), 1e-10);

        auto tr = cj_transport_rules_dense(rho, 3);
        add(rep, "doublestate", "CJ transport identities",
            std::max(tr.max_dev_rho_c, tr.max_dev_rho_cdag), 1e-12);

        auto nm = naive_map_counterexample();
        add(rep, "doublestate", "naive map fails, corrected map matches",
            (nm.naive_nonidempotency > 0.1 ? 0.0 : 1.0) + nm.corrected_vs_channel_dev, 1e-10);
    }

    // entanglement spectrum momentum blocks
    {
        BdgModel m;
        m.lx = 6;
        m.ly = 4;
        MajoranaCovariance cov = ground_state_covariance_kspace(m);
        EspecResult blocks = entanglement_spectrum(cov, m.lx, m.ly, {0, 1}, true);
        EspecResult plain = entanglement_spectrum(cov, m.lx, m.ly, {0, 1}, false);
        std::vector<double> a = blocks.plain, b = plain.plain;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        double dev = 0;
        for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
        add(rep, "gaussian", "momentum blocks reproduce the plain spectrum", dev, 1e-8);
    }

    detail::modcomm_scale = saved_scale;
    return rep;
}

}  // namespace seplab

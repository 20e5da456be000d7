#include "seplab/fock.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace seplab {

PauliOperator majorana_pauli(int n_modes, int a) {
    if (a < 0 || a >= 2 * n_modes) throw std::invalid_argument("majorana_pauli: index range");
    int j = a / 2;
    PauliOperator p(n_modes);
    for (int k = 0; k < j; ++k) p.set_z(k, true);
    if (a % 2 == 0) {
        p.set_x(j, true);
    } else {
        p.set_x(j, true);
        p.set_z(j, true);
        p.set_phase_exponent(1);  // Y = i X Z
    }
    return p;
}

MatrixXcd majorana_dense(int n_modes, int a) { return majorana_pauli(n_modes, a).to_dense(); }

MatrixXcd annihilator_dense(int n_modes, int j) {
    return 0.5 * (majorana_dense(n_modes, 2 * j) +
                  Complex(0, 1) * majorana_dense(n_modes, 2 * j + 1));
}

Eigen::VectorXcd occupation_state(int n_modes, const std::vector<int>& bits) {
    if (bits.size() != std::size_t(n_modes))
        throw std::invalid_argument("occupation_state: one bit per mode");
    std::size_t idx = 0;
    for (int j = 0; j < n_modes; ++j)
        if (bits[j]) idx |= std::size_t(1) << (n_modes - 1 - j);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(std::size_t(1) << n_modes);
    v(idx) = 1.0;
    return v;
}

MatrixXd covariance_of_density(const MatrixXcd& rho) {
    int dim = int(rho.rows());
    int n = 0;
    while ((1 << n) < dim) ++n;
    MatrixXd m = MatrixXd::Zero(2 * n, 2 * n);
    std::vector<MatrixXcd> g;
    for (int a = 0; a < 2 * n; ++a) g.push_back(majorana_dense(n, a));
    for (int a = 0; a < 2 * n; ++a)
        for (int b = a + 1; b < 2 * n; ++b) {
            Complex v = (rho * g[a] * g[b]).trace();
            m(a, b) = (Complex(0, -1) * v).real();
            m(b, a) = -m(a, b);
        }
    return m;
}

MatrixXd covariance_of_state(const Eigen::VectorXcd& psi) {
    MatrixXcd rho = psi * psi.adjoint();
    rho /= rho.trace();
    return covariance_of_density(rho);
}

MatrixXcd density_from_covariance(const MatrixXd& m) {
    const int n = int(m.rows()) / 2;
    AtanhMapResult k = covariance_to_kernel(m, 1e-13);
    const std::size_t dim = std::size_t(1) << n;
    MatrixXcd h = MatrixXcd::Zero(dim, dim);
    std::vector<MatrixXcd> g;
    for (int a = 0; a < 2 * n; ++a) g.push_back(majorana_dense(n, a));
    for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b)
            if (k.k(a, b) != 0.0) h += Complex(0, 0.5) * k.k(a, b) * (g[a] * g[b]);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    Eigen::VectorXd w = (-es.eigenvalues().array()).exp();
    MatrixXcd rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
    rho /= rho.trace();
    return rho;
}

MatrixXcd mode_permutation_unitary(int n_modes, const std::vector<int>& perm) {
    if (perm.size() != std::size_t(n_modes))
        throw std::invalid_argument("mode_permutation_unitary: bad permutation size");
    const std::size_t dim = std::size_t(1) << n_modes;
    // fermionic swap of adjacent modes j, j+1
    auto fswap = [&](int j) {
        MatrixXcd u = MatrixXcd::Zero(dim, dim);
        for (std::size_t b = 0; b < dim; ++b) {
            std::size_t bj = (b >> (n_modes - 1 - j)) & 1;
            std::size_t bj1 = (b >> (n_modes - 2 - j)) & 1;
            std::size_t nb = b;
            // swap the two bits
            if (bj != bj1) {
                nb ^= std::size_t(1) << (n_modes - 1 - j);
                nb ^= std::size_t(1) << (n_modes - 2 - j);
            }
            double sign = (bj == 1 && bj1 == 1) ? -1.0 : 1.0;
            u(nb, b) = sign;
        }
        return u;
    };
    std::vector<int> cur(n_modes);
    for (int i = 0; i < n_modes; ++i) cur[i] = i;
    MatrixXcd u = MatrixXcd::Identity(dim, dim);
    // bubble the target ordering into place
    for (int i = 0; i < n_modes; ++i) {
        int want = perm[i];
        int pos = int(std::find(cur.begin(), cur.end(), want) - cur.begin());
        for (int j = pos; j > i; --j) {
            u = fswap(j - 1) * u;
            std::swap(cur[j - 1], cur[j]);
        }
    }
    return u;
}

MatrixXcd partial_trace_last(const MatrixXcd& rho, int n_modes, int k) {
    const int keep = n_modes - k;
    const std::size_t dk = std::size_t(1) << keep, dt = std::size_t(1) << k;
    MatrixXcd out = MatrixXcd::Zero(dk, dk);
    for (std::size_t r = 0; r < dk; ++r)
        for (std::size_t c = 0; c < dk; ++c)
            for (std::size_t t = 0; t < dt; ++t) out(r, c) += rho(r * dt + t, c * dt + t);
    return out;
}

MatrixXcd reduced_density(const MatrixXcd& rho, int n_modes, const std::vector<int>& keep) {
    std::vector<int> perm = keep;
    for (int j = 0; j < n_modes; ++j)
        if (std::find(keep.begin(), keep.end(), j) == keep.end()) perm.push_back(j);
    MatrixXcd u = mode_permutation_unitary(n_modes, perm);
    MatrixXcd rr = u * rho * u.adjoint();
    return partial_trace_last(rr, n_modes, n_modes - int(keep.size()));
}

}  // namespace seplab

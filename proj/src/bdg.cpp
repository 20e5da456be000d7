#include "seplab/bdg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace seplab {

int BdgModel::site(int x, int y) const {
    int xx = ((x % lx) + lx) % lx;
    int yy = ((y % ly) + ly) % ly;
    return yy * lx + xx;
}

BdgKPoint bdg_kpoint(const BdgModel& m, int nx, int ny) {
    BdgKPoint k;
    k.kx = 2.0 * M_PI * (nx + (m.antiperiodic_x ? 0.5 : 0.0)) / m.lx;
    k.ky = 2.0 * M_PI * (ny + (m.antiperiodic_y ? 0.5 : 0.0)) / m.ly;
    k.xi = -2.0 * m.t * (std::cos(k.kx) + std::cos(k.ky)) - (m.mu - 4.0 * m.t);
    k.dk = 2.0 * m.delta * std::complex<double>(std::sin(k.ky), -std::sin(k.kx));
    k.energy = std::sqrt(k.xi * k.xi + std::norm(k.dk));
    return k;
}

double bdg_gap(const BdgModel& m) {
    double gap = 1e300;
    for (int ny = 0; ny < m.ly; ++ny)
        for (int nx = 0; nx < m.lx; ++nx) gap = std::min(gap, bdg_kpoint(m, nx, ny).energy);
    return gap;
}

void majorana_quadratic_form(const BdgModel& m, MatrixXd& a, double& e0) {
    const int n = m.n_modes();
    MatrixXcd h = MatrixXcd::Zero(n, n);
    MatrixXcd dm = MatrixXcd::Zero(n, n);
    auto add_hop = [&](int i, int j, Complex amp) {
        h(i, j) += amp;
        h(j, i) += std::conj(amp);
    };
    auto add_pair = [&](int i, int j, Complex amp) {
        // (amp) c^+_i c^+_j + h.c., stored antisymmetrically
        dm(i, j) += amp;
        dm(j, i) -= amp;
    };
    for (int y = 0; y < m.ly; ++y) {
        for (int x = 0; x < m.lx; ++x) {
            int s = m.site(x, y);
            h(s, s) += -(m.mu - 4.0 * m.t);
            // +x neighbor (always periodic in x, with optional phase)
            double sx = (x + 1 == m.lx && m.antiperiodic_x) ? -1.0 : 1.0;
            int sxn = m.site(x + 1, y);
            add_hop(sxn, s, -m.t * sx);
            add_pair(sxn, s, m.delta * sx);
            // +y neighbor
            bool wraps_y = (y + 1 == m.ly);
            if (!wraps_y || m.periodic_y) {
                double sy = (wraps_y && m.antiperiodic_y) ? -1.0 : 1.0;
                int syn = m.site(x, y + 1);
                add_hop(syn, s, -m.t * sy);
                add_pair(syn, s, Complex(0, 1) * m.delta * sy);
            }
        }
    }
    // Majorana form: x_i = gamma_{2i}, p_i = gamma_{2i+1}
    //   A_xx = h_I + D_I, A_pp = h_I - D_I, A_xp = h_R - D_R
    MatrixXd hr = h.real(), hi = h.imag(), dr = dm.real(), di = dm.imag();
    a = MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a(2 * i, 2 * j) = hi(i, j) + di(i, j);
            a(2 * i + 1, 2 * j + 1) = hi(i, j) - di(i, j);
            a(2 * i, 2 * j + 1) = hr(i, j) - dr(i, j);
            a(2 * j + 1, 2 * i) = -(hr(i, j) - dr(i, j));
        }
    double asym = (a + a.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) throw std::runtime_error("majorana_quadratic_form: asymmetry " +
                                               std::to_string(asym));
    e0 = 0.5 * hr.trace();
}

MajoranaCovariance ground_state_covariance(const BdgModel& m, double gap_tol) {
    MatrixXd a;
    double e0;
    majorana_quadratic_form(m, a, e0);
    VectorXd spec = imaj_spectrum(a);
    double gap = 1e300;
    for (Eigen::Index i = 0; i < spec.size(); ++i) gap = std::min(gap, std::abs(spec(i)));
    if (gap < gap_tol)
        throw std::runtime_error("ground_state_covariance: spectrum not gapped (min |E| = " +
                                 std::to_string(gap) + "); ground state degenerate");
    // M = -i sign(iA): the vacuum block of eps * c^+ c maps to +iY
    MatrixXd cov = antisymmetric_function(a, [](double e) { return e > 0 ? 1.0 : -1.0; });
    return MajoranaCovariance(m.n_modes(), std::move(cov));
}

double ground_state_energy(const BdgModel& m, const MajoranaCovariance& cov) {
    MatrixXd a;
    double e0;
    majorana_quadratic_form(m, a, e0);
    return 0.25 * (a * cov.m).trace() + e0;
}

KspaceTables ground_state_tables(const BdgModel& m) {
    if (!m.periodic_y) throw std::invalid_argument("ground_state_tables: torus geometry only");
    KspaceTables t;
    t.lx = m.lx;
    t.ly = m.ly;
    t.n.resize(std::size_t(m.lx) * m.ly);
    t.kap.resize(std::size_t(m.lx) * m.ly);
    for (int ny = 0; ny < m.ly; ++ny)
        for (int nx = 0; nx < m.lx; ++nx) {
            BdgKPoint k = bdg_kpoint(m, nx, ny);
            std::size_t i = std::size_t(ny) * m.lx + nx;
            t.n[i] = 0.5 * (1.0 - k.xi / k.energy);
            t.kap[i] = k.dk / (2.0 * k.energy);
        }
    return t;
}

MajoranaCovariance covariance_from_tables(const BdgModel& m, const KspaceTables& tab) {
    const int lx = m.lx, ly = m.ly, n = lx * ly;
    // per-(dx, dy) 2x2 Majorana blocks
    std::vector<std::array<double, 4>> block(std::size_t(lx) * ly);
    for (int dy = 0; dy < ly; ++dy)
        for (int dx = 0; dx < lx; ++dx) {
            Complex mxx = 0, mxp = 0, mpx = 0, mpp = 0;
            for (int ny = 0; ny < ly; ++ny)
                for (int nx = 0; nx < lx; ++nx) {
                    BdgKPoint k = bdg_kpoint(m, nx, ny);
                    std::size_t i = std::size_t(ny) * lx + nx;
                    Complex ph = std::polar(1.0, k.kx * dx + k.ky * dy);
                    double nk = tab.n[i];
                    Complex kap = tab.kap[i];
                    mxx += Complex(0, -2.0 * kap.real()) * ph;
                    mpp += Complex(0, 2.0 * kap.real()) * ph;
                    mxp += (1.0 - 2.0 * nk - Complex(0, 2.0 * kap.imag())) * ph;
                    mpx += (2.0 * nk - 1.0 - Complex(0, 2.0 * kap.imag())) * ph;
                }
            double norm = double(n);
            block[std::size_t(dy) * lx + dx] = {mxx.real() / norm, mxp.real() / norm,
                                                mpx.real() / norm, mpp.real() / norm};
        }
    // Antiperiodic directions make the covariance twisted-translation
    // invariant: block(d - L) = -block(d). The table stores d in [0, L);
    // negative raw differences pick up the wrap sign.
    MatrixXd cov(2 * n, 2 * n);
    for (int y1 = 0; y1 < ly; ++y1)
        for (int x1 = 0; x1 < lx; ++x1)
            for (int y2 = 0; y2 < ly; ++y2)
                for (int x2 = 0; x2 < lx; ++x2) {
                    double sign = 1.0;
                    int dxr = x1 - x2, dyr = y1 - y2;
                    if (dxr < 0 && m.antiperiodic_x) sign = -sign;
                    if (dyr < 0 && m.antiperiodic_y) sign = -sign;
                    int dx = (dxr + lx) % lx, dy = (dyr + ly) % ly;
                    const auto& b = block[std::size_t(dy) * lx + dx];
                    int i = y1 * lx + x1, j = y2 * lx + x2;
                    cov(2 * i, 2 * j) = sign * b[0];
                    cov(2 * i, 2 * j + 1) = sign * b[1];
                    cov(2 * i + 1, 2 * j) = sign * b[2];
                    cov(2 * i + 1, 2 * j + 1) = sign * b[3];
                }
    return MajoranaCovariance(n, std::move(cov));
}

MajoranaCovariance ground_state_covariance_kspace(const BdgModel& m) {
    return covariance_from_tables(m, ground_state_tables(m));
}

}  // namespace seplab

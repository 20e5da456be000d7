#include "seplab/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "seplab/fock.hpp"

namespace seplab {

MajoranaCovariance apply_majorana_channel(const MajoranaCovariance& m, double p) {
    if (p < 0.0 || p > 0.5)
        throw std::invalid_argument("apply_majorana_channel: p in [0, 0.5]");
    double f = (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
    return MajoranaCovariance(m.n_modes, f * m.m);
}

MatrixXd dense_channel_on_density(const MatrixXcd& rho_in, double p) {
    int dim = int(rho_in.rows());
    int n = 0;
    while ((1 << n) < dim) ++n;
    MatrixXcd rho = rho_in;
    for (int a = 0; a < 2 * n; ++a) {
        MatrixXcd g = majorana_dense(n, a);
        rho = (1.0 - p) * rho + p * g * rho * g;
    }
    return covariance_of_density(rho);
}

MatrixXd dense_channel_oracle_fermionic(const MatrixXd& m, double p, int max_modes) {
    const int n = int(m.rows()) / 2;
    if (n > max_modes)
        throw std::runtime_error("dense_channel_oracle_fermionic: mode cap exceeded");
    MatrixXcd rho = density_from_covariance(m);
    return dense_channel_on_density(rho, p);
}

GibbsKernelResult gibbs_covariance_to_hamiltonian(const MajoranaCovariance& m, double pure_tol) {
    m.validate();
    GibbsKernelResult out;
    VectorXd nu = imaj_spectrum(m.m);
    for (Eigen::Index i = nu.size() / 2; i < nu.size(); ++i) {
        double v = std::min(std::abs(nu(i)), 1.0);
        if (v >= 1.0 - pure_tol) {
            out.mode_betas.push_back(std::numeric_limits<double>::infinity());
            out.has_infinite_modes = true;
        } else {
            out.mode_betas.push_back(std::atanh(v));
        }
    }
    AtanhMapResult map = covariance_to_kernel(m.m, 1e-12);
    out.k = map.k;
    out.n_clipped = map.n_clipped;
    return out;
}

MajoranaCovariance gibbs_hamiltonian_to_covariance(const MatrixXd& k) {
    return MajoranaCovariance(int(k.rows()) / 2, kernel_to_covariance(k));
}

// ---------------------------------------------------------------------------
// CDA states via the Thouless / Moebius update
// ---------------------------------------------------------------------------

namespace {

// Nambu matrix of H = (i/2) gamma^T K gamma in the (c, c^dag) basis.
MatrixXcd nambu_from_majorana_kernel(const MatrixXd& k) {
    const int n = int(k.rows()) / 2;
    MatrixXd a2 = 2.0 * k;  // H = (i/4) gamma^T (2K) gamma
    MatrixXd axx(n, n), app(n, n), axp(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            axx(i, j) = a2(2 * i, 2 * j);
            app(i, j) = a2(2 * i + 1, 2 * j + 1);
            axp(i, j) = a2(2 * i, 2 * j + 1);
        }
    MatrixXd hi = 0.5 * (axx + app);
    MatrixXd di = 0.5 * (axx - app);
    MatrixXd hr = 0.5 * (axp + axp.transpose());
    MatrixXd dr = -0.5 * (axp - axp.transpose());
    MatrixXcd h = hr.cast<Complex>() + Complex(0, 1) * hi.cast<Complex>();
    MatrixXcd dm = dr.cast<Complex>() + Complex(0, 1) * di.cast<Complex>();
    MatrixXcd nambu(2 * n, 2 * n);
    nambu.topLeftCorner(n, n) = h;
    nambu.topRightCorner(n, n) = dm;
    nambu.bottomLeftCorner(n, n) = -dm.conjugate();
    nambu.bottomRightCorner(n, n) = -h.conjugate();
    return nambu;
}

}  // namespace

// Majorana covariance of |Z> ~ exp(0.5 c^+ Z c^+)|0>  (Z antisymmetric).
MatrixXd covariance_from_pairing_matrix(const MatrixXcd& z) {
    const int n = int(z.rows());
    // annihilator identities for |Z>:  G = Z^+ Z (I + Z^+ Z)^{-1},  F = -Z W
    MatrixXcd w = (MatrixXcd::Identity(n, n) + z.adjoint() * z).inverse();
    MatrixXcd g = z.adjoint() * z * w;  // <c^+_a c_b>
    MatrixXcd f = -(z * w);             // <c_a c_b>
    MatrixXd m(2 * n, 2 * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Complex fab = f(a, b), gab = g(a, b);
            m(2 * a, 2 * b) = 2.0 * (fab.imag() + gab.imag());
            m(2 * a + 1, 2 * b + 1) = 2.0 * (gab.imag() - fab.imag());
            double delta = a == b ? 1.0 : 0.0;
            m(2 * a, 2 * b + 1) = -(2.0 * fab.real() + 2.0 * gab.real() - delta);
            m(2 * a + 1, 2 * b) = 2.0 * f(b, a).real() + 2.0 * g(b, a).real() - delta;
        }
    return m;
}

MatrixXcd nambu_half_exponential(const MatrixXd& k) {
    const int n = int(k.rows()) / 2;
    MatrixXcd nambu = nambu_from_majorana_kernel(k);
    // Kernels proportional to a pure covariance have Nambu^2 = c^2 I
    // (single-particle spectrum +-c); then exp(Nambu/2) has a closed form.
    // Probe with a few vectors before paying for an eigensolve.
    {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n);
        v(0) = 1.0;
        Eigen::VectorXcd hv = nambu * v;
        Eigen::VectorXcd hhv = nambu * hv;
        double c2 = hhv(0).real();
        bool involutory = c2 > 0;
        if (involutory) {
            for (int probe = 0; probe < 3 && involutory; ++probe) {
                Eigen::VectorXcd w = Eigen::VectorXcd::Zero(2 * n);
                w((probe * 7919 + 1) % (2 * n)) = 1.0;
                w((probe * 104729 + 5) % (2 * n)) += Complex(0.5, 0.25);
                Eigen::VectorXcd r = nambu * (nambu * w) - c2 * w;
                involutory = r.cwiseAbs().maxCoeff() < 1e-9 * (1.0 + c2);
            }
        }
        if (involutory) {
            double c = std::sqrt(c2);
            MatrixXcd g = std::cosh(0.5 * c) * MatrixXcd::Identity(2 * n, 2 * n);
            if (c > 0) g += (std::sinh(0.5 * c) / c) * nambu;
            return g;
        }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(nambu);
    Eigen::VectorXd w = (0.5 * es.eigenvalues().array()).exp();
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixXcd thouless_update_from_propagator(const MatrixXcd& g, const MatrixXcd& z0,
                                          bool* regularized, double* log_norm) {
    const int n = int(g.rows()) / 2;
    MatrixXcd den = g.topLeftCorner(n, n) - z0 * g.bottomLeftCorner(n, n);
    MatrixXcd num = g.topRightCorner(n, n) - z0 * g.bottomRightCorner(n, n);
    Eigen::FullPivLU<MatrixXcd> lu(den);
    MatrixXcd deni;
    if (lu.isInvertible()) {
        if (regularized) *regularized = false;
        deni = lu.inverse();
    } else {
        if (regularized) *regularized = true;
        deni = (den + 1e-12 * MatrixXcd::Identity(n, n)).inverse();
    }
    if (log_norm) *log_norm = std::log(std::abs(lu.determinant()));
    MatrixXcd z = -(deni * num);
    return 0.5 * (z - z.transpose());  // clean numerical asymmetry
}

MatrixXcd thouless_update(const MatrixXd& k, const MatrixXcd& z0, bool* regularized,
                          double* log_norm) {
    return thouless_update_from_propagator(nambu_half_exponential(k), z0, regularized, log_norm);
}

CdaResult cda_state_covariance(const MatrixXd& k_rho, const std::vector<int>& occupation) {
    const int n = int(k_rho.rows()) / 2;
    if (occupation.size() != std::size_t(n))
        throw std::invalid_argument("cda_state_covariance: one occupation bit per mode");

    // particle-hole relabeling on occupied modes: p_j -> -p_j
    VectorXd s = VectorXd::Ones(2 * n);
    for (int j = 0; j < n; ++j)
        if (occupation[j]) s(2 * j + 1) = -1.0;
    MatrixXd kt = s.asDiagonal() * k_rho * s.asDiagonal();

    CdaResult out;
    MatrixXcd z = thouless_update(kt, MatrixXcd::Zero(n, n), &out.regularized, &out.log_norm);
    MatrixXd m = covariance_from_pairing_matrix(z);
    // undo the particle-hole relabeling
    m = s.asDiagonal() * m * s.asDiagonal();
    out.cov = MajoranaCovariance(n, std::move(m));
    return out;
}

CdaResult cda_state_covariance(const BdgModel& model, double p, const std::vector<int>& occupation) {
    if (p <= 0.0)
        throw std::invalid_argument(
            "cda_state_covariance: p = 0 projects every |m> onto the ground state; "
            "use ground_state_covariance directly");
    if (p > 0.5) throw std::invalid_argument("cda_state_covariance: p in (0, 0.5]");
    double f = (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
    double beta = std::atanh(f);
    MajoranaCovariance m0 = model.periodic_y ? ground_state_covariance_kspace(model)
                                             : ground_state_covariance(model);
    return cda_state_covariance(beta * m0.m, occupation);
}

MajoranaCovariance cda_vacuum_covariance_pairing_route(const BdgModel& model, double p) {
    if (p <= 0.0 || p > 0.5)
        throw std::invalid_argument("cda_vacuum_covariance_pairing_route: p in (0, 0.5]");
    if (!model.periodic_y)
        throw std::invalid_argument("cda_vacuum_covariance_pairing_route: torus geometry only");
    KspaceTables tab;
    tab.lx = model.lx;
    tab.ly = model.ly;
    tab.n.resize(std::size_t(model.lx) * model.ly);
    tab.kap.resize(std::size_t(model.lx) * model.ly);
    for (int ny = 0; ny < model.ly; ++ny)
        for (int nx = 0; nx < model.lx; ++nx) {
            PairingFunctionResult pf = pairing_function(model, p, nx, ny);
            std::size_t i = std::size_t(ny) * model.lx + nx;
            double h2 = std::norm(pf.h);
            tab.n[i] = h2 / (1.0 + h2);
            tab.kap[i] = -pf.h / (1.0 + h2);
        }
    return covariance_from_tables(model, tab);
}

PairingFunctionResult pairing_function(const BdgModel& m, double p, int nx, int ny) {
    if (p < 0.0 || p > 0.5) throw std::invalid_argument("pairing_function: p in [0, 0.5]");
    BdgKPoint k = bdg_kpoint(m, nx, ny);
    PairingFunctionResult out;
    if (k.energy < 1e-12) {  // gap-closing momentum: u, v undefined
        out.pole_flagged = true;
        out.h = std::numeric_limits<double>::infinity();
        return out;
    }
    double u2 = 0.5 * (1.0 + k.xi / k.energy);
    double v2 = 0.5 * (1.0 - k.xi / k.energy);
    std::complex<double> uv = k.dk / (2.0 * k.energy);
    if (p == 0.0) {
        if (u2 < 1e-12) {
            out.pole_flagged = true;
            out.h = std::numeric_limits<double>::infinity();
            return out;
        }
        out.h = -uv / u2;
        return out;
    }
    // |psi_0> = rho^{1/2}|0> ~ e^{-beta n_alpha}|0> with rho ~ e^{-2 beta n_alpha},
    // tanh(beta) = (1-2p)^2; the Bogoliubov rotation then gives a BCS form with
    //   h(k) = u v (q - 1) / (|u|^2 + |v|^2 q),   q = e^{-2 beta}.
    double f = (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
    double q = (1.0 - f) / (1.0 + f);  // e^{-2 atanh f}
    out.h = uv * (q - 1.0) / (u2 + v2 * q);
    return out;
}

PairAmplitudeResult pair_amplitude_decay(const BdgModel& m, double p, int r_min, int r_max) {
    if (r_max < 0) r_max = m.lx / 3;
    PairAmplitudeResult out;
    std::vector<std::complex<double>> g(m.lx, 0.0);
    const double norm = double(m.lx) * m.ly;
    for (int ny = 0; ny < m.ly; ++ny)
        for (int nx = 0; nx < m.lx; ++nx) {
            PairingFunctionResult pf = pairing_function(m, p, nx, ny);
            if (pf.pole_flagged) continue;
            BdgKPoint k = bdg_kpoint(m, nx, ny);
            for (int r = 0; r < m.lx; ++r) g[r] += pf.h * std::polar(1.0 / norm, k.kx * r);
        }
    std::vector<double> lr, labs, rr;
    for (int r = r_min; r <= r_max; ++r) {
        double a = std::abs(g[r]);
        if (a <= 0) continue;
        out.r.push_back(r);
        out.abs_g.push_back(a);
        rr.push_back(r);
        lr.push_back(std::log(double(r)));
        labs.push_back(std::log(a));
    }
    auto rss = [&](const std::vector<double>& x) {
        // least squares labs = a x + c
        double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sx += x[i];
            sy += labs[i];
            sxx += x[i] * x[i];
            sxy += x[i] * labs[i];
        }
        double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        double c = (sy - a * sx) / n;
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double res = labs[i] - a * x[i] - c;
            s += res * res;
        }
        return s;
    };
    const double n = double(labs.size());
    out.aic_power = n * std::log(rss(lr) / n) + 4.0;
    out.aic_exponential = n * std::log(rss(rr) / n) + 4.0;
    out.exponential_preferred = out.aic_exponential < out.aic_power;
    return out;
}

// ---------------------------------------------------------------------------
// entanglement spectrum
// ---------------------------------------------------------------------------

EspecResult entanglement_spectrum(const MajoranaCovariance& cov, int lx, int ly,
                                  const std::vector<int>& rows, bool momentum_resolved,
                                  bool antiperiodic_x) {
    if (rows.empty()) throw std::invalid_argument("entanglement_spectrum: empty region");
    EspecResult out;
    auto fill_plain_direct = [&]() {
        std::vector<int> modes;
        for (int y : rows)
            for (int x = 0; x < lx; ++x) modes.push_back(y * lx + x);
        MatrixXd ma = restrict_modes(cov.m, modes);
        VectorXd plain = imaj_spectrum(ma);
        out.plain.assign(plain.data(), plain.data() + plain.size());
    };
    if (!momentum_resolved) {
        fill_plain_direct();
        return out;
    }

    // check x-translation invariance (twisted at the wrap) of the restricted
    // covariance before block-diagonalizing
    const int h = int(rows.size());
    auto block_entry = [&](int dx, int y1, int a, int y2, int b) {
        // M[(dx, rows[y1], a), (0, rows[y2], b)]
        int i = rows[y1] * lx + dx, j = rows[y2] * lx + 0;
        return cov.m(2 * i + a, 2 * j + b);
    };
    double dev = 0.0;
    for (int y1 = 0; y1 < h; ++y1)
        for (int y2 = 0; y2 < h; ++y2)
            for (int x0 : {1, lx / 2}) {
                // translate both sites by +1
                int i = rows[y1] * lx + ((x0 + 1) % lx), j = rows[y2] * lx + 1;
                double sign = (x0 + 1 == lx && antiperiodic_x) ? -1.0 : 1.0;
                dev = std::max(dev, std::abs(cov.m(2 * i, 2 * j) - sign * block_entry(x0, y1, 0, y2, 0)));
            }
    if (dev > 1e-8) {
        out.warning = "covariance not x-translation invariant (dev " + std::to_string(dev) +
                      "); returning unresolved spectrum";
        fill_plain_direct();
        return out;
    }

    out.momentum_resolved = true;
    for (int nk = 0; nk < lx; ++nk) {
        double k = 2.0 * M_PI * (nk + (antiperiodic_x ? 0.5 : 0.0)) / lx;
        MatrixXcd bk = MatrixXcd::Zero(2 * h, 2 * h);
        for (int dx = 0; dx < lx; ++dx) {
            Complex ph = std::polar(1.0, -k * dx);
            for (int y1 = 0; y1 < h; ++y1)
                for (int y2 = 0; y2 < h; ++y2)
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            bk(2 * y1 + a, 2 * y2 + b) += ph * block_entry(dx, y1, a, y2, b);
        }
        MatrixXcd ibk = Complex(0, 1) * bk;
        double herm = (ibk - ibk.adjoint()).cwiseAbs().maxCoeff();
        if (herm > 1e-8)
            throw std::runtime_error("entanglement_spectrum: momentum block not hermitian");
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (ibk + ibk.adjoint()));
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            out.points.push_back({k, es.eigenvalues()(i)});
    }
    // the momentum blocks exhaust the restricted spectrum
    out.plain.reserve(out.points.size());
    for (const auto& pt : out.points) out.plain.push_back(pt.nu);
    std::sort(out.plain.begin(), out.plain.end());
    return out;
}

double min_abs_nu(const EspecResult& spec) {
    double m = 1e300;
    for (double v : spec.plain) m = std::min(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------
// modular commutator
// ---------------------------------------------------------------------------

namespace detail {
double modcomm_scale = 1.0;
}

ModcommResult modular_commutator(const MajoranaCovariance& cov, const std::vector<int>& a,
                                 const std::vector<int>& b, const std::vector<int>& c,
                                 double clip_eps) {
    // disjointness
    std::vector<int> all;
    for (auto* v : {&a, &b, &c}) all.insert(all.end(), v->begin(), v->end());
    std::vector<int> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("modular_commutator: regions must be disjoint");

    // ABC index space: a then b then c
    const int nabc = int(all.size());
    std::vector<int> pos_in_abc(cov.n_modes, -1);
    for (int i = 0; i < nabc; ++i) pos_in_abc[all[i]] = i;

    auto embedded_kernel = [&](const std::vector<int>& x, const std::vector<int>& y,
                               int* clips) {
        std::vector<int> xy;
        xy.insert(xy.end(), x.begin(), x.end());
        xy.insert(xy.end(), y.begin(), y.end());
        MatrixXd mxy = restrict_modes(cov.m, xy);
        AtanhMapResult k = covariance_to_kernel(mxy, clip_eps);
        *clips += k.n_clipped;
        MatrixXd emb = MatrixXd::Zero(2 * nabc, 2 * nabc);
        for (std::size_t i = 0; i < xy.size(); ++i)
            for (std::size_t j = 0; j < xy.size(); ++j)
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2; ++v)
                        emb(2 * pos_in_abc[xy[i]] + u, 2 * pos_in_abc[xy[j]] + v) =
                            k.k(2 * i + u, 2 * j + v);
        return emb;
    };

    // adjacent-pair modular kernels: J = i tr(rho [ln rho_AB, ln rho_BC]);
    // this is the convention with J(A,B,C) = -J(C,B,A) and J = pi c/3 for
    // chiral pure states
    ModcommResult out;
    int clips = 0;
    MatrixXd kab = embedded_kernel(a, b, &clips);
    MatrixXd kbc = embedded_kernel(b, c, &clips);
    MatrixXd mabc = restrict_modes(cov.m, all);
    MatrixXd comm = kab * kbc - kbc * kab;
    out.j = detail::modcomm_scale * (-(comm * mabc).trace());
    out.n_clipped = clips;
    out.clip_flagged = clips > 0;
    return out;
}

void standard_tripartition(int l, std::vector<int>& a, std::vector<int>& b, std::vector<int>& c) {
    if (l % 4 != 0) throw std::invalid_argument("standard_tripartition: L must be divisible by 4");
    a.clear();
    b.clear();
    c.clear();
    int q = l / 4;
    for (int y = 0; y < 2 * q; ++y)
        for (int x = 0; x < 2 * q; ++x) {
            int mode = y * l + x;
            if (y < q)
                c.push_back(mode);
            else if (x < q)
                a.push_back(mode);
            else
                b.push_back(mode);
        }
}

}  // namespace seplab

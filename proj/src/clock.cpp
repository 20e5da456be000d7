#include "seplab/clock.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace seplab {

std::size_t ZnClockModel::dim() const {
    std::size_t d = 1;
    for (int i = 0; i < n_sites; ++i) d *= std::size_t(n_clock);
    return d;
}

MatrixXcd clock_shift(int n) {
    MatrixXcd x = MatrixXcd::Zero(n, n);
    for (int m = 0; m < n; ++m) x((m + 1) % n, m) = 1.0;
    return x;
}

MatrixXcd clock_phase(int n) {
    MatrixXcd z = MatrixXcd::Zero(n, n);
    for (int m = 0; m < n; ++m) z(m, m) = std::polar(1.0, 2.0 * M_PI * m / n);
    return z;
}

ZnClockModel zn_paramagnet(int n_sites, int n_clock) {
    if (n_sites < 1 || n_clock < 2) throw std::invalid_argument("zn_paramagnet: bad sizes");
    ZnClockModel m;
    m.n_clock = n_clock;
    m.n_sites = n_sites;
    for (int i = 0; i < n_sites; ++i) {
        m.terms.push_back({{i, clock_shift(n_clock)}});
        m.kraus.push_back({{i, clock_phase(n_clock)}});
    }
    return m;
}

ZnClockModel zn_cluster_chain(int n_sites, int n_clock) {
    if (n_sites < 3 || n_clock < 2) throw std::invalid_argument("zn_cluster_chain: need >= 3 sites");
    ZnClockModel m;
    m.n_clock = n_clock;
    m.n_sites = n_sites;
    MatrixXcd X = clock_shift(n_clock), Z = clock_phase(n_clock);
    for (int j = 0; j < n_sites; ++j) {
        int jm = (j + n_sites - 1) % n_sites, jp = (j + 1) % n_sites;
        m.terms.push_back({{jm, Z}, {j, X}, {jp, Z}});
        m.kraus.push_back({{j, Z}});
    }
    return m;
}

namespace {

// Apply a single-site operator to the dense matrix index space.
// Site 0 is the most significant clock digit, matching the Pauli convention.
std::size_t site_stride(const ZnClockModel& m, int site) {
    std::size_t s = 1;
    for (int i = m.n_sites - 1; i > site; --i) s *= std::size_t(m.n_clock);
    return s;
}

}  // namespace

MatrixXcd dense_operator(const ZnClockModel& m, const std::vector<ZnClockModel::LocalFactor>& f) {
    const std::size_t d = m.dim();
    MatrixXcd out = MatrixXcd::Identity(d, d);
    for (const auto& lf : f) {
        const std::size_t stride = site_stride(m, lf.site);
        const int n = m.n_clock;
        MatrixXcd next = MatrixXcd::Zero(d, d);
        // next = (local op at site) * out
        for (std::size_t col = 0; col < d; ++col) {
            for (std::size_t row = 0; row < d; ++row) {
                Complex v = out(row, col);
                if (v == Complex(0, 0)) continue;
                int digit = int((row / stride) % std::size_t(n));
                std::size_t base = row - std::size_t(digit) * stride;
                for (int to = 0; to < n; ++to) {
                    Complex a = lf.op(to, digit);
                    if (a != Complex(0, 0)) next(base + std::size_t(to) * stride, col) += a * v;
                }
            }
        }
        out = std::move(next);
    }
    return out;
}

MatrixXcd dense_projector(const ZnClockModel& m, int term_index) {
    const std::size_t d = m.dim();
    MatrixXcd h = dense_operator(m, m.terms[term_index]);
    MatrixXcd p = MatrixXcd::Identity(d, d);
    MatrixXcd pw = MatrixXcd::Identity(d, d);
    for (int n = 1; n < m.n_clock; ++n) {
        pw = pw * h;
        p += pw;
    }
    return p / double(m.n_clock);
}

MatrixXcd zn_channel_output(const ZnClockModel& m, double p, std::size_t max_dim) {
    const std::size_t d = m.dim();
    if (d > max_dim) throw std::runtime_error("zn_channel_output: dimension exceeds cap");
    if (p < 0.0 || p > 0.5) throw std::invalid_argument("zn_channel_output: p in [0, 0.5]");
    MatrixXcd rho = MatrixXcd::Identity(d, d);
    for (std::size_t i = 0; i < m.terms.size(); ++i) rho = rho * dense_projector(m, int(i));
    double tr = rho.trace().real();
    if (tr < 1e-12) throw std::runtime_error("zn_channel_output: empty ground space");
    rho /= tr;
    for (std::size_t i = 0; i < m.kraus.size(); ++i) {
        MatrixXcd k = dense_operator(m, m.kraus[i]);
        rho = (1.0 - p) * rho + 0.5 * p * (k * rho * k.adjoint() + k.adjoint() * rho * k);
    }
    return rho;
}

ZnGibbsReport zn_channel_to_gibbs(const ZnClockModel& m, double p, double tol,
                                  std::size_t max_dim) {
    ZnGibbsReport rep;
    const std::size_t d = m.dim();
    MatrixXcd rho = zn_channel_output(m, p, max_dim);
    const int T = int(m.terms.size());

    std::vector<MatrixXcd> projectors;
    MatrixXcd ham = MatrixXcd::Zero(d, d);
    for (int i = 0; i < T; ++i) {
        projectors.push_back(dense_projector(m, i));
        ham += projectors.back();
    }
    rep.commutator_max = (rho * ham - ham * rho).cwiseAbs().maxCoeff();

    // Joint eigenbasis of the commuting projectors: eigenvectors of
    // sum_i sqrt(prime_i) P_i (sqrt-prime weights cannot produce accidental
    // degeneracies between different label vectors).
    static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (T > int(sizeof(primes) / sizeof(primes[0])))
        throw std::runtime_error("zn_channel_to_gibbs: too many terms for labeling");
    MatrixXcd key = MatrixXcd::Zero(d, d);
    for (int i = 0; i < T; ++i) key += std::sqrt(primes[i]) * projectors[i];
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(key);
    const MatrixXcd& V = es.eigenvectors();

    Eigen::MatrixXi labels(d, T);
    for (std::size_t k = 0; k < d; ++k) {
        for (int i = 0; i < T; ++i) {
            Complex v = (V.col(k).adjoint() * projectors[i] * V.col(k))(0, 0);
            int lab = v.real() > 0.5 ? 1 : 0;
            labels(k, i) = lab;
            double resid = (projectors[i] * V.col(k) - double(lab) * V.col(k)).norm();
            if (resid > 1e-8)
                throw std::runtime_error("zn_channel_to_gibbs: joint eigenbasis residual too large");
        }
    }

    MatrixXcd D = V.adjoint() * rho * V;
    Eigen::VectorXd diag(d);
    rep.offdiag_max = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            if (r == c)
                diag(r) = D(r, c).real();
            else
                rep.offdiag_max = std::max(rep.offdiag_max, std::abs(D(r, c)));
        }
    }

    if (p == 0.0) {
        // channel is the identity; output must equal the normalized ground
        // projector (uniform weight on the all-ones label states)
        int n_ground = 0;
        for (std::size_t k = 0; k < d; ++k) {
            bool all_one = true;
            for (int i = 0; i < T; ++i) all_one = all_one && labels(k, i) == 1;
            if (all_one) ++n_ground;
        }
        double dev2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            bool all_one = true;
            for (int i = 0; i < T; ++i) all_one = all_one && labels(k, i) == 1;
            dev2 = std::max(dev2, std::abs(diag(k) - (all_one ? 1.0 / n_ground : 0.0)));
        }
        rep.pure_unchanged = dev2 < tol && rep.offdiag_max < tol;
        rep.gibbs_form_confirmed = rep.pure_unchanged;
        rep.gibbs_fit_max_dev = dev2;
        rep.boltzmann_weights.assign(T, std::numeric_limits<double>::infinity());
        rep.message = rep.pure_unchanged ? "p = 0: ground projector unchanged"
                                         : "p = 0: output deviates from ground projector";
        return rep;
    }

    // Least-squares fit of log(diag) = c + sum_i theta_i * label_i over states
    // with non-negligible weight.
    const double floor_w = 1e-14;
    std::vector<int> keep;
    for (std::size_t k = 0; k < d; ++k)
        if (diag(k) > floor_w) keep.push_back(int(k));
    Eigen::MatrixXd A(keep.size(), T + 1);
    Eigen::VectorXd b(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        A(r, 0) = 1.0;
        for (int i = 0; i < T; ++i) A(r, 1 + i) = labels(keep[r], i);
        b(r) = std::log(diag(keep[r]));
    }
    Eigen::VectorXd theta = A.colPivHouseholderQr().solve(b);
    rep.boltzmann_weights.resize(T);
    for (int i = 0; i < T; ++i) rep.boltzmann_weights[i] = std::exp(theta(1 + i));

    // Deviation of the normalized spectra (covers zero-weight states the fit
    // skipped; a Gibbs state has none).
    Eigen::VectorXd pred(d);
    for (std::size_t k = 0; k < d; ++k) {
        double lg = theta(0);
        for (int i = 0; i < T; ++i) lg += theta(1 + i) * labels(k, i);
        pred(k) = std::exp(lg);
    }
    pred /= pred.sum();
    Eigen::VectorXd dn = diag / diag.sum();
    rep.gibbs_fit_max_dev = (pred - dn).cwiseAbs().maxCoeff();

    rep.gibbs_form_confirmed =
        rep.commutator_max < tol && rep.offdiag_max < tol && rep.gibbs_fit_max_dev < tol;
    rep.message = rep.gibbs_form_confirmed
                      ? "output is a Gibbs state of H = sum_i P_i"
                      : "output deviates from the Gibbs form (see max deviations)";
    return rep;
}

}  // namespace seplab

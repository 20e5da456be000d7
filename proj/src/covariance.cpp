#include "seplab/covariance.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace seplab {

double MajoranaCovariance::spectral_radius() const {
    if (m.rows() == 0) return 0.0;
    VectorXd nu = imaj_spectrum(m);
    return std::max(std::abs(nu(0)), std::abs(nu(nu.size() - 1)));
}

void MajoranaCovariance::validate(double tol_antisym, double tol_spec) const {
    if (m.rows() != 2 * n_modes || m.cols() != 2 * n_modes)
        throw std::invalid_argument("MajoranaCovariance: matrix must be 2N x 2N");
    if (antisymmetry_error() > tol_antisym)
        throw std::invalid_argument("MajoranaCovariance: not antisymmetric (err " +
                                    std::to_string(antisymmetry_error()) + ")");
    double r = spectral_radius();
    if (r > 1.0 + tol_spec)
        throw std::invalid_argument("MajoranaCovariance: spectral radius " + std::to_string(r) +
                                    " exceeds 1");
}

VectorXd imaj_spectrum(const MatrixXd& m) {
    MatrixXcd im = Complex(0, 1) * m.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(im);
    return es.eigenvalues();
}

MatrixXd antisymmetric_function(const MatrixXd& m, const std::function<double(double)>& f) {
    MatrixXcd im = Complex(0, 1) * m.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(im);
    Eigen::VectorXd fd = es.eigenvalues();
    for (Eigen::Index i = 0; i < fd.size(); ++i) fd(i) = f(fd(i));
    MatrixXcd out = es.eigenvectors() * fd.asDiagonal() * es.eigenvectors().adjoint();
    // -i * (function of iM) is real antisymmetric for odd f
    return (Complex(0, -1) * out).real();
}

AtanhMapResult covariance_to_kernel(const MatrixXd& m, double clip_eps) {
    AtanhMapResult res;
    int clipped = 0;
    double max_nu = 0.0;
    res.k = antisymmetric_function(m, [&](double nu) {
        max_nu = std::max(max_nu, std::abs(nu));
        double v = nu;
        if (v > 1.0 - clip_eps) {
            v = 1.0 - clip_eps;
            ++clipped;
        } else if (v < -1.0 + clip_eps) {
            v = -1.0 + clip_eps;
            ++clipped;
        }
        return std::atanh(v);
    });
    res.n_clipped = clipped;
    res.max_abs_nu = max_nu;
    return res;
}

MatrixXd kernel_to_covariance(const MatrixXd& k) {
    return antisymmetric_function(k, [](double x) { return std::tanh(x); });
}

MatrixXd restrict_modes(const MatrixXd& m, const std::vector<int>& modes) {
    const int r = int(modes.size());
    MatrixXd out(2 * r, 2 * r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    out(2 * a + i, 2 * b + j) = m(2 * modes[a] + i, 2 * modes[b] + j);
    return out;
}

}  // namespace seplab

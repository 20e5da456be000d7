#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seplab/pauli.hpp"

namespace seplab {

using MatrixXd = Eigen::MatrixXd;
using VectorXd = Eigen::VectorXd;

/// Majorana covariance matrix M_{jk} = -i tr(rho (gamma_j gamma_k - delta)).
/// Majorana ordering: gamma_{2j} = c_j + c_j^dag, gamma_{2j+1} = -i(c_j - c_j^dag).
/// The vacuum of every mode has 2x2 blocks [[0, 1], [-1, 0]].
struct MajoranaCovariance {
    int n_modes = 0;
    MatrixXd m;  // 2N x 2N, real antisymmetric, singular values <= 1

    MajoranaCovariance() = default;
    explicit MajoranaCovariance(int n) : n_modes(n), m(MatrixXd::Zero(2 * n, 2 * n)) {}
    MajoranaCovariance(int n, MatrixXd mm) : n_modes(n), m(std::move(mm)) {}

    double antisymmetry_error() const { return (m + m.transpose()).cwiseAbs().maxCoeff(); }
    double spectral_radius() const;
    /// max |M^2 + I| entry; ~0 for pure states
    double purity_error() const { return (m * m + MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff(); }
    bool is_pure(double tol = 1e-8) const { return purity_error() < tol; }

    /// Throws if antisymmetry or the spectral bound is violated.
    void validate(double tol_antisym = 1e-10, double tol_spec = 1e-8) const;
};

/// Eigenvalues of i M (real, symmetric around 0), ascending.
VectorXd imaj_spectrum(const MatrixXd& m);

/// Spectral map: applies the odd scalar function f to the antisymmetric
/// matrix (i.e. returns -i U f(D) U^dag with iM = U D U^dag, realified).
/// Degenerate spectra are safe because this is a matrix function.
MatrixXd antisymmetric_function(const MatrixXd& m, const std::function<double(double)>& f);

struct AtanhMapResult {
    MatrixXd k;            // modular kernel: rho ~ exp(-(i/2) gamma^T K gamma)
    int n_clipped = 0;     // eigenvalues clipped at 1 - clip_eps
    double max_abs_nu = 0; // largest |eigenvalue of iM| encountered
};

/// K from M: nu -> atanh(nu) on the spectrum of iM, clipping |nu| >= 1-eps.
AtanhMapResult covariance_to_kernel(const MatrixXd& m, double clip_eps = 1e-12);
/// M from K: nu -> tanh(nu).
MatrixXd kernel_to_covariance(const MatrixXd& k);

/// Restriction of a covariance to a subset of modes (order preserved).
MatrixXd restrict_modes(const MatrixXd& m, const std::vector<int>& modes);

}  // namespace seplab

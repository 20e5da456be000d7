#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "seplab/bdg.hpp"
#include "seplab/covariance.hpp"

namespace seplab {

// ---- single-Majorana channel ----

/// Composition of E_j[rho] = (1-p) rho + p gamma_j rho gamma_j on every
/// Majorana: M -> (1-2p)^2 M.
MajoranaCovariance apply_majorana_channel(const MajoranaCovariance& m, double p);

/// Dense Kraus oracle (N <= 5): builds the density matrix, applies the
/// channel mode by mode, re-extracts the covariance.
MatrixXd dense_channel_oracle_fermionic(const MatrixXd& m, double p, int max_modes = 5);
/// Same Kraus action applied to an arbitrary (not necessarily Gaussian)
/// density matrix; returns the covariance of the output.
MatrixXd dense_channel_on_density(const MatrixXcd& rho, double p);

// ---- Gibbs kernel <-> covariance ----

struct GibbsKernelResult {
    MatrixXd k;                      // finite part of the modular kernel
    std::vector<double> mode_betas;  // atanh of |eigenvalues of iM| (inf for pure modes)
    bool has_infinite_modes = false;
    int n_clipped = 0;
};

/// K from M with round-trip guarantee for mixed states; pure modes are
/// reported symbolically through mode_betas / has_infinite_modes.
GibbsKernelResult gibbs_covariance_to_hamiltonian(const MajoranaCovariance& m,
                                                  double pure_tol = 1e-10);
MajoranaCovariance gibbs_hamiltonian_to_covariance(const MatrixXd& k);

// ---- convex-decomposition-ansatz states ----

/// Pure-state covariance of |psi_m> ~ exp(-H_rho/2) |m>, H_rho = (i/2) g^T K g.
/// Occupied modes of |m> are handled by a particle-hole relabeling; the
/// imaginary-time propagator acts on the Thouless pairing matrix through
/// the linear-fractional (Moebius) update.
struct CdaResult {
    MajoranaCovariance cov;
    double log_norm = 0.0;      // accumulated log-normalization of the evolution
    bool regularized = false;   // the Moebius denominator needed a diagonal shift
};
CdaResult cda_state_covariance(const MatrixXd& k_rho, const std::vector<int>& occupation);

/// CDA covariance for the decohered p+ip model: K_rho = atanh((1-2p)^2) M0.
CdaResult cda_state_covariance(const BdgModel& model, double p, const std::vector<int>& occupation);

/// Vacuum-m fast route via the BCS pairing function (translation invariant).
MajoranaCovariance cda_vacuum_covariance_pairing_route(const BdgModel& model, double p);

/// Majorana covariance of the Thouless state exp(1/2 c^+ Z c^+)|0>.
MatrixXd covariance_from_pairing_matrix(const MatrixXcd& z);

/// Moebius update of a Thouless pairing matrix under exp(-H/2) with
/// H = (i/2) g^T K g: Z -> -(G11 - Z G21)^{-1} (G12 - Z G22), G = exp(Nambu/2).
MatrixXcd thouless_update(const MatrixXd& k, const MatrixXcd& z0, bool* regularized = nullptr,
                          double* log_norm = nullptr);
/// exp(Nambu(K)/2); kernels with Nambu^2 = c^2 I (e.g. K = beta M_pure) take
/// an O(N^2) cosh/sinh closed form instead of an eigensolve.
MatrixXcd nambu_half_exponential(const MatrixXd& k);
/// Moebius step from a precomputed propagator G = exp(Nambu/2).
MatrixXcd thouless_update_from_propagator(const MatrixXcd& g, const MatrixXcd& z0,
                                          bool* regularized = nullptr,
                                          double* log_norm = nullptr);

// ---- pairing function ----

struct PairingFunctionResult {
    std::complex<double> h;
    bool pole_flagged = false;  // p = 0 at a gap-closing momentum
};
/// h(k) = u v (e^{-b} - 1) / (|u|^2 + |v|^2 e^{-b}), tanh b = (1-2p)^2.
PairingFunctionResult pairing_function(const BdgModel& m, double p, int nx, int ny);

/// Real-space pair amplitude g(r) along the x axis, plus a decay-law fit.
struct PairAmplitudeResult {
    std::vector<double> r;
    std::vector<double> abs_g;
    double aic_power = 0.0;
    double aic_exponential = 0.0;
    bool exponential_preferred = false;
};
PairAmplitudeResult pair_amplitude_decay(const BdgModel& m, double p, int r_min = 2,
                                         int r_max = -1);

// ---- entanglement spectrum ----

struct EspecPoint {
    double k = 0.0;  // momentum along the translation-invariant direction
    double nu = 0.0;
};
struct EspecResult {
    std::vector<EspecPoint> points;   // momentum-resolved when available
    std::vector<double> plain;        // unresolved spectrum (always filled)
    bool momentum_resolved = false;
    std::string warning;
};

/// Spectrum of i M_A for A = the given rows (y values) across the full x
/// extent. momentum_resolved requests Fourier block-diagonalization along x;
/// if the covariance is not x-translation invariant the call falls back to
/// the unresolved spectrum with a warning.
EspecResult entanglement_spectrum(const MajoranaCovariance& cov, int lx, int ly,
                                  const std::vector<int>& rows, bool momentum_resolved,
                                  bool antiperiodic_x = true);

/// Smallest |nu| (the entanglement gap proxy).
double min_abs_nu(const EspecResult& spec);

// ---- modular commutator ----

namespace detail {
/// Mutation hook for the self-test: scales the Gaussian modular commutator.
/// 1.0 in production; the self-test perturbs it to prove the dense
/// cross-check catches a wrong constant.
extern double modcomm_scale;
}  // namespace detail

struct ModcommResult {
    double j = 0.0;
    int n_clipped = 0;       // spectrum clipping events in the atanh maps
    bool clip_flagged = false;
};

/// J_ABC = i tr(rho_ABC [ln rho_AC, ln rho_BC]) evaluated in the Gaussian
/// single-particle representation. A, B, C are disjoint mode sets.
ModcommResult modular_commutator(const MajoranaCovariance& cov, const std::vector<int>& a,
                                 const std::vector<int>& b, const std::vector<int>& c,
                                 double clip_eps = 1e-12);

/// The standard tripartition used for the torus runs: three adjacent
/// rectangles of linear size L/4 forming an (L/2) x (L/2) disk-like window,
/// A top-left, B top-right, C the bottom strip.
void standard_tripartition(int l, std::vector<int>& a, std::vector<int>& b, std::vector<int>& c);

}  // namespace seplab

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seplab/pauli.hpp"

namespace seplab {

/// Commuting set of Z_N clock terms h_i (h_i^N = 1) with clock partners K_i
/// satisfying K_i h_i K_i^dag = w h_i (w = exp(2 pi i / N)) and
/// K_i h_j K_i^dag = h_j for j != i. Terms and partners are products of
/// single-site operators; everything downstream is dense.
struct ZnClockModel {
    struct LocalFactor {
        int site;
        MatrixXcd op;  // n_clock x n_clock
    };
    int n_clock = 2;
    int n_sites = 0;
    std::vector<std::vector<LocalFactor>> terms;
    std::vector<std::vector<LocalFactor>> kraus;  // clock partner K(i) per term

    std::size_t dim() const;
};

/// Single-site clock shift X and phase Z on n_clock levels.
MatrixXcd clock_shift(int n_clock);
MatrixXcd clock_phase(int n_clock);

/// Trivial clock paramagnet: h_i = X_i, K_i = Z_i.
ZnClockModel zn_paramagnet(int n_sites, int n_clock);
/// Clock cluster chain: h_j = Z_{j-1} X_j Z_{j+1}, K_j = Z_j (periodic).
ZnClockModel zn_cluster_chain(int n_sites, int n_clock);

MatrixXcd dense_operator(const ZnClockModel& m, const std::vector<ZnClockModel::LocalFactor>& f);
/// P_i = (1/N) sum_n h_i^n, the projector onto the h_i = 1 eigenspace.
MatrixXcd dense_projector(const ZnClockModel& m, int term_index);

struct ZnGibbsReport {
    double commutator_max = 0.0;   // ||[rho, H]||_max
    double offdiag_max = 0.0;      // deviation from being a function of {P_i}
    double gibbs_fit_max_dev = 0.0;  // eigenvalue deviation from the fitted Gibbs form
    std::vector<double> boltzmann_weights;  // w_i with rho ~ prod_i w_i^{P_i}
    bool pure_unchanged = false;   // p = 0 path: output equals the ground projector
    bool gibbs_form_confirmed = false;
    std::string message;
};

/// Applies the channel E_i[rho] = (1-p) rho + (p/2)(K rho K^dag + K^dag rho K)
/// on every site of the ground state prod_i P_i, then tests whether the output
/// is a Gibbs state of H = sum_i P_i and fits the per-projector weight.
ZnGibbsReport zn_channel_to_gibbs(const ZnClockModel& m, double p, double tol = 1e-10,
                                  std::size_t max_dim = 2000);

/// The decohered density matrix itself (trace 1), for cross-checks.
MatrixXcd zn_channel_output(const ZnClockModel& m, double p, std::size_t max_dim = 2000);

}  // namespace seplab

#pragma once

#include <complex>
#include <vector>

#include "seplab/covariance.hpp"

namespace seplab {

/// p+ip lattice superconductor on Lx x Ly sites. Real-space Hamiltonian
///   H = sum_r [ -t (c^+_{r+x} c_r + c^+_{r+y} c_r + h.c.)
///               + D (c^+_{r+x} c^+_r + i c^+_{r+y} c^+_r + h.c.)
///               - (mu - 4t) c^+_r c_r ]
/// with optionally antiperiodic boundary phases (default: both directions,
/// which keeps the spectrum gapped and the ground state unique at the
/// topological point t = D = 1/2, mu = 1).
struct BdgModel {
    int lx = 8, ly = 8;
    double t = 0.5, delta = 0.5, mu = 1.0;
    bool antiperiodic_x = true, antiperiodic_y = true;
    bool periodic_y = true;  // false: open boundary in y (cylinder)

    int n_modes() const { return lx * ly; }
    int site(int x, int y) const;
};

/// Single-particle data at one momentum.
struct BdgKPoint {
    double kx, ky;
    double xi;              // kinetic part
    std::complex<double> dk;  // pairing Delta_k (odd in k)
    double energy;          // sqrt(xi^2 + |dk|^2)
};
BdgKPoint bdg_kpoint(const BdgModel& m, int nx, int ny);

/// Minimum quasiparticle energy over the momentum grid (torus geometries).
double bdg_gap(const BdgModel& m);

/// Majorana quadratic form: H = (i/4) gamma^T A gamma + E0.
/// Works for torus and cylinder geometries.
void majorana_quadratic_form(const BdgModel& m, MatrixXd& a, double& e0);

/// Ground-state covariance via the real-space quadratic form (spectral sign
/// function). Throws when the spectrum is not gapped.
MajoranaCovariance ground_state_covariance(const BdgModel& m, double gap_tol = 1e-8);

/// Ground-state energy <H> for cross-checks: (1/4) tr(A M) + E0.
double ground_state_energy(const BdgModel& m, const MajoranaCovariance& cov);

/// Translation-invariant route (torus only): covariance from the momentum-space
/// BCS solution. Must agree with the real-space route.
MajoranaCovariance ground_state_covariance_kspace(const BdgModel& m);

/// Per-momentum occupancy/pairing tables n_k, kappa_k for arbitrary states of
/// BCS product form; used by the fast covariance assemblers.
struct KspaceTables {
    int lx, ly;
    std::vector<double> n;                  // <c^+_k c_k>
    std::vector<std::complex<double>> kap;  // <c_k c_{-k}>
};
KspaceTables ground_state_tables(const BdgModel& m);

/// Covariance from k-space tables (any BCS-form state). O(N^2) assembly using
/// translation invariance.
MajoranaCovariance covariance_from_tables(const BdgModel& m, const KspaceTables& tab);

}  // namespace seplab

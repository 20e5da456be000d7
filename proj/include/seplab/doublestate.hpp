#pragma once

#include <string>
#include <vector>

#include "seplab/bdg.hpp"
#include "seplab/covariance.hpp"
#include "seplab/gaussian.hpp"

namespace seplab {

/// Pure Gaussian state on the doubled system (ket modes 0..N-1, then bra
/// modes N..2N-1). Built either as |rho> = (rho ox I)|Phi> (linear weighting,
/// the double state) or |rho^{1/2}> = (rho^{1/2} ox I)|Phi> (purification),
/// with |Phi> = prod_j (1 + c^+_j d^+_j)|0> (all CJ phases set to zero).
struct DoubledGaussianState {
    int n_modes = 0;          // ket modes; the doubled system has 2 n_modes
    MatrixXd gamma;           // 4N x 4N covariance
    bool linear_weighting = true;
    int n_clipped = 0;        // kernel clipping events for (near-)pure inputs

    MatrixXd ket_block() const { return gamma.topLeftCorner(2 * n_modes, 2 * n_modes); }
};

/// Purify a covariance. linear_weighting = true builds |rho> (default,
/// matching the double-state spectra), false builds |rho^{1/2}>; the two
/// coincide for pure rho. The ket marginal is rho^2-normalized for |rho>
/// and exactly rho for |rho^{1/2}>.
DoubledGaussianState purify_covariance(const MajoranaCovariance& m, bool linear_weighting = true);

/// Expected ket-marginal covariance of the doubled state (the nu -> nu map
/// for sqrt weighting, nu -> 2nu/(1+nu^2) for linear weighting).
MatrixXd doubled_ket_covariance(const MajoranaCovariance& m, bool linear_weighting);

// ---- dense CJ machinery (oracle scale) ----

/// (op ox I)|Phi> on the doubled Fock space; op acts on the ket modes and
/// must be parity-even for the embedding to be string-free.
Eigen::VectorXcd double_state_dense(const MatrixXcd& op, int n_modes);

struct CjTransportReport {
    double max_dev_rho_c = 0.0;     // |rho c_a>  vs  d^+_a |rho>
    double max_dev_rho_cdag = 0.0;  // |rho c^+_a> vs -d_a |rho>
    double max_dev_kraus = 0.0;     // |K rho K^+> vs K_ket |rho K^+>
};

/// Verifies the operator-transport identities densely for the given
/// parity-even density matrix. Throws std::invalid_argument when rho does
/// not commute with the fermion parity (the derivation requires it).
CjTransportReport cj_transport_rules_dense(const MatrixXcd& rho, int n_modes);

struct NaiveMapReport {
    double naive_nonidempotency = 0.0;    // ||N^2 - N|| at p = 1/2, naive N
    double channel_idempotency_dev = 0.0; // ||E(E(rho)) - E(rho)|| at p = 1/2
    double corrected_vs_channel_dev = 0.0;
};
/// One-mode demonstration that (1-p) I + p gamma eta is not the CJ image of
/// the single-Majorana channel while (1-p) I + p (-i gamma eta) is.
NaiveMapReport naive_map_counterexample();

/// Corrected CJ operator of the full single-Majorana channel (all 2N ket
/// Majoranas), applied densely to a doubled-space vector.
Eigen::VectorXcd apply_cj_channel_dense(const Eigen::VectorXcd& doubled, int n_modes, double p);

// ---- fermionic transpose ----

/// rho^T by the double-contraction definition
///   <m'|rho^T|m> = (<m'| ox <Phi|) (I ox rho ox I) (|Phi> ox |m>),
/// evaluated densely on three copies.
MatrixXcd fermionic_transpose_dense(const MatrixXcd& rho, int n_modes, int max_modes = 3);

/// Covariance of rho^T for Gaussian rho: M -> -Lambda M Lambda with
/// Lambda = diag(+1, -1) per mode (the substitution c -> -cbar, cbar -> c).
MatrixXd fermionic_transpose_covariance_prediction(const MatrixXd& m);

// ---- double-state entanglement spectrum ----

/// Ground state -> single-Majorana channel at rate p -> double state ->
/// restriction to the lower `rows` rows of BOTH layers -> momentum-resolved
/// spectrum of i M_L. Cylinder geometry: periodic (antiperiodic) x, open y.
/// Pass the precomputed ground covariance when sweeping p.
EspecResult double_state_entanglement_spectrum(const BdgModel& cylinder, double p, int rows,
                                               const MajoranaCovariance* ground = nullptr);

/// Spectrum restricted to the whole ket layer (used for the p = 0.5 limit,
/// where the decohered ket marginal is maximally mixed).
EspecResult double_state_ket_sector_spectrum(const BdgModel& cylinder, double p);

}  // namespace seplab

#pragma once

#include <vector>

#include "seplab/covariance.hpp"
#include "seplab/pauli.hpp"

namespace seplab {

// Dense Fock-space machinery used by the brute-force oracles. Jordan-Wigner
// with mode 0 on the most significant qubit; vacuum = |00...0>.

/// gamma_a for a in [0, 2N): even a -> Z...ZX, odd a -> Z...ZY.
PauliOperator majorana_pauli(int n_modes, int a);
MatrixXcd majorana_dense(int n_modes, int a);

/// Annihilator c_j = (gamma_{2j} + i gamma_{2j+1}) / 2.
MatrixXcd annihilator_dense(int n_modes, int j);

/// Occupation product state |m> (bit j set = mode j occupied).
Eigen::VectorXcd occupation_state(int n_modes, const std::vector<int>& bits);

/// Covariance of a dense state / density matrix.
MatrixXd covariance_of_density(const MatrixXcd& rho);
MatrixXd covariance_of_state(const Eigen::VectorXcd& psi);

/// Dense Gaussian density matrix with the given covariance, built through the
/// modular kernel (eigenvalues of iM clipped at 1 - 1e-13, so pure inputs are
/// represented to ~1e-13).
MatrixXcd density_from_covariance(const MatrixXd& m);

/// Fermionic mode permutation as a dense unitary (chains of fermionic SWAPs,
/// |11> -> -|11>). perm[i] = source mode that lands at position i.
MatrixXcd mode_permutation_unitary(int n_modes, const std::vector<int>& perm);

/// Partial trace over the LAST k qubits/modes (valid fermionic reduction when
/// the kept modes are the leading Jordan-Wigner block).
MatrixXcd partial_trace_last(const MatrixXcd& rho, int n_modes, int k);

/// Fermionic reduced density matrix on an arbitrary ordered subset of modes:
/// permutes the kept modes to the front (with fermionic swaps) and traces the
/// rest.
MatrixXcd reduced_density(const MatrixXcd& rho, int n_modes, const std::vector<int>& keep);

}  // namespace seplab

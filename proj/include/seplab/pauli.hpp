#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace seplab {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;

/// N-qubit Pauli string in symplectic form:  P = i^phase * prod_q X_q^{x} Z_q^{z}.
/// The phase is an exponent of i kept modulo 4, so all algebra is exact.
///
/// Dense-export basis convention (used by every dense oracle in the project):
/// qubit 0 is the MOST significant bit of the computational-basis index.
class PauliOperator {
  public:
    PauliOperator() = default;
    explicit PauliOperator(int n_qubits);

    static PauliOperator identity(int n_qubits);
    /// Single-site X/Y/Z, e.g. PauliOperator::x(5, 2) = X on qubit 2 of 5.
    static PauliOperator x(int n_qubits, int site);
    static PauliOperator y(int n_qubits, int site);
    static PauliOperator z(int n_qubits, int site);

    /// Parse textual notation: sign token then letter+site tokens,
    /// e.g. "+X0 Z3 Z4", "-iY2", "+I". Round-trips exactly with str().
    static PauliOperator parse(const std::string& text, int n_qubits);

    int n_qubits() const { return n_; }
    /// Phase exponent k of i^k, k in {0,1,2,3}.
    int phase_exponent() const { return phase_; }
    Complex phase() const;

    bool x_bit(int q) const { return bit(x_, q); }
    bool z_bit(int q) const { return bit(z_, q); }
    void set_x(int q, bool v) { set_bit(x_, q, v); }
    void set_z(int q, bool v) { set_bit(z_, q, v); }
    void set_phase_exponent(int k) { phase_ = ((k % 4) + 4) % 4; }

    bool is_identity_mask() const;  // empty x and z masks, any phase
    int weight() const;             // number of non-identity sites

    PauliOperator multiplied_by(const PauliOperator& rhs) const;
    bool commutes_with(const PauliOperator& rhs) const;
    /// True iff P^2 = +I (equivalently, P is Hermitian).
    bool squares_to_identity() const;
    PauliOperator adjoint() const;

    bool operator==(const PauliOperator& other) const;
    /// Equal masks, phase ignored.
    bool same_mask(const PauliOperator& other) const;

    std::string str() const;

    /// Dense 2^n x 2^n matrix. Caps n to keep memory sane.
    MatrixXcd to_dense(int max_qubits = 14) const;

  private:
    static bool bit(const std::vector<std::uint64_t>& w, int q);
    static void set_bit(std::vector<std::uint64_t>& w, int q, bool v);
    static int popcount_and(const std::vector<std::uint64_t>& a,
                            const std::vector<std::uint64_t>& b);

    int n_ = 0;
    int phase_ = 0;  // exponent of i, mod 4
    std::vector<std::uint64_t> x_;
    std::vector<std::uint64_t> z_;
};

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b);
bool commutes(const PauliOperator& a, const PauliOperator& b);

}  // namespace seplab

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "seplab/pauli.hpp"

namespace seplab {

/// Sum of Pauli strings with exact Gaussian-rational coefficients
/// (a + b i) / 2^den_exp, a and b 64-bit integers. Enough to represent
/// operators like the Levin-Gu plaquette term, whose coefficients live in
/// Z[i]/2^6, and to verify commutation and squaring with no floating point.
class PauliSum {
  public:
    struct Term {
        std::vector<std::uint64_t> x, z;  // masks
        long long re = 0, im = 0;         // numerator of the coefficient
    };

    explicit PauliSum(int n_qubits);

    static PauliSum zero(int n_qubits);
    static PauliSum identity(int n_qubits);
    /// c * P, with c = (re + im*i) / 2^den_exp.
    static PauliSum scaled_pauli(const PauliOperator& p, long long re, long long im,
                                 int den_exp);
    static PauliSum from_pauli(const PauliOperator& p) { return scaled_pauli(p, 1, 0, 0); }

    int n_qubits() const { return n_; }
    int den_exp() const { return den_exp_; }
    std::size_t term_count() const { return terms_.size(); }

    PauliSum operator+(const PauliSum& rhs) const;
    PauliSum operator-(const PauliSum& rhs) const;
    PauliSum operator*(const PauliSum& rhs) const;
    PauliSum negated() const;

    bool is_zero() const { return terms_.empty(); }
    /// True iff the sum equals exactly c*I with c = 1.
    bool is_identity() const;

    /// Remove common factors of 2 between all numerators and the denominator.
    void normalize();

    std::vector<Term> terms() const;

    MatrixXcd to_dense(int max_qubits = 14) const;

  private:
    using Key = std::vector<std::uint64_t>;  // x words then z words
    int n_;
    int den_exp_ = 0;
    std::map<Key, std::pair<long long, long long>> terms_;

    void add_term(const Key& k, long long re, long long im);
    static std::pair<long long, long long> mul_gauss(long long ar, long long ai, long long br,
                                                     long long bi);
};

/// a*b == b*a, exactly.
bool commute_exact(const PauliSum& a, const PauliSum& b);
/// a*b == -b*a, exactly.
bool anticommute_exact(const PauliSum& a, const PauliSum& b);
/// a*a == I, exactly.
bool squares_to_identity_exact(const PauliSum& a);

}  // namespace seplab

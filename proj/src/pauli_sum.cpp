#include "seplab/pauli_sum.hpp"

#include <bit>
#include <stdexcept>

namespace seplab {

namespace {
int words_for(int n) { return (n + 63) / 64; }

int popcount_and(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                 std::size_t off_a, std::size_t off_b, std::size_t w) {
    int c = 0;
    for (std::size_t i = 0; i < w; ++i) c += std::popcount(a[off_a + i] & b[off_b + i]);
    return c;
}
}  // namespace

PauliSum::PauliSum(int n_qubits) : n_(n_qubits) {
    if (n_qubits <= 0) throw std::invalid_argument("PauliSum: n_qubits must be positive");
}

PauliSum PauliSum::zero(int n) { return PauliSum(n); }

PauliSum PauliSum::identity(int n) {
    PauliSum s(n);
    Key k(2 * words_for(n), 0);
    s.terms_[k] = {1, 0};
    return s;
}

PauliSum PauliSum::scaled_pauli(const PauliOperator& p, long long re, long long im, int den_exp) {
    PauliSum s(p.n_qubits());
    s.den_exp_ = den_exp;
    const int w = words_for(p.n_qubits());
    Key k(2 * w, 0);
    for (int q = 0; q < p.n_qubits(); ++q) {
        if (p.x_bit(q)) k[q >> 6] |= 1ULL << (q & 63);
        if (p.z_bit(q)) k[w + (q >> 6)] |= 1ULL << (q & 63);
    }
    // Fold the stored phase i^e into the coefficient.
    long long r = re, i = im;
    for (int e = 0; e < p.phase_exponent(); ++e) {
        long long nr = -i, ni = r;
        r = nr;
        i = ni;
    }
    if (r != 0 || i != 0) s.terms_[k] = {r, i};
    return s;
}

void PauliSum::add_term(const Key& k, long long re, long long im) {
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        if (re != 0 || im != 0) terms_[k] = {re, im};
        return;
    }
    it->second.first += re;
    it->second.second += im;
    if (it->second.first == 0 && it->second.second == 0) terms_.erase(it);
}

std::pair<long long, long long> PauliSum::mul_gauss(long long ar, long long ai, long long br,
                                                    long long bi) {
    return {ar * br - ai * bi, ar * bi + ai * br};
}

PauliSum PauliSum::operator+(const PauliSum& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("PauliSum +: size mismatch");
    // Align denominators: scale numerators of the smaller den_exp up.
    PauliSum out(n_);
    out.den_exp_ = std::max(den_exp_, rhs.den_exp_);
    long long sa = 1LL << (out.den_exp_ - den_exp_);
    long long sb = 1LL << (out.den_exp_ - rhs.den_exp_);
    for (const auto& [k, c] : terms_) out.add_term(k, c.first * sa, c.second * sa);
    for (const auto& [k, c] : rhs.terms_) out.add_term(k, c.first * sb, c.second * sb);
    return out;
}

PauliSum PauliSum::negated() const {
    PauliSum out = *this;
    for (auto& [k, c] : out.terms_) {
        c.first = -c.first;
        c.second = -c.second;
    }
    return out;
}

PauliSum PauliSum::operator-(const PauliSum& rhs) const { return *this + rhs.negated(); }

PauliSum PauliSum::operator*(const PauliSum& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("PauliSum *: size mismatch");
    const std::size_t w = words_for(n_);
    PauliSum out(n_);
    out.den_exp_ = den_exp_ + rhs.den_exp_;
    Key k(2 * w, 0);
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : rhs.terms_) {
            // (X^a Z^b)(X^c Z^d) = (-1)^(b.c) X^(a^c) Z^(b^d)
            int swaps = popcount_and(ka, kb, w, 0, w);
            for (std::size_t i = 0; i < w; ++i) {
                k[i] = ka[i] ^ kb[i];
                k[w + i] = ka[w + i] ^ kb[w + i];
            }
            auto [r, im] = mul_gauss(ca.first, ca.second, cb.first, cb.second);
            if (swaps & 1) {
                r = -r;
                im = -im;
            }
            out.add_term(k, r, im);
        }
    }
    return out;
}

bool PauliSum::is_identity() const {
    if (terms_.size() != 1) return false;
    const auto& [k, c] = *terms_.begin();
    for (auto word : k)
        if (word) return false;
    if (c.second != 0) return false;
    // c.first / 2^den_exp == 1
    if (den_exp_ >= 63) return false;
    return c.first == (1LL << den_exp_);
}

void PauliSum::normalize() {
    while (den_exp_ > 0) {
        bool all_even = true;
        for (const auto& [k, c] : terms_) {
            if ((c.first & 1) || (c.second & 1)) {
                all_even = false;
                break;
            }
        }
        if (!all_even) break;
        for (auto& [k, c] : terms_) {
            c.first /= 2;
            c.second /= 2;
        }
        --den_exp_;
    }
}

std::vector<PauliSum::Term> PauliSum::terms() const {
    std::vector<Term> out;
    const std::size_t w = words_for(n_);
    for (const auto& [k, c] : terms_) {
        Term t;
        t.x.assign(k.begin(), k.begin() + w);
        t.z.assign(k.begin() + w, k.end());
        t.re = c.first;
        t.im = c.second;
        out.push_back(std::move(t));
    }
    return out;
}

MatrixXcd PauliSum::to_dense(int max_qubits) const {
    if (n_ > max_qubits)
        throw std::runtime_error("PauliSum to_dense: qubit count exceeds cap");
    const std::size_t dim = std::size_t(1) << n_;
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    const double den = std::pow(2.0, den_exp_);
    const std::size_t w = words_for(n_);
    for (const auto& [k, c] : terms_) {
        PauliOperator p(n_);
        for (int q = 0; q < n_; ++q) {
            if ((k[q >> 6] >> (q & 63)) & 1ULL) p.set_x(q, true);
            if ((k[w + (q >> 6)] >> (q & 63)) & 1ULL) p.set_z(q, true);
        }
        Complex coeff(double(c.first) / den, double(c.second) / den);
        m += coeff * p.to_dense(max_qubits);
    }
    return m;
}

bool commute_exact(const PauliSum& a, const PauliSum& b) { return (a * b - b * a).is_zero(); }

bool anticommute_exact(const PauliSum& a, const PauliSum& b) {
    return (a * b + b * a).is_zero();
}

bool squares_to_identity_exact(const PauliSum& a) {
    PauliSum sq = a * a;
    sq.normalize();
    return sq.is_identity();
}

}  // namespace seplab

#include "seplab/pauli.hpp"

#include <bit>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace seplab {

namespace {
int words_for(int n) { return (n + 63) / 64; }
}  // namespace

PauliOperator::PauliOperator(int n_qubits) : n_(n_qubits) {
    if (n_qubits <= 0) throw std::invalid_argument("PauliOperator: n_qubits must be positive");
    x_.assign(words_for(n_), 0);
    z_.assign(words_for(n_), 0);
}

PauliOperator PauliOperator::identity(int n) { return PauliOperator(n); }

PauliOperator PauliOperator::x(int n, int site) {
    PauliOperator p(n);
    p.set_x(site, true);
    return p;
}

PauliOperator PauliOperator::z(int n, int site) {
    PauliOperator p(n);
    p.set_z(site, true);
    return p;
}

PauliOperator PauliOperator::y(int n, int site) {
    // Y = i X Z
    PauliOperator p(n);
    p.set_x(site, true);
    p.set_z(site, true);
    p.set_phase_exponent(1);
    return p;
}

bool PauliOperator::bit(const std::vector<std::uint64_t>& w, int q) {
    return (w[q >> 6] >> (q & 63)) & 1ULL;
}

void PauliOperator::set_bit(std::vector<std::uint64_t>& w, int q, bool v) {
    if (v)
        w[q >> 6] |= (1ULL << (q & 63));
    else
        w[q >> 6] &= ~(1ULL << (q & 63));
}

int PauliOperator::popcount_and(const std::vector<std::uint64_t>& a,
                                const std::vector<std::uint64_t>& b) {
    int c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
    return c;
}

Complex PauliOperator::phase() const {
    static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_];
}

bool PauliOperator::is_identity_mask() const {
    for (auto w : x_)
        if (w) return false;
    for (auto w : z_)
        if (w) return false;
    return true;
}

int PauliOperator::weight() const {
    int c = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) c += std::popcount(x_[i] | z_[i]);
    return c;
}

PauliOperator PauliOperator::multiplied_by(const PauliOperator& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("Pauli multiply: qubit count mismatch");
    PauliOperator out(n_);
    // (i^p1 X^a Z^b)(i^p2 X^c Z^d) = i^(p1+p2) (-1)^(b.c) X^(a^c) Z^(b^d)
    int swaps = popcount_and(z_, rhs.x_);
    out.phase_ = (phase_ + rhs.phase_ + 2 * (swaps & 1)) & 3;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        out.x_[i] = x_[i] ^ rhs.x_[i];
        out.z_[i] = z_[i] ^ rhs.z_[i];
    }
    return out;
}

bool PauliOperator::commutes_with(const PauliOperator& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("Pauli commutes: qubit count mismatch");
    int s = popcount_and(x_, rhs.z_) + popcount_and(z_, rhs.x_);
    return (s & 1) == 0;
}

bool PauliOperator::squares_to_identity() const {
    // P^2 = i^(2*phase) (-1)^(|x&z|) I
    int e = (2 * phase_ + 2 * (popcount_and(x_, z_) & 1)) & 3;
    return e == 0;
}

PauliOperator PauliOperator::adjoint() const {
    // (i^p X^a Z^b)^dag = i^(-p) Z^b X^a = i^(-p) (-1)^(|a&b|) X^a Z^b
    PauliOperator out = *this;
    out.phase_ = ((-phase_ + 2 * (popcount_and(x_, z_) & 1)) % 4 + 4) % 4;
    return out;
}

bool PauliOperator::operator==(const PauliOperator& other) const {
    return n_ == other.n_ && phase_ == other.phase_ && x_ == other.x_ && z_ == other.z_;
}

bool PauliOperator::same_mask(const PauliOperator& other) const {
    return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
}

std::string PauliOperator::str() const {
    // Display phase folds the i from each Y site: P = i^(phase - n_Y) * prod(letters).
    int ny = popcount_and(x_, z_);
    int disp = ((phase_ - ny) % 4 + 4) % 4;
    static const char* signs[4] = {"+", "+i", "-", "-i"};
    std::string out = signs[disp];
    bool any = false;
    for (int q = 0; q < n_; ++q) {
        bool xb = x_bit(q), zb = z_bit(q);
        if (!xb && !zb) continue;
        if (any) out += ' ';
        out += (xb && zb) ? 'Y' : (xb ? 'X' : 'Z');
        out += std::to_string(q);
        any = true;
    }
    if (!any) out += 'I';
    return out;
}

PauliOperator PauliOperator::parse(const std::string& text, int n_qubits) {
    PauliOperator out(n_qubits);
    std::size_t i = 0;
    auto skip_ws = [&]() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    // Sign token: +, -, +i, -i.  Lowercase 'i' is the imaginary unit; the
    // uppercase 'I' letter token is the identity.
    int sign_exp = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        bool neg = text[i] == '-';
        ++i;
        bool imag = false;
        if (i < text.size() && text[i] == 'i') {
            imag = true;
            ++i;
        }
        sign_exp = (neg ? 2 : 0) + (imag ? 1 : 0);
    }
    int n_y = 0;
    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        char c = text[i];
        if (c == 'I') {  // explicit identity token
            ++i;
            continue;
        }
        if (c != 'X' && c != 'Y' && c != 'Z')
            throw std::invalid_argument("Pauli parse: unexpected character '" + std::string(1, c) +
                                        "' in \"" + text + "\"");
        ++i;
        skip_ws();
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (start == i) throw std::invalid_argument("Pauli parse: missing site index in \"" + text + "\"");
        int site = std::stoi(text.substr(start, i - start));
        if (site < 0 || site >= n_qubits)
            throw std::invalid_argument("Pauli parse: site index out of range in \"" + text + "\"");
        if (out.x_bit(site) || out.z_bit(site))
            throw std::invalid_argument("Pauli parse: duplicate site in \"" + text + "\"");
        if (c == 'X' || c == 'Y') out.set_x(site, true);
        if (c == 'Z' || c == 'Y') out.set_z(site, true);
        if (c == 'Y') ++n_y;
    }
    out.set_phase_exponent(sign_exp + n_y);
    return out;
}

MatrixXcd PauliOperator::to_dense(int max_qubits) const {
    if (n_ > max_qubits)
        throw std::runtime_error("Pauli to_dense: " + std::to_string(n_) +
                                 " qubits exceeds cap of " + std::to_string(max_qubits));
    const std::size_t dim = std::size_t(1) << n_;
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    // Column b maps to row b ^ xmask with amplitude phase * (-1)^{|z & b|}.
    // Qubit q occupies bit (n-1-q) of the basis index.
    std::size_t xmask = 0, zmask = 0;
    for (int q = 0; q < n_; ++q) {
        std::size_t b = std::size_t(1) << (n_ - 1 - q);
        if (x_bit(q)) xmask |= b;
        if (z_bit(q)) zmask |= b;
    }
    const Complex ph = phase();
    for (std::size_t col = 0; col < dim; ++col) {
        int s = std::popcount(col & zmask) & 1;
        m(col ^ xmask, col) = s ? -ph : ph;
    }
    return m;
}

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) { return a.multiplied_by(b); }
bool commutes(const PauliOperator& a, const PauliOperator& b) { return a.commutes_with(b); }

}  // namespace seplab

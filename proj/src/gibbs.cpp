#include "seplab/gibbs.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace seplab {

std::string ValidationReport::summary() const {
    if (issues.empty()) return "valid";
    std::ostringstream os;
    os << issues.size() << " issue(s):";
    for (const auto& is : issues) os << "\n  " << is.message;
    return os.str();
}

namespace {
void check_flip_structure(std::size_t n_terms, std::size_t n_flips, ValidationReport& rep) {
    if (n_terms != n_flips) {
        ValidationIssue is;
        is.kind = ValidationIssue::kFlipCountMismatch;
        is.message = "flip count " + std::to_string(n_flips) + " != term count " +
                     std::to_string(n_terms);
        rep.issues.push_back(is);
    }
}
}  // namespace

ValidationReport validate_model(const CommutingProjectorModel& m) {
    ValidationReport rep;
    const std::size_t T = m.terms.size();
    for (std::size_t i = 0; i < T; ++i) {
        if (!m.terms[i].squares_to_identity()) {
            ValidationIssue is;
            is.kind = ValidationIssue::kTermNotInvolution;
            is.i = int(i);
            is.message = "term " + std::to_string(i) + " does not square to +I";
            rep.issues.push_back(is);
        }
        for (std::size_t j = i + 1; j < T; ++j) {
            if (!m.terms[i].commutes_with(m.terms[j])) {
                ValidationIssue is;
                is.kind = ValidationIssue::kTermsDontCommute;
                is.i = int(i);
                is.j = int(j);
                is.message = "terms (" + std::to_string(i) + "," + std::to_string(j) +
                             ") do not commute";
                rep.issues.push_back(is);
            }
        }
    }
    check_flip_structure(T, m.flips.size(), rep);
    const std::size_t F = std::min(T, m.flips.size());
    for (std::size_t j = 0; j < F; ++j) {
        for (std::size_t k = 0; k < T; ++k) {
            bool c = m.flips[j].commutes_with(m.terms[k]);
            if (j == k && c) {
                ValidationIssue is;
                is.kind = ValidationIssue::kFlipDoesNotAnticommute;
                is.i = int(j);
                is.message = "flip " + std::to_string(j) + " commutes with its own term";
                rep.issues.push_back(is);
            } else if (j != k && !c) {
                ValidationIssue is;
                is.kind = ValidationIssue::kFlipDoesNotCommute;
                is.i = int(j);
                is.j = int(k);
                is.message = "flip " + std::to_string(j) + " anticommutes with term " +
                             std::to_string(k);
                rep.issues.push_back(is);
            }
        }
    }
    return rep;
}

ValidationReport validate_model_exact(int n_qubits, const std::vector<PauliSum>& terms,
                                      const std::vector<PauliOperator>& flips) {
    ValidationReport rep;
    const std::size_t T = terms.size();
    for (std::size_t i = 0; i < T; ++i) {
        if (!squares_to_identity_exact(terms[i])) {
            ValidationIssue is;
            is.kind = ValidationIssue::kTermNotInvolution;
            is.i = int(i);
            is.message = "term " + std::to_string(i) + " does not square to +I";
            rep.issues.push_back(is);
        }
        for (std::size_t j = i + 1; j < T; ++j) {
            if (!commute_exact(terms[i], terms[j])) {
                ValidationIssue is;
                is.kind = ValidationIssue::kTermsDontCommute;
                is.i = int(i);
                is.j = int(j);
                is.message = "terms (" + std::to_string(i) + "," + std::to_string(j) +
                             ") do not commute";
                rep.issues.push_back(is);
            }
        }
    }
    check_flip_structure(T, flips.size(), rep);
    const std::size_t F = std::min(T, flips.size());
    for (std::size_t j = 0; j < F; ++j) {
        PauliSum flip = PauliSum::from_pauli(flips[j]);
        for (std::size_t k = 0; k < T; ++k) {
            bool anti = anticommute_exact(flip, terms[k]);
            bool comm = commute_exact(flip, terms[k]);
            if (j == k && !anti) {
                ValidationIssue is;
                is.kind = ValidationIssue::kFlipDoesNotAnticommute;
                is.i = int(j);
                is.message = "flip " + std::to_string(j) + " does not anticommute with its term";
                rep.issues.push_back(is);
            } else if (j != k && !comm) {
                ValidationIssue is;
                is.kind = ValidationIssue::kFlipDoesNotCommute;
                is.i = int(j);
                is.j = int(k);
                is.message = "flip " + std::to_string(j) + " does not commute with term " +
                             std::to_string(k);
                rep.issues.push_back(is);
            }
        }
    }
    return rep;
}

GibbsDescriptor decohere_ground_state(const CommutingProjectorModel& m,
                                      const std::vector<double>& p_per_term) {
    if (p_per_term.size() != m.terms.size())
        throw std::invalid_argument("decohere_ground_state: one rate per term required");
    ValidationReport rep = validate_model(m);
    if (!rep.ok())
        throw std::invalid_argument("decohere_ground_state: invalid model: " + rep.summary());
    GibbsDescriptor g;
    g.model = &m;
    for (double p : p_per_term) {
        if (p < 0.0 || p > 0.5)
            throw std::invalid_argument("decohere_ground_state: rate must lie in [0, 0.5]");
        double f = 1.0 - 2.0 * p;
        g.per_term_factors.push_back(f);
        g.per_term_betas.push_back(std::atanh(f));  // p = 0 -> +inf
    }
    bool uni = true;
    for (double p : p_per_term) uni = uni && (p == p_per_term.front());
    g.uniform = uni;
    if (uni && !p_per_term.empty()) g.beta_uniform = g.per_term_betas.front();
    return g;
}

GibbsDescriptor decohere_ground_state(const CommutingProjectorModel& m, double p) {
    return decohere_ground_state(m, std::vector<double>(m.terms.size(), p));
}

MatrixXcd dense_ground_state(const CommutingProjectorModel& m, int max_qubits) {
    const std::size_t dim = std::size_t(1) << m.n_qubits;
    MatrixXcd rho = MatrixXcd::Identity(dim, dim);
    for (const auto& h : m.terms) {
        MatrixXcd hd = h.to_dense(max_qubits);
        rho = 0.5 * (rho - rho * hd);
    }
    double tr = rho.trace().real();
    if (std::abs(tr) < 1e-14)
        throw std::runtime_error("dense_ground_state: projector product has zero trace "
                                 "(frustrated term set)");
    return rho / tr;
}

MatrixXcd dense_apply_channels(const CommutingProjectorModel& m, const MatrixXcd& rho_in,
                               const std::vector<double>& p_per_term,
                               const std::vector<int>* order) {
    MatrixXcd rho = rho_in;
    std::vector<int> idx;
    if (order) {
        idx = *order;
    } else {
        idx.resize(m.terms.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = int(i);
    }
    for (int j : idx) {
        const double p = p_per_term[j];
        MatrixXcd o = m.flips[j].to_dense();
        rho = (1.0 - p) * rho + p * o * rho * o.adjoint();
    }
    return rho;
}

MatrixXcd dense_gibbs_state(const GibbsDescriptor& g, int max_qubits) {
    const CommutingProjectorModel& m = *g.model;
    const std::size_t dim = std::size_t(1) << m.n_qubits;
    MatrixXcd rho = MatrixXcd::Identity(dim, dim);
    for (std::size_t j = 0; j < m.terms.size(); ++j) {
        MatrixXcd hd = m.terms[j].to_dense(max_qubits);
        rho = rho - g.per_term_factors[j] * (rho * hd);
    }
    double tr = rho.trace().real();
    return rho / tr;
}

ChannelOracleResult dense_channel_oracle(const CommutingProjectorModel& m,
                                         const std::vector<double>& p_per_term, int max_qubits) {
    if (m.n_qubits > max_qubits)
        throw std::runtime_error("dense_channel_oracle: qubit count exceeds cap");
    GibbsDescriptor g = decohere_ground_state(m, p_per_term);
    ChannelOracleResult res;
    MatrixXcd rho0 = dense_ground_state(m, max_qubits);
    res.rho_channel = dense_apply_channels(m, rho0, p_per_term);
    res.rho_gibbs = dense_gibbs_state(g, max_qubits);
    res.trace_error = std::abs(res.rho_channel.trace().real() - 1.0);
    res.max_abs_deviation = (res.rho_channel - res.rho_gibbs).cwiseAbs().maxCoeff();
    return res;
}

ChannelOracleResult dense_channel_oracle(const CommutingProjectorModel& m, double p,
                                         int max_qubits) {
    return dense_channel_oracle(m, std::vector<double>(m.terms.size(), p), max_qubits);
}

std::string model_to_text(const CommutingProjectorModel& m) {
    std::ostringstream os;
    os << "qubits " << m.n_qubits << "\n";
    for (std::size_t j = 0; j < m.terms.size(); ++j) {
        os << "term " << m.terms[j].str() << "\n";
        os << "flip " << m.flips[j].str() << "\n";
    }
    return os.str();
}

CommutingProjectorModel model_from_text(const std::string& text) {
    CommutingProjectorModel m;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "qubits") {
            if (!(ls >> m.n_qubits) || m.n_qubits <= 0)
                throw std::invalid_argument("model file: bad qubit count");
        } else if (kw == "term" || kw == "flip") {
            if (m.n_qubits == 0)
                throw std::invalid_argument("model file: 'qubits N' must come first");
            std::string rest;
            std::getline(ls, rest);
            PauliOperator p = PauliOperator::parse(rest, m.n_qubits);
            if (kw == "term")
                m.terms.push_back(p);
            else
                m.flips.push_back(p);
        } else {
            throw std::invalid_argument("model file: unknown keyword '" + kw + "'");
        }
    }
    if (m.terms.size() != m.flips.size())
        throw std::invalid_argument("model file: term/flip count mismatch");
    return m;
}

}  // namespace seplab

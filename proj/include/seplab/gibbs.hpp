#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seplab/pauli.hpp"
#include "seplab/pauli_sum.hpp"

namespace seplab {

/// H = sum_j h_j with [h_j, h_k] = 0 and h_j^2 = I, plus one flip operator
/// O_j per term that anticommutes with h_j and commutes with every h_k, k != j.
/// The ground state is rho_0 ~ prod_j (I - h_j).
struct CommutingProjectorModel {
    int n_qubits = 0;
    std::vector<PauliOperator> terms;
    std::vector<PauliOperator> flips;
};

struct ValidationIssue {
    enum Kind {
        kTermsDontCommute,
        kTermNotInvolution,
        kFlipDoesNotAnticommute,
        kFlipDoesNotCommute,
        kFlipCountMismatch,
    } kind;
    int i = -1, j = -1;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string summary() const;
};

ValidationReport validate_model(const CommutingProjectorModel& m);

/// Same three checks for models whose terms are Pauli sums (e.g. Levin-Gu),
/// carried out in exact integer arithmetic.
ValidationReport validate_model_exact(int n_qubits, const std::vector<PauliSum>& terms,
                                      const std::vector<PauliOperator>& flips);

/// The decohered state in product form: rho ~ prod_j [I - factor_j h_j],
/// factor_j = 1 - 2 p_j, equivalently a Gibbs state at beta_j = atanh(1 - 2 p_j).
struct GibbsDescriptor {
    const CommutingProjectorModel* model = nullptr;
    std::vector<double> per_term_factors;
    std::vector<double> per_term_betas;  // +inf allowed at p = 0
    bool uniform = false;
    double beta_uniform = 0.0;  // meaningful only if uniform
};

GibbsDescriptor decohere_ground_state(const CommutingProjectorModel& m, double p);
GibbsDescriptor decohere_ground_state(const CommutingProjectorModel& m,
                                      const std::vector<double>& p_per_term);

/// Dense ground-state projector rho_0 = prod (I - h_j)/2^T, trace-normalized.
MatrixXcd dense_ground_state(const CommutingProjectorModel& m, int max_qubits = 12);

/// Applies E_j[rho] = (1-p_j) rho + p_j O_j rho O_j^dag for every term, densely.
MatrixXcd dense_apply_channels(const CommutingProjectorModel& m, const MatrixXcd& rho,
                               const std::vector<double>& p_per_term,
                               const std::vector<int>* order = nullptr);

/// Dense expansion of the descriptor: prod_j [I - factor_j h_j], trace-normalized.
MatrixXcd dense_gibbs_state(const GibbsDescriptor& g, int max_qubits = 12);

struct ChannelOracleResult {
    double max_abs_deviation = 0.0;
    double trace_error = 0.0;  // |tr(rho_channel) - 1|
    MatrixXcd rho_channel;
    MatrixXcd rho_gibbs;
};

/// Builds rho_0, pushes it through all channels, and compares with the dense
/// Gibbs expansion of decohere_ground_state.
ChannelOracleResult dense_channel_oracle(const CommutingProjectorModel& m,
                                         const std::vector<double>& p_per_term,
                                         int max_qubits = 12);
ChannelOracleResult dense_channel_oracle(const CommutingProjectorModel& m, double p,
                                         int max_qubits = 12);

// ---- model file I/O (terms and flips in the textual Pauli notation) ----

std::string model_to_text(const CommutingProjectorModel& m);
CommutingProjectorModel model_from_text(const std::string& text);

}  // namespace seplab

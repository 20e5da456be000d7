#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seplab/gibbs.hpp"
#include "seplab/pauli.hpp"
#include "seplab/pauli_sum.hpp"

namespace seplab {

enum class LatticeKind { kChain1d, kSquare2d, kCubic3d, kKitaevChain, kTriangularLevinGu };

/// A cluster-type lattice model: the commuting-projector data plus its
/// symmetry generators and enough geometry to build string/membrane operators.
/// Boundaries are periodic in every direction.
struct LatticeModel {
    LatticeKind kind;
    std::vector<int> sizes;
    CommutingProjectorModel model;
    std::vector<PauliOperator> generators;
    std::vector<std::string> generator_names;

    int n_qubits() const { return model.n_qubits; }
    int n_terms() const { return int(model.terms.size()); }
    int n_generators() const { return int(generators.size()); }
};

// ---- constructors -------------------------------------------------------

/// 1d cluster chain with N unit cells (2N qubits), Kraus flips Z on each site.
/// Sublattice a occupies even qubits, b odd qubits. Term 2j is h_{a,j},
/// term 2j+1 is h_{b,j}.
LatticeModel cluster_1d(int n_cells);

/// 2d cluster state on an Lx x Ly torus: qubits on vertices and edges.
/// Vertex terms come first (index = vertex id), then edge terms.
/// Generators: one zero-form (index 0) plus one per plaquette.
LatticeModel cluster_2d(int lx, int ly);

/// 3d cluster state on an L^3 torus: qubits on edges and faces.
/// Edge terms first, then face terms. Generators: one per cube (products of
/// face X's) then one per dual cube / vertex (products of edge X's).
LatticeModel cluster_3d(int l);

/// Kitaev chain with N modes mapped through Jordan-Wigner; term j is the
/// occupation bilinear of mode j and its flip is the Majorana gamma_{2j-1}
/// (a Z...ZX string).
LatticeModel kitaev_chain(int n_modes);

/// Levin-Gu model on an L x L periodic triangular patch. The plaquette term
/// is a sum of Pauli strings, kept in exact integer arithmetic.
struct LevinGuModel {
    int l = 0;
    int n_qubits = 0;
    std::vector<PauliSum> terms;        // B_p per site
    std::vector<PauliOperator> flips;   // Z_p
    PauliOperator symmetry;             // prod_p X_p
};
LevinGuModel levin_gu(int l);

// ---- geometry helpers for 2d ----

struct Square2dGeometry {
    int lx, ly;
    int vertices() const { return lx * ly; }
    int edges() const { return 2 * lx * ly; }
    int vertex(int x, int y) const { return ((y % ly + ly) % ly) * lx + ((x % lx + lx) % lx); }
    // edge id: 2*vertex + 0 for the edge to +x, +1 for the edge to +y
    int edge_h(int x, int y) const { return 2 * vertex(x, y); }
    int edge_v(int x, int y) const { return 2 * vertex(x, y) + 1; }
    // qubit ids inside the cluster model
    int vertex_qubit(int x, int y) const { return vertex(x, y); }
    int edge_qubit(int e) const { return vertices() + e; }
    int vertex_term(int x, int y) const { return vertex(x, y); }
    int edge_term(int e) const { return vertices() + e; }
    std::vector<int> plaquette_edges(int p) const {
        int x = p % lx, y = p / lx;
        return {edge_h(x, y), edge_v(x + 1, y), edge_h(x, y + 1), edge_v(x, y)};
    }
};
Square2dGeometry geometry_2d(const LatticeModel& m);

// ---- operators built from Hamiltonian terms ----

/// prod over the given term indices of (-h_j). Strings and membranes are
/// exactly such products (explicit index lists; no implicit path-finding).
PauliOperator product_of_terms(const LatticeModel& m, const std::vector<int>& term_indices);

/// 1d cluster string S_a(j,k) or S_b(j,k): product of (-h) over cells j..k of
/// one sublattice (0 = a, 1 = b). ell = k - j + 1 counts the bonds spanned.
PauliOperator string_1d(const LatticeModel& m, int sublattice, int j, int k);

// ---- closed forms (Appendix-A style) ----

/// Sector string order of the full decohered 1d cluster chain: tanh(beta)^ell
/// with tanh(beta) = 1 - 2p; ell counts bonds, ell = 0 returns 1.
double string_order_1d_exact(double p, int ell);

/// Magnitude of the disorder-string expectation in a CDA state,
/// sech^2(beta) = 1 - (1-2p)^2, where p is the rate on the sublattice whose
/// terms straddle the string ends. Sign (a product of x's) is the caller's.
double disorder_op_1d_exact(double p);

/// GHZ two-point order of the CDA states in the one-sided-decoherence regime:
/// same closed form 1 - (1-2p_a)^2, independent of separation.
double ghz_order_1d_exact(double p_a);

// ---- exact sector traces -------------------------------------------------

/// Charge assignment, one bit per generator (in the model's generator order).
struct SectorLabel {
    std::vector<std::uint8_t> bits;
};

/// All 2^G sector labels for a model (G = generator count).
std::vector<SectorLabel> all_sectors(const LatticeModel& m);

/// tr(rho_Q) / tr(rho): probability of symmetry sector Q in the decohered
/// state rho ~ prod_j [I - (1-2 p_j) h_j]. Exact (Pauli-trace enumeration).
double sector_probability(const LatticeModel& m, const std::vector<double>& p_per_term,
                          const SectorLabel& q, int max_qubits = 12);

/// tr(rho_Q obs) / tr(rho_Q), exact. obs must commute with every generator.
double sector_observable(const LatticeModel& m, const std::vector<double>& p_per_term,
                         const SectorLabel& q, const PauliOperator& obs, int max_qubits = 12);

/// Expectation in the full (sector-summed) state: tr(rho obs)/tr(rho).
double state_observable(const LatticeModel& m, const std::vector<double>& p_per_term,
                        const PauliOperator& obs, int max_qubits = 12);

/// 2d helper: sector bits from a disorder representative (x_v, x_e), i.e.
/// Q0 = prod_v x_v and Q1_p = prod_{e in dp} x_e. Two gauge-equivalent
/// representatives produce the same label.
SectorLabel sector_from_representative_2d(const LatticeModel& m, const std::vector<int>& x_v,
                                          const std::vector<int>& x_e);

// ---- dense CDA states ----

/// |psi_m> = prod_j e^{-beta_j h_j / 2} |m>, with |m> the X-basis product
/// state of signs m_x (each +1 or -1). beta_j may be +inf (projector).
/// Returned unnormalized; dense, so qubit-capped.
Eigen::VectorXcd dense_cda_state(const CommutingProjectorModel& m,
                                 const std::vector<double>& betas,
                                 const std::vector<int>& m_x, int max_qubits = 12);

}  // namespace seplab

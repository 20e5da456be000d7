#include "seplab/lattice.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace seplab {

namespace {

PauliOperator minus_term(PauliOperator p) {
    p.set_phase_exponent(p.phase_exponent() + 2);
    return p;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

LatticeModel cluster_1d(int n_cells) {
    if (n_cells < 2) throw std::invalid_argument("cluster_1d: need at least 2 cells");
    const int n = 2 * n_cells;
    auto a = [&](int j) { return 2 * wrap(j, n_cells); };
    auto b = [&](int j) { return 2 * wrap(j, n_cells) + 1; };

    LatticeModel lm;
    lm.kind = LatticeKind::kChain1d;
    lm.sizes = {n_cells};
    lm.model.n_qubits = n;
    for (int j = 0; j < n_cells; ++j) {
        // h_{a,j} = -Z_{b,j-1} X_{a,j} Z_{b,j}
        PauliOperator ha(n);
        ha.set_z(b(j - 1), true);
        ha.set_x(a(j), true);
        ha.set_z(b(j), true);
        lm.model.terms.push_back(minus_term(ha));
        lm.model.flips.push_back(PauliOperator::z(n, a(j)));
        // h_{b,j} = -Z_{a,j} X_{b,j} Z_{a,j+1}
        PauliOperator hb(n);
        hb.set_z(a(j), true);
        hb.set_x(b(j), true);
        hb.set_z(a(j + 1), true);
        lm.model.terms.push_back(minus_term(hb));
        lm.model.flips.push_back(PauliOperator::z(n, b(j)));
    }
    PauliOperator ua(n), ub(n);
    for (int j = 0; j < n_cells; ++j) {
        ua.set_x(a(j), true);
        ub.set_x(b(j), true);
    }
    lm.generators = {ua, ub};
    lm.generator_names = {"Ua", "Ub"};
    return lm;
}

Square2dGeometry geometry_2d(const LatticeModel& m) {
    if (m.kind != LatticeKind::kSquare2d)
        throw std::invalid_argument("geometry_2d: not a 2d cluster model");
    return Square2dGeometry{m.sizes[0], m.sizes[1]};
}

LatticeModel cluster_2d(int lx, int ly) {
    if (lx < 2 || ly < 2) throw std::invalid_argument("cluster_2d: sizes must be >= 2");
    Square2dGeometry g{lx, ly};
    const int V = g.vertices();
    const int n = V + g.edges();

    LatticeModel lm;
    lm.kind = LatticeKind::kSquare2d;
    lm.sizes = {lx, ly};
    lm.model.n_qubits = n;

    // vertex terms: h_v = -X_v prod_{e ni v} Z_e
    for (int y = 0; y < ly; ++y) {
        for (int x = 0; x < lx; ++x) {
            PauliOperator h(n);
            h.set_x(g.vertex_qubit(x, y), true);
            h.set_z(g.edge_qubit(g.edge_h(x, y)), true);
            h.set_z(g.edge_qubit(g.edge_h(x - 1, y)), true);
            h.set_z(g.edge_qubit(g.edge_v(x, y)), true);
            h.set_z(g.edge_qubit(g.edge_v(x, y - 1)), true);
            lm.model.terms.push_back(minus_term(h));
            lm.model.flips.push_back(PauliOperator::z(n, g.vertex_qubit(x, y)));
        }
    }
    // edge terms: h_e = -X_e Z_{v1} Z_{v2}
    for (int y = 0; y < ly; ++y) {
        for (int x = 0; x < lx; ++x) {
            for (int dir = 0; dir < 2; ++dir) {
                int e = dir == 0 ? g.edge_h(x, y) : g.edge_v(x, y);
                PauliOperator h(n);
                h.set_x(g.edge_qubit(e), true);
                h.set_z(g.vertex_qubit(x, y), true);
                h.set_z(dir == 0 ? g.vertex_qubit(x + 1, y) : g.vertex_qubit(x, y + 1), true);
                lm.model.terms.push_back(minus_term(h));
                lm.model.flips.push_back(PauliOperator::z(n, g.edge_qubit(e)));
            }
        }
    }
    // ordering fix-up: edge terms were interleaved h/v per site, but the
    // advertised convention is term index V + e; recompute order explicitly.
    {
        std::vector<PauliOperator> terms(lm.model.terms.begin(), lm.model.terms.begin() + V);
        std::vector<PauliOperator> flips(lm.model.flips.begin(), lm.model.flips.begin() + V);
        terms.resize(V + g.edges(), PauliOperator(n));
        flips.resize(V + g.edges(), PauliOperator(n));
        for (int y = 0; y < ly; ++y) {
            for (int x = 0; x < lx; ++x) {
                for (int dir = 0; dir < 2; ++dir) {
                    int e = dir == 0 ? g.edge_h(x, y) : g.edge_v(x, y);
                    int src = V + 2 * (y * lx + x) + dir;
                    terms[V + e] = lm.model.terms[src];
                    flips[V + e] = lm.model.flips[src];
                }
            }
        }
        lm.model.terms = std::move(terms);
        lm.model.flips = std::move(flips);
    }

    // zero-form generator
    PauliOperator u0(n);
    for (int v = 0; v < V; ++v) u0.set_x(v, true);
    lm.generators.push_back(u0);
    lm.generator_names.push_back("U0");
    // one-form generators: plaquette with lower-left corner (x, y)
    for (int y = 0; y < ly; ++y) {
        for (int x = 0; x < lx; ++x) {
            PauliOperator u(n);
            u.set_x(g.edge_qubit(g.edge_h(x, y)), true);
            u.set_x(g.edge_qubit(g.edge_v(x + 1, y)), true);
            u.set_x(g.edge_qubit(g.edge_h(x, y + 1)), true);
            u.set_x(g.edge_qubit(g.edge_v(x, y)), true);
            lm.generators.push_back(u);
            lm.generator_names.push_back("U1_p" + std::to_string(x) + "_" + std::to_string(y));
        }
    }
    return lm;
}

LatticeModel cluster_3d(int l) {
    if (l < 2) throw std::invalid_argument("cluster_3d: size must be >= 2");
    const int V = l * l * l;
    auto site = [&](int x, int y, int z) {
        return (wrap(z, l) * l + wrap(y, l)) * l + wrap(x, l);
    };
    // edge (site, direction d), face (site, normal d)
    auto edge = [&](int x, int y, int z, int d) { return 3 * site(x, y, z) + d; };
    auto face = [&](int x, int y, int z, int d) { return 3 * site(x, y, z) + d; };
    const int E = 3 * V, F = 3 * V;
    const int n = E + F;
    auto edge_qubit = [&](int e) { return e; };
    auto face_qubit = [&](int f) { return E + f; };

    auto shift = [&](int x, int y, int z, int d, int s, int& ox, int& oy, int& oz) {
        ox = x + (d == 0 ? s : 0);
        oy = y + (d == 1 ? s : 0);
        oz = z + (d == 2 ? s : 0);
    };
    // the 4 edges bounding face (c, normal nd): directions u = nd+1, w = nd+2
    auto face_edges = [&](int x, int y, int z, int nd, int out[4]) {
        int u = (nd + 1) % 3, w = (nd + 2) % 3;
        int ux, uy, uz, wx, wy, wz;
        shift(x, y, z, u, 1, ux, uy, uz);
        shift(x, y, z, w, 1, wx, wy, wz);
        out[0] = edge(x, y, z, u);
        out[1] = edge(ux, uy, uz, w);
        out[2] = edge(wx, wy, wz, u);
        out[3] = edge(x, y, z, w);
    };
    // the 4 faces containing edge (v, d)
    auto edge_faces = [&](int x, int y, int z, int d, int out[4]) {
        int n1 = (d + 2) % 3;  // faces whose u-direction is d
        int n2 = (d + 1) % 3;  // faces whose w-direction is d
        int ax, ay, az;
        out[0] = face(x, y, z, n1);
        shift(x, y, z, (n1 + 2) % 3, -1, ax, ay, az);
        out[1] = face(ax, ay, az, n1);
        out[2] = face(x, y, z, n2);
        shift(x, y, z, (n2 + 1) % 3, -1, ax, ay, az);
        out[3] = face(ax, ay, az, n2);
    };

    LatticeModel lm;
    lm.kind = LatticeKind::kCubic3d;
    lm.sizes = {l, l, l};
    lm.model.n_qubits = n;

    // edge terms: h_e = -X_e prod_{f ni e} Z_f
    for (int z = 0; z < l; ++z)
        for (int y = 0; y < l; ++y)
            for (int x = 0; x < l; ++x)
                for (int d = 0; d < 3; ++d) {
                    PauliOperator h(n);
                    h.set_x(edge_qubit(edge(x, y, z, d)), true);
                    int fs[4];
                    edge_faces(x, y, z, d, fs);
                    for (int f : fs) h.set_z(face_qubit(f), true);
                    lm.model.terms.push_back(minus_term(h));
                    lm.model.flips.push_back(PauliOperator::z(n, edge_qubit(edge(x, y, z, d))));
                }
    // face terms: h_f = -X_f prod_{e in f} Z_e
    for (int z = 0; z < l; ++z)
        for (int y = 0; y < l; ++y)
            for (int x = 0; x < l; ++x)
                for (int d = 0; d < 3; ++d) {
                    PauliOperator h(n);
                    h.set_x(face_qubit(face(x, y, z, d)), true);
                    int es[4];
                    face_edges(x, y, z, d, es);
                    for (int e : es) h.set_z(edge_qubit(e), true);
                    lm.model.terms.push_back(minus_term(h));
                    lm.model.flips.push_back(PauliOperator::z(n, face_qubit(face(x, y, z, d))));
                }

    // cube generators: product of X over the 6 faces of each cube
    for (int z = 0; z < l; ++z)
        for (int y = 0; y < l; ++y)
            for (int x = 0; x < l; ++x) {
                PauliOperator u(n);
                for (int d = 0; d < 3; ++d) {
                    u.set_x(face_qubit(face(x, y, z, d)), true);
                    int ax, ay, az;
                    shift(x, y, z, d, 1, ax, ay, az);
                    u.set_x(face_qubit(face(ax, ay, az, d)), true);
                }
                lm.generators.push_back(u);
                lm.generator_names.push_back("U1p_c" + std::to_string(site(x, y, z)));
            }
    // dual-cube generators: product of X over the 6 edges meeting a vertex
    for (int z = 0; z < l; ++z)
        for (int y = 0; y < l; ++y)
            for (int x = 0; x < l; ++x) {
                PauliOperator u(n);
                for (int d = 0; d < 3; ++d) {
                    u.set_x(edge_qubit(edge(x, y, z, d)), true);
                    int ax, ay, az;
                    shift(x, y, z, d, -1, ax, ay, az);
                    u.set_x(edge_qubit(edge(ax, ay, az, d)), true);
                }
                lm.generators.push_back(u);
                lm.generator_names.push_back("U1_c" + std::to_string(site(x, y, z)));
            }
    return lm;
}

LatticeModel kitaev_chain(int n_modes) {
    if (n_modes < 2) throw std::invalid_argument("kitaev_chain: need at least 2 modes");
    const int n = n_modes;
    LatticeModel lm;
    lm.kind = LatticeKind::kKitaevChain;
    lm.sizes = {n_modes};
    lm.model.n_qubits = n;
    for (int j = 0; j < n_modes; ++j) {
        // -i gamma_{2j-1} gamma_{2j} maps to Z_j under Jordan-Wigner.
        lm.model.terms.push_back(PauliOperator::z(n, j));
        // flip = gamma_{2j-1} = Z_0 ... Z_{j-1} X_j
        PauliOperator flip(n);
        for (int k = 0; k < j; ++k) flip.set_z(k, true);
        flip.set_x(j, true);
        lm.model.flips.push_back(flip);
    }
    PauliOperator parity(n);
    for (int j = 0; j < n_modes; ++j) parity.set_z(j, true);
    lm.generators = {parity};
    lm.generator_names = {"parity"};
    return lm;
}

LevinGuModel levin_gu(int l) {
    if (l < 3) throw std::invalid_argument("levin_gu: patch too small for the stencil (L >= 3)");
    LevinGuModel m;
    m.l = l;
    m.n_qubits = l * l;
    auto site = [&](int x, int y) { return wrap(y, l) * l + wrap(x, l); };
    // triangular-lattice neighbors in cyclic order
    const int nb[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};

    for (int y = 0; y < l; ++y) {
        for (int x = 0; x < l; ++x) {
            PauliOperator xp = PauliOperator::x(m.n_qubits, site(x, y));
            xp.set_phase_exponent(2);  // leading minus sign of B_p
            PauliSum b = PauliSum::from_pauli(xp);
            for (int t = 0; t < 6; ++t) {
                int qx = x + nb[t][0], qy = y + nb[t][1];
                int rx = x + nb[(t + 1) % 6][0], ry = y + nb[(t + 1) % 6][1];
                PauliOperator zz(m.n_qubits);
                zz.set_z(site(qx, qy), true);
                zz.set_z(site(rx, ry), true);
                // i^{(1 - Z_q Z_q')/2} = (1+i)/2 I + (1-i)/2 Z_q Z_q'
                PauliSum factor =
                    PauliSum::scaled_pauli(PauliOperator::identity(m.n_qubits), 1, 1, 1) +
                    PauliSum::scaled_pauli(zz, 1, -1, 1);
                b = b * factor;
            }
            b.normalize();
            m.terms.push_back(std::move(b));
            m.flips.push_back(PauliOperator::z(m.n_qubits, site(x, y)));
        }
    }
    PauliOperator u(m.n_qubits);
    for (int q = 0; q < m.n_qubits; ++q) u.set_x(q, true);
    m.symmetry = u;
    return m;
}

PauliOperator product_of_terms(const LatticeModel& m, const std::vector<int>& term_indices) {
    PauliOperator out = PauliOperator::identity(m.n_qubits());
    for (int idx : term_indices) {
        if (idx < 0 || idx >= m.n_terms())
            throw std::invalid_argument("product_of_terms: term index out of range");
        out = out.multiplied_by(minus_term(m.model.terms[idx]));
    }
    return out;
}

PauliOperator string_1d(const LatticeModel& m, int sublattice, int j, int k) {
    if (m.kind != LatticeKind::kChain1d)
        throw std::invalid_argument("string_1d: not a 1d cluster model");
    if (sublattice != 0 && sublattice != 1) throw std::invalid_argument("string_1d: sublattice 0/1");
    const int cells = m.sizes[0];
    if (k < j) throw std::invalid_argument("string_1d: need k >= j");
    std::vector<int> idx;
    for (int c = j; c <= k; ++c) idx.push_back(2 * wrap(c, cells) + sublattice);
    return product_of_terms(m, idx);
}

double string_order_1d_exact(double p, int ell) {
    if (p < 0.0 || p > 0.5) throw std::invalid_argument("string_order_1d_exact: p in [0, 0.5]");
    if (ell < 0) throw std::invalid_argument("string_order_1d_exact: ell >= 0");
    if (ell == 0) return 1.0;  // empty product convention
    return std::pow(1.0 - 2.0 * p, ell);
}

double disorder_op_1d_exact(double p) {
    if (p < 0.0 || p > 0.5) throw std::invalid_argument("disorder_op_1d_exact: p in [0, 0.5]");
    double f = 1.0 - 2.0 * p;
    return 1.0 - f * f;
}

double ghz_order_1d_exact(double p_a) { return disorder_op_1d_exact(p_a); }

// ---- exact sector traces -------------------------------------------------

namespace {

// GF(2) solver over the symplectic vectors of the model terms. Finds, for a
// target Pauli mask, the unique subset of terms whose product has that mask.
class TermSubsetSolver {
  public:
    explicit TermSubsetSolver(const std::vector<PauliOperator>& terms, int n_qubits)
        : n_(n_qubits) {
        if (terms.size() > 64)
            throw std::runtime_error("TermSubsetSolver: more than 64 terms unsupported");
        for (std::size_t j = 0; j < terms.size(); ++j) {
            Row cur{to_bits(terms[j]), std::uint64_t(1) << j};
            reduce(cur);
            if (cur.vec_empty())
                throw std::runtime_error("TermSubsetSolver: dependent term set");
            pivots_.push_back(cur);
        }
    }

    // Returns true and fills subset_mask if a solution exists.
    bool solve(const PauliOperator& target, std::uint64_t& subset_mask) const {
        Row cur{to_bits(target), 0};
        reduce(cur);
        subset_mask = cur.combo;
        return cur.vec_empty();
    }

  private:
    struct Row {
        std::vector<std::uint64_t> vec;
        std::uint64_t combo;
        bool vec_empty() const {
            for (auto w : vec)
                if (w) return false;
            return true;
        }
        int lowest_bit() const {
            for (std::size_t i = 0; i < vec.size(); ++i)
                if (vec[i]) return int(i) * 64 + std::countr_zero(vec[i]);
            return -1;
        }
        bool has_bit(int b) const { return (vec[b >> 6] >> (b & 63)) & 1ULL; }
    };

    std::vector<std::uint64_t> to_bits(const PauliOperator& p) const {
        const int w = (n_ + 63) / 64;
        std::vector<std::uint64_t> v(2 * w, 0);
        for (int q = 0; q < n_; ++q) {
            if (p.x_bit(q)) v[q >> 6] |= 1ULL << (q & 63);
            if (p.z_bit(q)) v[w + (q >> 6)] |= 1ULL << (q & 63);
        }
        return v;
    }

    void reduce(Row& cur) const {
        for (const auto& piv : pivots_) {
            int b = piv.lowest_bit();
            if (cur.has_bit(b)) {
                for (std::size_t i = 0; i < cur.vec.size(); ++i) cur.vec[i] ^= piv.vec[i];
                cur.combo ^= piv.combo;
            }
        }
    }

    int n_;
    std::vector<Row> pivots_;
};

// Weight w_S(O) = tr(rho_hat U_S O)/2^n for rho_hat = prod (I - lambda_j h_j).
double subset_weight(const LatticeModel& m, const TermSubsetSolver& solver,
                     const std::vector<double>& lambdas, const PauliOperator& us_o) {
    std::uint64_t subset = 0;
    if (!solver.solve(us_o, subset)) return 0.0;
    PauliOperator prod = PauliOperator::identity(m.n_qubits());
    double coeff = 1.0;
    for (int j = 0; j < m.n_terms(); ++j) {
        if ((subset >> j) & 1ULL) {
            prod = prod.multiplied_by(m.model.terms[j]);
            coeff *= -lambdas[j];
        }
    }
    // tr(h_T U_S O) = 2^n * phase, phase must be real
    PauliOperator full = prod.multiplied_by(us_o);
    if (!full.is_identity_mask())
        throw std::runtime_error("sector trace: subset solve produced wrong mask");
    int ph = full.phase_exponent();
    if (ph == 1 || ph == 3)
        throw std::runtime_error("sector trace: imaginary trace contribution");
    // note: phase of h_T * (U_S O) equals phase of (U_S O)^dag h_T^dag etc.;
    // tr(P) = 2^n i^ph for identity-mask P.
    return coeff * (ph == 0 ? 1.0 : -1.0);
}

std::vector<double> lambdas_from_rates(const LatticeModel& m, const std::vector<double>& p) {
    if (p.size() != std::size_t(m.n_terms()))
        throw std::invalid_argument("sector trace: one rate per term required");
    std::vector<double> l(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] < 0.0 || p[j] > 0.5)
            throw std::invalid_argument("sector trace: rates must lie in [0, 0.5]");
        l[j] = 1.0 - 2.0 * p[j];
    }
    return l;
}

void check_cap(const LatticeModel& m, int max_qubits) {
    if (m.n_qubits() > max_qubits)
        throw std::runtime_error("sector trace: qubit count " + std::to_string(m.n_qubits()) +
                                 " exceeds cap " + std::to_string(max_qubits));
}

// Sum over generator subsets with sector signs. Returns numerator and
// denominator traces (divided by 2^n).
void sector_sums(const LatticeModel& m, const std::vector<double>& lambdas, const SectorLabel& q,
                 const PauliOperator* obs, double& num, double& den) {
    const int G = m.n_generators();
    if (q.bits.size() != std::size_t(G))
        throw std::invalid_argument("sector trace: label length != generator count");
    TermSubsetSolver solver(m.model.terms, m.n_qubits());
    num = 0.0;
    den = 0.0;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << G); ++s) {
        PauliOperator us = PauliOperator::identity(m.n_qubits());
        int qdot = 0;
        for (int g = 0; g < G; ++g) {
            if ((s >> g) & 1ULL) {
                us = us.multiplied_by(m.generators[g]);
                qdot ^= q.bits[g] & 1;
            }
        }
        double sign = qdot ? -1.0 : 1.0;
        den += sign * subset_weight(m, solver, lambdas, us);
        if (obs) num += sign * subset_weight(m, solver, lambdas, us.multiplied_by(*obs));
    }
    double norm = std::pow(2.0, G);
    num /= norm;
    den /= norm;
}

}  // namespace

std::vector<SectorLabel> all_sectors(const LatticeModel& m) {
    const int G = m.n_generators();
    if (G > 20) throw std::runtime_error("all_sectors: too many generators to enumerate");
    std::vector<SectorLabel> out;
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << G); ++v) {
        SectorLabel q;
        q.bits.resize(G);
        for (int g = 0; g < G; ++g) q.bits[g] = (v >> g) & 1ULL;
        out.push_back(std::move(q));
    }
    return out;
}

double sector_probability(const LatticeModel& m, const std::vector<double>& p_per_term,
                          const SectorLabel& q, int max_qubits) {
    check_cap(m, max_qubits);
    auto lambdas = lambdas_from_rates(m, p_per_term);
    double num, den;
    sector_sums(m, lambdas, q, nullptr, num, den);
    return den;
}

double sector_observable(const LatticeModel& m, const std::vector<double>& p_per_term,
                         const SectorLabel& q, const PauliOperator& obs, int max_qubits) {
    check_cap(m, max_qubits);
    for (int g = 0; g < m.n_generators(); ++g)
        if (!obs.commutes_with(m.generators[g]))
            throw std::invalid_argument("sector_observable: observable anticommutes with generator " +
                                        m.generator_names[g]);
    auto lambdas = lambdas_from_rates(m, p_per_term);
    double num, den;
    sector_sums(m, lambdas, q, &obs, num, den);
    if (std::abs(den) < 1e-300)
        throw std::runtime_error("sector_observable: sector has zero probability");
    return num / den;
}

double state_observable(const LatticeModel& m, const std::vector<double>& p_per_term,
                        const PauliOperator& obs, int max_qubits) {
    check_cap(m, max_qubits);
    auto lambdas = lambdas_from_rates(m, p_per_term);
    TermSubsetSolver solver(m.model.terms, m.n_qubits());
    double num = subset_weight(m, solver, lambdas, obs);
    double den = subset_weight(m, solver, lambdas, PauliOperator::identity(m.n_qubits()));
    return num / den;
}

SectorLabel sector_from_representative_2d(const LatticeModel& m, const std::vector<int>& x_v,
                                          const std::vector<int>& x_e) {
    Square2dGeometry g = geometry_2d(m);
    if (x_v.size() != std::size_t(g.vertices()) || x_e.size() != std::size_t(g.edges()))
        throw std::invalid_argument("sector_from_representative_2d: size mismatch");
    SectorLabel q;
    q.bits.resize(m.n_generators());
    int prod = 1;
    for (int v : x_v) prod *= v;
    q.bits[0] = prod < 0;
    for (int y = 0; y < g.ly; ++y)
        for (int x = 0; x < g.lx; ++x) {
            int pr = x_e[g.edge_h(x, y)] * x_e[g.edge_v(x + 1, y)] * x_e[g.edge_h(x, y + 1)] *
                     x_e[g.edge_v(x, y)];
            q.bits[1 + y * g.lx + x] = pr < 0;
        }
    return q;
}

Eigen::VectorXcd dense_cda_state(const CommutingProjectorModel& m,
                                 const std::vector<double>& betas, const std::vector<int>& m_x,
                                 int max_qubits) {
    if (m.n_qubits > max_qubits) throw std::runtime_error("dense_cda_state: qubit cap exceeded");
    if (betas.size() != m.terms.size())
        throw std::invalid_argument("dense_cda_state: one beta per term");
    if (m_x.size() != std::size_t(m.n_qubits))
        throw std::invalid_argument("dense_cda_state: one x sign per qubit");
    const std::size_t dim = std::size_t(1) << m.n_qubits;
    Eigen::VectorXcd v(dim);
    const double amp = std::pow(2.0, -0.5 * m.n_qubits);
    for (std::size_t b = 0; b < dim; ++b) {
        double a = amp;
        for (int q = 0; q < m.n_qubits; ++q) {
            if ((b >> (m.n_qubits - 1 - q)) & 1ULL) a *= m_x[q] > 0 ? 1.0 : -1.0;
        }
        v(b) = a;
    }
    auto apply_pauli = [&](const PauliOperator& p, const Eigen::VectorXcd& in) {
        Eigen::VectorXcd out(dim);
        std::size_t xm = 0, zm = 0;
        for (int q = 0; q < m.n_qubits; ++q) {
            std::size_t bit = std::size_t(1) << (m.n_qubits - 1 - q);
            if (p.x_bit(q)) xm |= bit;
            if (p.z_bit(q)) zm |= bit;
        }
        Complex ph = p.phase();
        for (std::size_t b = 0; b < dim; ++b) {
            Complex a = in(b) * ph;
            if (std::popcount(b & zm) & 1) a = -a;
            out(b ^ xm) = a;
        }
        return out;
    };
    for (std::size_t j = 0; j < m.terms.size(); ++j) {
        double beta = betas[j];
        Eigen::VectorXcd hv = apply_pauli(m.terms[j], v);
        if (std::isinf(beta)) {
            v = 0.5 * (v - hv);  // projector onto h = -1
        } else {
            v = std::cosh(beta / 2.0) * v - std::sinh(beta / 2.0) * hv;
        }
    }
    return v;
}

}  // namespace seplab

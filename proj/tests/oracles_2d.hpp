#pragma once

// Brute-force statistical-mechanics oracles for the 2d cluster sector
// calculus: partition functions of the 2d Ising gauge theory (vertex terms)
// and the 2d Ising model (edge terms) with quenched sign configurations,
// enumerated over every spin configuration. Test-only code, independent of
// the Pauli-trace implementation it checks.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "seplab/lattice.hpp"

namespace oracle2d {

struct Geometry {
    int lx, ly;
    int vertices() const { return lx * ly; }
    int edges() const { return 2 * lx * ly; }
    int vertex(int x, int y) const { return ((y % ly + ly) % ly) * lx + ((x % lx + lx) % lx); }
    int edge_h(int x, int y) const { return 2 * vertex(x, y); }
    int edge_v(int x, int y) const { return 2 * vertex(x, y) + 1; }
    void edge_endpoints(int e, int& v1, int& v2) const {
        int v = e / 2, dir = e % 2;
        int x = v % lx, y = v / lx;
        v1 = v;
        v2 = dir == 0 ? vertex(x + 1, y) : vertex(x, y + 1);
    }
    std::vector<int> edges_at_vertex(int v) const {
        int x = v % lx, y = v / lx;
        return {edge_h(x, y), edge_h(x - 1, y), edge_v(x, y), edge_v(x, y - 1)};
    }
    std::vector<int> plaquette_edges(int p) const {
        int x = p % lx, y = p / lx;
        return {edge_h(x, y), edge_v(x + 1, y), edge_h(x, y + 1), edge_v(x, y)};
    }
};

// Z_{2D gauge, x_v} = sum_{z_e} exp(beta_v sum_v x_v prod_{e ni v} z_e)
inline double z_gauge(const Geometry& g, double beta_v, const std::vector<int>& x_v) {
    const int E = g.edges();
    double total = 0.0;
    for (std::size_t ze = 0; ze < (std::size_t(1) << E); ++ze) {
        double energy = 0.0;
        for (int v = 0; v < g.vertices(); ++v) {
            int prod = 1;
            for (int e : g.edges_at_vertex(v)) prod *= ((ze >> e) & 1) ? -1 : 1;
            energy += x_v[v] * prod;
        }
        total += std::exp(beta_v * energy);
    }
    return total;
}

// Z_{2D Ising, x_e} = sum_{z_v} exp(beta_e sum_e x_e z_{v1} z_{v2})
inline double z_ising(const Geometry& g, double beta_e, const std::vector<int>& x_e) {
    const int V = g.vertices();
    double total = 0.0;
    for (std::size_t zv = 0; zv < (std::size_t(1) << V); ++zv) {
        double energy = 0.0;
        for (int e = 0; e < g.edges(); ++e) {
            int v1, v2;
            g.edge_endpoints(e, v1, v2);
            int s1 = ((zv >> v1) & 1) ? -1 : 1;
            int s2 = ((zv >> v2) & 1) ? -1 : 1;
            energy += x_e[e] * s1 * s2;
        }
        total += std::exp(beta_e * energy);
    }
    return total;
}

// <W_{dS}>_{gauge, x_v}: Wilson loop = prod of z_e over the given edge set.
inline double wilson_gauge(const Geometry& g, double beta_v, const std::vector<int>& x_v,
                           const std::vector<int>& loop_edges) {
    const int E = g.edges();
    double num = 0.0, den = 0.0;
    for (std::size_t ze = 0; ze < (std::size_t(1) << E); ++ze) {
        double energy = 0.0;
        for (int v = 0; v < g.vertices(); ++v) {
            int prod = 1;
            for (int e : g.edges_at_vertex(v)) prod *= ((ze >> e) & 1) ? -1 : 1;
            energy += x_v[v] * prod;
        }
        double w = std::exp(beta_v * energy);
        int loop = 1;
        for (int e : loop_edges) loop *= ((ze >> e) & 1) ? -1 : 1;
        num += loop * w;
        den += w;
    }
    return num / den;
}

// <z_{v1} z_{v2}>_{Ising, x_e}
inline double spin_corr_ising(const Geometry& g, double beta_e, const std::vector<int>& x_e,
                              int v1, int v2) {
    const int V = g.vertices();
    double num = 0.0, den = 0.0;
    for (std::size_t zv = 0; zv < (std::size_t(1) << V); ++zv) {
        double energy = 0.0;
        for (int e = 0; e < g.edges(); ++e) {
            int a, b;
            g.edge_endpoints(e, a, b);
            energy += x_e[e] * (((zv >> a) & 1) ? -1 : 1) * (((zv >> b) & 1) ? -1 : 1);
        }
        double w = std::exp(beta_e * energy);
        int s = (((zv >> v1) & 1) ? -1 : 1) * (((zv >> v2) & 1) ? -1 : 1);
        num += s * w;
        den += w;
    }
    return num / den;
}

// Sector string observable with the numerator and denominator both summed
// over every coupling configuration in the one-form charge class (the class
// contains four homology components on the torus; a single representative
// is not enough).
inline double string_obs_enum(const Geometry& g, double beta_e, const seplab::SectorLabel& q,
                              const std::vector<int>& string_edges, int v1, int v2) {
    const int E = g.edges(), P = g.vertices();
    double num = 0.0, den = 0.0;
    for (std::size_t c = 0; c < (std::size_t(1) << E); ++c) {
        std::vector<int> x_e(E);
        for (int e = 0; e < E; ++e) x_e[e] = ((c >> e) & 1) ? -1 : 1;
        bool match = true;
        for (int p = 0; p < P && match; ++p) {
            int prod = 1;
            for (int e : g.plaquette_edges(p)) prod *= x_e[e];
            match = (prod < 0) == (q.bits[1 + p] != 0);
        }
        if (!match) continue;
        int xc = 1;
        for (int e : string_edges) xc *= x_e[e];
        double z = z_ising(g, beta_e, x_e);
        num += xc * z * spin_corr_ising(g, beta_e, x_e, v1, v2);
        den += z;
    }
    return num / den;
}

// Sector membrane observable, summed over the zero-form charge class.
inline double membrane_obs_enum(const Geometry& g, double beta_v, const seplab::SectorLabel& q,
                                const std::vector<int>& membrane_vertices,
                                const std::vector<int>& boundary_edges) {
    const int V = g.vertices();
    double num = 0.0, den = 0.0;
    for (std::size_t c = 0; c < (std::size_t(1) << V); ++c) {
        std::vector<int> x_v(V);
        int parity = 1;
        for (int v = 0; v < V; ++v) {
            x_v[v] = ((c >> v) & 1) ? -1 : 1;
            parity *= x_v[v];
        }
        if ((parity < 0) != (q.bits[0] != 0)) continue;
        int xs = 1;
        for (int v : membrane_vertices) xs *= x_v[v];
        double z = z_gauge(g, beta_v, x_v);
        num += xs * z * wilson_gauge(g, beta_v, x_v, boundary_edges);
        den += z;
    }
    return num / den;
}

// Sector probability by full enumeration over coupling-sign configurations:
// P(Q) = [sum_{x_v in Q0} Z_gauge][sum_{x_e in Q1} Z_ising] / (totals).
inline double sector_probability_enum(const Geometry& g, double p_v, double p_e,
                                      const seplab::SectorLabel& q) {
    const double beta_v = std::atanh(1.0 - 2.0 * p_v);
    const double beta_e = std::atanh(1.0 - 2.0 * p_e);
    const int V = g.vertices(), E = g.edges(), P = g.vertices();
    double s_gauge = 0.0, s_gauge_all = 0.0;
    for (std::size_t c = 0; c < (std::size_t(1) << V); ++c) {
        std::vector<int> x_v(V);
        int parity = 1;
        for (int v = 0; v < V; ++v) {
            x_v[v] = ((c >> v) & 1) ? -1 : 1;
            parity *= x_v[v];
        }
        double z = z_gauge(g, beta_v, x_v);
        s_gauge_all += z;
        if ((parity < 0) == (q.bits[0] != 0)) s_gauge += z;
    }
    double s_ising = 0.0, s_ising_all = 0.0;
    for (std::size_t c = 0; c < (std::size_t(1) << E); ++c) {
        std::vector<int> x_e(E);
        for (int e = 0; e < E; ++e) x_e[e] = ((c >> e) & 1) ? -1 : 1;
        bool match = true;
        for (int p = 0; p < P && match; ++p) {
            int prod = 1;
            for (int e : g.plaquette_edges(p)) prod *= x_e[e];
            match = (prod < 0) == (q.bits[1 + p] != 0);
        }
        double z = z_ising(g, beta_e, x_e);
        s_ising_all += z;
        if (match) s_ising += z;
    }
    return (s_gauge / s_gauge_all) * (s_ising / s_ising_all);
}

}  // namespace oracle2d

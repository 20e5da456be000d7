#include "seplab/statmech.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "seplab/parallel.hpp"
#include "seplab/rng.hpp"

namespace seplab {

Ising1dCorrelation ising1dcorr_impl(double beta, int d) {
    Ising1dCorrelation out;
    out.closed_form = d == 0 ? 1.0 : std::pow(std::tanh(beta), d);
    Eigen::Matrix2d t;
    t << std::exp(beta), std::exp(-beta), std::exp(-beta), std::exp(beta);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(t);
    // eigenvalues ascending: ratio of subleading to leading
    double ratio = es.eigenvalues()(0) / es.eigenvalues()(1);
    out.transfer_matrix_value = d == 0 ? 1.0 : std::pow(ratio, d);
    return out;
}

Ising1dCorrelation ising1d_correlation_exact(double beta, int d) {
    if (d < 0) throw std::invalid_argument("ising1d_correlation_exact: d >= 0");
    return ising1dcorr_impl(beta, d);
}

NishimoriPoint::NishimoriPoint(double p_) : p(p_) {
    if (p < 0.0 || p > 0.5) throw std::invalid_argument("NishimoriPoint: p in [0, 0.5]");
    beta = std::atanh(1.0 - 2.0 * p);
}

DisorderRealization sample_disorder_2d(int l, double p, std::uint64_t seed) {
    DisorderRealization d;
    d.dimension = 2;
    d.l = l;
    d.p = p;
    d.seed = seed;
    d.signs.assign(std::size_t(2) * l * l, 1);
    FastRng rng(seed);
    for (auto& s : d.signs)
        if (rng.uniform() < p) s = -1;
    return d;
}

DisorderRealization sample_disorder_3d(int l, double p, std::uint64_t seed) {
    DisorderRealization d;
    d.dimension = 3;
    d.l = l;
    d.p = p;
    d.seed = seed;
    d.signs.assign(std::size_t(3) * l * l * l, 1);
    FastRng rng(seed);
    for (auto& s : d.signs)
        if (rng.uniform() < p) s = -1;
    return d;
}

// ---------------------------------------------------------------------------
// 2d RBIM
// ---------------------------------------------------------------------------

namespace {

struct RbimSim {
    int l;
    double beta;
    std::vector<std::int8_t> spin;        // l*l
    const std::vector<std::int8_t>* bond; // 2*l*l, (site,dir) dir0=+x dir1=+y
    long long sat = 0;                    // sum_e x_e z z
    double acc4, acc8;

    RbimSim(int l_, double beta_, const std::vector<std::int8_t>& bonds, FastRng& rng,
            bool ordered_start)
        : l(l_), beta(beta_), bond(&bonds) {
        spin.resize(std::size_t(l) * l);
        // ordered start: near the Nishimori ground configuration at small p,
        // and parallel tempering handles the rest
        for (auto& s : spin) s = ordered_start ? 1 : ((rng.next() & 1) ? 1 : -1);
        acc4 = std::exp(-4.0 * beta);
        acc8 = std::exp(-8.0 * beta);
        recompute();
    }

    int idx(int x, int y) const { return ((y + l) % l) * l + ((x + l) % l); }

    void recompute() {
        sat = 0;
        for (int y = 0; y < l; ++y)
            for (int x = 0; x < l; ++x) {
                int i = idx(x, y);
                sat += (*bond)[2 * i] * spin[i] * spin[idx(x + 1, y)];
                sat += (*bond)[2 * i + 1] * spin[i] * spin[idx(x, y + 1)];
            }
    }

    // local field times own spin: dE = 2 * s * h with h = sum of x * neighbor
    inline int field(int x, int y) const {
        int i = idx(x, y);
        const auto& b = *bond;
        int h = b[2 * i] * spin[idx(x + 1, y)] + b[2 * i + 1] * spin[idx(x, y + 1)] +
                b[2 * idx(x - 1, y)] * spin[idx(x - 1, y)] +
                b[2 * idx(x, y - 1) + 1] * spin[idx(x, y - 1)];
        return h;
    }

    void sweep(FastRng& rng) {
        for (int y = 0; y < l; ++y)
            for (int x = 0; x < l; ++x) {
                int i = idx(x, y);
                int sh = spin[i] * field(x, y);
                int de = 2 * sh;  // energy change of H = -sum x z z
                bool accept;
                if (de < 0)
                    accept = true;
                else if (de == 0)
                    // half-probability acceptance: deterministic zero-cost
                    // flips make the sequential-sweep chain reducible
                    accept = rng.next() & 1;
                else if (de == 4)
                    accept = rng.uniform() < acc4;
                else
                    accept = rng.uniform() < acc8;
                if (accept) {
                    spin[i] = -spin[i];
                    sat -= 2 * sh;
                }
            }
    }

    double energy_per_bond() const { return double(sat) / double(2 * l * l); }
};

// parallel-tempering stack: rung back() sits at the target beta
struct PtStack {
    std::vector<RbimSim> rungs;
    std::vector<double> betas;

    PtStack(int l, double beta_target, int n_rungs, double lo_factor,
            const std::vector<std::int8_t>& bonds, FastRng& rng) {
        int n = std::max(1, n_rungs);
        for (int k = 0; k < n; ++k) {
            double b = n == 1 ? beta_target
                              : beta_target * (lo_factor + (1.0 - lo_factor) * k / double(n - 1));
            betas.push_back(b);
            rungs.emplace_back(l, b, bonds, rng, /*ordered_start=*/true);
        }
    }

    void sweep(FastRng& rng) {
        for (auto& r : rungs) r.sweep(rng);
        for (std::size_t k = 0; k + 1 < rungs.size(); ++k) {
            // H = -sat; exchange acceptance exp[(b1 - b2)(E1 - E2)]
            double d = (betas[k] - betas[k + 1]) *
                       (double(-rungs[k].sat) - double(-rungs[k + 1].sat));
            if (d >= 0 || rng.uniform() < std::exp(d)) {
                std::swap(rungs[k].spin, rungs[k + 1].spin);
                std::swap(rungs[k].sat, rungs[k + 1].sat);
                // acceptance tables stay with the rung (beta fixed per rung)
            }
        }
    }

    RbimSim& target() { return rungs.back(); }
};

struct RbimSampleOut {
    std::vector<double> corr2;  // per separation
    double energy = 0.0;
    double tau = 0.0;
    bool therm_ok = true;
};

RbimSampleOut rbim_one_sample(double p, int l, const std::vector<int>& seps, const McParams& mc,
                              std::uint64_t sample_seed, double beta) {
    auto disorder = sample_disorder_2d(l, p, derive_seed(sample_seed, 0, 17));
    FastRng rng1(derive_seed(sample_seed, 1, 23));
    FastRng rng2(derive_seed(sample_seed, 2, 29));
    PtStack rep1(l, beta, mc.pt_rungs, mc.pt_beta_lo_factor, disorder.signs, rng1);
    PtStack rep2(l, beta, mc.pt_rungs, mc.pt_beta_lo_factor, disorder.signs, rng2);

    for (int s = 0; s < mc.therm_sweeps; ++s) {
        rep1.sweep(rng1);
        rep2.sweep(rng2);
    }

    const int n_pairs = 2 * l * l;
    std::vector<std::vector<double>> sum1(seps.size(), std::vector<double>(n_pairs, 0.0));
    std::vector<std::vector<double>> sum2 = sum1;
    std::vector<double> eseries;
    eseries.reserve(mc.measure_sweeps);
    double esum = 0.0;
    int n_meas = 0;

    for (int s = 0; s < mc.measure_sweeps; ++s) {
        rep1.sweep(rng1);
        rep2.sweep(rng2);
        eseries.push_back(rep1.target().energy_per_bond());
        if (s % mc.measure_interval != 0) continue;
        ++n_meas;
        esum += 0.5 * (rep1.target().energy_per_bond() + rep2.target().energy_per_bond());
        auto& s1 = rep1.target().spin;
        auto& s2 = rep2.target().spin;
        for (std::size_t k = 0; k < seps.size(); ++k) {
            int r = seps[k];
            auto& a1 = sum1[k];
            auto& a2 = sum2[k];
            int pair = 0;
            for (int y = 0; y < l; ++y)
                for (int x = 0; x < l; ++x) {
                    int i = y * l + x;
                    int jx = y * l + (x + r) % l;
                    int jy = ((y + r) % l) * l + x;
                    a1[pair] += s1[i] * s1[jx];
                    a2[pair] += s2[i] * s2[jx];
                    ++pair;
                    a1[pair] += s1[i] * s1[jy];
                    a2[pair] += s2[i] * s2[jy];
                    ++pair;
                }
        }
    }

    RbimSampleOut out;
    out.energy = esum / n_meas;
    bool ok = true;
    out.tau = integrated_autocorrelation(eseries, ok);
    out.therm_ok = ok && mc.therm_sweeps >= 20.0 * out.tau &&
                   mc.measure_sweeps >= 100.0 * out.tau;
    for (std::size_t k = 0; k < seps.size(); ++k) {
        double q = 0.0;
        for (int pr = 0; pr < n_pairs; ++pr)
            q += (sum1[k][pr] / n_meas) * (sum2[k][pr] / n_meas);
        out.corr2.push_back(q / n_pairs);
    }
    return out;
}

}  // namespace

RbimRunResult rbim_correlations(double p, int l, const std::vector<int>& separations,
                                const McParams& mc, std::optional<double> beta_override) {
    if (l < 2) throw std::invalid_argument("rbim_correlations: L >= 2");
    for (int r : separations)
        if (r < 0 || r > l / 2) throw std::invalid_argument("rbim_correlations: r in [0, L/2]");

    RbimRunResult out;
    out.separations = separations;

    if (p == 0.0 && !beta_override) {
        // beta = infinity with uniform ferromagnetic couplings: all spins
        // locked, every correlator is exactly one
        for (std::size_t k = 0; k < separations.size(); ++k) {
            Estimate e;
            e.mean = 1.0;
            e.std_error = 0.0;
            e.n_disorder = mc.n_disorder;
            e.master_seed = mc.seed;
            e.samples.assign(mc.n_disorder, 1.0);
            out.corr2.push_back(e);
        }
        Estimate en;
        en.mean = 1.0;
        en.samples.assign(mc.n_disorder, 1.0);
        en.n_disorder = mc.n_disorder;
        out.bond_energy = en;
        return out;
    }

    const double beta = beta_override ? *beta_override : NishimoriPoint(p).beta;
    std::vector<RbimSampleOut> res(mc.n_disorder);
    parallel_for(std::size_t(mc.n_disorder), [&](std::size_t i) {
        res[i] = rbim_one_sample(p, l, separations, mc, derive_seed(mc.seed, i, 2), beta);
    });

    for (std::size_t k = 0; k < separations.size(); ++k) {
        std::vector<double> vals(mc.n_disorder);
        for (int i = 0; i < mc.n_disorder; ++i) vals[i] = res[i].corr2[k];
        Estimate e = jackknife_mean(vals);
        e.master_seed = mc.seed;
        e.n_sweeps = mc.therm_sweeps + mc.measure_sweeps;
        out.corr2.push_back(std::move(e));
    }
    std::vector<double> evals(mc.n_disorder);
    out.thermalization_ok = true;
    for (int i = 0; i < mc.n_disorder; ++i) {
        evals[i] = res[i].energy;
        out.tau_int_max = std::max(out.tau_int_max, res[i].tau);
        out.thermalization_ok = out.thermalization_ok && res[i].therm_ok;
    }
    out.bond_energy = jackknife_mean(evals);
    out.bond_energy.master_seed = mc.seed;
    for (auto& e : out.corr2) {
        e.tau_int_max = out.tau_int_max;
        e.thermalization_ok = out.thermalization_ok;
    }
    out.bond_energy.tau_int_max = out.tau_int_max;
    out.bond_energy.thermalization_ok = out.thermalization_ok;
    return out;
}

Estimate rbim_average_string(double p, int l, int separation, const McParams& mc) {
    return rbim_correlations(p, l, {separation}, mc).corr2.at(0);
}

std::vector<double> rbim_measure_series(const std::vector<std::int8_t>& bonds, int l, double beta,
                                        const std::vector<std::int8_t>& init_spins, int therm,
                                        int meas, std::uint64_t seed, int v1, int v2) {
    FastRng rng(seed);
    RbimSim sim(l, beta, bonds, rng, false);
    sim.spin = init_spins;
    sim.recompute();
    for (int s = 0; s < therm; ++s) sim.sweep(rng);
    std::vector<double> series;
    for (int s = 0; s < meas; ++s) {
        sim.sweep(rng);
        series.push_back(double(sim.spin[v1]) * sim.spin[v2]);
    }
    return series;
}

double enumerate_oracle_2d(double p, int l, int r) {
    if (l > 3 || l < 2) throw std::invalid_argument("enumerate_oracle_2d: L in {2, 3}");
    if (r < 0 || r >= l) throw std::invalid_argument("enumerate_oracle_2d: r in [0, L)");
    if (p < 0.0 || p > 0.5) throw std::invalid_argument("enumerate_oracle_2d: p in [0, 0.5]");
    if (r == 0) return 1.0;
    if (p == 0.0) return 1.0;

    const int V = l * l, B = 2 * l * l;
    const double beta = NishimoriPoint(p).beta;
    auto idx = [&](int x, int y) { return ((y + l) % l) * l + ((x + l) % l); };

    // bond pattern of each spin configuration: bit e set if z z' = -1
    std::vector<std::uint32_t> pat(std::size_t(1) << V);
    std::vector<int> s0sr(std::size_t(1) << V);
    for (std::size_t z = 0; z < (std::size_t(1) << V); ++z) {
        std::uint32_t m = 0;
        for (int y = 0; y < l; ++y)
            for (int x = 0; x < l; ++x) {
                int i = idx(x, y);
                int si = (z >> i) & 1 ? -1 : 1;
                if (si * ((z >> idx(x + 1, y)) & 1 ? -1 : 1) < 0) m |= 1u << (2 * i);
                if (si * ((z >> idx(x, y + 1)) & 1 ? -1 : 1) < 0) m |= 1u << (2 * i + 1);
            }
        pat[z] = m;
        int sa = (z >> idx(0, 0)) & 1 ? -1 : 1;
        int sb = (z >> idx(r, 0)) & 1 ? -1 : 1;
        s0sr[z] = sa * sb;
    }
    std::vector<double> lut(B + 1);
    for (int k = 0; k <= B; ++k) lut[k] = std::exp(beta * (B - 2 * k));

    const double pr = p / (1.0 - p);
    double total = 0.0, norm = 0.0;
    for (std::size_t x = 0; x < (std::size_t(1) << B); ++x) {
        double w = std::pow(pr, std::popcount(x));
        double zsum = 0.0, csum = 0.0;
        for (std::size_t z = 0; z < (std::size_t(1) << V); ++z) {
            double bw = lut[std::popcount(std::uint32_t(x) ^ pat[z])];
            zsum += bw;
            csum += s0sr[z] * bw;
        }
        double c = csum / zsum;
        total += w * c * c;
        norm += w;
    }
    return total / norm;
}

// ---------------------------------------------------------------------------
// crossing scans
// ---------------------------------------------------------------------------

namespace {

// first sign change of (R_small - R_large) along the grid, linearly interpolated
bool pairwise_crossing(const std::vector<double>& xs, const std::vector<double>& r1,
                       const std::vector<double>& r2, double& xc) {
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        double d0 = r1[i] - r2[i], d1 = r1[i + 1] - r2[i + 1];
        if (d0 == 0.0) {
            xc = xs[i];
            return true;
        }
        if (d0 * d1 < 0) {
            xc = xs[i] + (xs[i + 1] - xs[i]) * d0 / (d0 - d1);
            return true;
        }
    }
    return false;
}

CrossingResult crossing_scan_impl(const std::vector<double>& grid, const std::vector<int>& sizes,
                                  const McParams& mc, bool scan_beta) {
    if (sizes.size() < 2)
        throw std::invalid_argument("critical scan: need at least two sizes for a crossing");
    if (grid.size() < 2) throw std::invalid_argument("critical scan: need a grid");
    for (int l : sizes)
        if (l % 4 != 0)
            throw std::invalid_argument("critical scan: sizes must be multiples of 4 "
                                        "(separations L/4 and L/2)");

    CrossingResult out;
    // one run per (grid point, size)
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        for (std::size_t si = 0; si < sizes.size(); ++si) {
            int l = sizes[si];
            McParams local = mc;
            local.seed = derive_seed(mc.seed, gi * 97 + si, 3);
            RbimRunResult run =
                scan_beta ? rbim_correlations(0.0, l, {l / 4, l / 2}, local, grid[gi])
                          : rbim_correlations(grid[gi], l, {l / 4, l / 2}, local);
            RatioPoint pt;
            pt.x = grid[gi];
            pt.l = l;
            pt.den_samples = run.corr2[0].samples;
            pt.num_samples = run.corr2[1].samples;
            jackknife_ratio(pt.num_samples, pt.den_samples, pt.ratio, pt.ratio_err);
            pt.thermalization_ok = run.thermalization_ok;
            out.points.push_back(std::move(pt));
        }
    }

    auto ratio_curve = [&](int l, const std::vector<std::vector<double>>* resample_idx) {
        std::vector<double> curve;
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            for (const auto& pt : out.points) {
                if (pt.l == l && pt.x == grid[gi]) {
                    if (!resample_idx) {
                        double num = 0, den = 0;
                        for (std::size_t i = 0; i < pt.num_samples.size(); ++i) {
                            num += pt.num_samples[i];
                            den += pt.den_samples[i];
                        }
                        curve.push_back(num / den);
                    } else {
                        const auto& idx = (*resample_idx)[gi];
                        double num = 0, den = 0;
                        for (double di : idx) {
                            std::size_t i = std::size_t(di) % pt.num_samples.size();
                            num += pt.num_samples[i];
                            den += pt.den_samples[i];
                        }
                        curve.push_back(num / den);
                    }
                    break;
                }
            }
        }
        return curve;
    };

    // central estimate: average the pairwise crossings
    std::vector<double> crossings;
    for (std::size_t a = 0; a < sizes.size(); ++a) {
        for (std::size_t b = a + 1; b < sizes.size(); ++b) {
            auto c1 = ratio_curve(sizes[a], nullptr);
            auto c2 = ratio_curve(sizes[b], nullptr);
            double xc;
            if (pairwise_crossing(grid, c1, c2, xc)) crossings.push_back(xc);
        }
    }
    if (crossings.empty()) {
        out.found = false;
        out.message = "no crossing of the correlation ratio inside the grid";
        return out;
    }
    out.found = true;
    for (double c : crossings) out.estimate += c;
    out.estimate /= crossings.size();

    // bootstrap over disorder samples
    const int n_boot = 200;
    std::vector<double> boots;
    FastRng brng(derive_seed(mc.seed, 999, 5));
    const std::size_t n_samp = out.points.front().num_samples.size();
    for (int bb = 0; bb < n_boot; ++bb) {
        std::vector<std::vector<double>> resample(grid.size());
        for (auto& v : resample) {
            v.resize(n_samp);
            for (auto& x : v) x = double(brng.below(n_samp));
        }
        std::vector<double> cs;
        for (std::size_t a = 0; a < sizes.size(); ++a)
            for (std::size_t b = a + 1; b < sizes.size(); ++b) {
                auto c1 = ratio_curve(sizes[a], &resample);
                auto c2 = ratio_curve(sizes[b], &resample);
                double xc;
                if (pairwise_crossing(grid, c1, c2, xc)) cs.push_back(xc);
            }
        if (!cs.empty()) {
            double m = 0;
            for (double c : cs) m += c;
            boots.push_back(m / cs.size());
        }
    }
    if (boots.size() >= 20) {
        std::sort(boots.begin(), boots.end());
        out.ci_lo = boots[std::size_t(0.025 * boots.size())];
        out.ci_hi = boots[std::size_t(0.975 * boots.size())];
    } else {
        out.ci_lo = out.ci_hi = out.estimate;
    }
    out.message = "crossing found";
    return out;
}

}  // namespace

CrossingResult rbim_critical_scan(const std::vector<double>& p_grid, const std::vector<int>& sizes,
                                  const McParams& mc) {
    return crossing_scan_impl(p_grid, sizes, mc, false);
}

CrossingResult ising2d_critical_scan(const std::vector<double>& beta_grid,
                                     const std::vector<int>& sizes, const McParams& mc) {
    return crossing_scan_impl(beta_grid, sizes, mc, true);
}

// ---------------------------------------------------------------------------
// 3d RPGM
// ---------------------------------------------------------------------------

namespace {

struct RpgmGeometry {
    int l;
    int sites() const { return l * l * l; }
    int site(int x, int y, int z) const {
        auto w = [&](int i) { return ((i % l) + l) % l; };
        return (w(z) * l + w(y)) * l + w(x);
    }
    void coords(int s, int& x, int& y, int& z) const {
        x = s % l;
        y = (s / l) % l;
        z = s / (l * l);
    }
    int edge(int s, int d) const { return 3 * s + d; }
    int plaq(int s, int d) const { return 3 * s + d; }
    int shifted(int s, int d, int by) const {
        int x, y, z;
        coords(s, x, y, z);
        if (d == 0) x += by;
        if (d == 1) y += by;
        if (d == 2) z += by;
        return site(x, y, z);
    }
    // 4 edges of plaquette (s, normal nd)
    void plaq_edges(int s, int nd, int out[4]) const {
        int u = (nd + 1) % 3, w = (nd + 2) % 3;
        out[0] = edge(s, u);
        out[1] = edge(shifted(s, u, 1), w);
        out[2] = edge(shifted(s, w, 1), u);
        out[3] = edge(s, w);
    }
    // 4 plaquettes containing edge (s, d)
    void edge_plaqs(int s, int d, int out[4]) const {
        int n1 = (d + 2) % 3, n2 = (d + 1) % 3;
        out[0] = plaq(s, n1);
        out[1] = plaq(shifted(s, (n1 + 2) % 3, -1), n1);
        out[2] = plaq(s, n2);
        out[3] = plaq(shifted(s, (n2 + 1) % 3, -1), n2);
    }
};

struct RpgmSim {
    RpgmGeometry g;
    double beta;
    std::vector<std::int8_t> z;  // edge spins
    const std::vector<std::int8_t>* x;  // plaquette signs
    // flattened adjacency: for each edge, 4 x (plaquette sign index, 3 other edges)
    const std::vector<int>* adj;
    long long sat = 0;
    double acc4, acc8;

    RpgmSim(const RpgmGeometry& g_, double beta_, const std::vector<std::int8_t>& signs,
            const std::vector<int>& adjacency, FastRng& rng)
        : g(g_), beta(beta_), x(&signs), adj(&adjacency) {
        z.resize(std::size_t(3) * g.sites());
        for (auto& s : z) s = (rng.next() & 1) ? 1 : -1;
        acc4 = std::exp(-4.0 * beta);
        acc8 = std::exp(-8.0 * beta);
        recompute();
    }

    void recompute() {
        sat = 0;
        int es[4];
        for (int s = 0; s < g.sites(); ++s)
            for (int d = 0; d < 3; ++d) {
                g.plaq_edges(s, d, es);
                sat += (*x)[g.plaq(s, d)] * z[es[0]] * z[es[1]] * z[es[2]] * z[es[3]];
            }
    }

    inline int field(int e) const {
        const int* a = adj->data() + std::size_t(e) * 16;
        int h = 0;
        for (int k = 0; k < 4; ++k) {
            const int* row = a + 4 * k;
            h += (*x)[row[0]] * z[row[1]] * z[row[2]] * z[row[3]];
        }
        return h;
    }

    void sweep(FastRng& rng) {
        const int ne = 3 * g.sites();
        for (int e = 0; e < ne; ++e) {
            int sh = z[e] * field(e);
            int de = 2 * sh;
            bool accept;
            if (de < 0)
                accept = true;
            else if (de == 0)
                accept = rng.next() & 1;  // see the 2d sweep
            else if (de == 4)
                accept = rng.uniform() < acc4;
            else
                accept = rng.uniform() < acc8;
            if (accept) {
                z[e] = -z[e];
                sat -= 2 * sh;
            }
        }
    }

    double energy_per_plaquette() const { return double(sat) / double(3 * g.sites()); }
};

std::vector<int> build_adjacency(const RpgmGeometry& g) {
    const int ne = 3 * g.sites();
    std::vector<int> adj(std::size_t(ne) * 16);
    int ps[4], es[4];
    for (int s = 0; s < g.sites(); ++s)
        for (int d = 0; d < 3; ++d) {
            int e = g.edge(s, d);
            g.edge_plaqs(s, d, ps);
            for (int k = 0; k < 4; ++k) {
                // plaquette ps[k]: find its 4 edges, drop e
                int ss = ps[k] / 3, nd = ps[k] % 3;
                g.plaq_edges(ss, nd, es);
                int* row = adj.data() + std::size_t(e) * 16 + 4 * k;
                row[0] = ps[k];
                int w = 1;
                for (int j = 0; j < 4; ++j)
                    if (es[j] != e) row[w++] = es[j];
            }
        }
    return adj;
}

// R x R Wilson loops with stride-2 translation averaging, all 3 orientations
std::vector<std::vector<int>> build_loops(const RpgmGeometry& g, int r) {
    std::vector<std::vector<int>> loops;
    const int stride = g.l >= 8 ? 2 : 1;
    for (int plane = 0; plane < 3; ++plane) {
        int u = (plane + 1) % 3, w = (plane + 2) % 3;
        for (int z0 = 0; z0 < g.l; z0 += stride)
            for (int y0 = 0; y0 < g.l; y0 += stride)
                for (int x0 = 0; x0 < g.l; x0 += stride) {
                    int base = g.site(x0, y0, z0);
                    std::vector<int> loop;
                    for (int i = 0; i < r; ++i) {
                        int a = base;
                        for (int s = 0; s < i; ++s) a = g.shifted(a, u, 1);
                        loop.push_back(g.edge(a, u));
                        int b = a;
                        for (int s = 0; s < r; ++s) b = g.shifted(b, w, 1);
                        loop.push_back(g.edge(b, u));
                        int c = base;
                        for (int s = 0; s < i; ++s) c = g.shifted(c, w, 1);
                        loop.push_back(g.edge(c, w));
                        int dd = c;
                        for (int s = 0; s < r; ++s) dd = g.shifted(dd, u, 1);
                        loop.push_back(g.edge(dd, w));
                    }
                    loops.push_back(std::move(loop));
                }
    }
    return loops;
}

struct RpgmSampleOut {
    std::vector<double> w2;
    double energy = 0.0;
    double tau = 0.0;
    bool therm_ok = true;
};

RpgmSampleOut rpgm_one_sample(double p, const RpgmGeometry& g, const std::vector<int>& adj,
                              const std::vector<std::vector<std::vector<int>>>& loops_per_r,
                              const McParams& mc, std::uint64_t sample_seed) {
    auto disorder = sample_disorder_3d(g.l, p, derive_seed(sample_seed, 0, 31));
    const double beta = NishimoriPoint(p).beta;
    FastRng rng1(derive_seed(sample_seed, 1, 37));
    FastRng rng2(derive_seed(sample_seed, 2, 41));
    RpgmSim rep1(g, beta, disorder.signs, adj, rng1);
    RpgmSim rep2(g, beta, disorder.signs, adj, rng2);

    for (int s = 0; s < mc.therm_sweeps; ++s) {
        rep1.sweep(rng1);
        rep2.sweep(rng2);
    }

    std::vector<std::vector<double>> sum1(loops_per_r.size()), sum2(loops_per_r.size());
    for (std::size_t k = 0; k < loops_per_r.size(); ++k) {
        sum1[k].assign(loops_per_r[k].size(), 0.0);
        sum2[k].assign(loops_per_r[k].size(), 0.0);
    }
    std::vector<double> eseries;
    double esum = 0.0;
    int n_meas = 0;
    for (int s = 0; s < mc.measure_sweeps; ++s) {
        rep1.sweep(rng1);
        rep2.sweep(rng2);
        eseries.push_back(rep1.energy_per_plaquette());
        if (s % mc.measure_interval != 0) continue;
        ++n_meas;
        esum += 0.5 * (rep1.energy_per_plaquette() + rep2.energy_per_plaquette());
        for (std::size_t k = 0; k < loops_per_r.size(); ++k) {
            for (std::size_t li = 0; li < loops_per_r[k].size(); ++li) {
                int pr1 = 1, pr2 = 1;
                for (int e : loops_per_r[k][li]) {
                    pr1 *= rep1.z[e];
                    pr2 *= rep2.z[e];
                }
                sum1[k][li] += pr1;
                sum2[k][li] += pr2;
            }
        }
    }

    RpgmSampleOut out;
    out.energy = esum / n_meas;
    bool ok = true;
    out.tau = integrated_autocorrelation(eseries, ok);
    out.therm_ok = ok && mc.therm_sweeps >= 20.0 * out.tau &&
                   mc.measure_sweeps >= 100.0 * out.tau;
    for (std::size_t k = 0; k < loops_per_r.size(); ++k) {
        double q = 0.0;
        for (std::size_t li = 0; li < loops_per_r[k].size(); ++li)
            q += (sum1[k][li] / n_meas) * (sum2[k][li] / n_meas);
        out.w2.push_back(q / double(loops_per_r[k].size()));
    }
    return out;
}

}  // namespace

RpgmRunResult rpgm_average_membrane(double p, int l, const std::vector<int>& loop_sizes,
                                    const McParams& mc) {
    if (l < 4) throw std::invalid_argument("rpgm_average_membrane: L >= 4");
    for (int r : loop_sizes)
        if (r < 1 || r > l / 2)
            throw std::invalid_argument("rpgm_average_membrane: R in [1, L/2]");

    RpgmRunResult out;
    out.loop_sizes = loop_sizes;
    if (p == 0.0) {
        for (std::size_t k = 0; k < loop_sizes.size(); ++k) {
            Estimate e;
            e.mean = 1.0;
            e.n_disorder = mc.n_disorder;
            e.samples.assign(mc.n_disorder, 1.0);
            out.wilson2.push_back(e);
        }
        Estimate en;
        en.mean = 1.0;
        en.samples.assign(mc.n_disorder, 1.0);
        out.plaquette_energy = en;
        return out;
    }

    RpgmGeometry g{l};
    auto adj = build_adjacency(g);
    std::vector<std::vector<std::vector<int>>> loops;
    for (int r : loop_sizes) loops.push_back(build_loops(g, r));

    std::vector<RpgmSampleOut> res(mc.n_disorder);
    parallel_for(std::size_t(mc.n_disorder), [&](std::size_t i) {
        res[i] = rpgm_one_sample(p, g, adj, loops, mc, derive_seed(mc.seed, i, 7));
    });

    for (std::size_t k = 0; k < loop_sizes.size(); ++k) {
        std::vector<double> vals(mc.n_disorder);
        for (int i = 0; i < mc.n_disorder; ++i) vals[i] = res[i].w2[k];
        Estimate e = jackknife_mean(vals);
        e.master_seed = mc.seed;
        e.n_sweeps = mc.therm_sweeps + mc.measure_sweeps;
        out.wilson2.push_back(std::move(e));
    }
    std::vector<double> evals(mc.n_disorder);
    out.thermalization_ok = true;
    for (int i = 0; i < mc.n_disorder; ++i) {
        evals[i] = res[i].energy;
        out.tau_int_max = std::max(out.tau_int_max, res[i].tau);
        out.thermalization_ok = out.thermalization_ok && res[i].therm_ok;
    }
    out.plaquette_energy = jackknife_mean(evals);
    for (auto& e : out.wilson2) {
        e.tau_int_max = out.tau_int_max;
        e.thermalization_ok = out.thermalization_ok;
    }
    out.plaquette_energy.tau_int_max = out.tau_int_max;
    out.plaquette_energy.thermalization_ok = out.thermalization_ok;
    return out;
}

WilsonLawFit wilson_law_fit(const RpgmRunResult& run) {
    std::vector<double> area, perim, y, wgt;
    for (std::size_t k = 0; k < run.loop_sizes.size(); ++k) {
        double m = run.wilson2[k].mean;
        double s = run.wilson2[k].std_error;
        if (m <= 0 || s <= 0) continue;  // signal lost in noise: drop the point
        int r = run.loop_sizes[k];
        area.push_back(double(r) * r);
        perim.push_back(4.0 * r);
        y.push_back(-std::log(m));
        wgt.push_back(m / s);  // 1/sigma_y with sigma_y = s/m
    }
    if (y.size() < 3)
        throw std::runtime_error("wilson_law_fit: fewer than 3 usable loop sizes");

    auto fit2 = [&](const std::vector<double>& f) {
        // weighted least squares y = a f + c
        double sww = 0, swf = 0, swy = 0, swff = 0, swfy = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double w2 = wgt[i] * wgt[i];
            sww += w2;
            swf += w2 * f[i];
            swy += w2 * y[i];
            swff += w2 * f[i] * f[i];
            swfy += w2 * f[i] * y[i];
        }
        double det = sww * swff - swf * swf;
        double a = (sww * swfy - swf * swy) / det;
        double c = (swff * swy - swf * swfy) / det;
        double chi2 = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double res = (y[i] - a * f[i] - c) * wgt[i];
            chi2 += res * res;
        }
        return chi2;
    };

    WilsonLawFit out;
    out.chi2_area = fit2(area);
    out.chi2_perimeter = fit2(perim);
    out.aic_area = out.chi2_area + 2.0 * 2;
    out.aic_perimeter = out.chi2_perimeter + 2.0 * 2;
    out.perimeter_preferred = out.aic_perimeter < out.aic_area;
    return out;
}

}  // namespace seplab

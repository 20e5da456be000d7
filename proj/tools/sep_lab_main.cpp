// sep-lab: batch command-line surface over the separability-transition
// laboratory. Every run writes CSV output plus a JSON manifest with the
// resolved configuration, master seed and output digests.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "seplab/bdg.hpp"
#include "seplab/clock.hpp"
#include "seplab/csv.hpp"
#include "seplab/doublestate.hpp"
#include "seplab/fock.hpp"
#include "seplab/gaussian.hpp"
#include "seplab/gibbs.hpp"
#include "seplab/lattice.hpp"
#include "seplab/manifest.hpp"
#include "seplab/rng.hpp"
#include "seplab/selftest.hpp"
#include "seplab/statmech.hpp"

using namespace seplab;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitResource = 2;
constexpr int kExitFlagged = 3;

struct Common {
    std::uint64_t seed = 1;
    bool strict = false;
    std::string out_dir = ".";
    std::string config_path;
    std::string command_line;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config " + path);
    json j = json::parse(f);
    if (j.contains("config")) j = j["config"];  // accept a manifest as config
    return j;
}

void write_outputs(const Common& c, const std::string& name, const CsvWriter& csv,
                   RunManifest& manifest) {
    std::filesystem::create_directories(c.out_dir);
    std::string csv_path = c.out_dir + "/" + name + ".csv";
    csv.write(csv_path);
    manifest.record_output(csv_path, fnv1a64_hex(csv.str()));
    manifest.write(c.out_dir + "/" + name + ".manifest.json");
    std::printf("wrote %s\n", csv_path.c_str());
}

McParams mc_from(const json& cfg, const Common& c, int samples, int sweeps, int therm) {
    McParams mc;
    mc.n_disorder = cfg.value("samples", samples);
    mc.measure_sweeps = cfg.value("sweeps", sweeps);
    mc.therm_sweeps = cfg.value("therm", therm);
    mc.pt_rungs = cfg.value("pt_rungs", 4);
    mc.seed = c.seed;
    return mc;
}

CommutingProjectorModel resolve_model(const std::string& spec_str) {
    // builtin names first: cluster1d_N, cluster2d_LxL, kitaev_N
    if (spec_str.rfind("cluster1d_", 0) == 0)
        return cluster_1d(std::stoi(spec_str.substr(10))).model;
    if (spec_str.rfind("cluster2d_", 0) == 0) {
        std::string dims = spec_str.substr(10);
        auto x = dims.find('x');
        if (x == std::string::npos) throw std::invalid_argument("cluster2d_LxL expected");
        return cluster_2d(std::stoi(dims.substr(0, x)), std::stoi(dims.substr(x + 1))).model;
    }
    if (spec_str.rfind("kitaev_", 0) == 0) return kitaev_chain(std::stoi(spec_str.substr(7))).model;
    std::ifstream f(spec_str);
    if (!f) throw std::invalid_argument("model '" + spec_str + "' is neither builtin nor a file");
    std::stringstream ss;
    ss << f.rdbuf();
    return model_from_text(ss.str());
}

std::vector<double> parse_grid(const std::string& s) {
    // "lo:hi:n" or comma list
    if (s.find(':') != std::string::npos) {
        double lo, hi;
        int n;
        if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 2)
            throw std::invalid_argument("grid must be lo:hi:n");
        std::vector<double> g(n);
        for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / double(n - 1);
        return g;
    }
    std::vector<double> g;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) g.push_back(std::stod(tok));
    return g;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stoi(tok));
    return v;
}

std::vector<int> occupation_pattern(const std::string& kind, int lx, int ly, std::uint64_t seed) {
    std::vector<int> occ(std::size_t(lx) * ly, 0);
    if (kind == "uniform") return occ;
    if (kind == "staggered") {
        for (int y = 0; y < ly; ++y)
            for (int x = 0; x < lx; ++x) occ[std::size_t(y) * lx + x] = (x + y) & 1;
        return occ;
    }
    if (kind == "random") {
        FastRng rng(derive_seed(seed, 0xABCD, 9));
        for (auto& o : occ) o = int(rng.next() & 1);
        return occ;
    }
    throw std::invalid_argument("occupation pattern must be uniform|staggered|random");
}

// ---- subcommand bodies -------------------------------------------------

int run_gibbs_verify(const Common& c, const json& cfg, const std::string& model_name, double p) {
    CommutingProjectorModel model = resolve_model(model_name);
    auto rep = validate_model(model);
    if (!rep.ok()) {
        std::printf("FAIL model invalid: %s\n", rep.summary().c_str());
        return kExitUsage;
    }
    if (model.n_qubits > 12) {
        std::printf("FAIL resource: %d qubits exceeds the dense cap of 12\n", model.n_qubits);
        return kExitResource;
    }
    auto res = dense_channel_oracle(model, p);
    bool pass = res.max_abs_deviation < 1e-10 && res.trace_error < 1e-12;
    std::printf("%s maxdev %.3g tracedev %.3g\n", pass ? "PASS" : "FAIL", res.max_abs_deviation,
                res.trace_error);

    CsvWriter csv;
    csv.meta("command", "gibbs verify");
    csv.meta("model", model_name);
    csv.header({"model", "n_qubits", "p", "max_abs_deviation", "trace_error", "pass"});
    csv.cell(model_name);
    csv.cell(model.n_qubits);
    csv.cell(p);
    csv.cell(res.max_abs_deviation);
    csv.cell(res.trace_error);
    csv.cell(int(pass));
    csv.end_row();
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "gibbs_verify", csv, man);
    return pass ? kExitOk : kExitFlagged;
}

int run_cluster(const Common& c, const json& cfg, int dim, std::vector<int> sizes, double pa,
                double pb) {
    if (dim == 3) {
        std::printf("FAIL resource: the smallest 3d cluster has 48 qubits (> 12 dense cap); "
                    "use `sep-lab rpgm` for the 3d statistics\n");
        return kExitResource;
    }
    LatticeModel lm = dim == 1 ? cluster_1d(sizes.at(0))
                               : cluster_2d(sizes.at(0), sizes.size() > 1 ? sizes.at(1) : sizes.at(0));
    if (lm.n_qubits() > 12) {
        std::printf("FAIL resource: %d qubits exceeds the dense cap of 12\n", lm.n_qubits());
        return kExitResource;
    }
    std::vector<double> p(lm.n_terms());
    if (dim == 1) {
        for (int j = 0; j < lm.n_terms(); ++j) p[j] = (j % 2 == 0) ? pa : pb;
    } else {
        auto g = geometry_2d(lm);
        for (int j = 0; j < lm.n_terms(); ++j) p[j] = j < g.vertices() ? pa : pb;
    }

    CsvWriter csv;
    csv.meta("command", "cluster");
    csv.meta("dim", std::to_string(dim));
    csv.meta("pa", std::to_string(pa));
    csv.meta("pb", std::to_string(pb));

    if (dim == 1) {
        int cells = lm.sizes[0];
        PauliOperator sa = string_1d(lm, 0, 0, cells / 2);
        PauliOperator sb = string_1d(lm, 1, 0, cells / 2);
        csv.header({"Qa", "Qb", "probability", "string_a", "string_b"});
        for (const auto& q : all_sectors(lm)) {
            double prob = sector_probability(lm, p, q);
            csv.cell(int(q.bits[0]));
            csv.cell(int(q.bits[1]));
            csv.cell(prob);
            if (prob > 1e-14) {
                csv.cell(sector_observable(lm, p, q, sa));
                csv.cell(sector_observable(lm, p, q, sb));
            } else {
                csv.cell(std::string("nan"));
                csv.cell(std::string("nan"));
            }
            csv.end_row();
        }
    } else {
        auto g = geometry_2d(lm);
        PauliOperator membrane = product_of_terms(lm, {g.vertex_term(0, 0)});
        PauliOperator string_e = product_of_terms(lm, {g.edge_term(g.edge_h(0, 0))});
        csv.header({"sector_bits", "probability", "membrane_v00", "string_e00"});
        for (const auto& q : all_sectors(lm)) {
            double prob = sector_probability(lm, p, q);
            std::string bits;
            for (auto b : q.bits) bits += b ? '1' : '0';
            csv.cell(bits);
            csv.cell(prob);
            if (prob > 1e-14) {
                csv.cell(sector_observable(lm, p, q, membrane));
                csv.cell(sector_observable(lm, p, q, string_e));
            } else {
                csv.cell(std::string("nan"));
                csv.cell(std::string("nan"));
            }
            csv.end_row();
        }
    }
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "cluster", csv, man);
    return kExitOk;
}

int run_rbim_corr(const Common& c, const json& cfg, double p, int l, std::vector<int> rs,
                  const McParams& mc) {
    RbimRunResult run = rbim_correlations(p, l, rs, mc);
    CsvWriter csv;
    csv.meta("command", "rbim corr");
    csv.meta("estimator", "two-replica product, jackknife over disorder samples");
    csv.header({"observable", "p", "L", "r", "mean", "stderr", "n_disorder", "tau_int", "seed"});
    for (std::size_t k = 0; k < rs.size(); ++k) {
        csv.cell(std::string("corr2"));
        csv.cell(p);
        csv.cell(l);
        csv.cell(rs[k]);
        csv.cell(run.corr2[k].mean);
        csv.cell(run.corr2[k].std_error);
        csv.cell(run.corr2[k].n_disorder);
        csv.cell(run.corr2[k].tau_int_max);
        csv.cell(static_cast<long long>(mc.seed));
        csv.end_row();
    }
    csv.cell(std::string("bond_energy"));
    csv.cell(p);
    csv.cell(l);
    csv.cell(0);
    csv.cell(run.bond_energy.mean);
    csv.cell(run.bond_energy.std_error);
    csv.cell(run.bond_energy.n_disorder);
    csv.cell(run.bond_energy.tau_int_max);
    csv.cell(static_cast<long long>(mc.seed));
    csv.end_row();
    RunManifest man(c.command_line, cfg, c.seed);
    for (int i = 0; i < mc.n_disorder; ++i)
        man.record_seed("disorder_" + std::to_string(i), derive_seed(mc.seed, i, 2));
    write_outputs(c, "rbim_corr", csv, man);
    if (!run.thermalization_ok) {
        std::printf("flagged: thermalization criterion not met (tau_int max %.1f)\n",
                    run.tau_int_max);
        if (c.strict) return kExitFlagged;
    }
    return kExitOk;
}

int scan_to_csv(const Common& c, const json& cfg, const CrossingResult& res,
                const std::string& name, const char* xname) {
    CsvWriter csv;
    csv.meta("command", name);
    csv.meta("crossing_found", res.found ? "yes" : "no");
    if (res.found) {
        csv.meta("crossing_estimate", std::to_string(res.estimate));
        csv.meta("ci_lo", std::to_string(res.ci_lo));
        csv.meta("ci_hi", std::to_string(res.ci_hi));
    }
    csv.header({xname, "L", "ratio", "ratio_err", "thermalization_ok"});
    for (const auto& pt : res.points) {
        csv.cell(pt.x);
        csv.cell(pt.l);
        csv.cell(pt.ratio);
        csv.cell(pt.ratio_err);
        csv.cell(int(pt.thermalization_ok));
        csv.end_row();
    }
    if (res.found)
        std::printf("crossing estimate %s_c = %.4f  (95%% CI [%.4f, %.4f])\n", xname, res.estimate,
                    res.ci_lo, res.ci_hi);
    else
        std::printf("no crossing inside the grid\n");
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, name, csv, man);
    if (!res.found && c.strict) return kExitFlagged;
    return kExitOk;
}

int run_rpgm_wilson(const Common& c, const json& cfg, double p, int l, std::vector<int> loops,
                    const McParams& mc) {
    RpgmRunResult run = rpgm_average_membrane(p, l, loops, mc);
    CsvWriter csv;
    csv.meta("command", "rpgm wilson");
    if (loops.size() >= 3 && p > 0) {
        auto fit = wilson_law_fit(run);
        csv.meta("aic_area", std::to_string(fit.aic_area));
        csv.meta("aic_perimeter", std::to_string(fit.aic_perimeter));
        csv.meta("preferred", fit.perimeter_preferred ? "perimeter" : "area");
        std::printf("law fit: AIC(area) = %.2f, AIC(perimeter) = %.2f -> %s law preferred\n",
                    fit.aic_area, fit.aic_perimeter, fit.perimeter_preferred ? "perimeter" : "area");
    }
    csv.header({"observable", "p", "L", "R", "mean", "stderr", "n_disorder", "tau_int", "seed"});
    for (std::size_t k = 0; k < loops.size(); ++k) {
        csv.cell(std::string("wilson2"));
        csv.cell(p);
        csv.cell(l);
        csv.cell(loops[k]);
        csv.cell(run.wilson2[k].mean);
        csv.cell(run.wilson2[k].std_error);
        csv.cell(run.wilson2[k].n_disorder);
        csv.cell(run.wilson2[k].tau_int_max);
        csv.cell(static_cast<long long>(mc.seed));
        csv.end_row();
    }
    csv.cell(std::string("plaquette_energy"));
    csv.cell(p);
    csv.cell(l);
    csv.cell(0);
    csv.cell(run.plaquette_energy.mean);
    csv.cell(run.plaquette_energy.std_error);
    csv.cell(run.plaquette_energy.n_disorder);
    csv.cell(run.plaquette_energy.tau_int_max);
    csv.cell(static_cast<long long>(mc.seed));
    csv.end_row();
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "rpgm_wilson", csv, man);
    if (!run.thermalization_ok && c.strict) return kExitFlagged;
    return kExitOk;
}

int run_rpgm_scan(const Common& c, const json& cfg, const std::vector<double>& grid, int l,
                  std::vector<int> loops, const McParams& mc) {
    CsvWriter csv;
    csv.meta("command", "rpgm scan");
    csv.header({"p", "L", "preferred_law", "aic_area", "aic_perimeter"});
    double last_perimeter = -1, first_area = -1;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        McParams local = mc;
        local.seed = derive_seed(mc.seed, gi, 13);
        RpgmRunResult run = rpgm_average_membrane(grid[gi], l, loops, local);
        auto fit = wilson_law_fit(run);
        csv.cell(grid[gi]);
        csv.cell(l);
        csv.cell(std::string(fit.perimeter_preferred ? "perimeter" : "area"));
        csv.cell(fit.aic_area);
        csv.cell(fit.aic_perimeter);
        csv.end_row();
        std::printf("p=%.4f -> %s\n", grid[gi], fit.perimeter_preferred ? "perimeter" : "area");
        if (fit.perimeter_preferred) last_perimeter = grid[gi];
        if (!fit.perimeter_preferred && first_area < 0) first_area = grid[gi];
    }
    if (last_perimeter >= 0 && first_area > last_perimeter)
        std::printf("law flips between p = %.4f and p = %.4f\n", last_perimeter, first_area);
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "rpgm_scan", csv, man);
    return kExitOk;
}

int run_pwave_modcomm(const Common& c, const json& cfg, int l, double p, const std::string& m_kind) {
    BdgModel model;
    model.lx = l;
    model.ly = l;
    MajoranaCovariance state(model.n_modes());
    if (p == 0.0) {
        state = ground_state_covariance_kspace(model);
    } else {
        auto occ = occupation_pattern(m_kind, l, l, c.seed);
        state = cda_state_covariance(model, p, occ).cov;
    }
    std::vector<int> a, b, cc;
    standard_tripartition(l, a, b, cc);
    auto r = modular_commutator(state, a, b, cc);
    double j0 = M_PI / 6.0;
    std::printf("L=%d p=%.4f m=%s  J = %.6f  J/J0 = %.4f%s\n", l, p, m_kind.c_str(), r.j, r.j / j0,
                r.clip_flagged ? "  (spectrum clipping reported)" : "");
    CsvWriter csv;
    csv.meta("command", "pwave modcomm");
    csv.meta("tripartition", "three adjacent L/4 rectangles in an L/2 x L/2 window");
    csv.header({"L", "p", "m", "J", "J_over_J0", "n_clipped"});
    csv.cell(l);
    csv.cell(p);
    csv.cell(m_kind);
    csv.cell(r.j);
    csv.cell(r.j / j0);
    csv.cell(r.n_clipped);
    csv.end_row();
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "pwave_modcomm", csv, man);
    return kExitOk;
}

int run_pwave_espec(const Common& c, const json& cfg, int lx, int ly, double p,
                    const std::string& region, bool periodic_x) {
    if (region.rfind("strip:", 0) != 0)
        throw std::invalid_argument("region must be strip:<rows>");
    int rows = std::stoi(region.substr(6));
    if (rows < 1 || rows >= ly) throw std::invalid_argument("strip rows must lie in [1, Ly)");
    BdgModel model;
    model.lx = lx;
    model.ly = ly;
    model.antiperiodic_x = !periodic_x;
    MajoranaCovariance state(model.n_modes());
    if (p == 0.0)
        state = ground_state_covariance_kspace(model);
    else
        state = cda_vacuum_covariance_pairing_route(model, p);
    std::vector<int> region_rows;
    for (int y = 0; y < rows; ++y) region_rows.push_back(y);
    EspecResult spec =
        entanglement_spectrum(state, lx, ly, region_rows, true, model.antiperiodic_x);
    if (!spec.warning.empty()) std::printf("warning: %s\n", spec.warning.c_str());
    CsvWriter csv;
    csv.meta("command", "pwave espec");
    csv.meta("state", p == 0 ? "ground state" : "vacuum CDA state");
    csv.header({"k", "nu"});
    if (spec.momentum_resolved) {
        for (const auto& pt : spec.points) {
            csv.cell(pt.k);
            csv.cell(pt.nu);
            csv.end_row();
        }
    } else {
        for (double nu : spec.plain) {
            csv.cell(std::string("nan"));
            csv.cell(nu);
            csv.end_row();
        }
    }
    std::printf("min |nu| = %.5f over %zu levels\n", min_abs_nu(spec), spec.plain.size());
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "pwave_espec", csv, man);
    return kExitOk;
}

int run_pwave_pairing(const Common& c, const json& cfg, int lx, int ly, double p) {
    BdgModel model;
    model.lx = lx;
    model.ly = ly;
    auto decay = pair_amplitude_decay(model, p);
    CsvWriter csv;
    csv.meta("command", "pwave pairing");
    csv.meta("aic_power", std::to_string(decay.aic_power));
    csv.meta("aic_exponential", std::to_string(decay.aic_exponential));
    csv.meta("preferred", decay.exponential_preferred ? "exponential" : "power");
    csv.header({"r", "abs_g"});
    for (std::size_t i = 0; i < decay.r.size(); ++i) {
        csv.cell(decay.r[i]);
        csv.cell(decay.abs_g[i]);
        csv.end_row();
    }
    std::printf("pair amplitude decay: AIC(power) = %.2f, AIC(exp) = %.2f -> %s\n",
                decay.aic_power, decay.aic_exponential,
                decay.exponential_preferred ? "exponential" : "power");
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "pwave_pairing", csv, man);
    return kExitOk;
}

int run_pwave_cda(const Common& c, const json& cfg, int lx, int ly, double p,
                  const std::string& m_kind) {
    BdgModel model;
    model.lx = lx;
    model.ly = ly;
    auto occ = occupation_pattern(m_kind, lx, ly, c.seed);
    CdaResult res = cda_state_covariance(model, p, occ);
    double route_dev = -1;
    if (m_kind == "uniform") {
        MajoranaCovariance pair = cda_vacuum_covariance_pairing_route(model, p);
        route_dev = (res.cov.m - pair.m).cwiseAbs().maxCoeff();
    }
    std::printf("CDA state: purity error %.3g, log-norm %.6f%s\n", res.cov.purity_error(),
                res.log_norm, res.regularized ? " (regularized)" : "");
    if (route_dev >= 0) std::printf("pairing-route agreement: %.3g\n", route_dev);
    CsvWriter csv;
    csv.meta("command", "pwave cda");
    csv.header({"Lx", "Ly", "p", "m", "purity_error", "log_norm", "pairing_route_dev"});
    csv.cell(lx);
    csv.cell(ly);
    csv.cell(p);
    csv.cell(m_kind);
    csv.cell(res.cov.purity_error());
    csv.cell(res.log_norm);
    csv.cell(route_dev);
    csv.end_row();
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "pwave_cda", csv, man);
    return kExitOk;
}

int run_double_espec(const Common& c, const json& cfg, int lx, int ly,
                     const std::vector<double>& ps, int rows) {
    BdgModel cyl;
    cyl.lx = lx;
    cyl.ly = ly;
    cyl.periodic_y = false;
    MajoranaCovariance m0 = ground_state_covariance(cyl);
    CsvWriter csv;
    csv.meta("command", "double espec");
    csv.meta("geometry", "cylinder, antiperiodic circumference, open height");
    csv.header({"p", "k", "nu"});
    for (double p : ps) {
        EspecResult spec = double_state_entanglement_spectrum(cyl, p, rows, &m0);
        for (const auto& pt : spec.points) {
            csv.cell(p);
            csv.cell(pt.k);
            csv.cell(pt.nu);
            csv.end_row();
        }
        std::printf("p = %.3f: min |nu| = %.5f\n", p, min_abs_nu(spec));
    }
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "double_espec", csv, man);
    return kExitOk;
}

int run_double_cj_check(const Common& c, const json& cfg, int n_modes) {
    std::mt19937_64 rng = make_engine(c.seed);
    std::normal_distribution<double> g(0, 0.6);
    MatrixXd k = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < 2 * n_modes; ++i)
        for (int j = i + 1; j < 2 * n_modes; ++j) {
            k(i, j) = g(rng);
            k(j, i) = -k(i, j);
        }
    MatrixXd m = kernel_to_covariance(k);
    MatrixXcd rho = density_from_covariance(m);
    auto tr = cj_transport_rules_dense(rho, n_modes);
    auto nm = naive_map_counterexample();
    bool pass = tr.max_dev_rho_c < 1e-12 && tr.max_dev_rho_cdag < 1e-12 &&
                nm.naive_nonidempotency > 0.1 && nm.channel_idempotency_dev < 1e-12 &&
                nm.corrected_vs_channel_dev < 1e-12;
    std::printf("%s transport c %.2e, c^+ %.2e | naive ||N^2-N|| %.3f, channel idem %.2e, "
                "corrected %.2e\n",
                pass ? "PASS" : "FAIL", tr.max_dev_rho_c, tr.max_dev_rho_cdag,
                nm.naive_nonidempotency, nm.channel_idempotency_dev, nm.corrected_vs_channel_dev);
    CsvWriter csv;
    csv.meta("command", "double cj-check");
    csv.header({"n_modes", "dev_rho_c", "dev_rho_cdag", "naive_nonidempotency",
                "channel_idempotency_dev", "corrected_vs_channel_dev", "pass"});
    csv.cell(n_modes);
    csv.cell(tr.max_dev_rho_c);
    csv.cell(tr.max_dev_rho_cdag);
    csv.cell(nm.naive_nonidempotency);
    csv.cell(nm.channel_idempotency_dev);
    csv.cell(nm.corrected_vs_channel_dev);
    csv.cell(int(pass));
    csv.end_row();
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "double_cj_check", csv, man);
    return pass ? kExitOk : kExitFlagged;
}

int run_selftest(const Common& c, const json& cfg, const std::string& mutate) {
    bool mutate_modcomm = mutate == "modcomm";
    if (!mutate.empty() && !mutate_modcomm)
        throw std::invalid_argument("unknown mutation fixture '" + mutate + "'");
    SelftestReport rep = selftest(mutate_modcomm);
    for (const auto& ck : rep.checks)
        std::printf("%-4s [%s] %s  (dev %.3g, tol %.3g)\n", ck.pass ? "PASS" : "FAIL",
                    ck.module.c_str(), ck.name.c_str(), ck.deviation, ck.tolerance);
    CsvWriter csv;
    csv.meta("command", "selftest");
    csv.header({"module", "check", "pass", "deviation", "tolerance"});
    for (const auto& ck : rep.checks) {
        csv.cell(ck.module);
        csv.cell(ck.name);
        csv.cell(int(ck.pass));
        csv.cell(ck.deviation);
        csv.cell(ck.tolerance);
        csv.end_row();
    }
    RunManifest man(c.command_line, cfg, c.seed);
    write_outputs(c, "selftest", csv, man);
    if (mutate_modcomm) {
        // the dense cross-check must have caught the perturbed constant
        bool caught = false;
        for (const auto& ck : rep.checks)
            if (ck.name.find("modular commutator") != std::string::npos && !ck.pass) caught = true;
        std::printf(caught ? "mutation caught by the dense cross-check\n"
                           : "mutation NOT caught - selftest coverage broken\n");
        return caught ? kExitOk : kExitFlagged;
    }
    std::printf(rep.all_pass() ? "selftest: all green\n" : "selftest: FAILURES\n");
    return rep.all_pass() ? kExitOk : kExitFlagged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"separability-transition laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    Common common;
    {
        std::ostringstream cl;
        for (int i = 0; i < argc; ++i) cl << (i ? " " : "") << argv[i];
        common.command_line = cl.str();
    }
    app.add_option("--seed", common.seed, "master seed");
    app.add_flag("--strict", common.strict, "flagged estimates become errors");
    app.add_option("--out", common.out_dir, "output directory");
    app.add_option("--config", common.config_path, "JSON config (or manifest) file");

    // gibbs verify
    auto* gibbs = app.add_subcommand("gibbs", "channel -> Gibbs machinery");
    auto* verify = gibbs->add_subcommand("verify", "dense channel vs Gibbs product check");
    std::string model_name = "cluster1d_4";
    double gp = 0.3;
    verify->add_option("--model", model_name, "builtin name or model file");
    verify->add_option("--p", gp, "decoherence rate");

    // cluster
    auto* cluster = app.add_subcommand("cluster", "sector probabilities and observables");
    int cdim = 1;
    std::string csizes = "4";
    double cpa = 0.2, cpb = 0.2;
    cluster->add_option("--dim", cdim)->check(CLI::Range(1, 3));
    cluster->add_option("--sizes", csizes, "comma-separated linear sizes");
    cluster->add_option("--pa", cpa);
    cluster->add_option("--pb", cpb);

    // rbim
    auto* rbim = app.add_subcommand("rbim", "2d random-bond Ising model on the Nishimori line");
    auto* rbim_corr_cmd = rbim->add_subcommand("corr", "average squared correlator");
    double rp = 0.109;
    int rl = 8;
    std::string rrs = "2,4";
    int rsamples = 500, rsweeps = 2400, rtherm = 800;
    rbim_corr_cmd->add_option("--p", rp);
    rbim_corr_cmd->add_option("--L", rl);
    rbim_corr_cmd->add_option("--r", rrs, "comma-separated separations");
    rbim_corr_cmd->add_option("--samples", rsamples);
    rbim_corr_cmd->add_option("--sweeps", rsweeps);
    rbim_corr_cmd->add_option("--therm", rtherm);
    auto* rbim_scan_cmd = rbim->add_subcommand("scan", "correlation-ratio crossing scan");
    std::string rgrid = "0.08:0.14:7", rls = "8,12,16";
    rbim_scan_cmd->add_option("--grid", rgrid, "lo:hi:n or comma list");
    rbim_scan_cmd->add_option("--L", rls);
    rbim_scan_cmd->add_option("--samples", rsamples);
    rbim_scan_cmd->add_option("--sweeps", rsweeps);
    rbim_scan_cmd->add_option("--therm", rtherm);
    auto* ising_scan_cmd = rbim->add_subcommand("ising-control", "pure Ising beta-scan control");
    std::string igrid = "0.40:0.48:5";
    ising_scan_cmd->add_option("--grid", igrid);
    ising_scan_cmd->add_option("--L", rls);
    ising_scan_cmd->add_option("--samples", rsamples);
    ising_scan_cmd->add_option("--sweeps", rsweeps);
    ising_scan_cmd->add_option("--therm", rtherm);

    // rpgm
    auto* rpgm = app.add_subcommand("rpgm", "3d random-plaquette gauge model");
    auto* rpgm_wilson_cmd = rpgm->add_subcommand("wilson", "average squared Wilson loops");
    double qp = 0.029;
    int ql = 8;
    std::string qrs = "1,2,3,4";
    int qsamples = 250, qsweeps = 1500, qtherm = 500;
    rpgm_wilson_cmd->add_option("--p", qp);
    rpgm_wilson_cmd->add_option("--L", ql);
    rpgm_wilson_cmd->add_option("--R", qrs, "comma-separated loop sizes");
    rpgm_wilson_cmd->add_option("--samples", qsamples);
    rpgm_wilson_cmd->add_option("--sweeps", qsweeps);
    rpgm_wilson_cmd->add_option("--therm", qtherm);
    auto* rpgm_scan_cmd = rpgm->add_subcommand("scan", "area/perimeter flip scan");
    std::string qgrid = "0.015,0.025,0.035,0.045,0.08";
    rpgm_scan_cmd->add_option("--grid", qgrid);
    rpgm_scan_cmd->add_option("--L", ql);
    rpgm_scan_cmd->add_option("--R", qrs);
    rpgm_scan_cmd->add_option("--samples", qsamples);
    rpgm_scan_cmd->add_option("--sweeps", qsweeps);
    rpgm_scan_cmd->add_option("--therm", qtherm);

    // pwave
    auto* pwave = app.add_subcommand("pwave", "decohered p+ip superconductor");
    auto* modcomm_cmd = pwave->add_subcommand("modcomm", "modular commutator of CDA states");
    int pl = 12;
    double pp = 0.04;
    std::string pm = "uniform";
    modcomm_cmd->add_option("--L", pl);
    modcomm_cmd->add_option("--p", pp);
    modcomm_cmd->add_option("--m", pm, "uniform|staggered|random");
    auto* espec_cmd = pwave->add_subcommand("espec", "entanglement spectrum of CDA states");
    int plx = 60, ply = 30;
    std::string pregion = "strip:15";
    bool periodic_x = false;
    espec_cmd->add_option("--Lx", plx);
    espec_cmd->add_option("--Ly", ply);
    espec_cmd->add_option("--p", pp);
    espec_cmd->add_option("--region", pregion, "strip:<rows>");
    espec_cmd->add_flag("--periodic-x", periodic_x, "periodic instead of antiperiodic x");
    auto* pairing_cmd = pwave->add_subcommand("pairing", "pairing function decay");
    int glx = 48, gly = 48;
    pairing_cmd->add_option("--Lx", glx);
    pairing_cmd->add_option("--Ly", gly);
    pairing_cmd->add_option("--p", pp);
    auto* cda_cmd = pwave->add_subcommand("cda", "CDA covariance diagnostics");
    cda_cmd->add_option("--Lx", plx);
    cda_cmd->add_option("--Ly", ply);
    cda_cmd->add_option("--p", pp);
    cda_cmd->add_option("--m", pm);

    // double
    auto* dbl = app.add_subcommand("double", "fermionic Choi-Jamiolkowski double state");
    auto* despec_cmd = dbl->add_subcommand("espec", "double-state entanglement spectrum");
    int dlx = 60, dly = 16, drows = 8;
    std::string dps = "0,0.02,0.05";
    despec_cmd->add_option("--Lx", dlx);
    despec_cmd->add_option("--Ly", dly);
    despec_cmd->add_option("--p", dps, "comma list of rates");
    despec_cmd->add_option("--rows", drows, "rows of the half region");
    auto* cjcheck_cmd = dbl->add_subcommand("cj-check", "dense transport-rule verification");
    int dmodes = 3;
    cjcheck_cmd->add_option("--modes", dmodes)->check(CLI::Range(1, 3));

    // selftest
    auto* st = app.add_subcommand("selftest", "dense-oracle agreement suite");
    std::string mutate;
    st->add_option("--mutate", mutate, "perturb a constant to prove detection (modcomm)");

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = load_config(common.config_path);
        common.seed = cfg.value("seed", common.seed);
        auto cs = [&](const char* key, const std::string& dflt) {
            return cfg.value(key, dflt);
        };
        auto ci = [&](const char* key, int dflt) { return cfg.value(key, dflt); };
        auto cd = [&](const char* key, double dflt) { return cfg.value(key, dflt); };

        if (verify->parsed())
            return run_gibbs_verify(common, cfg, cs("model", model_name), cd("p", gp));
        if (cluster->parsed())
            return run_cluster(common, cfg, ci("dim", cdim), parse_int_list(cs("sizes", csizes)),
                               cd("pa", cpa), cd("pb", cpb));
        if (rbim_corr_cmd->parsed()) {
            McParams mc = mc_from(cfg, common, rsamples, rsweeps, rtherm);
            return run_rbim_corr(common, cfg, cd("p", rp), ci("L", rl),
                                 parse_int_list(cs("r", rrs)), mc);
        }
        if (rbim_scan_cmd->parsed()) {
            McParams mc = mc_from(cfg, common, rsamples, rsweeps, rtherm);
            auto res = rbim_critical_scan(parse_grid(cs("grid", rgrid)),
                                          parse_int_list(cs("L", rls)), mc);
            return scan_to_csv(common, cfg, res, "rbim_scan", "p");
        }
        if (ising_scan_cmd->parsed()) {
            McParams mc = mc_from(cfg, common, rsamples, rsweeps, rtherm);
            auto res = ising2d_critical_scan(parse_grid(cs("grid", igrid)),
                                             parse_int_list(cs("L", rls)), mc);
            return scan_to_csv(common, cfg, res, "ising_control_scan", "beta");
        }
        if (rpgm_wilson_cmd->parsed()) {
            McParams mc = mc_from(cfg, common, qsamples, qsweeps, qtherm);
            return run_rpgm_wilson(common, cfg, cd("p", qp), ci("L", ql),
                                   parse_int_list(cs("R", qrs)), mc);
        }
        if (rpgm_scan_cmd->parsed()) {
            McParams mc = mc_from(cfg, common, qsamples, qsweeps, qtherm);
            return run_rpgm_scan(common, cfg, parse_grid(cs("grid", qgrid)), ci("L", ql),
                                 parse_int_list(cs("R", qrs)), mc);
        }
        if (modcomm_cmd->parsed())
            return run_pwave_modcomm(common, cfg, ci("L", pl), cd("p", pp), cs("m", pm));
        if (espec_cmd->parsed())
            return run_pwave_espec(common, cfg, ci("Lx", plx), ci("Ly", ply), cd("p", pp),
                                   cs("region", pregion),
                                   periodic_x || cfg.value("periodic_x", false));
        if (pairing_cmd->parsed())
            return run_pwave_pairing(common, cfg, ci("Lx", glx), ci("Ly", gly), cd("p", pp));
        if (cda_cmd->parsed())
            return run_pwave_cda(common, cfg, ci("Lx", plx), ci("Ly", ply), cd("p", pp),
                                 cs("m", pm));
        if (despec_cmd->parsed())
            return run_double_espec(common, cfg, ci("Lx", dlx), ci("Ly", dly),
                                    parse_grid(cs("p", dps)), ci("rows", drows));
        if (cjcheck_cmd->parsed()) return run_double_cj_check(common, cfg, ci("modes", dmodes));
        if (st->parsed()) return run_selftest(common, cfg, cs("mutate", mutate));
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitResource;
    }
    return kExitUsage;
}

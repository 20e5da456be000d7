#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seplab/estimate.hpp"

namespace seplab {

// ---- exact 1d baseline ----

struct Ising1dCorrelation {
    double transfer_matrix_value;  // from numerical 2x2 diagonalization
    double closed_form;            // tanh(beta)^d
};
/// Two-point function of the infinite 1d Ising chain at distance d bonds.
Ising1dCorrelation ising1d_correlation_exact(double beta, int d);

// ---- quenched-disorder machinery ----

/// tanh(beta) = 1 - 2p.
struct NishimoriPoint {
    double p = 0.0;
    double beta = 0.0;
    explicit NishimoriPoint(double p_);
};

/// Quenched coupling-sign configuration (bonds of the 2d square lattice or
/// plaquettes of the 3d cubic lattice), sampled i.i.d. at flip rate p.
struct DisorderRealization {
    int dimension = 2;  // 2 or 3
    int l = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::int8_t> signs;  // one per bond / plaquette
};
DisorderRealization sample_disorder_2d(int l, double p, std::uint64_t seed);
DisorderRealization sample_disorder_3d(int l, double p, std::uint64_t seed);

struct McParams {
    int n_disorder = 200;
    int therm_sweeps = 400;
    int measure_sweeps = 1600;
    int measure_interval = 1;  // sweeps between correlator accumulations
    int pt_rungs = 4;          // >1 enables parallel tempering
    double pt_beta_lo_factor = 0.6;
    std::uint64_t seed = 1;
};

/// Result of one RBIM run at fixed (p, L): disorder-averaged squared thermal
/// correlators for each requested separation, plus the bond-energy check.
struct RbimRunResult {
    std::vector<int> separations;
    std::vector<Estimate> corr2;    // [<z0 zr>^2] per separation
    Estimate bond_energy;           // <x zz> per bond; equals tanh(beta) on the line
    double tau_int_max = 0.0;
    bool thermalization_ok = true;
};

/// 2d RBIM on the Nishimori line (beta = atanh(1-2p)); couplings may also be
/// run at an explicit beta (pure-Ising control) by passing beta_override.
RbimRunResult rbim_correlations(double p, int l, const std::vector<int>& separations,
                                const McParams& mc,
                                std::optional<double> beta_override = std::nullopt);

/// Convenience: single separation.
Estimate rbim_average_string(double p, int l, int separation, const McParams& mc);

/// Exact enumeration of [<z_{0} z_{r}>^2] on an L<=3 torus (both the disorder
/// measure and the thermal sums are exhausted).
double enumerate_oracle_2d(double p, int l, int r);

/// Exposed for validation: the per-sweep series of z_{v1} z_{v2} for one
/// explicit bond configuration, deterministic in (seed, initial spins).
/// Gauge-transforming bonds and initial spins together must reproduce the
/// series up to the fixed sign s_{v1} s_{v2}.
std::vector<double> rbim_measure_series(const std::vector<std::int8_t>& bonds, int l, double beta,
                                        const std::vector<std::int8_t>& init_spins, int therm,
                                        int meas, std::uint64_t seed, int v1, int v2);

// ---- crossing scans ----

struct RatioPoint {
    double x = 0.0;  // p (or beta for the control scan)
    int l = 0;
    double ratio = 0.0;      // [<z z_{L/2}>^2] / [<z z_{L/4}>^2]
    double ratio_err = 0.0;
    std::vector<double> num_samples, den_samples;  // for bootstrap
    bool thermalization_ok = true;
};

struct CrossingResult {
    bool found = false;
    double estimate = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // bootstrap 95 %
    std::vector<RatioPoint> points;
    std::string message;
};

/// Correlation-ratio crossing over a grid of flip rates p (Nishimori line).
CrossingResult rbim_critical_scan(const std::vector<double>& p_grid, const std::vector<int>& sizes,
                                  const McParams& mc);

/// Pure-Ising control: couplings all +1, scan over beta instead of p.
CrossingResult ising2d_critical_scan(const std::vector<double>& beta_grid,
                                     const std::vector<int>& sizes, const McParams& mc);

// ---- 3d random-plaquette gauge model ----

struct RpgmRunResult {
    std::vector<int> loop_sizes;  // R for R x R Wilson loops
    std::vector<Estimate> wilson2;  // [<W>^2] per loop size
    Estimate plaquette_energy;      // equals tanh(beta) on the line
    double tau_int_max = 0.0;
    bool thermalization_ok = true;
};

RpgmRunResult rpgm_average_membrane(double p, int l, const std::vector<int>& loop_sizes,
                                    const McParams& mc);

/// Area-law vs perimeter-law discrimination by weighted least squares on
/// -log [<W>^2] with nested two-parameter models, compared through AIC.
struct WilsonLawFit {
    double aic_area = 0.0;
    double aic_perimeter = 0.0;
    double chi2_area = 0.0;
    double chi2_perimeter = 0.0;
    bool perimeter_preferred = false;
};
WilsonLawFit wilson_law_fit(const RpgmRunResult& run);

}  // namespace seplab

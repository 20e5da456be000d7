#pragma once

#include <cstdint>
#include <vector>

namespace seplab {

/// Monte Carlo observable with provenance. The standard error is computed
/// over disorder samples (jackknife), never over sweeps alone.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    int n_disorder = 0;
    long long n_sweeps = 0;
    std::uint64_t master_seed = 0;
    double tau_int_max = 0.0;
    bool thermalization_ok = true;
    std::vector<double> samples;  // per-disorder-sample values
};

/// Jackknife mean/stderr of a sample vector.
Estimate jackknife_mean(const std::vector<double>& samples);

/// Jackknife estimate of mean(a)/mean(b) over paired samples.
void jackknife_ratio(const std::vector<double>& a, const std::vector<double>& b, double& ratio,
                     double& std_error);

/// Integrated autocorrelation time with Madras-Sokal windowing (window at
/// c * tau). Returns tau >= 0.5; sets ok = false if no window closes.
double integrated_autocorrelation(const std::vector<double>& series, bool& ok, double c = 6.0);

}  // namespace seplab

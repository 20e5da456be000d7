#include "seplab/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace seplab {

Estimate jackknife_mean(const std::vector<double>& samples) {
    Estimate e;
    const int n = int(samples.size());
    e.n_disorder = n;
    e.samples = samples;
    if (n == 0) return e;
    double sum = 0;
    for (double v : samples) sum += v;
    e.mean = sum / n;
    if (n == 1) return e;
    double var = 0;
    for (double v : samples) {
        double leave = (sum - v) / (n - 1);
        var += (leave - e.mean) * (leave - e.mean);
    }
    e.std_error = std::sqrt(var * (n - 1) / double(n));
    return e;
}

void jackknife_ratio(const std::vector<double>& a, const std::vector<double>& b, double& ratio,
                     double& std_error) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("jackknife_ratio: paired samples required");
    const int n = int(a.size());
    double sa = 0, sb = 0;
    for (int i = 0; i < n; ++i) {
        sa += a[i];
        sb += b[i];
    }
    ratio = sa / sb;
    if (n == 1) {
        std_error = 0;
        return;
    }
    double var = 0;
    for (int i = 0; i < n; ++i) {
        double r = (sa - a[i]) / (sb - b[i]);
        var += (r - ratio) * (r - ratio);
    }
    std_error = std::sqrt(var * (n - 1) / double(n));
}

double integrated_autocorrelation(const std::vector<double>& series, bool& ok, double c) {
    const int n = int(series.size());
    ok = true;
    if (n < 8) {
        ok = false;
        return 0.5;
    }
    double mean = 0;
    for (double v : series) mean += v;
    mean /= n;
    double var = 0;
    for (double v : series) var += (v - mean) * (v - mean);
    var /= n;
    if (var <= 0) return 0.5;  // frozen series, e.g. beta = infinity

    double tau = 0.5;
    for (int t = 1; t < n / 2; ++t) {
        double acf = 0;
        for (int i = 0; i + t < n; ++i) acf += (series[i] - mean) * (series[i + t] - mean);
        acf /= (n - t) * var;
        tau += acf;
        if (t >= c * tau) return tau;  // window closed
    }
    ok = false;  // never closed: series too short relative to tau
    return tau;
}

}  // namespace seplab

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace decmg {

/// Adaptive embedded Runge-Kutta 5(4) integration (Dormand-Prince
/// coefficients, FSAL) with a PI step-size controller.
struct Rk54Options {
    double rtol = 1e-9;
    double atol = 1e-9;
    double safety = 0.9;
    double min_factor = 0.2;
    double max_factor = 5.0;
    double initial_dt = 0.0;  // 0 = choose automatically
};

struct Rk54Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
    std::string method = "dormand-prince-5(4)";
};

/// Integrates y' = f(t, y) from t0 to t1, invoking `sample` at every time in
/// `sample_times` (strictly increasing, within [t0, t1]; steps are clipped
/// to land on them exactly). Throws on step-size underflow.
Rk54Stats rk54_integrate(
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& f,
    std::vector<double>& y, double t0, double t1,
    const std::vector<double>& sample_times,
    const std::function<void(double, const std::vector<double>&)>& sample,
    const Rk54Options& opts = {});

} // namespace decmg

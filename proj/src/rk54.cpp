#include "decmg/rk54.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace decmg {

namespace {

// Dormand-Prince 5(4) tableau. The last stage row equals the 5th-order
// weights (FSAL).
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
// embedded 4th-order weights
constexpr double E1 = 5179.0 / 57600, E3 = 7571.0 / 16695, E4 = 393.0 / 640,
                 E5 = -92097.0 / 339200, E6 = 187.0 / 2100, E7 = 1.0 / 40;

} // namespace

Rk54Stats rk54_integrate(
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& f,
    std::vector<double>& y, double t0, double t1,
    const std::vector<double>& sample_times,
    const std::function<void(double, const std::vector<double>&)>& sample,
    const Rk54Options& opts) {
    const std::size_t n = y.size();
    Rk54Stats stats;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), y5(n), err(n);

    double t = t0;
    std::size_t next_sample = 0;
    auto emit_samples_at = [&](double tcur, const std::vector<double>& ycur) {
        while (next_sample < sample_times.size() &&
               std::abs(sample_times[next_sample] - tcur) <= 1e-12 * std::max(1.0, std::abs(tcur))) {
            sample(tcur, ycur);
            ++next_sample;
        }
    };
    emit_samples_at(t, y);

    f(t, y, k1);
    ++stats.rhs_evaluations;

    double dt = opts.initial_dt;
    if (dt <= 0.0) {
        // conservative first step from the initial slope
        double ynorm = 0.0, fnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ynorm = std::max(ynorm, std::abs(y[i]));
            fnorm = std::max(fnorm, std::abs(k1[i]));
        }
        dt = fnorm > 0.0 ? 0.01 * (opts.atol + opts.rtol * ynorm) / fnorm
                          : 1e-6 * (t1 - t0);
        dt = std::min(std::max(dt, 1e-12 * (t1 - t0)), (t1 - t0));
    }

    double err_prev = 1.0;
    const double alpha = 0.17, beta_pi = 0.04;  // PI controller exponents

    while (t < t1) {
        double target = t1;
        if (next_sample < sample_times.size()) target = std::min(target, sample_times[next_sample]);
        bool clipped = false;
        if (t + dt >= target) {
            dt = target - t;
            clipped = true;
        }
        if (dt <= 1e-14 * std::max(1.0, std::abs(t))) {
            if (clipped) {  // fell exactly on the target
                t = target;
                emit_samples_at(t, y);
                continue;
            }
            throw std::runtime_error("rk54: step size underflow at t = " + std::to_string(t));
        }

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dt * A21 * k1[i];
        f(t + C2 * dt, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + dt * (A31 * k1[i] + A32 * k2[i]);
        f(t + C3 * dt, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + dt * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        f(t + C4 * dt, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + dt * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        f(t + C5 * dt, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + dt * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] +
                                   A64 * k4[i] + A65 * k5[i]);
        f(t + dt, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + dt * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] +
                                 B6 * k6[i]);
        f(t + dt, y5, k7);
        stats.rhs_evaluations += 6;

        double err_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = dt * ((B1 - E1) * k1[i] + (B3 - E3) * k3[i] +
                                   (B4 - E4) * k4[i] + (B5 - E5) * k5[i] +
                                   (B6 - E6) * k6[i] - E7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double q = e / sc;
            err_norm += q * q;
        }
        err_norm = std::sqrt(err_norm / static_cast<double>(n));

        if (err_norm <= 1.0 || dt <= 1e-13 * std::max(1.0, std::abs(t))) {
            t += dt;
            y.swap(y5);
            k1.swap(k7);  // FSAL
            ++stats.accepted;
            emit_samples_at(t, y);
            const double e_clamped = std::max(err_norm, 1e-10);
            double fac = opts.safety * std::pow(e_clamped, -alpha) *
                         std::pow(err_prev, beta_pi);
            fac = std::min(opts.max_factor, std::max(opts.min_factor, fac));
            dt *= fac;
            err_prev = e_clamped;
        } else {
            ++stats.rejected;
            double fac = opts.safety * std::pow(err_norm, -0.2);
            fac = std::min(1.0, std::max(opts.min_factor, fac));
            dt *= fac;
        }
    }
    return stats;
}

} // namespace decmg

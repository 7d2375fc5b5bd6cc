#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <functional>

#include "sojourn/errors.hpp"

namespace sojourn {

/// Adaptive Dormand–Prince 5(4) with a PI step-size controller.
/// State dimension is runtime but capped so steps never allocate.
class RungeKutta54 {
  public:
    static constexpr int kMaxState = 40;
    using Rhs = std::function<void(double t, const double* y, double* dydt)>;

    struct Options {
        double rel_tol = 1e-10;
        double abs_tol = 1e-12;
        double initial_step = 1e-3;
        double max_step = 1e30;
        long max_steps = 50'000'000;
    };

    struct Stats {
        long steps = 0;
        long rejected = 0;
        double max_error_estimate = 0;  ///< largest accepted scaled error
    };

    RungeKutta54(int n, Rhs rhs, Options opts) : n_(n), rhs_(std::move(rhs)), opts_(opts) {
        if (n < 1 || n > kMaxState) throw NumericalError("RungeKutta54: bad state size");
    }

    /// Advance from (t, y) until `stop` returns true (checked after each accepted
    /// step) or t reaches t_end. `observer`, if set, sees every accepted step.
    template <class Stop, class Observer>
    double integrate(double t, double* y, double t_end, Stop&& stop, Observer&& observer) {
        double dir = t_end >= t ? 1.0 : -1.0;
        double hstep = std::min(opts_.initial_step, std::abs(t_end - t)) * dir;
        std::array<double, kMaxState> ytmp, yerr, ynew;
        rhs_(t, y, k_[0].data());
        double prev_err = 1.0;
        while (dir * (t_end - t) > 0) {
            if (stats_.steps + stats_.rejected > opts_.max_steps)
                throw NumericalError("RungeKutta54: step budget exhausted");
            if (dir * (t + hstep - t_end) > 0) hstep = t_end - t;

            for (int s = 1; s < 7; ++s) {
                for (int i = 0; i < n_; ++i) {
                    double acc = 0;
                    for (int j = 0; j < s; ++j) acc += kA[s][j] * k_[j][i];
                    ytmp[i] = y[i] + hstep * acc;
                }
                rhs_(t + kC[s] * hstep, ytmp.data(), k_[s].data());
            }
            // 5th-order solution is stage accumulation with b; FSAL: k7 = f(t+h, ynew).
            double err = 0;
            for (int i = 0; i < n_; ++i) {
                double acc5 = 0, acce = 0;
                for (int j = 0; j < 7; ++j) {
                    acc5 += kB[j] * k_[j][i];
                    acce += kE[j] * k_[j][i];
                }
                ynew[i] = y[i] + hstep * acc5;
                yerr[i] = hstep * acce;
                double sc = opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                double e = yerr[i] / sc;
                err += e * e;
            }
            err = std::sqrt(err / n_);

            if (err <= 1.0) {
                t += hstep;
                std::memcpy(y, ynew.data(), sizeof(double) * n_);
                std::memcpy(k_[0].data(), k_[6].data(), sizeof(double) * n_);
                ++stats_.steps;
                stats_.max_error_estimate = std::max(stats_.max_error_estimate, err);
                observer(t, y);
                if (stop(t, y)) return t;
                double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                             std::pow(prev_err, 0.4 / 5.0);
                prev_err = std::max(err, 1e-10);
                hstep *= std::clamp(fac, 0.2, 5.0);
            } else {
                ++stats_.rejected;
                hstep *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
            if (std::abs(hstep) > opts_.max_step) hstep = dir * opts_.max_step;
            if (std::abs(hstep) < 1e-15 * std::max(1.0, std::abs(t)))
                throw NumericalError("RungeKutta54: step size underflow");
        }
        return t;
    }

    const Stats& stats() const { return stats_; }

  private:
    // Dormand–Prince coefficients.
    static constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double kA[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static constexpr double kB[7] = {35.0 / 384,     0.0,  500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784, 11.0 / 84, 0.0};
    static constexpr double kE[7] = {35.0 / 384 - 5179.0 / 57600,
                                     0.0,
                                     500.0 / 1113 - 7571.0 / 16695,
                                     125.0 / 192 - 393.0 / 640,
                                     -2187.0 / 6784 + 92097.0 / 339200,
                                     11.0 / 84 - 187.0 / 2100,
                                     -1.0 / 40};

    int n_;
    Rhs rhs_;
    Options opts_;
    Stats stats_;
    std::array<std::array<double, kMaxState>, 7> k_{};
};

}  // namespace sojourn

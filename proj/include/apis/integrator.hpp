/*
* Copyright (C) 2026 The apis authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#pragma once

#include "apis/errors.hpp"
#include "apis/model.hpp"
#include "apis/outcome.hpp"
#include "apis/thresholds.hpp"
#include "apis/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>

#include <Eigen/Dense>

namespace apis {

struct IntegrationConfig {
    double t0             = 0.0;
    double t_end          = 100.0;
    double rel_tol        = 1e-8;
    double abs_tol        = 1e-10;
    double max_step       = 1.0;
    double extinction_eps = 1e-3;
    double record_stride  = 0.5;
    bool stop_on_extinction = true;
    // when set, an upward crossing of c N_h + N_m through this value is recorded
    std::optional<double> bound;

    void validate() const
    {
        if (!(t_end > t0)) {
            throw DomainError("t_end must exceed t0");
        }
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
            throw DomainError("tolerances must be positive");
        }
        if (!(extinction_eps > 0.0)) {
            throw DomainError("extinction_eps must be positive");
        }
        if (!(max_step > 0.0) || !(record_stride > 0.0)) {
            throw DomainError("max_step and record_stride must be positive");
        }
    }
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
struct DP54 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // fifth minus fourth order weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    // continuous extension of order four (Shampine)
    static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                            d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                            d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

// Samples the dense solution on the record grid and raises events.
class Recorder {
public:
    Recorder(Trajectory& tr, const IntegrationConfig& cfg)
        : tr_(tr)
        , cfg_(cfg)
        , comps_(compartments(tr.sys))
    {
        const double span = cfg.t_end - cfg.t0;
        n_grid_           = static_cast<long>(std::floor(span / cfg.record_stride * (1.0 + 1e-12)));
        extra_end_        = cfg.t0 + static_cast<double>(n_grid_) * cfg.record_stride < cfg.t_end - 1e-9 * cfg.record_stride;
    }

    // Next time on the record grid, or nullopt when the grid is exhausted.
    std::optional<double> next_time() const
    {
        if (k_ <= n_grid_) {
            return k_ == n_grid_ && !extra_end_ ? cfg_.t_end : cfg_.t0 + static_cast<double>(k_) * cfg_.record_stride;
        }
        if (extra_end_ && k_ == n_grid_ + 1) {
            return cfg_.t_end;
        }
        return std::nullopt;
    }

    // Returns false when integration should stop.
    bool record(double t, State x)
    {
        for (Compartment c : comps_) {
            x[c] = std::max(0.0, x[c]);
        }
        tr_.t.push_back(t);
        tr_.x.push_back(x);
        ++k_;
        return observe(t, x);
    }

private:
    bool observe(double t, const State& x)
    {
        const double eps = cfg_.extinction_eps;
        bool all_low     = true;
        for (Compartment c : comps_) {
            const int i    = static_cast<int>(c);
            const double v = x[c];
            if (v <= eps) {
                if (was_above_[i] && !below_since_[i]) {
                    below_since_[i] = t;
                }
                if (below_since_[i] && !reported_[i] && t - *below_since_[i] >= cfg_.record_stride * (1 - 1e-9)) {
                    tr_.events.push_back({*below_since_[i], EventKind::CompartmentExtinct, std::string(name(c))});
                    reported_[i] = true;
                }
            }
            else {
                all_low         = false;
                was_above_[i]   = true;
                below_since_[i] = std::nullopt;
                reported_[i]    = false;
            }
        }
        if (cfg_.bound) {
            const double N = x.N(tr_.params.c);
            if (N > *cfg_.bound && prev_N_ && *prev_N_ <= *cfg_.bound) {
                tr_.events.push_back({t, EventKind::BoundExceeded, "N"});
            }
            prev_N_ = N;
        }
        if (all_low && !total_reported_ && tr_.t.size() > 1) {
            tr_.events.push_back({t, EventKind::TotalExtinct, "all"});
            total_reported_ = true;
            if (cfg_.stop_on_extinction) {
                tr_.terminated_early = t < cfg_.t_end;
                return false;
            }
        }
        return true;
    }

    Trajectory& tr_;
    const IntegrationConfig& cfg_;
    std::span<const Compartment> comps_;
    long n_grid_    = 0;
    bool extra_end_ = false;
    long k_         = 0;
    std::array<bool, 4> was_above_{};
    std::array<bool, 4> reported_{};
    std::array<std::optional<double>, 4> below_since_{};
    std::optional<double> prev_N_;
    bool total_reported_ = false;
};

template <std::size_t N>
State to_state(SystemId sys, const Vec<N>& v)
{
    return embed(sys, std::span<const double>(v.data(), N));
}

// Linearly implicit second-order Rosenbrock pair (the L-stable ode23s scheme) for
// stiff stretches: once the colony is nearly gone the per-capita transfer I_m/N_h
// grows without bound and explicit steps collapse.
struct Ros23 {
    static constexpr double d   = 0.29289321881345247560; // 1/(2+sqrt 2)
    static constexpr double e32 = 7.41421356237309504880; // 6+sqrt 2
};

template <std::size_t N>
double jacobian_bound(const Mat<N>& J)
{
    double m = 0.0;
    for (auto& row : J) {
        double s = 0.0;
        for (double v : row) {
            s += std::abs(v);
        }
        m = std::max(m, s);
    }
    return m;
}

enum class Mode { Explicit, Implicit };

/// Adaptive integration with dense output on the record grid. Dormand-Prince 5(4) by
/// default; a block of accepted steps covering almost no time switches to Ros23, which
/// hands back once the Jacobian bound would allow explicit steps of the same size.
template <SystemId Sys>
void run_adaptive(Trajectory& tr, Vec<dim_v<Sys>> x, const IntegrationConfig& cfg)
{
    constexpr std::size_t n = dim_v<Sys>;
    using V                 = Vec<n>;
    using T                 = DP54;
    using EV                = Eigen::Matrix<double, static_cast<int>(n), 1>;
    using EM                = Eigen::Matrix<double, static_cast<int>(n), static_cast<int>(n)>;
    const Params& p         = tr.params;
    auto f                  = [&p](const V& y) {
        return rhs<Sys>(y, p);
    };
    auto combine = [](const V& y, double h, std::initializer_list<std::pair<double, const V*>> terms) {
        V out = y;
        for (auto& [w, k] : terms) {
            for (std::size_t i = 0; i < n; ++i) {
                out[i] += h * w * (*k)[i];
            }
        }
        return out;
    };
    auto to_e = [](const V& v) {
        EV e;
        for (std::size_t i = 0; i < n; ++i) {
            e(static_cast<int>(i)) = v[i];
        }
        return e;
    };
    auto from_e = [](const EV& e) {
        V v;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = e(static_cast<int>(i));
        }
        return v;
    };

    constexpr int block = 500;
    int block_steps     = 0;
    double block_start  = cfg.t0;
    Mode mode           = Mode::Explicit;

    Recorder rec(tr, cfg);
    double t = cfg.t0;
    if (!rec.record(t, to_state(Sys, x))) {
        return;
    }
    V k1     = f(x);
    double h = std::min({cfg.max_step, 1e-2, cfg.t_end - cfg.t0});

    while (t < cfg.t_end) {
        h                 = std::min(h, cfg.t_end - t);
        const double hmin = 1e-13 * std::max(1.0, std::abs(t));
        if (h < hmin) {
            std::ostringstream os;
            os << "step-size underflow at t=" << t << " (blow-up)";
            throw IntegrationError(os.str());
        }

        V xn, k7, kd{};
        double err = 0.0;
        EV r1, r2; // Ros23 stages, kept for its interpolant
        if (mode == Mode::Explicit) {
            const V k2 = f(combine(x, h, {{T::a21, &k1}}));
            const V k3 = f(combine(x, h, {{T::a31, &k1}, {T::a32, &k2}}));
            const V k4 = f(combine(x, h, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
            const V k5 = f(combine(x, h, {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}));
            const V k6 = f(combine(x, h, {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}));
            xn         = combine(x, h, {{T::b1, &k1}, {T::b3, &k3}, {T::b4, &k4}, {T::b5, &k5}, {T::b6, &k6}});
            k7         = f(xn);
            kd         = combine(V{}, 1.0, {{T::d1, &k1}, {T::d3, &k3}, {T::d4, &k4}, {T::d5, &k5}, {T::d6, &k6}, {T::d7, &k7}});
            for (std::size_t i = 0; i < n; ++i) {
                const double e = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                                      T::e6 * k6[i] + T::e7 * k7[i]);
                const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x[i]), std::abs(xn[i]));
                err             = std::max(err, std::abs(e) / sc);
            }
        }
        else {
            const auto Ja = jacobian_exact<Sys>(x, p);
            EM J;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    J(static_cast<int>(i), static_cast<int>(j)) = Ja[i][j];
                }
            }
            const EM W = EM::Identity() - h * Ros23::d * J;
            Eigen::PartialPivLU<EM> lu(W);
            const EV F0 = to_e(k1);
            r1          = lu.solve(F0);
            const EV F1 = to_e(f(from_e(to_e(x) + 0.5 * h * r1)));
            r2          = lu.solve(F1 - r1) + r1;
            xn          = from_e(to_e(x) + h * r2);
            k7          = f(xn);
            const EV F2 = to_e(k7);
            const EV r3 = lu.solve(F2 - Ros23::e32 * (r2 - F1) - 2.0 * (r1 - F0));
            const EV e  = h / 6.0 * (r1 - 2.0 * r2 + r3);
            for (std::size_t i = 0; i < n; ++i) {
                const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x[i]), std::abs(xn[i]));
                err             = std::max(err, std::abs(e(static_cast<int>(i))) / sc);
            }
        }

        double most_neg = 0.0;
        bool finite     = std::isfinite(err);
        for (std::size_t i = 0; i < n; ++i) {
            most_neg = std::min(most_neg, xn[i]);
            finite   = finite && std::isfinite(xn[i]) && std::isfinite(k7[i]);
        }
        if (!finite) {
            if (h <= hmin * 2) {
                std::ostringstream os;
                os << "nonfinite state at t=" << t;
                throw IntegrationError(os.str());
            }
            h *= 0.25;
            ++tr.steps_rejected;
            continue;
        }
        const double order_inv = mode == Mode::Explicit ? 0.2 : 1.0 / 3.0;
        if (err > 1.0 || most_neg < -cfg.abs_tol) {
            const double fac = err > 1.0 ? std::max(0.2, 0.9 * std::pow(err, -order_inv)) : 0.5;
            h *= fac;
            ++tr.steps_rejected;
            continue;
        }
        // tiny negative excursions are projected back onto the invariant orthant
        if (most_neg < 0.0) {
            for (double& v : xn) {
                v = std::max(0.0, v);
            }
            k7 = f(xn);
        }
        const double tn = (cfg.t_end - (t + h) <= 1e-12 * std::max(1.0, std::abs(cfg.t_end))) ? cfg.t_end : t + h;
        ++tr.steps_accepted;

        bool go = true;
        while (go) {
            auto ts = rec.next_time();
            if (!ts || *ts > tn) {
                break;
            }
            V xs;
            if (*ts == tn) {
                xs = xn;
            }
            else if (mode == Mode::Explicit) {
                // stages were taken with step h even when tn was snapped to t_end
                const double th  = (*ts - t) / h;
                const double th1 = 1.0 - th;
                for (std::size_t i = 0; i < n; ++i) {
                    const double r2 = xn[i] - x[i], r3 = h * k1[i] - r2, r4 = r2 - h * k7[i] - r3;
                    xs[i] = x[i] + th * (r2 + th1 * (r3 + th * (r4 + th1 * h * kd[i])));
                }
            }
            else {
                const double sv = (*ts - t) / (tn - t);
                const double dd = 1.0 - 2.0 * Ros23::d;
                xs = from_e(to_e(x) + h * (sv * (1 - sv) / dd * r1 + sv * (sv - 2 * Ros23::d) / dd * r2));
            }
            go = rec.record(*ts, to_state(Sys, xs));
        }
        if (!go) {
            return;
        }
        t  = tn;
        x  = xn;
        k1 = k7;
        const double fac = err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -order_inv))) : 5.0;
        h                = std::min(h * fac, cfg.max_step);

        if (++block_steps == block) {
            if (mode == Mode::Explicit && t - block_start < block * 1e-4 * cfg.max_step) {
                mode = Mode::Implicit;
                if (!tr.stiff_from) {
                    tr.stiff_from = t;
                }
            }
            else if (mode == Mode::Implicit &&
                     3.0 / std::max(jacobian_bound(jacobian_exact<Sys>(x, p)), 1e-300) >= h) {
                mode = Mode::Explicit;
            }
            block_steps = 0;
            block_start = t;
        }
    }
}

} // namespace detail

/// Integrate `sys` from x0 (one value per compartment of `sys`, in canonical order).
inline Trajectory integrate(SystemId sys, std::span<const double> x0, const Params& p, const IntegrationConfig& cfg)
{
    cfg.validate();
    if (x0.size() != dimension(sys)) {
        throw DomainError("initial state has " + std::to_string(x0.size()) + " components, " +
                          std::string(name(sys)) + " needs " + std::to_string(dimension(sys)));
    }
    for (double v : x0) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError("initial state must be finite and nonnegative");
        }
    }
    Trajectory tr;
    tr.sys            = sys;
    tr.params         = p;
    tr.t0             = cfg.t0;
    tr.t_end          = cfg.t_end;
    tr.extinction_eps = cfg.extinction_eps;

    auto start = [&]<SystemId Sys>() {
        Vec<dim_v<Sys>> v;
        std::copy(x0.begin(), x0.end(), v.begin());
        detail::run_adaptive<Sys>(tr, v, cfg);
    };
    switch (sys) {
    case SystemId::Full:
        start.template operator()<SystemId::Full>();
        break;
    case SystemId::VirusFree:
        start.template operator()<SystemId::VirusFree>();
        break;
    case SystemId::MiteFree:
        start.template operator()<SystemId::MiteFree>();
        break;
    case SystemId::HealthyMiteFree:
        start.template operator()<SystemId::HealthyMiteFree>();
        break;
    case SystemId::BeeOnly:
        start.template operator()<SystemId::BeeOnly>();
        break;
    }
    try {
        tr.outcome = classify_outcome(tr, thresholds(p));
    }
    catch (const AnalysisError& e) {
        tr.outcome.label = OutcomeLabel::Undetermined;
        tr.outcome.note  = e.what();
    }
    return tr;
}

/// Convenience overload: compartments absent from `sys` are ignored.
inline Trajectory integrate(SystemId sys, const State& x0, const Params& p, const IntegrationConfig& cfg)
{
    auto v = project(sys, x0);
    return integrate(sys, std::span<const double>(v), p, cfg);
}

} // namespace apis

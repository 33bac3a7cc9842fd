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
#include "apis/thresholds.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace apis {

enum class StabilityClass { Sink, Source, Saddle, Nonhyperbolic };

inline std::string_view name(StabilityClass s)
{
    switch (s) {
    case StabilityClass::Sink:
        return "sink";
    case StabilityClass::Source:
        return "source";
    case StabilityClass::Saddle:
        return "saddle";
    case StabilityClass::Nonhyperbolic:
        return "nonhyperbolic";
    }
    return "?";
}

struct ClassifiedEquilibrium {
    SystemId sys = SystemId::Full;
    State location;
    std::vector<std::complex<double>> eigenvalues;
    StabilityClass cls = StabilityClass::Nonhyperbolic;
    std::string existence_condition;
    double residual = 0;
};

enum class JacobianMode { Analytic, Numeric };

namespace detail {

inline double brood_slope(const Params& p, double q)
{
    const double den = p.K_hat + q * q;
    return 2.0 * p.r * p.K_hat * q / (den * den);
}

} // namespace detail

/// Central differences with h_i = max(1e-6, 1e-6 |x_i|).
inline Eigen::MatrixXd numeric_jacobian(SystemId sys, std::span<const double> x, const Params& p)
{
    const std::size_t n = dimension(sys);
    if (x.size() != n) {
        throw DomainError("point dimension does not match system");
    }
    const State s = embed(sys, x);
    if (s.N_h() <= eps_denom) {
        throw DomainError("point lies on the singular boundary N_h = 0");
    }
    Eigen::MatrixXd J(n, n);
    std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
    for (std::size_t j = 0; j < n; ++j) {
        const double h = std::max(1e-6, 1e-6 * std::abs(x[j]));
        xp[j]          = x[j] + h;
        xm[j]          = x[j] - h;
        auto fp        = rhs(sys, std::span<const double>(xp), p);
        auto fm        = rhs(sys, std::span<const double>(xm), p);
        for (std::size_t i = 0; i < n; ++i) {
            J(i, j) = (fp[i] - fm[i]) / ((x[j] + h) - (x[j] - h));
        }
        xp[j] = xm[j] = x[j];
    }
    return J;
}

/// Closed-form Jacobian of the virus-free subsystem at any (S_h, S_m).
inline Eigen::Matrix2d virus_free_jacobian(double H, double M, const Params& p)
{
    Eigen::Matrix2d J;
    J << detail::brood_slope(p, H) - p.d_h - p.alpha * M, -p.alpha * H, p.c * p.alpha * M, p.c * p.alpha * H - p.d_m;
    return J;
}

/// Closed-form Jacobian of the mite-free subsystem on the ray S_h = a I_h (R0_V > 1).
inline Eigen::Matrix2d mite_free_ray_jacobian(double I, const Params& p)
{
    const Thresholds th = thresholds(p);
    if (!th.a) {
        throw DomainError("mite-free closed-form Jacobian needs R0_V > 1");
    }
    const double a  = *th.a;
    const double ar = a + p.rho;
    const double g  = ar * ar * I * I + p.K_hat;
    const double w  = 2.0 * p.r * p.K_hat * ar * I / (g * g);
    const double b  = p.beta_h / ((1.0 + a) * (1.0 + a));
    Eigen::Matrix2d J;
    J << w - p.d_h - b, p.rho * w - a * a * b, b, -a * b;
    return J;
}

inline Eigen::MatrixXd jacobian(SystemId sys, std::span<const double> x, const Params& p, JacobianMode mode)
{
    if (mode == JacobianMode::Numeric) {
        return numeric_jacobian(sys, x, p);
    }
    if (x.size() != dimension(sys)) {
        throw DomainError("point dimension does not match system");
    }
    if (sys == SystemId::VirusFree) {
        return virus_free_jacobian(x[0], x[1], p);
    }
    if (sys == SystemId::MiteFree) {
        const Thresholds th = thresholds(p);
        if (!th.a) {
            throw DomainError("mite-free closed-form Jacobian needs R0_V > 1");
        }
        const double S = x[0], I = x[1];
        if (!(I > 0.0) || std::abs(S - *th.a * I) > 1e-9 * std::max(S, *th.a * I)) {
            throw DomainError("mite-free closed-form Jacobian holds only on the ray S_h = a I_h");
        }
        return mite_free_ray_jacobian(I, p);
    }
    throw DomainError("closed-form Jacobian available only for virus-free and mite-free subsystems");
}

inline std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& J)
{
    std::vector<std::complex<double>> ev;
    if (J.rows() == 1) {
        ev.emplace_back(J(0, 0), 0.0);
        return ev;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
    if (es.info() != Eigen::Success) {
        throw DomainError("eigenvalue computation did not converge");
    }
    for (Eigen::Index i = 0; i < J.rows(); ++i) {
        ev.push_back(es.eigenvalues()[i]);
    }
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

/// Rate scale below which a real part counts as zero: 1e-8 times the larger of the
/// spectral radius and the natural death rates (the latter keeps a lone zero eigenvalue
/// from defining its own scale).
inline double eig_tolerance(const std::vector<std::complex<double>>& ev, const Params& p)
{
    double m = p.d_h + p.d_m;
    for (auto& z : ev) {
        m = std::max(m, std::abs(z));
    }
    return 1e-8 * m;
}

inline StabilityClass classify(const std::vector<std::complex<double>>& ev, double tol)
{
    bool neg = false, pos = false;
    for (auto& z : ev) {
        if (std::abs(z.real()) <= tol) {
            return StabilityClass::Nonhyperbolic;
        }
        (z.real() < 0 ? neg : pos) = true;
    }
    if (neg && pos) {
        return StabilityClass::Saddle;
    }
    return neg ? StabilityClass::Sink : StabilityClass::Source;
}

inline ClassifiedEquilibrium make_equilibrium(SystemId sys, const State& loc, const Eigen::MatrixXd& J, std::string tag,
                                              const Params& p)
{
    ClassifiedEquilibrium e;
    e.sys                 = sys;
    e.location            = loc;
    e.eigenvalues         = eigenvalues(J);
    e.cls                 = classify(e.eigenvalues, eig_tolerance(e.eigenvalues, p));
    e.existence_condition = std::move(tag);
    e.residual            = max_abs_rhs(sys, loc, p);
    return e;
}

inline ClassifiedEquilibrium extinction_point(SystemId sys, const Params& p)
{
    // Frequency-dependent terms are bounded by their mass-action partners near the
    // origin; the linear part is the pure death rates.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dimension(sys), dimension(sys));
    auto comps        = compartments(sys);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        switch (comps[i]) {
        case Compartment::S_h:
            J(i, i) = -p.d_h;
            break;
        case Compartment::I_h:
            J(i, i) = -(p.d_h + p.mu_h);
            break;
        case Compartment::S_m:
            J(i, i) = -p.d_m;
            break;
        case Compartment::I_m:
            J(i, i) = -(p.d_m + p.mu_m);
            break;
        }
    }
    return make_equilibrium(sys, State{}, J, "extinction", p);
}

namespace detail {

// Bee-only levels as (value, tag); empty when no positive equilibrium exists.
inline std::vector<std::pair<double, std::string>> bee_levels(const Params& p)
{
    auto roots = quadratic_roots(p.r, p.K_hat, p.d_h, 1.0);
    if (!roots) {
        return {};
    }
    if (roots->first == roots->second ||
        std::abs(roots->second - roots->first) <= 1e-9 * roots->second) {
        return {{std::sqrt(p.K_hat), "double-root"}};
    }
    return {{roots->first, "allee-threshold"}, {roots->second, "carrying-capacity"}};
}

} // namespace detail

inline std::vector<ClassifiedEquilibrium> equilibria_bee_only(const Params& p)
{
    std::vector<ClassifiedEquilibrium> out{extinction_point(SystemId::BeeOnly, p)};
    for (auto& [v, tag] : detail::bee_levels(p)) {
        Eigen::MatrixXd J(1, 1);
        J(0, 0) = tag == "double-root" ? 0.0 : detail::brood_slope(p, v) - p.d_h;
        out.push_back(make_equilibrium(SystemId::BeeOnly, State{v, 0, 0, 0}, J, tag, p));
    }
    return out;
}

inline std::vector<ClassifiedEquilibrium> equilibria_virus_free(const Params& p)
{
    const SystemId sys = SystemId::VirusFree;
    std::vector<ClassifiedEquilibrium> out{extinction_point(sys, p)};
    for (auto& [v, tag] : detail::bee_levels(p)) {
        Eigen::MatrixXd J = virus_free_jacobian(v, 0.0, p);
        if (tag == "double-root") {
            J(0, 0) = 0.0;
        }
        out.push_back(make_equilibrium(sys, State{v, 0, 0, 0}, J, tag, p));
    }
    const Thresholds th = thresholds(p);
    if (th.Nbar_h_c && th.H_star && th.M_star && *th.Nbar_h_c < *th.H_star && *th.H_star < *th.Nbar_h_star &&
        *th.M_star > 0.0) {
        const double H = *th.H_star, M = *th.M_star;
        out.push_back(make_equilibrium(sys, State{H, 0, M, 0}, virus_free_jacobian(H, M, p), "interior", p));
    }
    return out;
}

/// Interior pair of the mite-free subsystem, low then high; empty if it does not exist.
inline std::vector<std::pair<double, double>> mite_free_interior_points(const Params& p)
{
    const Thresholds th = thresholds(p);
    if (!th.a) {
        return {};
    }
    const double a  = *th.a;
    const double ar = a + p.rho;
    auto roots      = detail::quadratic_roots(p.r, p.K_hat, *th.d_tilde, ar * ar);
    if (!roots) {
        return {};
    }
    return {{a * roots->first, roots->first}, {a * roots->second, roots->second}};
}

inline std::vector<ClassifiedEquilibrium> equilibria_mite_free(const Params& p)
{
    const SystemId sys = SystemId::MiteFree;
    std::vector<ClassifiedEquilibrium> out{extinction_point(sys, p)};
    for (auto& [v, tag] : detail::bee_levels(p)) {
        Eigen::Matrix2d J;
        const double slope = tag == "double-root" ? 0.0 : detail::brood_slope(p, v) - p.d_h;
        J << slope, p.rho * detail::brood_slope(p, v) - p.beta_h, 0.0, p.beta_h - p.d_h - p.mu_h;
        out.push_back(make_equilibrium(sys, State{v, 0, 0, 0}, J, tag, p));
    }
    auto pts = mite_free_interior_points(p);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        auto [S, I] = pts[k];
        if (!(I > 0.0)) {
            continue;
        }
        out.push_back(make_equilibrium(sys, State{S, I, 0, 0}, mite_free_ray_jacobian(I, p),
                                       k == 0 ? "interior-low" : "interior-high", p));
    }
    return out;
}

/// Class implied by the existence/stability tables for a virus-free or mite-free
/// equilibrium, from threshold comparisons only. Nonhyperbolic marks an equality case.
inline StabilityClass table_class(const ClassifiedEquilibrium& e, const Params& p)
{
    const Thresholds th = thresholds(p);
    const std::string& tag = e.existence_condition;
    if (tag == "extinction") {
        return StabilityClass::Sink;
    }
    if (tag == "double-root") {
        return StabilityClass::Nonhyperbolic;
    }
    if (e.sys == SystemId::VirusFree) {
        const double H = th.H_star.value_or(INFINITY);
        if (tag == "allee-threshold") {
            return *th.Nbar_h_c < H ? StabilityClass::Saddle
                                    : (*th.Nbar_h_c > H ? StabilityClass::Source : StabilityClass::Nonhyperbolic);
        }
        if (tag == "carrying-capacity") {
            return *th.Nbar_h_star < H ? StabilityClass::Sink
                                       : (*th.Nbar_h_star > H ? StabilityClass::Saddle : StabilityClass::Nonhyperbolic);
        }
        if (tag == "interior") {
            const double sk = std::sqrt(p.K_hat);
            return H > sk ? StabilityClass::Sink : (H < sk ? StabilityClass::Source : StabilityClass::Nonhyperbolic);
        }
    }
    if (e.sys == SystemId::MiteFree) {
        const double R0 = th.R0_V.value_or(0.0);
        if (tag == "allee-threshold") {
            return R0 < 1 ? StabilityClass::Saddle : (R0 > 1 ? StabilityClass::Source : StabilityClass::Nonhyperbolic);
        }
        if (tag == "carrying-capacity") {
            return R0 < 1 ? StabilityClass::Sink : (R0 > 1 ? StabilityClass::Saddle : StabilityClass::Nonhyperbolic);
        }
        if (tag == "interior-low") {
            return StabilityClass::Saddle;
        }
        if (tag == "interior-high") {
            return StabilityClass::Sink;
        }
    }
    throw DomainError("no table row for tag '" + tag + "'");
}

// ---------------------------------------------------------------------------
// Hopf boundary of the virus-free subsystem

struct HopfCrossing {
    double value;        // swept parameter at the crossing
    double trace_below;  // interior trace at the grid sample before the crossing
    double trace_above;  // and after it
    bool trace_changes_sign;
};

struct HopfScan {
    std::string parameter;
    std::vector<HopfCrossing> crossings;
    std::vector<std::string> notes;
};

namespace detail {

inline double hopf_gap(const Params& p)
{
    return p.d_m / (p.alpha * p.c) - std::sqrt(p.K_hat);
}

inline std::optional<double> interior_trace(const Params& p)
{
    const Thresholds th = thresholds(p);
    if (!(th.Nbar_h_c && th.H_star && *th.Nbar_h_c < *th.H_star && *th.H_star < *th.Nbar_h_star)) {
        return std::nullopt;
    }
    const double H   = *th.H_star;
    const double den = p.K_hat + H * H;
    return p.r * H * (p.K_hat - H * H) / (den * den);
}

} // namespace detail

/// Sign changes of H* - sqrt(K_hat) along a grid in one parameter, each localized by
/// bisection. Samples without an interior equilibrium are noted and skipped.
inline HopfScan hopf_scan(const Params& base, std::string_view parameter, double lo, double hi, double step)
{
    static constexpr std::string_view allowed[] = {"d_m", "alpha", "c", "K_hat"};
    if (std::find(std::begin(allowed), std::end(allowed), parameter) == std::end(allowed)) {
        throw DomainError("hopf scan parameter must be one of d_m, alpha, c, K_hat");
    }
    if (!(hi > lo) || !(step > 0.0)) {
        throw DomainError("hopf scan needs lo < hi and step > 0");
    }
    HopfScan scan;
    scan.parameter = std::string(parameter);
    const long n   = static_cast<long>(std::floor((hi - lo) / step * (1 + 1e-12)));
    std::vector<double> grid;
    for (long k = 0; k <= n; ++k) {
        grid.push_back(lo + static_cast<double>(k) * step);
    }
    auto at = [&](double v) {
        return with(base, parameter, v);
    };
    auto trace_or_note = [&](double v) -> std::optional<double> {
        auto tr = detail::interior_trace(at(v));
        if (!tr) {
            scan.notes.push_back("no interior equilibrium at " + std::string(parameter) + "=" + std::to_string(v));
        }
        return tr;
    };
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        double a = grid[k], b = grid[k + 1];
        double ga = detail::hopf_gap(at(a)), gb = detail::hopf_gap(at(b));
        if (ga == 0.0 && k > 0) {
            continue; // already reported as the right end of the previous pair
        }
        if (!(ga * gb <= 0.0) || (ga == 0.0 && gb == 0.0)) {
            continue;
        }
        double root;
        if (ga == 0.0) {
            root = a;
        }
        else if (gb == 0.0) {
            root = b;
        }
        else {
            for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(std::abs(a), std::abs(b)); ++it) {
                const double m  = 0.5 * (a + b);
                const double gm = detail::hopf_gap(at(m));
                if (gm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((gm < 0) == (ga < 0)) {
                    a  = m;
                    ga = gm;
                }
                else {
                    b = m;
                }
            }
            root = 0.5 * (a + b);
        }
        // trace on both sides, at the neighbouring grid samples
        const double left  = root == grid[k] && k > 0 ? grid[k - 1] : grid[k];
        const double right = root == grid[k + 1] && k + 2 < grid.size() ? grid[k + 2] : grid[k + 1];
        auto tl = trace_or_note(left == root ? root - 0.5 * step : left);
        auto trr = trace_or_note(right == root ? root + 0.5 * step : right);
        HopfCrossing hc{root, tl.value_or(NAN), trr.value_or(NAN), false};
        hc.trace_changes_sign = tl && trr && ((*tl < 0) != (*trr < 0)) && *tl != 0.0 && *trr != 0.0;
        scan.crossings.push_back(hc);
    }
    return scan;
}

} // namespace apis

#pragma once

#include "saltlab/paths.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace saltlab {

/// Thrown when a time stepper produces NaN or infinity.
class SolverAbort : public std::runtime_error {
public:
    SolverAbort(std::size_t step, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// Midpoint (Fisk-Stratonovich) sum of f against component j over [a, b].
/// f holds the integrand at every node of the path grid.
double strat_integral(std::span<const double> f, const DrivingPath& path, std::size_t j, double a, double b);

/// Left-point (Ito) sum of f against component j over [a, b].
double ito_sum(std::span<const double> f, const DrivingPath& path, std::size_t j, double a, double b);

/// Realised covariation sum of increments of f and g over [a, b].
double covariation(std::span<const double> f, std::span<const double> g, const TimeGrid& grid, double a,
                   double b);

using StateVector = std::vector<double>;
using VectorMap = std::function<StateVector(const StateVector&)>;

/// Stochastic Heun (predictor-corrector) step for dX = a(X) dt + sum_j b_j(X) o dS_j.
/// dS[0] must be dt; diffusions[j-1] pairs with dS[j]. `corrector_iterations`
/// re-evaluates the corrector against the latest iterate.
StateVector heun_step(const StateVector& x, const VectorMap& drift, std::span<const VectorMap> diffusions,
                      std::span<const double> dS, std::size_t corrector_iterations = 1);

/// Generic Heun step for any state type with an increment map
/// F(x, dS) = a(x) dS_0 + sum_j b_j(x) dS_j. The field solvers route through
/// this so stochastic and deterministic runs share one code path.
template <class State, class IncrementFn>
State heun(const State& x, IncrementFn&& increment, std::size_t corrector_iterations = 1) {
    const State f0 = increment(x);
    State predictor = x;
    predictor += f0;
    for (std::size_t it = 0; it < corrector_iterations; ++it) {
        State next = x;
        next.axpy(0.5, f0);
        next.axpy(0.5, increment(predictor));
        predictor = std::move(next);
    }
    return predictor;
}

/// Piecewise-cubic ramp: 1 on [a, b], 0 outside [a - w, b + w], smoothstep between.
double smooth_indicator(double t, double a, double b, double width);

struct LemmaCheckResult {
    std::vector<double> widths;  // transition width per level m = 1..n_smooth
    std::vector<double> errors;  // |int F phi_m o dS - int_a^b F o dS|
    bool converged() const { return errors.size() >= 2 && errors.back() < errors.front() / 10.0; }
};

/// Replaces the indicator of [a, b] with smooth ramps of width 2^-m (b - a),
/// m = 1..n_smooth, and reports how the Stratonovich integral of F phi_m
/// approaches the sharp-window integral.
LemmaCheckResult fundamental_lemma_check(std::span<const double> F, const DrivingPath& path, std::size_t j,
                                         double a, double b, std::size_t n_smooth);

/// Least-squares slope of log(err) against log(h).
double fitted_order(std::span<const double> h, std::span<const double> err);

}  // namespace saltlab

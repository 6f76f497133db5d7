#pragma once

#include <array>
#include <optional>
#include <string>

#include "pbdpp/carrier.hpp"
#include "pbdpp/piecewise.hpp"
#include "pbdpp/processes.hpp"

namespace pbdpp {

/// Factorial moments theta_r = E[|Xi1| (|Xi1|-1) ... (|Xi1|-r+1)], r = 1..4,
/// with the derived mean and variance of the total count.
struct FactorialMoments {
  std::array<double, 4> theta{};  // theta_1 .. theta_4
  double mean = 0;                // = theta_1
  double variance = 0;            // = theta_2 - theta_1^2 + theta_1, stored redundantly

  struct MonteCarlo {
    long sample_size = 0;
    std::array<double, 4> standard_errors{};
    double se_overdispersion = 0;  // standard error of (variance - mean) = theta_2 - theta_1^2
  };
  std::optional<MonteCarlo> mc;  // nullopt: exact closed form

  double overdispersion() const { return variance - mean; }
};

/// Closed-form moments; supported for Bernoulli, BernoulliShift and
/// CompoundPoisson. Throws UnsupportedExactError otherwise.
FactorialMoments factorial_moments_exact(const ProcessModel& model);

struct McOptions {
  long samples = 100000;
  RngSeed seed{};
};

/// Sample factorial moments with standard errors.
FactorialMoments factorial_moments_mc(const ProcessModel& model, const McOptions& opt);

/// Exact where available, Monte Carlo otherwise.
FactorialMoments factorial_moments_auto(const ProcessModel& model, const McOptions& opt);

enum class DispersionCase { case1, case2, out_of_scope };

struct CaseDecision {
  DispersionCase kind = DispersionCase::out_of_scope;
  /// Case 2 only: parameters are valid for n > min_n.
  double min_n = 0;
  /// Whether the requested n satisfies the Case-2 range (always true in Case 1).
  bool n_valid = false;
  std::string reason;  // out-of-scope or range-violation description
};

/// Total classification into Case 1 / Case 2 / out-of-scope. Monte Carlo
/// moments within 3 standard errors of the Var = mean boundary are assigned
/// to Case 1 so that classification is deterministic under sampling noise.
CaseDecision classify_case(const FactorialMoments& fm, long n);

/// Mean measure lambda(dx) = E Xi_1(dx): atomic weights or a
/// piecewise-constant density, plus the reduced-Palm mean where exact.
struct IntensitySpec {
  enum class Kind { atomic, piecewise };
  Kind kind = Kind::piecewise;

  // atomic form
  std::vector<double> atoms;
  std::vector<double> weights;
  /// E|Xi_{1,x}| at each atom, exact only where available (Bernoulli).
  std::optional<std::vector<double>> palm_mean;

  // piecewise form
  PiecewiseDensity density;

  double total() const;
  /// Same measure scaled to total mass one.
  IntensitySpec normalized() const;
  double sample(Rng& rng) const;  // from the normalized measure
};

/// Exact intensity; supported for Bernoulli (atomic, with palm_mean) and
/// CompoundPoisson (piecewise). Throws UnsupportedExactError otherwise.
IntensitySpec intensity_exact(const ProcessModel& model);

/// Histogram estimate of the intensity on a dyadic grid.
IntensitySpec intensity_mc(const ProcessModel& model, const McOptions& opt, int grid_depth);

/// Exact where available, Monte Carlo histogram otherwise.
IntensitySpec intensity_auto(const ProcessModel& model, const McOptions& opt, int grid_depth);

/// Falling factorial x (x-1) ... (x-r+1).
double falling_factorial(double x, int r);

}  // namespace pbdpp

#include "pbdpp/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "pbdpp/errors.hpp"

namespace pbdpp {

double falling_factorial(double x, int r) {
  double out = 1;
  for (int i = 0; i < r; ++i) out *= (x - i);
  return out;
}

namespace {

// theta_r of a sum of independent indicators: r! * e_r(p), with e_r the
// elementary symmetric polynomials accumulated by the standard recurrence.
std::array<double, 4> bernoulli_thetas(const std::vector<double>& probs) {
  std::array<double, 5> e{1, 0, 0, 0, 0};
  for (double p : probs)
    for (int r = 4; r >= 1; --r) e[r] += p * e[r - 1];
  std::array<double, 4> theta{};
  double rfact = 1;
  for (int r = 1; r <= 4; ++r) {
    rfact *= r;
    theta[r - 1] = rfact * e[r];
  }
  return theta;
}

// |Xi1| of a compound Poisson has cumulants kappa_r = sum_i i^r c_i |base|;
// convert cumulants -> raw moments -> factorial moments (r <= 4).
std::array<double, 4> compound_poisson_thetas(const CompoundPoissonModel& m) {
  const double b = m.base.total();
  double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
  for (std::size_t i = 0; i < m.rates.size(); ++i) {
    const double mark = static_cast<double>(i + 1);
    const double c = m.rates[i] * b;
    k1 += mark * c;
    k2 += mark * mark * c;
    k3 += mark * mark * mark * c;
    k4 += mark * mark * mark * mark * c;
  }
  const double m1 = k1;
  const double m2 = k2 + k1 * k1;
  const double m3 = k3 + 3 * k2 * k1 + k1 * k1 * k1;
  const double m4 = k4 + 4 * k3 * k1 + 3 * k2 * k2 + 6 * k2 * k1 * k1 + k1 * k1 * k1 * k1;
  return {m1, m2 - m1, m3 - 3 * m2 + 2 * m1, m4 - 6 * m3 + 11 * m2 - 6 * m1};
}

FactorialMoments from_thetas(std::array<double, 4> theta) {
  FactorialMoments fm;
  fm.theta = theta;
  fm.mean = theta[0];
  fm.variance = theta[1] - theta[0] * theta[0] + theta[0];
  return fm;
}

}  // namespace

FactorialMoments factorial_moments_exact(const ProcessModel& model) {
  if (const auto* b = std::get_if<BernoulliModel>(&model))
    return from_thetas(bernoulli_thetas(b->probs));
  if (const auto* bs = std::get_if<BernoulliShiftModel>(&model))
    return from_thetas(bernoulli_thetas(bs->probs));  // |Xi1| ignores locations
  if (const auto* cp = std::get_if<CompoundPoissonModel>(&model))
    return from_thetas(compound_poisson_thetas(*cp));
  throw UnsupportedExactError(
      "factorial_moments: exact mode is unsupported for renewal and Markov entrance models");
}

FactorialMoments factorial_moments_mc(const ProcessModel& model, const McOptions& opt) {
  if (opt.samples < 2) throw std::invalid_argument("factorial_moments_mc: needs >= 2 samples");
  Rng rng(opt.seed);
  const long N = opt.samples;
  std::array<double, 4> sum{}, sumsq{};
  double sum_f1f2 = 0;
  for (long s = 0; s < N; ++s) {
    const double size = static_cast<double>(sample_one(model, rng).size());
    double f[4];
    for (int r = 1; r <= 4; ++r) f[r - 1] = falling_factorial(size, r);
    for (int r = 0; r < 4; ++r) {
      sum[r] += f[r];
      sumsq[r] += f[r] * f[r];
    }
    sum_f1f2 += f[0] * f[1];
  }
  std::array<double, 4> theta{};
  FactorialMoments::MonteCarlo mc;
  mc.sample_size = N;
  for (int r = 0; r < 4; ++r) {
    theta[r] = sum[r] / static_cast<double>(N);
    const double var = std::max(0.0, sumsq[r] / static_cast<double>(N) - theta[r] * theta[r]);
    mc.standard_errors[r] = std::sqrt(var / static_cast<double>(N));
  }
  FactorialMoments fm = from_thetas(theta);
  // delta-method standard error for theta_2 - theta_1^2 = Var - mean
  const double var1 = mc.standard_errors[0] * mc.standard_errors[0] * static_cast<double>(N);
  const double var2 = mc.standard_errors[1] * mc.standard_errors[1] * static_cast<double>(N);
  const double cov12 = sum_f1f2 / static_cast<double>(N) - theta[0] * theta[1];
  const double t1 = theta[0];
  const double v = var2 + 4 * t1 * t1 * var1 - 4 * t1 * cov12;
  mc.se_overdispersion = std::sqrt(std::max(0.0, v) / static_cast<double>(N));
  fm.mc = mc;
  return fm;
}

FactorialMoments factorial_moments_auto(const ProcessModel& model, const McOptions& opt) {
  try {
    return factorial_moments_exact(model);
  } catch (const UnsupportedExactError&) {
    return factorial_moments_mc(model, opt);
  }
}

CaseDecision classify_case(const FactorialMoments& fm, long n) {
  CaseDecision d;
  const double t1 = fm.theta[0], t2 = fm.theta[1], t3 = fm.theta[2];
  double od = fm.variance - fm.mean;  // = t2 - t1^2
  // MC boundary band: within 3 SE of Var = mean counts as the boundary.
  if (fm.mc && std::abs(od) <= 3 * fm.mc->se_overdispersion) od = 0;

  if (od >= 0) {
    d.kind = DispersionCase::case1;
    d.n_valid = true;
    return d;
  }
  const double half_gap = fm.variance - fm.mean / 2;  // Var - E/2
  const bool strict = half_gap > 0;
  const bool boundary = half_gap == 0 && t3 > t2 * (t1 - 1);
  if (!strict && !boundary) {
    d.kind = DispersionCase::out_of_scope;
    d.reason = half_gap < 0 ? "under-dispersion beyond scope: Var(|Xi1|) < E|Xi1|/2"
                            : "boundary Var(|Xi1|) = E|Xi1|/2 with theta_3 <= theta_2 (theta_1 - 1)";
    return d;
  }
  d.kind = DispersionCase::case2;
  const double num = t1 * t2 - t2 - t3;
  const double den = t1 * (t1 - 2 * (t1 * t1 - t2));  // = 2 t1 (Var - E/2)
  // den = 0 only on the boundary branch, where num < 0; the ratio limit is -inf.
  const double ratio = den > 0 ? num / den : -std::numeric_limits<double>::infinity();
  d.min_n = 1 + std::max(0.0, ratio);
  d.n_valid = static_cast<double>(n) > d.min_n;
  if (!d.n_valid)
    d.reason = "Case 2 requires n > " + std::to_string(d.min_n) + ", got n = " + std::to_string(n);
  return d;
}

// ---- IntensitySpec ----

double IntensitySpec::total() const {
  if (kind == Kind::atomic) {
    double t = 0;
    for (double w : weights) t += w;
    return t;
  }
  return density.total();
}

IntensitySpec IntensitySpec::normalized() const {
  IntensitySpec out = *this;
  const double t = total();
  if (!(t > 0)) throw std::invalid_argument("IntensitySpec: cannot normalize zero measure");
  if (kind == Kind::atomic) {
    for (double& w : out.weights) w /= t;
  } else {
    for (double& v : out.density.values) v /= t;
  }
  return out;
}

double IntensitySpec::sample(Rng& rng) const {
  if (kind == Kind::atomic) return atoms[rng.categorical(weights)];
  return density.sample(rng);
}

IntensitySpec intensity_exact(const ProcessModel& model) {
  if (const auto* b = std::get_if<BernoulliModel>(&model)) {
    IntensitySpec s;
    s.kind = IntensitySpec::Kind::atomic;
    s.atoms = b->atoms;
    s.weights = b->probs;
    // reduced Palm of independent indicators drops I_i: E|Xi_{1,t_i}| = theta_1 - p_i
    double t1 = 0;
    for (double p : b->probs) t1 += p;
    std::vector<double> palm(b->probs.size());
    for (std::size_t i = 0; i < b->probs.size(); ++i) palm[i] = t1 - b->probs[i];
    s.palm_mean = std::move(palm);
    return s;
  }
  if (const auto* cp = std::get_if<CompoundPoissonModel>(&model)) {
    IntensitySpec s;
    s.kind = IntensitySpec::Kind::piecewise;
    s.density = cp->base;
    double marks = 0;
    for (std::size_t i = 0; i < cp->rates.size(); ++i)
      marks += static_cast<double>(i + 1) * cp->rates[i];
    for (double& v : s.density.values) v *= marks;
    return s;
  }
  throw UnsupportedExactError("intensity: exact mode unsupported for this model family");
}

IntensitySpec intensity_mc(const ProcessModel& model, const McOptions& opt, int grid_depth) {
  if (opt.samples < 1) throw std::invalid_argument("intensity_mc: needs >= 1 sample");
  const Partition grid = dyadic_partition(grid_depth);
  std::vector<double> mass(grid.cell_count(), 0.0);
  Rng rng(opt.seed);
  for (long s = 0; s < opt.samples; ++s) {
    const Configuration c = sample_one(model, rng);
    for (const auto& [p, m] : c.entries())
      mass[grid.cell_index(p)] += static_cast<double>(m);
  }
  IntensitySpec out;
  out.kind = IntensitySpec::Kind::piecewise;
  out.density.breaks.resize(grid.cell_count() + 1);
  out.density.values.resize(grid.cell_count());
  out.density.breaks[0] = 0.0;
  for (std::size_t i = 0; i < grid.cell_count(); ++i) {
    const auto& cell = grid.cells()[i];
    out.density.breaks[i + 1] = cell.hi;
    out.density.values[i] = mass[i] / static_cast<double>(opt.samples) / (cell.hi - cell.lo);
  }
  return out;
}

IntensitySpec intensity_auto(const ProcessModel& model, const McOptions& opt, int grid_depth) {
  try {
    return intensity_exact(model);
  } catch (const UnsupportedExactError&) {
    return intensity_mc(model, opt, grid_depth);
  }
}

}  // namespace pbdpp

#include "pbdpp/processes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace pbdpp {

// ---- PiecewiseDensity ----

void PiecewiseDensity::validate() const {
  if (breaks.size() < 2 || values.size() + 1 != breaks.size())
    throw std::invalid_argument("PiecewiseDensity: needs k+1 breaks for k values");
  if (breaks.front() < 0.0 || breaks.back() > 1.0)
    throw std::invalid_argument("PiecewiseDensity: support must lie in [0,1]");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i] < breaks[i + 1]))
      throw std::invalid_argument("PiecewiseDensity: breaks must be strictly increasing");
  for (double v : values)
    if (!(v >= 0.0)) throw std::invalid_argument("PiecewiseDensity: negative density value");
  if (!(total() > 0.0)) throw std::invalid_argument("PiecewiseDensity: zero total mass");
}

double PiecewiseDensity::total() const {
  double t = 0;
  for (std::size_t i = 0; i < values.size(); ++i) t += values[i] * (breaks[i + 1] - breaks[i]);
  return t;
}

double PiecewiseDensity::value_at(double x) const {
  if (x < breaks.front() || x > breaks.back()) return 0.0;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  std::size_t i = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
  if (i >= values.size()) i = values.size() - 1;
  return values[i];
}

double PiecewiseDensity::sample(Rng& rng) const {
  double u = rng.uniform01() * total();
  double acc = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = values[i] * (breaks[i + 1] - breaks[i]);
    if (u < acc + w || i + 1 == values.size()) {
      if (w <= 0.0) continue;
      const double frac = (u - acc) / w;
      return breaks[i] + frac * (breaks[i + 1] - breaks[i]);
    }
    acc += w;
  }
  return breaks.back();
}

// ---- ShiftLaw ----

ShiftLaw ShiftLaw::discrete(std::vector<double> points, std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size())
    throw std::invalid_argument("ShiftLaw::discrete: points/weights size mismatch");
  double total = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < 0.0 || points[i] > 1.0)
      throw std::invalid_argument("ShiftLaw::discrete: point outside [0,1]");
    if (!(weights[i] > 0.0)) throw std::invalid_argument("ShiftLaw::discrete: weights must be positive");
    total += weights[i];
  }
  ShiftLaw s;
  s.kind_ = Kind::discrete;
  s.points_ = std::move(points);
  s.weights_ = std::move(weights);
  s.cum_weights_.resize(s.weights_.size());
  double acc = 0;
  for (std::size_t i = 0; i < s.weights_.size(); ++i) {
    acc += s.weights_[i] / total;
    s.cum_weights_[i] = acc;
  }
  return s;
}

ShiftLaw ShiftLaw::uniform(double lo, double hi) {
  if (!(0.0 <= lo && lo < hi && hi <= 1.0))
    throw std::invalid_argument("ShiftLaw::uniform: requires 0 <= lo < hi <= 1");
  ShiftLaw s;
  s.kind_ = Kind::uniform;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

ShiftLaw ShiftLaw::piecewise(PiecewiseDensity density) {
  density.validate();
  ShiftLaw s;
  s.kind_ = Kind::piecewise;
  s.density_ = std::move(density);
  return s;
}

double ShiftLaw::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::discrete: {
      const double u = rng.uniform01();
      auto it = std::lower_bound(cum_weights_.begin(), cum_weights_.end(), u);
      std::size_t i = it == cum_weights_.end() ? cum_weights_.size() - 1
                                               : static_cast<std::size_t>(it - cum_weights_.begin());
      return points_[i];
    }
    case Kind::uniform:
      return rng.uniform(lo_, hi_);
    case Kind::piecewise:
      return density_.sample(rng);
  }
  return 0;
}

// ---- InterarrivalSpec ----

InterarrivalSpec InterarrivalSpec::exponential(double rate) {
  if (!(rate > 0)) throw std::invalid_argument("InterarrivalSpec: rate must be positive");
  InterarrivalSpec s;
  s.family_ = Family::exponential;
  s.rate_ = rate;
  return s;
}

InterarrivalSpec InterarrivalSpec::uniform(double lo, double hi) {
  // lo = 0 is allowed: W is still strictly positive almost surely.
  if (!(lo >= 0 && lo < hi)) throw std::invalid_argument("InterarrivalSpec: requires 0 <= lo < hi");
  InterarrivalSpec s;
  s.family_ = Family::uniform;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

InterarrivalSpec InterarrivalSpec::two_point(double x1, double q1, double x2, double jitter) {
  if (!(q1 >= 0 && q1 <= 1)) throw std::invalid_argument("InterarrivalSpec: q1 must be in [0,1]");
  if (!(jitter >= 0)) throw std::invalid_argument("InterarrivalSpec: jitter must be nonnegative");
  if (!(x1 - jitter > 0) || !(x2 - jitter > 0))
    throw std::invalid_argument("InterarrivalSpec: atoms must stay strictly positive under jitter");
  if (!(x1 <= x2)) throw std::invalid_argument("InterarrivalSpec: requires x1 <= x2");
  InterarrivalSpec s;
  s.family_ = Family::two_point;
  s.x1_ = x1;
  s.q1_ = q1;
  s.x2_ = x2;
  s.jitter_ = jitter;
  return s;
}

double InterarrivalSpec::mean() const {
  switch (family_) {
    case Family::exponential: return 1.0 / rate_;
    case Family::uniform: return (lo_ + hi_) / 2;
    case Family::two_point: return q1_ * x1_ + (1 - q1_) * x2_;  // jitter has mean zero
  }
  return 0;
}

double InterarrivalSpec::sample(Rng& rng) const {
  switch (family_) {
    case Family::exponential: return rng.exponential(rate_);
    case Family::uniform: return rng.uniform(lo_, hi_);
    case Family::two_point: {
      const double x = rng.uniform01() < q1_ ? x1_ : x2_;
      return jitter_ > 0 ? x + rng.uniform(-jitter_, jitter_) : x;
    }
  }
  return 0;
}

namespace {
// Length-biased draw from U(lo, hi): density w / mean on [lo, hi],
// inverse CDF w = sqrt(lo^2 + u (hi^2 - lo^2)).
double length_biased_uniform(double lo, double hi, Rng& rng) {
  const double u = rng.uniform01();
  return std::sqrt(lo * lo + u * (hi * hi - lo * lo));
}
}  // namespace

double InterarrivalSpec::sample_length_biased(Rng& rng) const {
  switch (family_) {
    case Family::exponential:
      // w f(w) rate / 1 = Gamma(2, rate)
      return rng.exponential(rate_) + rng.exponential(rate_);
    case Family::uniform:
      return length_biased_uniform(lo_, hi_, rng);
    case Family::two_point: {
      // component k selected proportionally to q_k * x_k
      const double w1 = q1_ * x1_, w2 = (1 - q1_) * x2_;
      const double x = (rng.uniform01() * (w1 + w2) < w1) ? x1_ : x2_;
      if (jitter_ == 0) return x;
      return length_biased_uniform(x - jitter_, x + jitter_, rng);
    }
  }
  return 0;
}

double sample_equilibrium_delay(const InterarrivalSpec& spec, Rng& rng) {
  // W0 = U * (length-biased W1) has density P(W1 > x) / E[W1].
  return rng.uniform01() * spec.sample_length_biased(rng);
}

// ---- model construction ----

BernoulliModel BernoulliModel::create(std::vector<double> atoms, std::vector<double> probs) {
  if (atoms.empty() || atoms.size() != probs.size())
    throw std::invalid_argument("BernoulliModel: atoms/probs size mismatch");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i] < 0.0 || atoms[i] > 1.0)
      throw std::invalid_argument("BernoulliModel: atoms must lie in [0,1]");
    if (i > 0 && !(atoms[i - 1] < atoms[i]))
      throw std::invalid_argument("BernoulliModel: atoms must be strictly increasing");
    if (!(probs[i] > 0.0 && probs[i] < 1.0))
      throw std::invalid_argument("BernoulliModel: probs must be strictly inside (0,1)");
  }
  return {std::move(atoms), std::move(probs)};
}

BernoulliShiftModel BernoulliShiftModel::create(std::vector<double> probs,
                                                std::vector<ShiftLaw> shifts) {
  if (probs.empty() || probs.size() != shifts.size())
    throw std::invalid_argument("BernoulliShiftModel: probs/shifts size mismatch");
  for (double p : probs)
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("BernoulliShiftModel: probs must be strictly inside (0,1)");
  return {std::move(probs), std::move(shifts)};
}

CompoundPoissonModel CompoundPoissonModel::create(std::vector<double> rates, PiecewiseDensity base,
                                                  double tail_rate_mass) {
  if (rates.empty() || !(rates.front() > 0.0))
    throw std::invalid_argument("CompoundPoissonModel: needs c_1 > 0");
  for (double c : rates)
    if (!(c >= 0.0)) throw std::invalid_argument("CompoundPoissonModel: rates must be nonnegative");
  base.validate();
  if (tail_rate_mass < 0)
    throw std::invalid_argument("CompoundPoissonModel: tail_rate_mass must be nonnegative");
  return {std::move(rates), std::move(base), tail_rate_mass};
}

double CompoundPoissonModel::mark_mean() const {
  const double b = base.total();
  double m = 0;
  for (std::size_t i = 0; i < rates.size(); ++i) m += static_cast<double>(i + 1) * rates[i] * b;
  return m;
}

MarkovEntranceModel MarkovEntranceModel::create(std::vector<std::vector<double>> rate_matrix,
                                                std::vector<int> target_set,
                                                bool require_reversible) {
  const std::size_t k = rate_matrix.size();
  if (k < 2) throw std::invalid_argument("MarkovEntranceModel: needs at least two states");
  double max_rate = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (rate_matrix[i].size() != k)
      throw std::invalid_argument("MarkovEntranceModel: rate matrix must be square");
    double off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) {
        if (!(rate_matrix[i][j] >= 0.0))
          throw std::invalid_argument("MarkovEntranceModel: off-diagonal rates must be nonnegative");
        off += rate_matrix[i][j];
        max_rate = std::max(max_rate, rate_matrix[i][j]);
      }
    }
    if (std::abs(rate_matrix[i][i] + off) > 1e-9 * std::max(1.0, off))
      throw std::invalid_argument("MarkovEntranceModel: Q must be conservative (rows sum to zero)");
    rate_matrix[i][i] = -off;
  }

  // irreducibility: strong connectivity of the positive-rate digraph
  auto reachable = [&](bool transpose) {
    std::vector<char> seen(k, 0);
    std::queue<std::size_t> bfs;
    bfs.push(0);
    seen[0] = 1;
    while (!bfs.empty()) {
      std::size_t s = bfs.front();
      bfs.pop();
      for (std::size_t j = 0; j < k; ++j) {
        const double q = transpose ? rate_matrix[j][s] : rate_matrix[s][j];
        if (s != j && q > 0 && !seen[j]) {
          seen[j] = 1;
          bfs.push(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  if (!reachable(false) || !reachable(true))
    throw std::invalid_argument("MarkovEntranceModel: Q must be irreducible");

  // stationary vector: solve pi Q = 0 with sum(pi) = 1
  Eigen::MatrixXd A(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) A(static_cast<long>(i), static_cast<long>(j)) = rate_matrix[j][i];
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<long>(k));
  A.row(static_cast<long>(k) - 1).setOnes();
  rhs(static_cast<long>(k) - 1) = 1.0;
  Eigen::VectorXd pi = A.fullPivLu().solve(rhs);
  std::vector<double> stationary(k);
  for (std::size_t i = 0; i < k; ++i) {
    stationary[i] = pi(static_cast<long>(i));
    if (!(stationary[i] > 0))
      throw std::invalid_argument("MarkovEntranceModel: stationary vector not strictly positive");
  }

  if (require_reversible) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        const double flux = stationary[i] * rate_matrix[i][j] - stationary[j] * rate_matrix[j][i];
        if (std::abs(flux) > 1e-10 * std::max(1.0, max_rate))
          throw std::invalid_argument("MarkovEntranceModel: Q fails detailed balance (not reversible)");
      }
  }

  std::sort(target_set.begin(), target_set.end());
  target_set.erase(std::unique(target_set.begin(), target_set.end()), target_set.end());
  if (target_set.empty() || target_set.size() >= k)
    throw std::invalid_argument("MarkovEntranceModel: S0 must be a proper nonempty subset");
  for (int s : target_set)
    if (s < 0 || static_cast<std::size_t>(s) >= k)
      throw std::invalid_argument("MarkovEntranceModel: S0 state out of range");

  MarkovEntranceModel m;
  m.rate_matrix = std::move(rate_matrix);
  m.target_set = std::move(target_set);
  m.stationary = std::move(stationary);
  m.require_reversible = require_reversible;
  return m;
}

CarrierSpace model_carrier(const ProcessModel&) { return CarrierSpace::interval01(); }

void validate_model(const ProcessModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BernoulliModel>) {
          BernoulliModel::create(m.atoms, m.probs);
        } else if constexpr (std::is_same_v<T, BernoulliShiftModel>) {
          BernoulliShiftModel::create(m.probs, m.shifts);
        } else if constexpr (std::is_same_v<T, CompoundPoissonModel>) {
          CompoundPoissonModel::create(m.rates, m.base, m.tail_rate_mass);
        } else if constexpr (std::is_same_v<T, RenewalModel>) {
          (void)m.interarrival.mean();
        } else {
          MarkovEntranceModel::create(m.rate_matrix, m.target_set, m.require_reversible);
        }
      },
      model);
}

// ---- sampling ----

namespace {

Configuration sample_bernoulli(const BernoulliModel& m, Rng& rng) {
  Configuration c;
  for (std::size_t i = 0; i < m.atoms.size(); ++i)
    if (rng.bernoulli(m.probs[i])) c.add(m.atoms[i]);
  return c;
}

Configuration sample_bernoulli_shift(const BernoulliShiftModel& m, Rng& rng) {
  Configuration c;
  for (std::size_t i = 0; i < m.probs.size(); ++i)
    if (rng.bernoulli(m.probs[i])) c.add(m.shifts[i].sample(rng));
  return c;
}

Configuration sample_compound_poisson(const CompoundPoissonModel& m, Rng& rng) {
  Configuration c;
  const double base_mass = m.base.total();
  for (std::size_t i = 0; i < m.rates.size(); ++i) {
    if (m.rates[i] <= 0) continue;
    const long k = rng.poisson(m.rates[i] * base_mass);
    for (long j = 0; j < k; ++j) c.add(m.base.sample(rng), static_cast<long>(i + 1));
  }
  return c;
}

Configuration sample_renewal(const RenewalModel& m, Rng& rng) {
  Configuration c;
  double t = sample_equilibrium_delay(m.interarrival, rng);
  while (t <= 1.0) {
    c.add(t);
    t += m.interarrival.sample(rng);
  }
  return c;
}

}  // namespace

std::vector<MarkovJump> simulate_markov_path(const MarkovEntranceModel& m, double horizon, Rng& rng,
                                             int* initial_state) {
  const std::size_t k = m.rate_matrix.size();
  int state = static_cast<int>(rng.categorical(m.stationary));
  if (initial_state) *initial_state = state;
  std::vector<MarkovJump> jumps;
  double t = 0;
  std::vector<double> row(k);
  while (true) {
    const double hold_rate = -m.rate_matrix[static_cast<std::size_t>(state)][static_cast<std::size_t>(state)];
    if (hold_rate <= 0) break;  // absorbing state cannot occur for irreducible Q
    t += rng.exponential(hold_rate);
    if (t > horizon) break;
    for (std::size_t j = 0; j < k; ++j)
      row[j] = (static_cast<int>(j) == state) ? 0.0
                                              : m.rate_matrix[static_cast<std::size_t>(state)][j];
    const int next = static_cast<int>(rng.categorical(row));
    jumps.push_back({t, state, next});
    state = next;
  }
  return jumps;
}

Configuration markov_entrance_times(const MarkovEntranceModel& m, Rng& rng) {
  Configuration c;
  auto in_s0 = [&](int s) {
    return std::binary_search(m.target_set.begin(), m.target_set.end(), s);
  };
  for (const MarkovJump& j : simulate_markov_path(m, 1.0, rng)) {
    if (!in_s0(j.from) && in_s0(j.to)) c.add(j.time);
  }
  return c;
}

Configuration sample_one(const ProcessModel& model, Rng& rng) {
  return std::visit(
      [&rng](const auto& m) -> Configuration {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BernoulliModel>) return sample_bernoulli(m, rng);
        else if constexpr (std::is_same_v<T, BernoulliShiftModel>) return sample_bernoulli_shift(m, rng);
        else if constexpr (std::is_same_v<T, CompoundPoissonModel>) return sample_compound_poisson(m, rng);
        else if constexpr (std::is_same_v<T, RenewalModel>) return sample_renewal(m, rng);
        else return markov_entrance_times(m, rng);
      },
      model);
}

Configuration sample_superposition(const ProcessModel& model, long n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_superposition: n must be positive");
  Configuration total;
  for (long i = 0; i < n; ++i) total.add(sample_one(model, rng));
  return total;
}

}  // namespace pbdpp

#pragma once

#include <variant>
#include <vector>

#include "pbdpp/carrier.hpp"
#include "pbdpp/piecewise.hpp"
#include "pbdpp/rng.hpp"

namespace pbdpp {

/// Location law of one shifted point for the Bernoulli-with-shifts family.
class ShiftLaw {
 public:
  enum class Kind { discrete, uniform, piecewise };

  static ShiftLaw discrete(std::vector<double> points, std::vector<double> weights);
  static ShiftLaw uniform(double lo, double hi);
  static ShiftLaw piecewise(PiecewiseDensity density);

  Kind kind() const { return kind_; }
  double sample(Rng& rng) const;

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const PiecewiseDensity& density() const { return density_; }

 private:
  Kind kind_ = Kind::uniform;
  std::vector<double> points_, weights_;
  std::vector<double> cum_weights_;
  double lo_ = 0, hi_ = 1;
  PiecewiseDensity density_;
};

/// Inter-renewal time family. Restricted to families with a closed-form
/// length-biased transform so the stationary delay can be sampled exactly.
class InterarrivalSpec {
 public:
  enum class Family { exponential, uniform, two_point };

  static InterarrivalSpec exponential(double rate);
  static InterarrivalSpec uniform(double lo, double hi);
  /// Mixture q1*delta_{x1} + (1-q1)*delta_{x2}, optionally smoothed by
  /// adding U(-jitter, jitter).
  static InterarrivalSpec two_point(double x1, double q1, double x2, double jitter = 0.0);

  Family family() const { return family_; }
  double mean() const;
  double sample(Rng& rng) const;
  /// Draw from the length-biased law w f(w) / E[W].
  double sample_length_biased(Rng& rng) const;

  double rate() const { return rate_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double x1() const { return x1_; }
  double q1() const { return q1_; }
  double x2() const { return x2_; }
  double jitter() const { return jitter_; }

 private:
  Family family_ = Family::exponential;
  double rate_ = 1;
  double lo_ = 0, hi_ = 1;
  double x1_ = 1, q1_ = 1, x2_ = 1, jitter_ = 0;
};

/// Draw the stationary-excess delay W0, with density P(W1 > x) / E[W1].
/// Realized as U * (length-biased W1) with U uniform.
double sample_equilibrium_delay(const InterarrivalSpec& spec, Rng& rng);

// ---- the five i.i.d. point-process families ----

struct BernoulliModel {
  std::vector<double> atoms;  // strictly increasing, in [0,1]
  std::vector<double> probs;  // strictly inside (0,1)
  static BernoulliModel create(std::vector<double> atoms, std::vector<double> probs);
};

struct BernoulliShiftModel {
  std::vector<double> probs;
  std::vector<ShiftLaw> shifts;
  static BernoulliShiftModel create(std::vector<double> probs, std::vector<ShiftLaw> shifts);
};

struct CompoundPoissonModel {
  std::vector<double> rates;  // c_i for mark i = 1..rates.size(); c_1 > 0
  PiecewiseDensity base;      // base measure density on [0,1]
  /// Mass sum_{i > I_max} i*c_i of a truncated infinite family, reported
  /// alongside results; zero for an exactly finite family.
  double tail_rate_mass = 0;
  static CompoundPoissonModel create(std::vector<double> rates,
                                     PiecewiseDensity base = PiecewiseDensity::lebesgue(),
                                     double tail_rate_mass = 0);
  double mark_mean() const;  // sum i*c_i*|base|
};

struct RenewalModel {
  InterarrivalSpec interarrival;
  static RenewalModel create(InterarrivalSpec spec) { return {spec}; }
};

struct MarkovEntranceModel {
  std::vector<std::vector<double>> rate_matrix;  // conservative Q, irreducible
  std::vector<int> target_set;                   // S0, proper nonempty subset, sorted
  std::vector<double> stationary;                // stationary vector of Q
  bool require_reversible = true;
  /// Validates Q (conservative, irreducible; reversibility via detailed
  /// balance to 1e-10 unless relaxed) and precomputes the stationary vector.
  static MarkovEntranceModel create(std::vector<std::vector<double>> rate_matrix,
                                    std::vector<int> target_set,
                                    bool require_reversible = true);
};

using ProcessModel = std::variant<BernoulliModel, BernoulliShiftModel, CompoundPoissonModel,
                                  RenewalModel, MarkovEntranceModel>;

/// All five families live on the unit interval.
CarrierSpace model_carrier(const ProcessModel& model);

/// Re-runs the construction-time checks on an aggregate-built model.
void validate_model(const ProcessModel& model);

/// One realization of Xi_1 restricted to [0,1]. Never fails on a valid model.
Configuration sample_one(const ProcessModel& model, Rng& rng);

/// Sum, as counting measures, of n independent draws of sample_one.
Configuration sample_superposition(const ProcessModel& model, long n, Rng& rng);

struct MarkovJump {
  double time;
  int from;
  int to;
};

/// Stationary chain path on [0, horizon]: M0 ~ stationary, then jump times.
std::vector<MarkovJump> simulate_markov_path(const MarkovEntranceModel& model, double horizon,
                                             Rng& rng, int* initial_state = nullptr);

/// Entrance times into S0 on [0,1] (jumps from outside S0 into S0).
Configuration markov_entrance_times(const MarkovEntranceModel& model, Rng& rng);

}  // namespace pbdpp

#pragma once

#include <random>

#include "cascademix/errors.hpp"

namespace cascademix {

// Pairwise transmission models. All three factor as
//   H(dt; rate) = rate * hazard_shape(dt)
//   log S(dt; rate) = rate * log_survival_shape(dt)
// which makes the log-likelihood linear-plus-log-of-linear in the rates and
// keeps gradients trivial.
enum class HazardKind { Exp, Pow, Ray };

struct HazardModel {
  HazardKind kind = HazardKind::Exp;
  double delta = 0.0;  // minimum transmission delay, Pow only

  static HazardModel exponential() { return {HazardKind::Exp, 0.0}; }
  static HazardModel power_law(double delta) {
    if (!(delta > 0.0)) throw ValidationError("power-law delay delta must be positive");
    return {HazardKind::Pow, delta};
  }
  static HazardModel rayleigh() { return {HazardKind::Ray, 0.0}; }
};

// Multiplier k(dt) with H = rate * k(dt). Zero when the transmission is not
// yet possible (dt <= 0, or dt <= delta for Pow).
double hazard_shape(const HazardModel& model, double dt);

// Shaping h(dt) <= 0 with log S = rate * h(dt). Zero accumulated hazard for
// dt <= 0 (and dt <= delta for Pow) gives h = 0.
double log_survival_shape(const HazardModel& model, double dt);

// Instantaneous activation intensity H(t_i | t_j, rate) with dt = t_i - t_j.
double hazard(const HazardModel& model, double rate, double dt);

// ln S(t_i | t_j, rate); 0 at dt = 0 or rate = 0, nonpositive always.
double log_survival(const HazardModel& model, double rate, double dt);

// ln f = ln H + ln S; -infinity where the hazard vanishes.
double log_density(const HazardModel& model, double rate, double dt);

// Inverse-CDF transmission delay for a uniform draw u in (0, 1).
// rate = 0 means the edge is absent: the delay is +infinity exactly.
double delay_from_uniform(const HazardModel& model, double rate, double u);

double sample_delay(const HazardModel& model, double rate, std::mt19937_64& rng);

}  // namespace cascademix

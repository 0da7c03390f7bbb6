#include "cascademix/hazard.hpp"

#include <cmath>
#include <limits>

#include "cascademix/rng.hpp"

namespace cascademix {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_finite(double rate, double dt) {
  if (!std::isfinite(rate) || rate < 0.0) throw ValidationError("rate must be finite and nonnegative");
  if (!std::isfinite(dt)) throw ValidationError("time lag must be finite");
}
}  // namespace

double hazard_shape(const HazardModel& model, double dt) {
  switch (model.kind) {
    case HazardKind::Exp:
      return dt > 0.0 ? 1.0 : 0.0;
    case HazardKind::Pow:
      return dt > model.delta ? 1.0 / dt : 0.0;
    case HazardKind::Ray:
      return dt > 0.0 ? dt : 0.0;
  }
  return 0.0;
}

double log_survival_shape(const HazardModel& model, double dt) {
  if (dt <= 0.0) return 0.0;
  switch (model.kind) {
    case HazardKind::Exp:
      return -dt;
    case HazardKind::Pow:
      // No hazard accumulates before the minimum delay.
      return dt > model.delta ? -std::log(dt / model.delta) : 0.0;
    case HazardKind::Ray:
      return -0.5 * dt * dt;
  }
  return 0.0;
}

double hazard(const HazardModel& model, double rate, double dt) {
  check_finite(rate, dt);
  return rate * hazard_shape(model, dt);
}

double log_survival(const HazardModel& model, double rate, double dt) {
  check_finite(rate, dt);
  return rate * log_survival_shape(model, dt);
}

double log_density(const HazardModel& model, double rate, double dt) {
  check_finite(rate, dt);
  const double h = hazard(model, rate, dt);
  if (h <= 0.0) return -kInf;
  return std::log(h) + log_survival(model, rate, dt);
}

double delay_from_uniform(const HazardModel& model, double rate, double u) {
  if (rate <= 0.0) return kInf;
  switch (model.kind) {
    case HazardKind::Exp:
      return -std::log(u) / rate;
    case HazardKind::Pow:
      return model.delta * std::pow(u, -1.0 / rate);
    case HazardKind::Ray:
      return std::sqrt(-2.0 * std::log(u) / rate);
  }
  return kInf;
}

double sample_delay(const HazardModel& model, double rate, std::mt19937_64& rng) {
  if (rate <= 0.0) return kInf;
  return delay_from_uniform(model, rate, uniform_open01(rng));
}

}  // namespace cascademix

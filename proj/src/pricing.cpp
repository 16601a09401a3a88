#include "orbsim/pricing.hpp"

#include <cmath>
#include <stdexcept>

namespace orbsim {

void PricingConfig::validate() const {
  if (!(p_base > 0.0)) throw std::invalid_argument("pricing.p_base must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("pricing.beta must be positive");
  if (!(gamma_t >= 0.0)) throw std::invalid_argument("pricing.gamma_t must be non-negative");
  if (!(gamma_q >= 0.0)) throw std::invalid_argument("pricing.gamma_q must be non-negative");
  if (!(t_nominal_c < t_max_c)) throw std::invalid_argument("pricing.t_nominal_c must be below t_max_c");
}

double battery_factor(const PricingConfig& cfg, double soc) {
  if (!(soc > cfg.soc_critical)) throw std::domain_error("battery factor undefined at or below soc_critical");
  const double margin = soc - cfg.soc_critical;
  return 1.0 + cfg.beta / (margin * margin);
}

double thermal_factor(const PricingConfig& cfg, double temperature_c) {
  if (!(temperature_c < cfg.t_max_c)) throw std::domain_error("thermal factor undefined at or above t_max");
  const double excess = temperature_c > cfg.t_nominal_c ? temperature_c - cfg.t_nominal_c : 0.0;
  const double headroom = cfg.t_max_c - temperature_c;
  return 1.0 + cfg.gamma_t * excess * excess / (headroom * headroom + 1.0);
}

double queue_factor(const PricingConfig& cfg, double queue_depth) {
  if (queue_depth < 0.0) throw std::domain_error("queue depth must be non-negative");
  return 1.0 + cfg.gamma_q * queue_depth;
}

bool execution_blocked(const PricingConfig& cfg, double soc, double temperature_c) {
  return !(soc > cfg.soc_critical) || !(temperature_c < cfg.t_max_c);
}

MarginalCost marginal_cost(const PricingConfig& cfg, double soc, double temperature_c,
                           double queue_depth, PricingMode mode) {
  if (execution_blocked(cfg, soc, temperature_c)) return MarginalCost::blocked_cost();
  MarginalCost cost;
  cost.battery = battery_factor(cfg, soc);
  if (mode != PricingMode::kBatteryOnly) cost.thermal = thermal_factor(cfg, temperature_c);
  if (mode == PricingMode::kMultiplicative || mode == PricingMode::kAdditive) {
    cost.queue = queue_factor(cfg, queue_depth);
  }
  if (mode == PricingMode::kAdditive) {
    cost.total = cfg.p_base * (cost.battery + cost.thermal + cost.queue - 2.0);
  } else {
    cost.total = cfg.p_base * cost.battery * cost.thermal * cost.queue;
  }
  return cost;
}

MarginalCost physical_cost(const PricingConfig& cfg, double soc, double temperature_c,
                           PricingMode mode) {
  return marginal_cost(cfg, soc, temperature_c, 0.0, mode);
}

std::optional<double> dropout_soc(const PricingConfig& cfg, double esv) {
  if (!(esv > cfg.p_base)) return std::nullopt;
  return cfg.soc_critical + std::sqrt(cfg.beta * cfg.p_base / (esv - cfg.p_base));
}

}  // namespace orbsim

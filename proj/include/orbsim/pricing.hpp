#pragma once

#include <optional>

namespace orbsim {

enum class PricingMode { kMultiplicative, kBatteryOnly, kBatteryThermal, kAdditive };

struct PricingConfig {
  double p_base = 1.40;
  double beta = 0.001;
  double gamma_t = 0.002;
  double gamma_q = 0.01;
  double soc_critical = 0.15;
  double t_nominal_c = 50.0;
  double t_max_c = 85.0;

  void validate() const;

  bool operator==(const PricingConfig&) const = default;
};

// The factors of one cost evaluation. A blocked cost compares greater than
// every finite value and admits nothing.
struct MarginalCost {
  double total = 0.0;
  double battery = 1.0;
  double thermal = 1.0;
  double queue = 1.0;
  bool blocked = false;

  static MarginalCost blocked_cost() { return {0.0, 1.0, 1.0, 1.0, true}; }
  bool admits(double esv) const { return !blocked && esv > total; }
  bool cheaper_than(const MarginalCost& other) const {
    if (blocked) return false;
    return other.blocked || total < other.total;
  }
};

// Each throws std::domain_error outside its domain (see blocked()).
double battery_factor(const PricingConfig& cfg, double soc);
double thermal_factor(const PricingConfig& cfg, double temperature_c);
double queue_factor(const PricingConfig& cfg, double queue_depth);

bool execution_blocked(const PricingConfig& cfg, double soc, double temperature_c);

MarginalCost marginal_cost(const PricingConfig& cfg, double soc, double temperature_c,
                           double queue_depth, PricingMode mode = PricingMode::kMultiplicative);

// Neighbour-visible cost: queue factor fixed at 1.
MarginalCost physical_cost(const PricingConfig& cfg, double soc, double temperature_c,
                           PricingMode mode = PricingMode::kMultiplicative);

// SoC at which a task of value `esv` stops clearing under the battery factor
// alone. Empty when esv <= p_base (never admitted).
std::optional<double> dropout_soc(const PricingConfig& cfg, double esv);

}  // namespace orbsim

#pragma once

#include <span>
#include <string_view>

#include "orbsim/isl.hpp"
#include "orbsim/scheduler.hpp"

namespace orbsim {

enum class BaselineKind { kStaticFifo, kPriority, kEsa, kPhoenix };

struct EsaConfig {
  double v = 10.0;
  double theta = 0.5;
  double scale = 1e-3;

  void validate() const;

  bool operator==(const EsaConfig&) const = default;
};

struct PhoenixConfig {
  // Swap the defer/offload branches of the eclipse rule.
  bool inverted_rule = false;
  // Run local work only on the current solar surplus.
  bool harvest_limited = true;

  bool operator==(const PhoenixConfig&) const = default;
};

// Oldest image first, every head, no deferral. An image whose heads exceed the
// free slots finishes on later steps before anything newer starts.
void static_fifo_step(SatelliteState& state, std::span<const Image> fresh, const StepContext& ctx,
                      StepOutcome& out);

// Pairs by value, highest first; below the brownout threshold heads with
// weight < 100 are withheld. No deferral.
void priority_step(SatelliteState& state, std::span<const Image> fresh, const StepContext& ctx,
                   StepOutcome& out);

// Drift-plus-penalty admission (V * value >= Z * e), FIFO execution, then
// Z <- max(0, Z + (theta - SoC) * scale).
void esa_step(SatelliteState& state, const EsaConfig& esa, std::span<const Image> fresh,
              const StepContext& ctx, StepOutcome& out);

// Sunlit: FIFO as static, draining the local deferral queue first. Eclipsed:
// each arrival is deferred or handed to the highest-SoC sunlit neighbour,
// depending on whether its TTL outlasts the remaining shadow.
void phoenix_step(SatelliteState& state, const PhoenixConfig& phoenix,
                  std::span<const Image> fresh, std::span<const NeighborView> neighbors,
                  const StepContext& ctx, StepOutcome& out);

// Ceiling used by the oracle relaxation: every head of every arrival runs.
void exhaustive_step(SatelliteState& state, std::span<const Image> fresh, const StepContext& ctx,
                     StepOutcome& out);

}  // namespace orbsim

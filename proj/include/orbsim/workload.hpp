#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "orbsim/rng.hpp"

namespace orbsim {

inline constexpr std::size_t kMaxTasks = 16;

// Prior table columns, in CSV order.
enum class PriorColumn : std::uint8_t { kFire = 0, kFlood = 1, kShip = 2, kMonitor = 3 };
inline constexpr std::size_t kPriorColumns = 4;

inline constexpr double kHeavyGflops = 1.8;
inline constexpr double kStandardGflops = 1.0;
inline constexpr double kLightGflops = 0.4;

struct Task {
  std::string name;
  double weight;
  double accuracy;
  double base_prob;
  double gflops;
  PriorColumn column;
};

using TaskSet = std::vector<Task>;

// Fire, flood, ship, monitor.
TaskSet canonical_tasks();

// n synthetic tasks with weights geometric over [20, 200]; n = 4 yields the
// canonical set. Throws std::invalid_argument outside [2, kMaxTasks].
TaskSet scale_tasks(int n);

// Value substituted for every pair under the uniform-value ablation: the mean
// base-prior value of the canonical tasks.
double uniform_task_value();

class CategoryPriors {
 public:
  using Row = std::array<double, kPriorColumns>;

  static CategoryPriors from_csv(const std::string& path);
  static std::string default_path();

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t index) const { return names_[index]; }
  const Row& row(std::size_t index) const { return rows_[index]; }
  const Row& default_row() const { return default_; }
  // Unknown names resolve to the default row.
  const Row& lookup(std::string_view name) const;
  double prior(std::size_t category, PriorColumn column) const {
    return rows_[category][static_cast<std::size_t>(column)];
  }

 private:
  std::vector<std::string> names_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, std::size_t> index_;
  Row default_{0.05, 0.08, 0.12, 0.10};
};

enum class ContextMode { kFull, kNone, kNoisy };
enum class ValuationMode { kContextual, kUniform };

struct WorkloadConfig {
  double arrival_rate_per_s = 1.5;
  bool deterministic_arrivals = false;
  int num_tasks = 4;
  ContextMode context = ContextMode::kFull;
  double noise_sigma = 0.25;
  std::string category_table;  // empty: the shipped table
  // Empty: uniform over categories. Otherwise relative weights per row.
  std::vector<double> category_weights;

  void validate() const;

  bool operator==(const WorkloadConfig&) const = default;
};

struct Image {
  std::uint64_t id = 0;
  int origin = 0;
  double arrival_s = 0.0;
  std::uint16_t category = 0;
  std::uint32_t events = 0;  // bit k set: task k's event is present
  bool offloaded = false;
  std::uint8_t num_tasks = 0;
  std::array<double, kMaxTasks> esv{};
  double best_esv = 0.0;

  bool has_event(std::size_t task) const { return (events >> task) & 1U; }
};

// Prior times accuracy times weight for one task on one category, before noise.
double expected_value(const Task& task, const CategoryPriors& priors, std::size_t category,
                      ContextMode mode);

// Draws the per-step arrivals of one satellite. Ids are unique per run.
class ArrivalSampler {
 public:
  ArrivalSampler(const WorkloadConfig& cfg, const TaskSet& tasks, const CategoryPriors& priors,
                 ValuationMode valuation, std::uint64_t seed);

  void sample(int satellite, std::uint64_t step, double t_s, double dt_s,
              std::vector<Image>& out) const;

  std::size_t categories() const { return priors_.size(); }

 private:
  const WorkloadConfig& cfg_;
  const TaskSet& tasks_;
  const CategoryPriors& priors_;
  ValuationMode valuation_;
  std::uint64_t seed_;
  std::vector<double> cumulative_weights_;
  // Values per (category, task) without noise.
  std::vector<std::array<double, kMaxTasks>> base_values_;
};

}  // namespace orbsim

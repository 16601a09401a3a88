#include "orbsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace orbsim {

TaskSet canonical_tasks() {
  return {
      {"fire", 200.0, 0.92, 0.05, kHeavyGflops, PriorColumn::kFire},
      {"flood", 100.0, 0.93, 0.08, kHeavyGflops, PriorColumn::kFlood},
      {"ship", 50.0, 0.94, 0.12, kHeavyGflops, PriorColumn::kShip},
      {"monitor", 20.0, 0.91, 0.10, kHeavyGflops, PriorColumn::kMonitor},
  };
}

TaskSet scale_tasks(int n) {
  if (n < 2 || n > static_cast<int>(kMaxTasks)) {
    throw std::invalid_argument("workload.num_tasks must lie in [2, " +
                                std::to_string(kMaxTasks) + "]");
  }
  if (n == 4) return canonical_tasks();
  static constexpr std::array<double, kPriorColumns> kBaseProbs{0.05, 0.08, 0.12, 0.10};
  TaskSet tasks;
  tasks.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    // Heaviest first, so task k pairs with the canonical column k mod 4.
    const double weight = 200.0 * std::pow(20.0 / 200.0, static_cast<double>(k) / (n - 1));
    const auto column = static_cast<PriorColumn>(k % kPriorColumns);
    tasks.push_back({"task" + std::to_string(k), weight, 0.93, kBaseProbs[k % kPriorColumns],
                     kHeavyGflops, column});
  }
  return tasks;
}

double uniform_task_value() {
  double sum = 0.0;
  const TaskSet tasks = canonical_tasks();
  for (const Task& t : tasks) sum += t.base_prob * t.accuracy * t.weight;
  return sum / static_cast<double>(tasks.size());
}

std::string CategoryPriors::default_path() { return std::string(ORBSIM_DATA_DIR) + "/categories.csv"; }

CategoryPriors CategoryPriors::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open category table '" + path + "'");
  CategoryPriors priors;
  std::string line;
  if (!std::getline(in, line) || line.rfind("category,", 0) != 0) {
    throw std::runtime_error("category table '" + path + "' lacks the expected header");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string name, cell;
    std::getline(fields, name, ',');
    Row row{};
    for (std::size_t c = 0; c < kPriorColumns; ++c) {
      if (!std::getline(fields, cell, ',')) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 5 columns");
      }
      row[c] = std::stod(cell);
      if (!(row[c] >= 0.0 && row[c] <= 1.0)) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": probability outside [0, 1]");
      }
    }
    if (name == "_default") {
      priors.default_ = row;
      continue;
    }
    if (!priors.index_.emplace(name, priors.names_.size()).second) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": duplicate category '" +
                               name + "'");
    }
    priors.names_.push_back(name);
    priors.rows_.push_back(row);
  }
  if (priors.names_.empty()) throw std::runtime_error("category table '" + path + "' is empty");
  if (priors.names_.size() > 0xffff) throw std::runtime_error("category table too large");
  return priors;
}

const CategoryPriors::Row& CategoryPriors::lookup(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  return it == index_.end() ? default_ : rows_[it->second];
}

void WorkloadConfig::validate() const {
  if (!(arrival_rate_per_s >= 0.0) || arrival_rate_per_s > 50.0) {
    throw std::invalid_argument("workload.arrival_rate_per_s must lie in [0, 50]");
  }
  if (num_tasks < 2 || num_tasks > static_cast<int>(kMaxTasks)) {
    throw std::invalid_argument("workload.num_tasks must lie in [2, 16]");
  }
  if (context == ContextMode::kNoisy && !(noise_sigma > 0.0)) {
    throw std::invalid_argument("workload.noise_sigma must be positive in noisy mode");
  }
  for (double w : category_weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("workload.category_weights must be non-negative");
  }
}

double expected_value(const Task& task, const CategoryPriors& priors, std::size_t category,
                      ContextMode mode) {
  const double prior =
      mode == ContextMode::kNone ? task.base_prob : priors.prior(category, task.column);
  return prior * task.accuracy * task.weight;
}

ArrivalSampler::ArrivalSampler(const WorkloadConfig& cfg, const TaskSet& tasks,
                               const CategoryPriors& priors, ValuationMode valuation,
                               std::uint64_t seed)
    : cfg_(cfg), tasks_(tasks), priors_(priors), valuation_(valuation), seed_(seed) {
  if (tasks_.size() > kMaxTasks) throw std::invalid_argument("too many tasks");
  if (!cfg_.category_weights.empty()) {
    if (cfg_.category_weights.size() != priors_.size()) {
      throw std::invalid_argument("workload.category_weights must have one entry per category");
    }
    double running = 0.0;
    for (double w : cfg_.category_weights) cumulative_weights_.push_back(running += w);
    if (!(running > 0.0)) throw std::invalid_argument("workload.category_weights sum to zero");
  }
  const double uniform = uniform_task_value();
  base_values_.resize(priors_.size());
  for (std::size_t c = 0; c < priors_.size(); ++c) {
    for (std::size_t k = 0; k < tasks_.size(); ++k) {
      base_values_[c][k] = valuation_ == ValuationMode::kUniform
                               ? uniform
                               : expected_value(tasks_[k], priors_, c, cfg_.context);
    }
  }
}

void ArrivalSampler::sample(int satellite, std::uint64_t step, double t_s, double dt_s,
                            std::vector<Image>& out) const {
  const double mean = cfg_.arrival_rate_per_s * dt_s;
  if (!(mean > 0.0)) return;
  SplitMix64 rng(stream_key(seed_, Stream::kArrivals, static_cast<std::uint64_t>(satellite), step));
  int count;
  if (cfg_.deterministic_arrivals) {
    count = static_cast<int>(std::floor((static_cast<double>(step) + 1.0) * mean) -
                             std::floor(static_cast<double>(step) * mean));
  } else {
    count = std::poisson_distribution<int>(mean)(rng);
  }
  count = std::min(count, 255);
  const std::size_t n_tasks = tasks_.size();
  std::uniform_int_distribution<std::size_t> uniform_category(0, priors_.size() - 1);
  std::normal_distribution<double> noise(0.0, cfg_.noise_sigma);
  for (int k = 0; k < count; ++k) {
    Image img;
    img.id = (step << 20) | (static_cast<std::uint64_t>(satellite) << 8) |
             static_cast<std::uint64_t>(k);
    img.origin = satellite;
    img.arrival_s = t_s;
    std::size_t category;
    if (cumulative_weights_.empty()) {
      category = uniform_category(rng);
    } else {
      const double pick = rng.uniform() * cumulative_weights_.back();
      category = static_cast<std::size_t>(
          std::upper_bound(cumulative_weights_.begin(), cumulative_weights_.end(), pick) -
          cumulative_weights_.begin());
      category = std::min(category, priors_.size() - 1);
    }
    img.category = static_cast<std::uint16_t>(category);
    img.num_tasks = static_cast<std::uint8_t>(n_tasks);
    for (std::size_t t = 0; t < n_tasks; ++t) {
      if (rng.uniform() < priors_.prior(category, tasks_[t].column)) img.events |= 1U << t;
    }
    double best = 0.0;
    for (std::size_t t = 0; t < n_tasks; ++t) {
      double v = base_values_[category][t];
      if (valuation_ == ValuationMode::kContextual && cfg_.context == ContextMode::kNoisy) {
        v *= std::exp(noise(rng));
      }
      img.esv[t] = v;
      best = std::max(best, v);
    }
    img.best_esv = best;
    out.push_back(img);
  }
}

}  // namespace orbsim

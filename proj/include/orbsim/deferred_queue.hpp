#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <unordered_map>
#include <utility>

#include "orbsim/workload.hpp"

namespace orbsim {

// Images waiting for a cheaper step. Entries expire in deferral order and are
// also indexed by best value for retry.
class DeferredQueue {
 public:
  struct Entry {
    Image image;
    double expiry_s;
    std::uint64_t seq;
  };

  // Ordering used when images compete: best value first, then earlier
  // arrival, then lower id.
  struct ValueKey {
    double best_esv;
    double arrival_s;
    std::uint64_t id;
    friend bool operator<(const ValueKey& a, const ValueKey& b) {
      if (a.best_esv != b.best_esv) return a.best_esv > b.best_esv;
      if (a.arrival_s != b.arrival_s) return a.arrival_s < b.arrival_s;
      return a.id < b.id;
    }
  };

  void push(const Image& image, double expiry_s);
  bool erase(std::uint64_t id);
  // Drops entries with now > expiry. Returns how many were dropped.
  std::size_t expire(double now_s);
  void clear();

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(std::uint64_t id) const { return entries_.count(id) != 0; }
  const Entry& entry(std::uint64_t id) const { return entries_.at(id); }

  // Visits entries best value first until `visit` returns false.
  template <typename Visit>
  void for_each_by_value(Visit&& visit) const {
    for (const ValueKey& key : by_value_) {
      if (!visit(entries_.at(key.id))) return;
    }
  }

  // Visits entries in deferral order until `visit` returns false.
  template <typename Visit>
  void for_each_in_order(Visit&& visit) const {
    for (const auto& [seq, id] : order_) {
      const auto it = entries_.find(id);
      if (it == entries_.end() || it->second.seq != seq) continue;
      if (!visit(it->second)) return;
    }
  }

  static ValueKey key_of(const Image& image) { return {image.best_esv, image.arrival_s, image.id}; }

 private:
  void drop_stale_head();

  std::unordered_map<std::uint64_t, Entry> entries_;
  // (seq, id) in deferral order. Erased entries stay until they reach the head.
  std::deque<std::pair<std::uint64_t, std::uint64_t>> order_;
  std::set<ValueKey> by_value_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace orbsim

#include "orbsim/deferred_queue.hpp"

namespace orbsim {

void DeferredQueue::push(const Image& image, double expiry_s) {
  const std::uint64_t seq = next_seq_;
  if (!entries_.emplace(image.id, Entry{image, expiry_s, seq}).second) return;
  ++next_seq_;
  order_.emplace_back(seq, image.id);
  by_value_.insert(key_of(image));
}

bool DeferredQueue::erase(std::uint64_t id) {
  const auto it = entries_.find(id);
  if (it == entries_.end()) return false;
  by_value_.erase(key_of(it->second.image));
  entries_.erase(it);
  if (entries_.empty()) order_.clear();
  return true;
}

void DeferredQueue::drop_stale_head() {
  while (!order_.empty()) {
    const auto it = entries_.find(order_.front().second);
    if (it != entries_.end() && it->second.seq == order_.front().first) return;
    order_.pop_front();
  }
}

std::size_t DeferredQueue::expire(double now_s) {
  std::size_t dropped = 0;
  // Expiry is monotone in deferral order, so only the head needs checking.
  for (drop_stale_head(); !order_.empty(); drop_stale_head()) {
    const std::uint64_t id = order_.front().second;
    if (!(now_s > entries_.at(id).expiry_s)) break;
    erase(id);
    ++dropped;
  }
  return dropped;
}

void DeferredQueue::clear() {
  entries_.clear();
  order_.clear();
  by_value_.clear();
}

}  // namespace orbsim

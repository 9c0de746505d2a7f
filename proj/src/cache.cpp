#include "hydrograph/cache.hpp"

namespace hydrograph {

std::string ResponseCache::key(std::string_view method, std::string_view path,
                               const std::multimap<std::string, std::string>& query) {
  // multimap iteration is sorted by name; values of a repeated name keep
  // their request order, which is significant for list parameters.
  std::string k{method};
  k += ' ';
  k += path;
  char sep = '?';
  for (const auto& [name, value] : query) {
    k += sep;
    k += name;
    k += '=';
    k += value;
    sep = '&';
  }
  return k;
}

std::optional<CacheEntry> ResponseCache::get(const std::string& key) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::put(const std::string& key, CacheEntry entry, std::uint64_t generation) {
  std::lock_guard lock(mutex_);
  if (generation == generation_) entries_.insert_or_assign(key, std::move(entry));
}

void ResponseCache::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
  ++generation_;
}

std::uint64_t ResponseCache::generation() const {
  std::lock_guard lock(mutex_);
  return generation_;
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace hydrograph

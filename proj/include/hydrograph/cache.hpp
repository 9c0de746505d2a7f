#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "hydrograph/timeutil.hpp"

namespace hydrograph {

struct CacheEntry {
  std::string body;
  std::string content_type;
  Timestamp created;
};

// Whole-response cache keyed by method, path and canonical query string.
class ResponseCache {
 public:
  static std::string key(std::string_view method, std::string_view path,
                         const std::multimap<std::string, std::string>& query);

  std::optional<CacheEntry> get(const std::string& key) const;
  // Stores only if no clear() happened since `generation` was read, so a
  // response computed before a write is never cached after it.
  void put(const std::string& key, CacheEntry entry, std::uint64_t generation);
  void clear();
  std::size_t size() const;
  std::uint64_t generation() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, CacheEntry, std::less<>> entries_;
  std::uint64_t generation_ = 0;
};

}  // namespace hydrograph

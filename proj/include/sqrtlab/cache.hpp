#pragma once

// Content-addressed result cache. Entries are keyed by a digest of
// (version, subcommand, canonical parameters, seed); a version bump changes
// every key. Entries carry a checksum of the payload; corrupt entries are
// discarded with a warning, never served.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "sqrtlab/arith.hpp"

namespace sqrtlab {

u64 fnv1a64(std::string_view data);

struct CacheKey {
  std::string canonical;  // version|subcommand|params|seed
  u64 digest;
};

CacheKey make_cache_key(std::string_view version, std::string_view subcommand,
                        std::string_view canonical_params,
                        std::optional<u64> seed);

class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  /// Payload on a verified hit; nullopt on miss. Corrupt entries are
  /// removed, with a note to `warnings` when provided.
  std::optional<std::string> lookup(const CacheKey& key,
                                    std::ostream* warnings = nullptr) const;

  void store(const CacheKey& key, std::string_view payload) const;

 private:
  std::filesystem::path entry_path(const CacheKey& key) const;

  std::filesystem::path dir_;
};

}  // namespace sqrtlab

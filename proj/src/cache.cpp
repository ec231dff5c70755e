#include "sqrtlab/cache.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sqrtlab {

u64 fnv1a64(std::string_view data) {
  u64 hash = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001B3ull;
  }
  return hash;
}

CacheKey make_cache_key(std::string_view version, std::string_view subcommand,
                        std::string_view canonical_params,
                        std::optional<u64> seed) {
  std::string canonical;
  canonical += version;
  canonical += '|';
  canonical += subcommand;
  canonical += '|';
  canonical += canonical_params;
  canonical += '|';
  canonical += seed ? std::to_string(*seed) : "none";
  const u64 digest = fnv1a64(canonical);
  return CacheKey{std::move(canonical), digest};
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec)
    throw std::runtime_error("cache: cannot create directory " +
                             dir_.string() + ": " + ec.message());
}

std::filesystem::path ResultCache::entry_path(const CacheKey& key) const {
  std::ostringstream name;
  name << std::hex << key.digest;
  return dir_ / (name.str() + ".entry");
}

std::optional<std::string> ResultCache::lookup(const CacheKey& key,
                                               std::ostream* warnings) const {
  const auto path = entry_path(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;

  auto corrupt = [&](const char* why) -> std::optional<std::string> {
    if (warnings)
      *warnings << "warning: discarding corrupt cache entry " << path.string()
                << " (" << why << ")\n";
    in.close();
    std::error_code ec;
    std::filesystem::remove(path, ec);
    return std::nullopt;
  };

  std::string header;
  if (!std::getline(in, header)) return corrupt("empty");
  std::istringstream hs(header);
  std::string magic, key_field, fnv_field;
  if (!(hs >> magic >> key_field >> fnv_field) ||
      magic != "sqrtlab-cache-1")
    return corrupt("bad header");
  if (key_field != "key-fnv=" + std::to_string(fnv1a64(key.canonical)))
    return corrupt("key mismatch");

  std::string payload((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (fnv_field != "payload-fnv=" + std::to_string(fnv1a64(payload)))
    return corrupt("checksum mismatch");
  return payload;
}

void ResultCache::store(const CacheKey& key, std::string_view payload) const {
  const auto path = entry_path(key);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cache: cannot write " + tmp);
    out << "sqrtlab-cache-1 key-fnv=" << fnv1a64(key.canonical)
        << " payload-fnv=" << fnv1a64(payload) << "\n";
    out << payload;
    if (!out)
      throw std::runtime_error("cache: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sqrtlab

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "hirz/exceptional.hpp"

namespace hirz::cli {

struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CacheOptions {
    std::optional<std::filesystem::path> dir;   // empty: caching disabled
    unsigned jobs = 1;
};

// --cache beats HIRZ_CACHE, which beats $XDG_CACHE_HOME/hirz or ~/.cache/hirz.
std::optional<std::filesystem::path> resolve_cache_dir(const std::string& flag, bool disabled);

std::filesystem::path cache_file(const std::filesystem::path& dir, int e);

// Table for e covering at least rmax, read from and written back to the cache.
// A corrupt cache is reported on log and rebuilt; I/O failures throw CacheError.
ExceptionalTable load_table(int e, long long rmax, const CacheOptions& opt, std::ostream& log);

}  // namespace hirz::cli

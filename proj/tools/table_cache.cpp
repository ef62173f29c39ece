#include "table_cache.hpp"

#include <cstdlib>
#include <fstream>
#include <string>

namespace hirz::cli {

namespace fs = std::filesystem;

std::optional<fs::path> resolve_cache_dir(const std::string& flag, bool disabled) {
    if (disabled) return std::nullopt;
    if (!flag.empty()) return fs::path(flag);
    if (const char* env = std::getenv("HIRZ_CACHE"); env && *env) return fs::path(env);
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "hirz";
    if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "hirz";
    return std::nullopt;
}

fs::path cache_file(const fs::path& dir, int e) { return dir / ("exceptional-e" + std::to_string(e) + ".jsonl"); }

namespace {

void save(const fs::path& file, const ExceptionalTable& t) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    if (ec) throw CacheError("cannot create cache directory " + file.parent_path().string() + ": " + ec.message());
    fs::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw CacheError("cannot write cache file " + tmp.string());
        write_cache(os, t);
        if (!os) throw CacheError("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, file, ec);
    if (ec) throw CacheError("cannot replace cache file " + file.string() + ": " + ec.message());
}

}  // namespace

ExceptionalTable load_table(int e, long long rmax, const CacheOptions& opt, std::ostream& log) {
    if (!opt.dir) return build_table(e, rmax, opt.jobs);
    fs::path file = cache_file(*opt.dir, e);
    ExceptionalTable t;
    t.e = e;
    bool dirty = true;
    if (fs::exists(file)) {
        std::ifstream is(file);
        if (!is) throw CacheError("cannot read cache file " + file.string());
        std::string err;
        ExceptionalTable cached;
        if (read_cache(is, cached, &err) && cached.e == e) {
            t = std::move(cached);
            dirty = false;
        } else {
            log << "hirz: corrupt cache " << file.string() << " (" << (err.empty() ? "wrong surface" : err)
                << "); rebuilding\n";
        }
    }
    if (t.max_rank < rmax) {
        extend_table(t, rmax, opt.jobs);
        dirty = true;
    }
    if (dirty) save(file, t);
    return t;
}

}  // namespace hirz::cli

#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "chromo/modforms.hpp"

namespace chromo {

// On-disk store of rational q-expansions, one JSON file per series id.
// Entries are only served at prec >= the request; writes go through a rename.
class QCache {
public:
    enum class Outcome { Hit, Miss, Corrupt };

    explicit QCache(std::filesystem::path dir);

    // CHROMO_CACHE_DIR, then $XDG_CACHE_HOME/chromo, then ~/.cache/chromo
    static std::filesystem::path default_dir();

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(const std::string& id) const;

    std::optional<QSeries> lookup(const std::string& id, int prec, Outcome* why = nullptr);
    void store(const std::string& id, const QSeries& s);
    QSeries get(const std::string& id, int prec, const std::function<QSeries(int)>& compute,
                Outcome* why = nullptr);

    long hits() const { return hits_; }
    long misses() const { return misses_; }
    long corrupt() const { return corrupt_; }

    std::function<void(const std::string&)> warn;  // defaults to stderr

private:
    std::filesystem::path dir_;
    std::atomic<long> hits_{0}, misses_{0}, corrupt_{0};
};

// route eisenstein() through the cache
void install_qcache(QCache& c);
void uninstall_qcache();

}  // namespace chromo

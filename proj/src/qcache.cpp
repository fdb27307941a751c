#include "chromo/qcache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

namespace chromo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// FNV-1a, 64 bit
std::string hex_digest(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::atomic<long> tmp_counter{0};

// full coefficient list of a stored entry; throws on anything malformed
std::vector<Rat> read_entry(std::istream& in, const std::string& id)
{
    json j = json::parse(in);
    if (j.at("id").get<std::string>() != id) throw std::runtime_error("id mismatch");
    int have = j.at("prec").get<int>();
    auto& cs = j.at("coeffs");
    if (int(cs.size()) != have) throw std::runtime_error("length does not match prec");
    std::vector<Rat> v;
    v.reserve(have);
    for (auto& c : cs) v.push_back(parse_rat(c.get<std::string>()));
    return v;
}

}  // namespace

QCache::QCache(fs::path dir) : dir_(std::move(dir))
{
    fs::create_directories(dir_);
    warn = [](const std::string& m) { std::cerr << "warning: " << m << "\n"; };
}

fs::path QCache::default_dir()
{
    if (const char* e = std::getenv("CHROMO_CACHE_DIR"); e && *e) return e;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "chromo";
    if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "chromo";
    return fs::temp_directory_path() / "chromo-cache";
}

fs::path QCache::path_for(const std::string& id) const
{
    return dir_ / (hex_digest(id) + ".json");
}

std::optional<QSeries> QCache::lookup(const std::string& id, int prec, Outcome* why)
{
    auto set = [&](Outcome o) {
        if (why) *why = o;
    };
    auto path = path_for(id);
    std::ifstream in(path);
    if (!in) {
        ++misses_;
        set(Outcome::Miss);
        return std::nullopt;
    }
    try {
        auto v = read_entry(in, id);
        if (int(v.size()) < prec) {
            ++misses_;
            set(Outcome::Miss);
            return std::nullopt;
        }
        v.resize(prec);
        ++hits_;
        set(Outcome::Hit);
        return QSeries::rational(std::move(v));
    } catch (const std::exception& e) {
        ++corrupt_;
        set(Outcome::Corrupt);
        if (warn) warn("corrupt cache entry " + path.string() + " (" + e.what() + "), recomputing");
        return std::nullopt;
    }
}

void QCache::store(const std::string& id, const QSeries& s)
{
    if (s.dom != Domain::Rational) throw precondition_error("only rational series are cached");
    json j;
    j["id"] = id;
    j["prec"] = s.prec();
    json cs = json::array();
    for (auto& c : s.q) cs.push_back(rat_frac(c));
    j["coeffs"] = std::move(cs);

    auto path = path_for(id);
    // keep a longer entry already on disk
    {
        std::ifstream in(path);
        if (in) {
            try {
                if (int(read_entry(in, id).size()) >= s.prec()) return;
            } catch (const std::exception&) {
            }
        }
    }
    auto tmp = dir_ / (path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
                       std::to_string(tmp_counter++));
    {
        std::ofstream out(tmp);
        out << j.dump() << "\n";
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

QSeries QCache::get(const std::string& id, int prec, const std::function<QSeries(int)>& compute, Outcome* why)
{
    if (auto s = lookup(id, prec, why)) return *s;
    QSeries s = compute(prec);
    store(id, s);
    return s;
}

void install_qcache(QCache& c)
{
    SeriesStore st;
    st.load = [&c](const std::string& id, int prec) { return c.lookup(id, prec); };
    st.save = [&c](const std::string& id, const QSeries& s) { c.store(id, s); };
    set_series_store(std::move(st));
}

void uninstall_qcache()
{
    set_series_store({});
}

}  // namespace chromo

#include <chrono>
#include <iostream>
#include <memory>

#include "chromo/congruence.hpp"
#include "chromo/qcache.hpp"
#include "commands.hpp"

using namespace chromo;
using namespace chromo::cli;
using nlohmann::json;

namespace {

constexpr int kExitPrecondition = 2;
constexpr int kExitBudget = 3;
constexpr int kExitUsage = 64;

void report_error(const Globals& g, const std::string& command, const std::string& kind, const std::string& msg)
{
    if (g.json) {
        json j = {{"command", command}, {"error", {{"kind", kind}, {"message", msg}}}};
        std::cout << j.dump(2) << "\n";
    }
    std::cerr << "error: " << msg << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app("exact arithmetic for chromatic homotopy examples", "chromo");
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_flag("--json", g.json, "emit a JSON report");
    app.add_option("--prec", g.prec, "q-expansion precision (default: command specific)");
    app.add_option("--cache-dir", g.cache_dir, "q-expansion cache directory (env CHROMO_CACHE_DIR)");
    app.add_flag("--no-cache", g.no_cache, "do not read or write the q-expansion cache");
    app.add_option("--mmax", g.mmax, "allowed pole order at the cusp")->check(CLI::NonNegativeNumber);
    app.add_option("--budget", g.budget, "enumeration budget")->check(CLI::PositiveNumber);
    app.add_option("--space", g.space, "witness space for congruence B: old or extended");
    app.add_flag("--timing", g.timing, "include wall time in the report");

    Dispatch d;
    register_commands(app, g, d);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }
    if (!d.action) {
        std::cerr << app.help();
        return kExitUsage;
    }

    std::unique_ptr<QCache> cache;
    try {
        if (!g.no_cache) {
            cache = std::make_unique<QCache>(g.cache_dir.empty() ? QCache::default_dir() : std::filesystem::path(g.cache_dir));
            install_qcache(*cache);
        }
    } catch (const std::exception& e) {
        std::cerr << "warning: cache disabled (" << e.what() << ")\n";
        cache.reset();
    }

    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
        r = d.action();
    } catch (const precondition_error& e) {
        report_error(g, d.name, "precondition", e.what());
        return kExitPrecondition;
    } catch (const budget_error& e) {
        report_error(g, d.name, dynamic_cast<const precision_error*>(&e) ? "precision" : "budget", e.what());
        return kExitBudget;
    } catch (const std::exception& e) {
        report_error(g, d.name, "internal", e.what());
        return 1;
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    uninstall_qcache();

    if (g.json) {
        json j = {{"command", d.name},
                  {"inputs", r.inputs},
                  {"outputs", r.outputs},
                  {"versions", {{"chromo", kVersion}, {"schema", kSchemaVersion}}}};
        j["precision_used"] = r.precision_used >= 0 ? json(r.precision_used) : json(nullptr);
        // wall time would break byte stability, so it is opt-in
        if (g.timing) j["timing_ms"] = ms;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << r.text << "\n";
        if (g.timing) std::cout << "time " << ms << " ms\n";
    }
    return 0;
}

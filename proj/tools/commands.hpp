#pragma once

#include <functional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

namespace chromo::cli {

struct Globals {
    bool json = false;
    int prec = 0;  // 0: command default
    std::string cache_dir;
    bool no_cache = false;
    int mmax = 0;
    long budget = 100000;
    std::string space = "extended";
    bool timing = false;
};

struct Result {
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    std::string text;
    int precision_used = -1;
};

// the chosen leaf fills name and action
struct Dispatch {
    std::string name;
    std::function<Result()> action;
};

void register_commands(CLI::App& app, const Globals& g, Dispatch& d);

constexpr const char* kVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

}  // namespace chromo::cli

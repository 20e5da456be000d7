#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace seplab {

inline const char* kVersion = "sep-lab 1.0.0";

/// Reproducibility record written next to every CSV. Re-running with the
/// embedded config and master seed reproduces the CSV bytes.
class RunManifest {
  public:
    RunManifest(std::string command_line, nlohmann::json config, std::uint64_t master_seed)
        : start_(std::chrono::steady_clock::now()) {
        j_["tool"] = kVersion;
        j_["command_line"] = std::move(command_line);
        j_["config"] = std::move(config);
        j_["master_seed"] = master_seed;
        j_["derived_seeds"] = nlohmann::json::array();
        j_["outputs"] = nlohmann::json::array();
    }

    void record_seed(const std::string& task, std::uint64_t seed) {
        j_["derived_seeds"].push_back({{"task", task}, {"seed", seed}});
    }

    void record_output(const std::string& path, const std::string& digest_hex) {
        j_["outputs"].push_back({{"path", path}, {"fnv1a64", digest_hex}});
    }

    void write(const std::string& path) {
        j_["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::ofstream f(path);
        f << j_.dump(2) << "\n";
    }

    const nlohmann::json& json() const { return j_; }

  private:
    nlohmann::json j_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace seplab

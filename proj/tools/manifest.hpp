#pragma once

#include "qpl/io/json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qpl::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Resolved command line plus a hash of every file the run wrote. Rerunning
/// `command` with `args` in a fresh output directory must reproduce the hashes.
struct Manifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> args;  // option name, resolved value
    std::vector<std::pair<std::string, std::string>> outputs;  // file relative to the output dir, sha256

    [[nodiscard]] Json to_json() const;
    static Manifest from_json(const Json& j);
};

}  // namespace qpl::cli

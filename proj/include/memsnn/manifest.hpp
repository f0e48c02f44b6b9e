#pragma once

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace memsnn {

struct Config;

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// `manifest.json` in `dir`: experiment name, code version, the resolved
/// config (INI text) and a SHA-256 per output file, plus free-form results.
void write_manifest(const std::filesystem::path& dir, std::string_view experiment,
                    const Config& config, const std::vector<std::filesystem::path>& outputs,
                    const nlohmann::json& results);

std::string_view code_version();

} // namespace memsnn

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace glround::cli {

inline constexpr const char* kToolVersion = "0.3.0";

/// Digest of the canonical (sorted-key, compact) dump of a config.
std::string config_digest(const nlohmann::json& config);

/// Appends one line to <dir>/records.jsonl. Earlier lines are never touched.
void append_record(const std::filesystem::path& dir, const std::string& command, const nlohmann::json& config,
                   const nlohmann::json& payload);

/// Reads a config to re-run: a JSON object with "command" and "config", or a
/// records.jsonl file, from which line `index` (1-based; 0 = last) is taken.
nlohmann::json load_run_config(const std::filesystem::path& file, std::size_t index);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace glround::cli

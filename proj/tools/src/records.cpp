#include "records.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <vector>

#include "glround/errors.hpp"
#include "glround/json_codec.hpp"

namespace glround::cli {

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

// Where results land is not part of the experiment.
std::string config_digest(const nlohmann::json& config) {
  nlohmann::json c = config;
  if (c.is_object()) c.erase("output_dir");
  return digest_hex(c.dump());
}

void append_record(const std::filesystem::path& dir, const std::string& command, const nlohmann::json& config,
                   const nlohmann::json& payload) {
  std::filesystem::create_directories(dir);
  nlohmann::json record{{"timestamp", utc_timestamp()},
                        {"command", command},
                        {"config_digest", config_digest(config)},
                        {"config", config},
                        {"payload", payload},
                        {"tool_version", kToolVersion},
                        {"schema_version", kSchemaVersion}};
  std::ofstream out(dir / "records.jsonl", std::ios::app);
  if (!out) throw Error("cannot append to " + (dir / "records.jsonl").string());
  out << record.dump() << '\n';
}

nlohmann::json load_run_config(const std::filesystem::path& file, std::size_t index) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open config file '" + file.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  nlohmann::json chosen;
  try {
    chosen = nlohmann::json::parse(text);
    if (index > 1) throw ParseError("config file holds a single record");
  } catch (const nlohmann::json::parse_error&) {
    // Not a single document: treat as JSON lines.
    std::vector<nlohmann::json> lines;
    std::istringstream ls(text);
    std::string line;
    while (std::getline(ls, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        lines.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("config file line " + std::to_string(lines.size() + 1) + ": " + e.what());
      }
    }
    if (lines.empty()) throw ParseError("config file is empty");
    if (index > lines.size()) throw ParseError("config file has only " + std::to_string(lines.size()) + " records");
    chosen = index == 0 ? lines.back() : lines[index - 1];
  }
  if (!chosen.is_object() || !chosen.contains("command") || !chosen.contains("config"))
    throw ParseError("config file must hold {\"command\": ..., \"config\": {...}}");
  return chosen;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace glround::cli

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sgmproxy::cli {

/// Regular files in `dir` whose extension is in `extensions`, keyed by stem.
/// Throws if two files share a stem.
std::map<std::string, std::filesystem::path> files_by_stem(
    const std::filesystem::path& dir, const std::vector<std::string>& extensions);

struct StemMatch {
  std::vector<std::string> matched;  // sorted
  std::vector<std::string> only_a;
  std::vector<std::string> only_b;
};

StemMatch match_stems(const std::map<std::string, std::filesystem::path>& a,
                      const std::map<std::string, std::filesystem::path>& b);

extern const std::vector<std::string> kImageExtensions;
extern const std::vector<std::string> kDisparityExtensions;

void write_text(const std::filesystem::path& path, const std::string& text);
std::string dump_json(const nlohmann::json& j);
std::string fixed6(double v);

}  // namespace sgmproxy::cli

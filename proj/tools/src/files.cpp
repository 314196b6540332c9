#include "files.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sgmproxy/error.hpp"

namespace sgmproxy::cli {

namespace fs = std::filesystem;

const std::vector<std::string> kImageExtensions = {".png", ".pgm", ".ppm"};
const std::vector<std::string> kDisparityExtensions = {".png", ".pfm"};

std::map<std::string, fs::path> files_by_stem(const fs::path& dir,
                                              const std::vector<std::string>& extensions) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (std::find(extensions.begin(), extensions.end(), ext) == extensions.end()) continue;
    const std::string stem = p.stem().string();
    if (!out.emplace(stem, p).second) {
      throw IoError("duplicate stem '" + stem + "' in " + dir.string());
    }
  }
  return out;
}

StemMatch match_stems(const std::map<std::string, fs::path>& a,
                      const std::map<std::string, fs::path>& b) {
  StemMatch m;
  for (const auto& [stem, path] : a) {
    (b.count(stem) ? m.matched : m.only_a).push_back(stem);
  }
  for (const auto& [stem, path] : b) {
    if (!a.count(stem)) m.only_b.push_back(stem);
  }
  return m;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace sgmproxy::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nslab {

inline constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

/// Run manifest: config echo, seeds, file inventory with content hashes, and
/// timing metadata. The manifest hash covers the emitted files, so re-running
/// with the recorded config reproduces bit-identical snapshots.
class RunManifest {
  public:
    RunManifest(std::string command, std::map<std::string, std::string> config_echo,
                std::uint64_t seed);

    void add_file(const std::filesystem::path& path);
    void add_timing(const std::string& name, double seconds);

    /// Writes manifest.json into the directory.
    void write(const std::filesystem::path& directory) const;

  private:
    std::string command_;
    std::map<std::string, std::string> config_;
    std::uint64_t seed_;
    struct FileEntry {
        std::string name;
        std::uintmax_t bytes;
        std::uint64_t hash;
    };
    std::vector<FileEntry> files_;
    std::map<std::string, double> timings_;
};

}  // namespace nslab

#include "nslab/manifest.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

#include "nslab/common.hpp"

namespace nslab {

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot hash missing file '" + path.string() + "'");
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[1 << 16];
    while (in) {
        in.read(buffer, sizeof(buffer));
        const auto got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

RunManifest::RunManifest(std::string command, std::map<std::string, std::string> config_echo,
                         std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config_echo)), seed_(seed) {}

void RunManifest::add_file(const std::filesystem::path& path) {
    files_.push_back({path.filename().string(), std::filesystem::file_size(path),
                      fnv1a64_file(path)});
}

void RunManifest::add_timing(const std::string& name, double seconds) {
    timings_[name] = seconds;
}

void RunManifest::write(const std::filesystem::path& directory) const {
    nlohmann::json j;
    j["schema"] = "nslab-manifest-v1";
    j["tool"] = "ns-lab";
    j["version"] = kToolVersion;
    j["command"] = command_;
    j["config"] = config_;
    j["seed"] = seed_;

    auto files = files_;
    std::sort(files.begin(), files.end(),
              [](const FileEntry& a, const FileEntry& b) { return a.name < b.name; });
    std::string digest;
    nlohmann::json jfiles = nlohmann::json::array();
    char hex[32];
    for (const auto& f : files) {
        std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(f.hash));
        jfiles.push_back({{"path", f.name}, {"bytes", f.bytes}, {"fnv1a64", hex}});
        digest += f.name + ":" + hex + "\n";
    }
    j["files"] = jfiles;
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(digest.data(), digest.size())));
    j["manifest_hash"] = hex;
    j["timings"] = timings_;

    std::ofstream out(directory / "manifest.json");
    if (!out) throw Error("cannot write manifest in '" + directory.string() + "'");
    out << j.dump(2) << "\n";
}

}  // namespace nslab

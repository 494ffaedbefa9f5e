#pragma once

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <vector>

namespace noveltree::oracles {

// Line-delimited JSON log of queries and nodes. Records are kept in memory and,
// when a path is given, appended to the file as they arrive. Thread safe.
class Transcript {
public:
    Transcript() = default;
    explicit Transcript(const std::filesystem::path &path, bool append = false);

    // Adds a "seq" field (0-based arrival index) and stores the record.
    void write(nlohmann::json record);

    std::vector<nlohmann::json> records() const;
    std::size_t size() const;
    const std::optional<std::filesystem::path> &path() const { return path_; }

    static std::vector<nlohmann::json> read(const std::filesystem::path &path);

private:
    mutable std::mutex mutex_;
    std::vector<nlohmann::json> records_;
    std::optional<std::filesystem::path> path_;
    std::ofstream out_;
};

} // namespace noveltree::oracles

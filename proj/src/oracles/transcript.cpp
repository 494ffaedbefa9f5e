#include "noveltree/oracles/transcript.hpp"

#include "noveltree/errors.hpp"

#include <sstream>

namespace noveltree::oracles {

Transcript::Transcript(const std::filesystem::path &path, bool append) : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, append ? std::ios::app : std::ios::trunc);
    if (!out_) throw Error("cannot open transcript " + path.string());
}

void Transcript::write(nlohmann::json record) {
    std::lock_guard lock(mutex_);
    record["seq"] = records_.size();
    if (out_.is_open()) {
        out_ << record.dump() << '\n';
        out_.flush();
    }
    records_.push_back(std::move(record));
}

std::vector<nlohmann::json> Transcript::records() const {
    std::lock_guard lock(mutex_);
    return records_;
}

std::size_t Transcript::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

std::vector<nlohmann::json> Transcript::read(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read transcript " + path.string());
    std::vector<nlohmann::json> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            out.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::parse_error &) {
            // A run killed mid-write leaves a truncated last line.
            break;
        }
    }
    return out;
}

} // namespace noveltree::oracles

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace viscsgn {

/// Output file written to "<path>.tmp" and renamed on commit, so readers never
/// see a partially written file. Uncommitted files are removed on destruction.
class AtomicFile {
public:
    explicit AtomicFile(std::filesystem::path path);
    ~AtomicFile();
    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;

    std::ofstream& stream() { return out_; }
    void commit();

private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

/// Convenience wrapper: atomically replaces path with contents.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace viscsgn

#include "viscsgn/io.hpp"

#include "viscsgn/error.hpp"

namespace viscsgn {

AtomicFile::AtomicFile(std::filesystem::path path) : path_(std::move(path)) {
    tmp_ = path_;
    tmp_ += ".tmp";
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error("cannot open " + tmp_.string() + " for writing");
}

AtomicFile::~AtomicFile() {
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(tmp_, ec);
    }
}

void AtomicFile::commit() {
    out_.flush();
    if (!out_) throw Error("write failed for " + tmp_.string());
    out_.close();
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    AtomicFile f(path);
    f.stream() << contents;
    f.commit();
}

}  // namespace viscsgn

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace smforge::cli {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string readFile(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file.
void writeFileAtomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace smforge::cli

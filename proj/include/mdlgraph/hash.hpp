#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mdlgraph {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's bytes; throws IoError when unreadable.
std::string sha256_file(const std::filesystem::path& path);

} // namespace mdlgraph

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chordtension {

std::string readTextFile(const std::string& path);
std::vector<std::uint8_t> readBinaryFile(const std::string& path);

void writeTextFile(const std::string& path, std::string_view content);
void writeBinaryFile(const std::string& path, std::span<const std::uint8_t> content);

}  // namespace chordtension

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace edgevo {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the file and 1-based line number.
struct ParseError : std::runtime_error {
  ParseError(const std::filesystem::path& file, int line, const std::string& what)
      : std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  int line_number;
};

}  // namespace edgevo

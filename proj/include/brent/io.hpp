#ifndef BRENT_IO_HPP
#define BRENT_IO_HPP

#include "brent/types.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace brent {

enum class AlgorithmFormat { json, text };

std::string to_string(AlgorithmFormat f);

/// Parse an algorithm from raw bytes.
///
/// JSON layout: {"format": {"m","n","p"}, "length": r, "terms": [{"u","v","w"}]}
/// with entries as integers or "num/den" strings. Text layout: header line
/// "m n p r", then per term the u rows, v rows and w rows as whitespace
/// separated entries, blocks separated by blank lines.
Algorithm parse_algorithm(const std::string& bytes, AlgorithmFormat format);

/// Reads and parses a file. Without a hint the format is taken from the
/// extension (".json") or a leading '{'.
Algorithm parse_algorithm_file(const std::filesystem::path& path,
                               std::optional<AlgorithmFormat> hint = std::nullopt);

/// Canonical serialization; parse(serialize(q)) == q and serializing a
/// parsed canonical JSON file reproduces it byte for byte.
std::string serialize_algorithm(const Algorithm& q, AlgorithmFormat format);

void write_algorithm_file(const std::filesystem::path& path, const Algorithm& q,
                          std::optional<AlgorithmFormat> hint = std::nullopt);

}  // namespace brent

#endif

// io.hpp: deterministic text formatting and CSV/JSON writers.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wgf {

// Shortest round-trip representation; identical bytes for identical doubles.
std::string format_double(double value);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t value);

// Accumulates rows in memory and writes them in one go; rows keep insertion order.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    void add_row(const std::vector<std::string>& cells);

    std::string str() const;
    // Writes the table and returns the FNV-1a digest of the written bytes.
    std::string write(const std::filesystem::path& path) const;

    std::size_t rows() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
};

// Writes text verbatim and returns its digest.
std::string write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace wgf

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lloqss {

// Minimal CSV writer: fixed column set, %.12g numeric formatting, atomic
// replace on write so partially-written files never appear under the final
// name.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_row(std::vector<std::string> cells);

    static std::string fmt(double v);
    static std::string fmt(std::uint64_t v);
    static std::string fmt(int v);

    std::string to_string() const;
    void write_atomic(const std::filesystem::path& path) const;

    std::size_t rows() const { return rows_.size(); }

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace lloqss

#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pathsum::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest round-trip representation; locale independent.
std::string format_number(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
              const std::string& comment = "");
    void row(std::initializer_list<double> values);
    void row(const std::vector<double>& values);
    void row_text(const std::vector<std::string>& cells);
    void close();

private:
    std::ofstream out_;
    std::size_t columns_;
    std::filesystem::path path_;
};

std::filesystem::path manifest_path(const std::filesystem::path& artifact);
void write_manifest(const std::filesystem::path& artifact, const nlohmann::json& manifest);

}  // namespace pathsum::io

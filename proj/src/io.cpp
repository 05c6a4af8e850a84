#include "pathsum/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace pathsum::io {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::string& comment)
    : out_(path, std::ios::binary), columns_(header.size()), path_(path) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    if (!comment.empty()) out_ << "# " << comment << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
}

void CsvWriter::row_text(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw IoError("write failed for " + path_.string());
}

std::filesystem::path manifest_path(const std::filesystem::path& artifact) {
    auto p = artifact;
    p += ".manifest.json";
    return p;
}

void write_manifest(const std::filesystem::path& artifact, const nlohmann::json& manifest) {
    std::ofstream out(manifest_path(artifact), std::ios::binary);
    if (!out) throw IoError("cannot open manifest for " + artifact.string());
    out << manifest.dump(2) << '\n';
    if (!out) throw IoError("manifest write failed for " + artifact.string());
}

}  // namespace pathsum::io

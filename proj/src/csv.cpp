#include "fkpp/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fkpp/error.hpp"

namespace fkpp::app {

CsvTable::CsvTable(std::vector<std::string> columns, int precision)
    : columns_(std::move(columns)), precision_(precision) {
    require(!columns_.empty(), ErrorKind::InvalidArgument, "a table needs at least one column");
}

std::string CsvTable::header() const {
    std::string h;
    for (std::size_t i = 0; i < columns_.size(); ++i) h += (i ? "," : "") + columns_[i];
    return h + "\n";
}

void CsvTable::row(const std::vector<double>& values) {
    require(values.size() == columns_.size(), ErrorKind::InvalidArgument, "row width does not match the header");
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.*g", precision_, values[i]);
        if (i) body_ += ',';
        body_ += buf;
    }
    body_ += '\n';
    ++rows_;
}

void CsvTable::text_row(const std::vector<std::string>& cells) {
    require(cells.size() == columns_.size(), ErrorKind::InvalidArgument, "row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        const auto& c = cells[i];
        if (c.find_first_of(",\"\n") == std::string::npos) {
            body_ += c;
            continue;
        }
        body_ += '"';
        for (char ch : c) body_ += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        body_ += '"';
    }
    body_ += '\n';
    ++rows_;
}

Artifacts::Artifacts(std::string dir, nlohmann::ordered_json meta) : dir_(std::move(dir)), meta_(std::move(meta)) {}

void Artifacts::add_csv(const std::string& name, const CsvTable& table, const nlohmann::ordered_json& extra) {
    files_[name] = table.str();
    nlohmann::ordered_json m;
    m["file"] = name;
    m["columns"] = table.columns();
    m["rows"] = table.rows();
    for (auto it = meta_.begin(); it != meta_.end(); ++it) m[it.key()] = it.value();
    if (!extra.is_null()) m["results"] = extra;
    files_[name + ".meta"] = m.dump(2) + "\n";
}

void Artifacts::add_text(const std::string& name, std::string content) { files_[name] = std::move(content); }

void Artifacts::commit() const {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorKind::InvalidArgument, "cannot create output directory '" + dir_ + "': " + ec.message());
    for (const auto& [name, content] : files_) {
        const fs::path p = fs::path(dir_) / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + p.string() + "'");
    }
}

}  // namespace fkpp::app

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace fkpp::app {

/// Numeric table with a header row. Values print with %.{precision}g, so
/// equal inputs give byte-identical files.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns, int precision = 12);

    void row(const std::vector<double>& values);
    /// Text cells, quoted when they contain a comma or quote.
    void text_row(const std::vector<std::string>& cells);
    std::size_t rows() const { return rows_; }
    const std::vector<std::string>& columns() const { return columns_; }
    std::string str() const { return header() + body_; }

private:
    std::string header() const;

    std::vector<std::string> columns_;
    int precision_;
    std::string body_;
    std::size_t rows_ = 0;
};

/// Files produced by one command. Nothing touches the disk until commit(),
/// so a failing command leaves no partial output.
class Artifacts {
public:
    /// `meta` goes into every sidecar (command, seed, resolved config).
    Artifacts(std::string dir, nlohmann::ordered_json meta);

    /// Adds name and name.meta; `extra` lands under "results" in the sidecar.
    void add_csv(const std::string& name, const CsvTable& table, const nlohmann::ordered_json& extra = {});
    void add_text(const std::string& name, std::string content);

    const std::map<std::string, std::string>& files() const { return files_; }
    const std::string& dir() const { return dir_; }
    void commit() const;

private:
    std::string dir_;
    nlohmann::ordered_json meta_;
    std::map<std::string, std::string> files_;
};

}  // namespace fkpp::app

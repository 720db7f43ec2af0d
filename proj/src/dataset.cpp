#include "cslearn/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cslearn/errors.hpp"

namespace cslearn {

int Variable::label_index(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return int(i);
    fail(Errc::Semantic, "variable '" + name + "' has no label '" + std::string(label) + "'");
}

CategoricalDataset::CategoricalDataset(std::vector<Variable> variables, std::vector<std::uint8_t> codes)
    : vars_(std::move(variables)), codes_(std::move(codes)) {
    if (vars_.empty()) fail(Errc::Semantic, "dataset has no columns");
    if (codes_.size() % vars_.size() != 0)
        fail(Errc::InvalidArgument, "dataset codes are not a multiple of the column count");
    rows_ = int(codes_.size() / vars_.size());
    if (rows_ == 0) fail(Errc::Semantic, "dataset has no rows");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const Variable& v = vars_[i];
        if (v.name.empty()) fail(Errc::Semantic, "dataset column with empty name");
        if (v.cardinality() < 2)
            fail(Errc::Semantic, "column '" + v.name + "' has fewer than two distinct values");
        for (std::size_t j = i + 1; j < vars_.size(); ++j)
            if (v.name == vars_[j].name)
                fail(Errc::Semantic, "duplicate column name '" + v.name + "'");
    }
    for (int r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < vars_.size(); ++c)
            if (codes_[std::size_t(r) * vars_.size() + c] >= vars_[c].cardinality())
                fail(Errc::InvalidArgument, "code out of range in column '" + vars_[c].name + "'");
}

int CategoricalDataset::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return int(i);
    fail(Errc::UnknownVariable, "unknown variable '" + std::string(name) + "'");
}

std::vector<std::string> CategoricalDataset::column_names() const {
    std::vector<std::string> out;
    for (const Variable& v : vars_) out.push_back(v.name);
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string_view cell =
            comma == std::string_view::npos ? line.substr(start) : line.substr(start, comma - start);
        out.emplace_back(trim(cell));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace

CategoricalDataset read_csv_dataset(std::string_view text) {
    std::vector<std::vector<std::string>> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (trim(raw).empty()) continue;
        lines.push_back(split_csv_line(raw));
    }
    if (lines.empty()) fail(Errc::Syntax, "csv: empty input");
    const std::vector<std::string>& header = lines[0];
    const std::size_t ncol = header.size();
    for (const std::string& h : header)
        if (h.empty()) fail(Errc::Syntax, "csv: empty column name in header");
    if (lines.size() < 2) fail(Errc::Semantic, "csv: no data rows");

    // First pass collects distinct values per column.
    std::vector<std::map<std::string, int>> values(ncol);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        if (lines[r].size() != ncol)
            fail(Errc::Syntax, "csv: row " + std::to_string(r) + " has " + std::to_string(lines[r].size()) +
                                   " cells, expected " + std::to_string(ncol));
        for (std::size_t c = 0; c < ncol; ++c) {
            if (lines[r][c].empty())
                fail(Errc::Syntax, "csv: empty cell at row " + std::to_string(r) + ", column '" + header[c] + "'");
            values[c].emplace(lines[r][c], 0);
        }
    }

    std::vector<Variable> vars(ncol);
    for (std::size_t c = 0; c < ncol; ++c) {
        vars[c].name = header[c];
        for (auto& kv : values[c]) {  // std::map iterates keys in lexicographic order
            kv.second = int(vars[c].labels.size());
            vars[c].labels.push_back(kv.first);
        }
        if (vars[c].labels.size() < 2)
            fail(Errc::Semantic, "csv: column '" + header[c] + "' is constant");
        if (vars[c].labels.size() > 255)
            fail(Errc::Semantic, "csv: column '" + header[c] + "' has more than 255 levels");
    }

    std::vector<std::uint8_t> codes;
    codes.reserve((lines.size() - 1) * ncol);
    for (std::size_t r = 1; r < lines.size(); ++r)
        for (std::size_t c = 0; c < ncol; ++c)
            codes.push_back(std::uint8_t(values[c].at(lines[r][c])));

    return CategoricalDataset(std::move(vars), std::move(codes));
}

CategoricalDataset read_csv_dataset_file(const std::string& path) {
    return read_csv_dataset(read_text_file(path));
}

std::string write_csv_dataset(const CategoricalDataset& ds) {
    std::string out;
    for (int c = 0; c < ds.variable_count(); ++c) {
        if (c) out += ',';
        out += ds.variable(c).name;
    }
    out += '\n';
    for (int r = 0; r < ds.row_count(); ++r) {
        for (int c = 0; c < ds.variable_count(); ++c) {
            if (c) out += ',';
            out += ds.variable(c).labels[ds.value(r, c)];
        }
        out += '\n';
    }
    return out;
}

std::string write_csv_table(const ContinuousTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    char buf[40];
    for (int r = 0; r < table.rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out += ',';
            std::snprintf(buf, sizeof buf, "%.17g", table.at(r, int(c)));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::Io, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file_atomic(const std::string& path, std::string_view content) {
    std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(Errc::Io, "cannot write file: " + tmp.string());
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) fail(Errc::Io, "short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

} // namespace cslearn

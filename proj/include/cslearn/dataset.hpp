#ifndef CSLEARN_DATASET_HPP
#define CSLEARN_DATASET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cslearn {

// A categorical variable: name plus its ordered label set.  The position of
// a label is the code stored in datasets and CPT rows.
struct Variable {
    std::string name;
    std::vector<std::string> labels;

    int cardinality() const { return int(labels.size()); }
    int label_index(std::string_view label) const;  // throws Semantic if absent
};

// Fully categorical data table, codes stored row-major.
class CategoricalDataset {
public:
    CategoricalDataset(std::vector<Variable> variables, std::vector<std::uint8_t> codes);

    int variable_count() const { return int(vars_.size()); }
    int row_count() const { return rows_; }
    const Variable& variable(int col) const { return vars_[col]; }
    const std::vector<Variable>& variables() const { return vars_; }
    int cardinality(int col) const { return vars_[col].cardinality(); }
    std::uint8_t value(int row, int col) const { return codes_[std::size_t(row) * vars_.size() + col]; }
    int column_index(std::string_view name) const;  // throws UnknownVariable
    std::vector<std::string> column_names() const;

private:
    std::vector<Variable> vars_;
    std::vector<std::uint8_t> codes_;
    int rows_ = 0;
};

// CSV dialect: first line is the header, comma separated, no quoting, values
// taken verbatim after trimming surrounding spaces.  Per-column label sets
// are the distinct values in file order sorted lexicographically (byte-wise),
// so code assignment does not depend on row order.
CategoricalDataset read_csv_dataset(std::string_view text);
CategoricalDataset read_csv_dataset_file(const std::string& path);
std::string write_csv_dataset(const CategoricalDataset& ds);

// Numeric table used by the synthetic generator before discretization.
struct ContinuousTable {
    std::vector<std::string> columns;
    std::vector<double> values;  // row-major
    int rows = 0;

    double at(int row, int col) const { return values[std::size_t(row) * columns.size() + col]; }
};

// Numbers rendered with up to 17 significant digits (round-trip exact).
std::string write_csv_table(const ContinuousTable& table);

std::string read_text_file(const std::string& path);
void write_text_file_atomic(const std::string& path, std::string_view content);

} // namespace cslearn

#endif

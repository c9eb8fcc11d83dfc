#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fairgm_cli {

struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // raw cells, row major
};

DataTable read_csv(const std::string& path);

// Numeric feature matrix + group labels from one designated column.
struct LoadedData {
    std::vector<double> values;  // n x p row major
    std::vector<std::string> group_labels;
    long n = 0;
    long p = 0;
    std::vector<std::string> feature_names;
};

LoadedData split_group_column(const DataTable& table, const std::string& group_col);

// Zero mean, unit variance per column, applied to the whole dataset before
// grouping.
void standardize_columns(LoadedData& data);

std::vector<double> read_matrix_csv(const std::string& path, long& p);
void write_matrix_csv(const std::string& path, const double* values, long rows, long cols);

void write_data_csv(const std::string& path, const double* values, long n, long p,
                    const std::vector<int>& group_ids_1based);

std::string format_full(double v);  // round-trip-safe decimal form

uint64_t fnv1a64_file(const std::string& path);

}  // namespace fairgm_cli

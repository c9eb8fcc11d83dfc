#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fairgm_cli {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

DataTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    DataTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (first) {
            table.columns = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.columns.size())
                throw std::runtime_error(path + ": ragged row with " +
                                         std::to_string(cells.size()) + " cells");
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) throw std::runtime_error(path + ": empty file");
    return table;
}

LoadedData split_group_column(const DataTable& table, const std::string& group_col) {
    long group_idx = -1;
    for (std::size_t j = 0; j < table.columns.size(); ++j)
        if (table.columns[j] == group_col) group_idx = static_cast<long>(j);
    if (group_idx < 0) throw std::runtime_error("group column '" + group_col + "' not found");

    LoadedData out;
    out.n = static_cast<long>(table.rows.size());
    out.p = static_cast<long>(table.columns.size()) - 1;
    if (out.p < 1) throw std::runtime_error("no feature columns besides the group column");
    for (std::size_t j = 0; j < table.columns.size(); ++j)
        if (static_cast<long>(j) != group_idx) out.feature_names.push_back(table.columns[j]);
    out.values.reserve(out.n * out.p);
    out.group_labels.reserve(out.n);
    for (const auto& row : table.rows) {
        out.group_labels.push_back(row[group_idx]);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (static_cast<long>(j) == group_idx) continue;
            try {
                std::size_t pos = 0;
                const double v = std::stod(row[j], &pos);
                if (pos != row[j].size()) throw std::invalid_argument(row[j]);
                out.values.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error("non-numeric cell '" + row[j] + "' in column " +
                                         table.columns[j]);
            }
        }
    }
    return out;
}

void standardize_columns(LoadedData& data) {
    for (long j = 0; j < data.p; ++j) {
        double mean = 0.0;
        for (long i = 0; i < data.n; ++i) mean += data.values[i * data.p + j];
        mean /= data.n;
        double var = 0.0;
        for (long i = 0; i < data.n; ++i) {
            const double d = data.values[i * data.p + j] - mean;
            var += d * d;
        }
        var /= data.n;
        const double sd = std::sqrt(var);
        if (sd == 0.0) throw std::runtime_error("cannot standardize a constant column");
        for (long i = 0; i < data.n; ++i)
            data.values[i * data.p + j] = (data.values[i * data.p + j] - mean) / sd;
    }
}

std::vector<double> read_matrix_csv(const std::string& path, long& p) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> values;
    std::string line;
    long cols = -1, rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cols < 0)
            cols = static_cast<long>(cells.size());
        else if (static_cast<long>(cells.size()) != cols)
            throw std::runtime_error(path + ": ragged matrix row");
        for (const auto& c : cells) values.push_back(std::stod(c));
        ++rows;
    }
    if (rows != cols) throw std::runtime_error(path + ": matrix must be square");
    p = rows;
    return values;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix_csv(const std::string& path, const double* values, long rows, long cols) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (long i = 0; i < rows; ++i) {
        for (long j = 0; j < cols; ++j) {
            if (j) out << ',';
            out << format_full(values[i * cols + j]);
        }
        out << '\n';
    }
}

void write_data_csv(const std::string& path, const double* values, long n, long p,
                    const std::vector<int>& group_ids_1based) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "group";
    for (long j = 1; j <= p; ++j) out << ",x" << j;
    out << '\n';
    for (long i = 0; i < n; ++i) {
        out << group_ids_1based[i];
        for (long j = 0; j < p; ++j) out << ',' << format_full(values[i * p + j]);
        out << '\n';
    }
}

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

}  // namespace fairgm_cli

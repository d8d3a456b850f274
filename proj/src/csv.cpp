#include "rmi/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rmi {

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Matrix& values) {
    if (values.size() > 0 && values.cols() != static_cast<long>(columns.size()))
        throw ConfigError("write_csv: " + std::to_string(columns.size()) +
                          " column names for " + std::to_string(values.cols()) +
                          " columns");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    std::string line;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j) line += ',';
        line += columns[j];
    }
    line += '\n';
    out << line;
    char buf[32];
    for (long i = 0; i < values.rows(); ++i) {
        line.clear();
        for (long j = 0; j < values.cols(); ++j) {
            if (j) line += ',';
            std::snprintf(buf, sizeof(buf), "%.17g", values(i, j));
            line += buf;
        }
        line += '\n';
        out << line;
    }
    if (!out) throw ConfigError("write failed: " + path);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    CsvTable table;
    table.columns = split_line(line);
    const std::size_t n_cols = table.columns.size();
    std::vector<double> cells;
    long n_rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t start = 0, col = 0;
        const char* text = line.c_str();
        while (true) {
            char* end = nullptr;
            double v = std::strtod(text + start, &end);
            if (end == text + start)
                throw ConfigError(path + ": non-numeric cell in row " +
                                  std::to_string(n_rows + 1));
            cells.push_back(v);
            ++col;
            std::size_t used = static_cast<std::size_t>(end - text);
            if (used < line.size() && line[used] == ',') {
                start = used + 1;
            } else if (used >= line.size()) {
                break;
            } else {
                throw ConfigError(path + ": trailing characters in row " +
                                  std::to_string(n_rows + 1));
            }
        }
        if (col != n_cols)
            throw ConfigError(path + ": row " + std::to_string(n_rows + 1) + " has " +
                              std::to_string(col) + " cells, expected " +
                              std::to_string(n_cols));
        ++n_rows;
    }
    table.values.resize(n_rows, static_cast<long>(n_cols));
    for (long i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j)
            table.values(i, static_cast<long>(j)) = cells[i * n_cols + j];
    return table;
}

std::vector<std::string> dataset_columns(long n_dims) {
    std::vector<std::string> cols;
    cols.reserve(static_cast<std::size_t>(n_dims));
    for (long j = 1; j <= n_dims; ++j) cols.push_back("x" + std::to_string(j));
    return cols;
}

SampleBatch load_dataset(const std::string& path) {
    CsvTable table = read_csv(path);
    SampleBatch batch{std::move(table.values)};
    batch.validate();
    return batch;
}

Matrix load_labels(const std::string& path) {
    CsvTable table = read_csv(path);
    if (table.values.rows() < 1) throw ConfigError("labels CSV has no rows: " + path);
    return std::move(table.values);
}

}  // namespace rmi

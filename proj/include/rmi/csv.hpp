#pragma once

#include <string>
#include <vector>

#include "rmi/common.hpp"

namespace rmi {

// Formats a double with %.17g so that reading the text back reproduces the
// exact bit pattern (shortest-exact is not needed; 17 significant digits are).
std::string format_g17(double v);

struct CsvTable {
    std::vector<std::string> columns;
    Matrix values;  // n_rows x n_columns, fully numeric
};

// Writes a numeric CSV with a header row. All cells use format_g17 and lines
// end in '\n', so identical inputs produce byte-identical files.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Matrix& values);

// Reads a CSV produced by write_csv (or any fully numeric CSV with a header).
// Throws ConfigError on missing files, ragged rows, or non-numeric cells.
CsvTable read_csv(const std::string& path);

// Standard dataset header x1..xN.
std::vector<std::string> dataset_columns(long n_dims);

// Loads a dataset CSV (one sample per row) into a validated SampleBatch.
SampleBatch load_dataset(const std::string& path);

// Loads a labels CSV into a plain matrix (one row per sample).
Matrix load_labels(const std::string& path);

}  // namespace rmi

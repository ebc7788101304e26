#pragma once

// Deterministic CSV reading/writing. Doubles are rendered with
// std::to_chars (shortest round-trip form), so output bytes depend only on
// the values, never on locale or formatting state.

#include <string>
#include <vector>

#include "costid/mat.hpp"
#include "costid/model.hpp"

namespace costid {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Rectangular numeric CSV, no header. Throws std::runtime_error on I/O or
// parse failure (message includes the path).
void write_matrix_csv(const std::string& path, const Mat& m);
Mat read_matrix_csv(const std::string& path);

void write_vector_csv(const std::string& path, const std::vector<double>& v);
std::vector<double> read_vector_csv(const std::string& path);

// Activation matrices: rows = components, 0/1 entries.
void write_activation_csv(const std::string& path, const ActivationMatrix& m);
ActivationMatrix read_activation_csv(const std::string& path);

// Write an arbitrary text file with '\n' line endings (binary mode, so the
// output is byte-identical across platforms).
void write_text_file(const std::string& path, const std::string& content);

}  // namespace costid

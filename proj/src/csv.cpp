#include "costid/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace costid {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("csv: " + path + ": " + what);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(path, "read error");
  return ss.str();
}

double parse_double(const std::string& path, std::string_view tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    fail(path, "malformed number '" + std::string(tok) + "'");
  }
  return v;
}

// Split file content into rows of tokens; skips blank lines, strips CR.
std::vector<std::vector<std::string_view>> tokenize(const std::string& text) {
  std::vector<std::vector<std::string_view>> rows;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      std::vector<std::string_view> toks;
      size_t start = 0;
      while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
          toks.push_back(line.substr(start));
          break;
        }
        toks.push_back(line.substr(start, comma - start));
        start = comma + 1;
      }
      rows.push_back(std::move(toks));
    }
    pos = eol + 1;
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(path, "write error");
}

void write_matrix_csv(const std::string& path, const Mat& m) {
  std::string s;
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) s += ',';
      s += format_double(m(i, j));
    }
    s += '\n';
  }
  write_text_file(path, s);
}

Mat read_matrix_csv(const std::string& path) {
  const std::string text = slurp(path);
  const auto rows = tokenize(text);
  if (rows.empty()) fail(path, "empty matrix");
  const size_t cols = rows.front().size();
  Mat m(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      fail(path, "ragged row " + std::to_string(i + 1));
    }
    for (size_t j = 0; j < cols; ++j) {
      m(static_cast<int>(i), static_cast<int>(j)) = parse_double(path, rows[i][j]);
    }
  }
  return m;
}

void write_vector_csv(const std::string& path, const std::vector<double>& v) {
  std::string s;
  for (double x : v) {
    s += format_double(x);
    s += '\n';
  }
  write_text_file(path, s);
}

std::vector<double> read_vector_csv(const std::string& path) {
  const std::string text = slurp(path);
  const auto rows = tokenize(text);
  std::vector<double> v;
  v.reserve(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != 1) fail(path, "expected one value per line");
    v.push_back(parse_double(path, rows[i][0]));
  }
  return v;
}

void write_activation_csv(const std::string& path, const ActivationMatrix& m) {
  std::string s;
  for (int j = 0; j < m.J; ++j) {
    for (int k = 0; k < m.K; ++k) {
      if (k) s += ',';
      s += m.at(j, k) ? '1' : '0';
    }
    s += '\n';
  }
  write_text_file(path, s);
}

ActivationMatrix read_activation_csv(const std::string& path) {
  const std::string text = slurp(path);
  const auto rows = tokenize(text);
  if (rows.empty()) fail(path, "empty activation matrix");
  const size_t cols = rows.front().size();
  ActivationMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != cols) {
      fail(path, "ragged row " + std::to_string(j + 1));
    }
    for (size_t k = 0; k < cols; ++k) {
      const std::string_view tok = rows[j][k];
      if (tok == "0") {
        m.at(static_cast<int>(j), static_cast<int>(k)) = 0;
      } else if (tok == "1") {
        m.at(static_cast<int>(j), static_cast<int>(k)) = 1;
      } else {
        fail(path, "activation entries must be 0 or 1");
      }
    }
  }
  return m;
}

}  // namespace costid

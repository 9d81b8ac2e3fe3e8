#include "nscert/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nscert {

namespace {

std::string stripComment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<double> parseNumbers(const std::string& line) {
  std::istringstream in(line);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (!in.eof()) throw std::invalid_argument("malformed numeric line: " + line);
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::vector<Mode> parse_mode_lines(const std::string& text, int dim) {
  std::vector<Mode> modes;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto nums = parseNumbers(stripComment(line));
    if (nums.empty()) continue;
    if (static_cast<int>(nums.size()) != dim)
      throw std::invalid_argument("mode line has wrong arity: " + line);
    Eigen::VectorXi k(dim);
    for (int i = 0; i < dim; ++i) {
      k[i] = static_cast<int>(nums[i]);
      if (static_cast<double>(k[i]) != nums[i])
        throw std::invalid_argument("mode entries must be integers: " + line);
    }
    modes.emplace_back(k);
  }
  return modes;
}

std::vector<Mode> load_mode_set_file(const std::string& path, int dim) {
  return parse_mode_lines(read_text_file(path), dim);
}

SpectralField parse_field_text(const std::string& text, int dim) {
  SpectralField field(dim);
  std::set<Mode> seen;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto nums = parseNumbers(stripComment(line));
    if (nums.empty()) continue;
    if (static_cast<int>(nums.size()) != 3 * dim)
      throw std::invalid_argument("field line has wrong arity: " + line);
    Eigen::VectorXi k(dim);
    for (int i = 0; i < dim; ++i) k[i] = static_cast<int>(nums[i]);
    Mode mode(k);
    if (!seen.insert(mode.canonical()).second)
      throw std::invalid_argument("field file stores a {k,-k} pair twice: " + line);
    Eigen::VectorXcd c(dim);
    for (int i = 0; i < dim; ++i)
      c[i] = std::complex<double>(nums[dim + 2 * i], nums[dim + 2 * i + 1]);
    field.set(mode, c);
  }
  return field;
}

SpectralField load_field_file(const std::string& path, int dim) {
  return parse_field_text(read_text_file(path), dim);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_field_file(const std::string& path, const SpectralField& field) {
  std::ostringstream out;
  out << "# k1..kd  re1 im1 .. red imd (canonical representative per pair)\n";
  for (const auto& [k, c] : field.entries()) {
    for (int i = 0; i < field.dim(); ++i) out << k[i] << ' ';
    for (int i = 0; i < field.dim(); ++i)
      out << ' ' << format_double(c[i].real()) << ' ' << format_double(c[i].imag());
    out << '\n';
  }
  write_text_file(path, out.str());
}

void write_csv(const std::string& path, const CsvTable& table,
               const std::vector<std::string>& comment_lines) {
  std::ostringstream out;
  for (const auto& c : comment_lines) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  write_text_file(path, out.str());
}

CsvTable read_csv(const std::string& path) {
  CsvTable table;
  std::istringstream in(read_text_file(path));
  std::string line;
  bool headerDone = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream cells(line);
    std::string cell;
    if (!headerDone) {
      while (std::getline(cells, cell, ',')) table.header.push_back(cell);
      headerDone = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace nscert

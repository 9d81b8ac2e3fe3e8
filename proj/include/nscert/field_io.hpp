#pragma once

// File formats and CSV emission.
//
//   mode-set file : one mode per line `k1 k2 ... kd`, half-list convention,
//                   `#` comments;
//   field file    : one stored mode per line
//                   `k1 ... kd  re1 im1 ... red imd`, one representative per
//                   {k,-k} pair, `#` comments;
//   CSV           : numbers printed with %.17g, so equal values re-emit
//                   byte-identically.

#include <string>
#include <vector>

#include "nscert/mode_set.hpp"
#include "nscert/spectral_field.hpp"

namespace nscert {

std::vector<Mode> parse_mode_lines(const std::string& text, int dim);
std::vector<Mode> load_mode_set_file(const std::string& path, int dim);

SpectralField parse_field_text(const std::string& text, int dim);
SpectralField load_field_file(const std::string& path, int dim);
void write_field_file(const std::string& path, const SpectralField& field);

std::string format_double(double x);  // %.17g

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& table,
               const std::vector<std::string>& comment_lines = {});
CsvTable read_csv(const std::string& path);  // skips leading '#' comments

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nscert

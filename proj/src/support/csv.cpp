#include "dynlearn/support/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dynlearn/support/errors.hpp"

namespace dynlearn {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::string out;
  out.reserve(64 * (table.rows.size() + 1));
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_g17(row[c]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  CsvTable table;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    if (!line.empty()) {
      if (first) {
        std::string cell;
        for (char ch : line) {
          if (ch == ',') {
            table.header.push_back(cell);
            cell.clear();
          } else {
            cell += ch;
          }
        }
        table.header.push_back(cell);
        first = false;
      } else {
        std::vector<double> row;
        row.reserve(table.header.size());
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p < end) {
          char* next = nullptr;
          row.push_back(std::strtod(p, &next));
          if (next == p) throw IoError("bad numeric cell in " + path.string());
          p = next;
          if (p < end && *p == ',') ++p;
        }
        if (row.size() != table.header.size())
          throw IoError("row width mismatch in " + path.string());
        table.rows.push_back(std::move(row));
      }
    }
    pos = eol + 1;
  }
  if (first) throw IoError("empty csv: " + path.string());
  return table;
}

}  // namespace dynlearn

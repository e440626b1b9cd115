#include "bary/io.hpp"

namespace bary {
namespace iodetail {

std::vector<std::string> fields_of_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void line_error(std::size_t line_no, const std::string& what) {
  throw data_error("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace iodetail
}  // namespace bary

#include "bary/grid.hpp"

#include <cctype>
#include <string>

namespace bary {

namespace {

// Reads the next header token, skipping whitespace and # comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) continue;
    tok.push_back(static_cast<char>(c));
    while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
      tok.push_back(static_cast<char>(in.get()));
    return tok;
  }
  throw data_error("truncated PGM header");
}

int header_int(std::istream& in) {
  std::string tok = next_token(in);
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw data_error("malformed PGM header token '" + tok + "'");
  }
}

}  // namespace

GridImage read_pgm(std::istream& in) {
  std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5") throw data_error("not a P2/P5 PGM file");
  GridImage img;
  img.width = header_int(in);
  img.height = header_int(in);
  img.max_value = header_int(in);
  if (img.width <= 0 || img.height <= 0) throw data_error("bad PGM dimensions");
  if (img.max_value <= 0 || img.max_value > 65535) throw data_error("bad PGM max value");
  std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.reserve(count);
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      int v = header_int(in);
      if (v < 0 || v > img.max_value) throw data_error("PGM sample out of range");
      img.pixels.push_back(v);
    }
  } else {
    int c = in.get();  // single whitespace after maxval
    if (c == EOF) throw data_error("truncated PGM data");
    bool wide = img.max_value > 255;
    for (std::size_t i = 0; i < count; ++i) {
      int hi = in.get();
      if (hi == EOF) throw data_error("truncated PGM data");
      int v = hi;
      if (wide) {
        int lo = in.get();
        if (lo == EOF) throw data_error("truncated PGM data");
        v = hi * 256 + lo;
      }
      if (v > img.max_value) throw data_error("PGM sample out of range");
      img.pixels.push_back(v);
    }
  }
  return img;
}

void write_pgm_p2(std::ostream& out, const GridImage& img) {
  out << "P2\n" << img.width << " " << img.height << "\n" << img.max_value << "\n";
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      if (c) out << " ";
      out << img.at(c, r);
    }
    out << "\n";
  }
}

void write_pgm_p5(std::ostream& out, const GridImage& img) {
  out << "P5\n" << img.width << " " << img.height << "\n" << img.max_value << "\n";
  bool wide = img.max_value > 255;
  for (int v : img.pixels) {
    if (wide) out.put(static_cast<char>((v >> 8) & 0xff));
    out.put(static_cast<char>(v & 0xff));
  }
}

}  // namespace bary

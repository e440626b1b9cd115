#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "bary/measure.hpp"

namespace bary {

/// A grayscale raster; pixel (col, row) with (0, 0) at the top left and the
/// row coordinate increasing downward.
struct GridImage {
  int width = 0;
  int height = 0;
  int max_value = 255;
  std::vector<int> pixels;  // row-major

  int at(int col, int row) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  int& at(int col, int row) { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

/// Reads a PGM image, ASCII (P2) or binary (P5).
GridImage read_pgm(std::istream& in);
void write_pgm_p2(std::ostream& out, const GridImage& img);
void write_pgm_p5(std::ostream& out, const GridImage& img);

/// Pixel (col c, row r) with intensity v > 0 becomes an atom at (c, r) with
/// mass v / (sum of intensities).
template <class T>
Measure<T> grid_to_measure(const GridImage& img) {
  long total = 0;
  for (int v : img.pixels) {
    if (v < 0) throw data_error("negative pixel intensity");
    total += v;
  }
  if (total == 0) throw data_error("image has no positive pixel");
  std::vector<Atom<T>> atoms;
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      int v = img.at(c, r);
      if (v == 0) continue;
      atoms.push_back({Point<T>({T(c), T(r)}), num<T>::from_fraction(v, total)});
    }
  return Measure<T>(std::move(atoms));
}

struct CanvasSpec {
  int width;
  int height;
};

/// Renders a 2d measure onto the q-refined lattice of the canvas: a W x H
/// canvas refined q times has side q*n - (q - 1) pixels per original side n.
/// Intensity is proportional to mass, the heaviest atom mapping to max_value.
/// Atoms off the refined lattice are snapped to the nearest cell and reported
/// through `snapped`.
template <class T>
GridImage render_measure(const Measure<T>& measure, int refine, CanvasSpec canvas,
                         int max_value = 255, bool* snapped = nullptr) {
  if (refine < 1) throw data_error("refinement must be at least 1");
  if (measure.dim() != 2) throw data_error("render expects 2d measures");
  GridImage img;
  img.width = refine * canvas.width - (refine - 1);
  img.height = refine * canvas.height - (refine - 1);
  img.max_value = max_value;
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height, 0);
  if (snapped) *snapped = false;

  T max_mass = measure.atom(0).mass;
  for (const auto& a : measure.atoms())
    if (max_mass < a.mass) max_mass = a.mass;

  auto snap = [&](const T& coord) {
    T scaled = T(refine) * coord;
    long cell;
    if constexpr (std::is_same_v<T, double>) {
      cell = std::lround(scaled);
      if (std::fabs(scaled - cell) > float_tolerance() * std::max(1.0, std::fabs(scaled)))
        if (snapped) *snapped = true;
    } else {
      if (scaled.get_den() == 1) {
        cell = scaled.get_num().get_si();
      } else {
        // nearest refined cell, halves rounding up
        Rat shifted = scaled + Rat(1, 2);
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
        cell = fl.get_si();
        if (snapped) *snapped = true;
      }
    }
    return cell;
  };

  for (const auto& a : measure.atoms()) {
    long col = snap(a.point[0]);
    long row = snap(a.point[1]);
    if (col < 0 || col >= img.width || row < 0 || row >= img.height)
      throw data_error("atom outside the render canvas");
    double level = num<T>::to_double(a.mass) / num<T>::to_double(max_mass);
    int value = static_cast<int>(std::lround(level * max_value));
    img.at(static_cast<int>(col), static_cast<int>(row)) = value;
  }
  return img;
}

}  // namespace bary

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wlg/conformal.hpp"
#include "wlg/fields.hpp"

namespace wlg {

struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> pixels;  // row-major, top row first
};

PgmImage read_pgm(const std::string& path);           // P2 or P5, 8/16-bit
void write_pgm(const PgmImage& img, const std::string& path, bool binary = true);

// Mask round trip: pixel > 0 means the cell is in the set. Row 0 of the image
// is the highest y row so images look upright.
PgmImage mask_to_pgm(const IndicatorSet& E);
void write_mask_pgm(const IndicatorSet& E, const std::string& path);

// 16-bit PGM with affine scaling recorded in a JSON sidecar {min,max}; the
// sidecar flags min == max so constant fields round-trip exactly.
void emit_field(const ScalarField& f, const std::string& basename);
ScalarField read_field_pgm(const Grid& grid, const std::string& basename);

// CSV with one index column per axis plus the value.
void write_field_csv(const ScalarField& f, const std::string& path);
ScalarField read_field_csv(const Grid& grid, const std::string& path);

// (cell_index, value) rows for boundary data.
std::vector<std::pair<int, double>> read_boundary_csv(const std::string& path);

Polyline read_polyline_csv(const std::string& path);
TriMesh read_off(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace wlg

#include "wlg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wlg {

namespace {

// skips whitespace and # comments in PGM headers
int next_pnm_token(std::istream& is) {
  int c;
  while ((c = is.get()) != EOF) {
    if (c == '#') {
      while ((c = is.get()) != EOF && c != '\n') {
      }
    } else if (!std::isspace(c)) {
      is.unget();
      int v;
      if (!(is >> v)) throw IoError("malformed PGM header");
      return v;
    }
  }
  throw IoError("truncated PGM header");
}

}  // namespace

PgmImage read_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::string magic;
  is >> magic;
  if (magic != "P2" && magic != "P5") throw IoError("not a PGM (P2/P5) file");
  PgmImage img;
  img.width = next_pnm_token(is);
  img.height = next_pnm_token(is);
  img.maxval = next_pnm_token(is);
  if (img.width <= 0 || img.height <= 0 || img.maxval <= 0 || img.maxval > 65535)
    throw IoError("invalid PGM dimensions");
  size_t n = static_cast<size_t>(img.width) * img.height;
  img.pixels.resize(n);
  if (magic == "P2") {
    for (size_t i = 0; i < n; ++i) {
      long v;
      if (!(is >> v)) throw IoError("truncated P2 data");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  } else {
    is.get();  // single whitespace after maxval
    if (img.maxval < 256) {
      std::vector<unsigned char> buf(n);
      is.read(reinterpret_cast<char*>(buf.data()), n);
      if (!is) throw IoError("truncated P5 data");
      for (size_t i = 0; i < n; ++i) img.pixels[i] = buf[i];
    } else {
      std::vector<unsigned char> buf(n * 2);
      is.read(reinterpret_cast<char*>(buf.data()), n * 2);
      if (!is) throw IoError("truncated P5 data");
      for (size_t i = 0; i < n; ++i)
        img.pixels[i] = static_cast<std::uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
    }
  }
  return img;
}

void write_pgm(const PgmImage& img, const std::string& path, bool binary) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  size_t n = static_cast<size_t>(img.width) * img.height;
  if (binary) {
    os << "P5\n" << img.width << " " << img.height << "\n" << img.maxval << "\n";
    if (img.maxval < 256) {
      std::vector<unsigned char> buf(n);
      for (size_t i = 0; i < n; ++i) buf[i] = static_cast<unsigned char>(img.pixels[i]);
      os.write(reinterpret_cast<const char*>(buf.data()), n);
    } else {
      std::vector<unsigned char> buf(n * 2);
      for (size_t i = 0; i < n; ++i) {
        buf[2 * i] = static_cast<unsigned char>(img.pixels[i] >> 8);
        buf[2 * i + 1] = static_cast<unsigned char>(img.pixels[i] & 0xff);
      }
      os.write(reinterpret_cast<const char*>(buf.data()), n * 2);
    }
  } else {
    os << "P2\n" << img.width << " " << img.height << "\n" << img.maxval << "\n";
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c)
        os << img.pixels[static_cast<size_t>(r) * img.width + c]
           << (c + 1 == img.width ? '\n' : ' ');
    }
  }
  if (!os) throw IoError("write failed: " + path);
}

PgmImage mask_to_pgm(const IndicatorSet& E) {
  const Grid& g = E.grid;
  if (g.dim != 2) throw IoError("PGM masks are 2D only");
  PgmImage img;
  img.width = g.size[0];
  img.height = g.size[1];
  img.maxval = 255;
  img.pixels.resize(static_cast<size_t>(img.width) * img.height);
  for (int y = 0; y < g.size[1]; ++y)
    for (int x = 0; x < g.size[0]; ++x) {
      int row = g.size[1] - 1 - y;  // top image row = highest y
      img.pixels[static_cast<size_t>(row) * img.width + x] =
          E.v[g.index(x, y)] ? 255 : 0;
    }
  return img;
}

void write_mask_pgm(const IndicatorSet& E, const std::string& path) {
  write_pgm(mask_to_pgm(E), path);
}

void emit_field(const ScalarField& f, const std::string& basename) {
  write_field_csv(f, basename + ".csv");
  const Grid& g = f.grid;
  double mn = f.v.empty() ? 0.0 : *std::min_element(f.v.begin(), f.v.end());
  double mx = f.v.empty() ? 0.0 : *std::max_element(f.v.begin(), f.v.end());

  nlohmann::ordered_json side;
  side["min"] = mn;
  side["max"] = mx;
  side["constant"] = (mn == mx);
  side["maxval"] = 65535;
  write_text_file(basename + ".json", side.dump(2) + "\n");

  if (g.dim == 2) {
    PgmImage img;
    img.width = g.size[0];
    img.height = g.size[1];
    img.maxval = 65535;
    img.pixels.resize(static_cast<size_t>(img.width) * img.height);
    double scale = mx > mn ? 65535.0 / (mx - mn) : 0.0;
    for (int y = 0; y < g.size[1]; ++y)
      for (int x = 0; x < g.size[0]; ++x) {
        int row = g.size[1] - 1 - y;
        double v = f.v[g.index(x, y)];
        img.pixels[static_cast<size_t>(row) * img.width + x] =
            static_cast<std::uint16_t>(std::lround((v - mn) * scale));
      }
    write_pgm(img, basename + ".pgm");
  }
}

ScalarField read_field_pgm(const Grid& grid, const std::string& basename) {
  PgmImage img = read_pgm(basename + ".pgm");
  auto side = nlohmann::json::parse(read_text_file(basename + ".json"));
  double mn = side.at("min").get<double>();
  double mx = side.at("max").get<double>();
  if (img.width != grid.size[0] || img.height != grid.size[1])
    throw IoError("field image does not match the grid");
  ScalarField f(grid);
  double scale = mx > mn ? (mx - mn) / 65535.0 : 0.0;
  for (int y = 0; y < grid.size[1]; ++y)
    for (int x = 0; x < grid.size[0]; ++x) {
      int row = grid.size[1] - 1 - y;
      f.v[grid.index(x, y)] =
          mn + scale * img.pixels[static_cast<size_t>(row) * img.width + x];
    }
  return f;
}

void write_field_csv(const ScalarField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  const Grid& g = f.grid;
  os << (g.dim == 3 ? "ix,iy,iz,value\n" : "ix,iy,value\n");
  char buf[64];
  for (int c = 0; c < g.ncells(); ++c) {
    auto cc = g.coords(c);
    std::snprintf(buf, sizeof(buf), "%.17g", f.v[c]);
    if (g.dim == 3)
      os << cc[0] << ',' << cc[1] << ',' << cc[2] << ',' << buf << '\n';
    else
      os << cc[0] << ',' << cc[1] << ',' << buf << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

ScalarField read_field_csv(const Grid& grid, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::string line;
  std::getline(is, line);  // header
  ScalarField f(grid);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    int ix, iy, iz = 0;
    double v;
    if (grid.dim == 3) {
      if (!(ss >> ix >> iy >> iz >> v)) throw IoError("malformed CSV row");
    } else {
      if (!(ss >> ix >> iy >> v)) throw IoError("malformed CSV row");
    }
    if (!grid.contains(ix, iy, iz)) throw IoError("CSV index outside the grid");
    f.v[grid.index(ix, iy, iz)] = v;
  }
  return f;
}

std::vector<std::pair<int, double>> read_boundary_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::vector<std::pair<int, double>> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    int idx;
    double v;
    if (ss >> idx >> v) out.push_back({idx, v});
  }
  return out;
}

Polyline read_polyline_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  Polyline p;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, y;
    if (ss >> x >> y) p.pts.push_back({x, y});
  }
  return p;
}

TriMesh read_off(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::string magic;
  is >> magic;
  if (magic != "OFF") throw IoError("not an OFF file");
  int nv, nf, ne;
  if (!(is >> nv >> nf >> ne)) throw IoError("malformed OFF header");
  TriMesh m;
  m.verts.resize(nv);
  for (auto& v : m.verts)
    if (!(is >> v[0] >> v[1] >> v[2])) throw IoError("truncated OFF vertices");
  for (int f = 0; f < nf; ++f) {
    int k;
    if (!(is >> k)) throw IoError("truncated OFF faces");
    std::vector<int> idx(k);
    for (auto& i : idx) is >> i;
    for (int t = 1; t + 1 < k; ++t)  // fan-triangulate
      m.tris.push_back({idx[0], idx[t], idx[t + 1]});
  }
  return m;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << content;
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace wlg

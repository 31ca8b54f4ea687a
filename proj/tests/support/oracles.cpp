#include "oracles.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace oracle {

Perimeter calcular_perimetro(const aquacad::Mask& imagen_mask) {
  const long m = static_cast<long>(imagen_mask.height());
  const long n = static_cast<long>(imagen_mask.width());
  // 1-based matrices with a dummy row/column 0
  std::vector<std::vector<double>> Imagen(m + 1, std::vector<double>(n + 1, 0));
  for (long i = 1; i <= m; ++i)
    for (long j = 1; j <= n; ++j) Imagen[i][j] = imagen_mask(i - 1, j - 1);
  std::vector<std::vector<double>> Im(m + 1, std::vector<double>(n + 1, 0));
  std::vector<std::vector<double>> Ima(m + 1, std::vector<double>(n + 1, 0));
  long long Area = 0;
  for (long i = 1; i <= m; ++i)
    for (long j = 1; j <= n; ++j) {
      Im[i][j] = 1 - Imagen[i][j];
      if (Imagen[i][j] > 0) ++Area;
    }
  const int masc[3][3] = {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
  for (long i = 2; i <= m - 1; ++i) {
    for (long j = 2; j <= n - 1; ++j) {
      if (Im[i][j] == 0) {
        Ima[i][j] = 1;
        int sum = 0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) sum += (masc[a][b] != 0) && (Im[i - 1 + a][j - 1 + b] != 0);
        if (sum == 0) Ima[i][j] = 0;
      }
    }
  }
  long long pLado = 0, pDiag = 0;
  for (long i = 2; i <= m - 1; ++i) {
    for (long j = 2; j <= n - 1; ++j) {
      if (Ima[i][j] == 1) {
        if (Ima[i][j + 1] != 0 || Ima[i + 1][j] != 0) pLado = pLado + 1;
        if (Ima[i + 1][j - 1] != 0 || Ima[i + 1][j + 1] != 0) pDiag = pDiag + 1;
      }
    }
  }
  Perimeter out;
  out.p_lado = pLado;
  out.p_diag = pDiag;
  out.km = static_cast<double>(pLado) * 0.030 + 1.41 * static_cast<double>(pDiag) * 0.030;
  out.area = Area;
  return out;
}

std::pair<double, double> hayford_forward(double lat_deg, double lon_deg, int zone, bool south) {
  const double a = 6378388.0;
  const double f = 1.0 / 297.0;
  const double k0 = 0.9996;
  const double n = f / (2 - f);
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  const double A = a / (1 + n) * (1 + n2 / 4 + n4 / 64 + n6 / 256);
  const double alpha[7] = {
      0,
      n / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 - 127 * n5 / 288 + 7891 * n6 / 37800,
      13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 - 1983433 * n6 / 1935360,
      61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 + 167603 * n6 / 181440,
      49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600,
      34729 * n5 / 80640 - 3418889 * n6 / 1995840,
      212378941 * n6 / 319334400,
  };
  const double e = 2 * std::sqrt(n) / (1 + n);
  const double pi = std::acos(-1.0);
  const double phi = lat_deg * pi / 180;
  const double lam = (lon_deg - (zone * 6 - 183)) * pi / 180;
  const double t = std::sinh(std::atanh(std::sin(phi)) - e * std::atanh(e * std::sin(phi)));
  const double xi = std::atan2(t, std::cos(lam));
  const double eta = std::atanh(std::sin(lam) / std::sqrt(1 + t * t));
  double E = eta, N = xi;
  for (int j = 1; j <= 6; ++j) {
    E += alpha[j] * std::cos(2 * j * xi) * std::sinh(2 * j * eta);
    N += alpha[j] * std::sin(2 * j * xi) * std::cosh(2 * j * eta);
  }
  return {500000 + k0 * A * E, k0 * A * N + (south ? 1e7 : 0)};
}

int otsu_exhaustive(const std::array<std::uint64_t, 256>& h) {
  // w0 w1 (mu0 - mu1)^2 = (s0 n1 - s1 n0)^2 / (n0 n1 N^2); N^2 is common to all cuts
  using boost::multiprecision::cpp_int;
  cpp_int total_n = 0, total_s = 0;
  for (int i = 0; i < 256; ++i) {
    total_n += h[i];
    total_s += cpp_int(h[i]) * i;
  }
  int best = -1;
  cpp_int best_num = 0, best_den = 1;
  cpp_int n0 = 0, s0 = 0;
  for (int t = 0; t < 255; ++t) {
    n0 += h[t];
    s0 += cpp_int(h[t]) * t;
    const cpp_int n1 = total_n - n0, s1 = total_s - s0;
    if (n0 == 0 || n1 == 0) continue;
    const cpp_int diff = s0 * n1 - s1 * n0;
    const cpp_int num = diff * diff, den = n0 * n1;
    if (best < 0 || num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best = t;
    }
  }
  return best;
}

bool inside_even_odd(double lon, double lat, const std::vector<std::vector<std::pair<double, double>>>& rings) {
  bool inside = false;
  for (const auto& ring : rings) {
    for (std::size_t k = 0; k + 1 < ring.size(); ++k) {
      auto [x1, y1] = ring[k];
      auto [x2, y2] = ring[k + 1];
      // edge straddles the vertical line x = lon (half-open)
      if ((x1 <= lon) == (x2 <= lon)) continue;
      const double y_at = y1 + (lon - x1) * (y2 - y1) / (x2 - x1);
      if (y_at > lat) inside = !inside;
    }
  }
  return inside;
}

std::vector<std::pair<int, int>> octagon3() {
  std::vector<std::pair<int, int>> se;
  for (int dr = -3; dr <= 3; ++dr)
    for (int dc = -3; dc <= 3; ++dc)
      if (std::abs(dr) + std::abs(dc) <= 4) se.emplace_back(dr, dc);
  return se;
}

aquacad::Mask dilate_set(const aquacad::Mask& a, const std::vector<std::pair<int, int>>& se) {
  std::set<std::pair<long, long>> pts;
  for (long r = 0; r < static_cast<long>(a.height()); ++r)
    for (long c = 0; c < static_cast<long>(a.width()); ++c)
      if (a(r, c))
        for (auto [dr, dc] : se) pts.emplace(r + dr, c + dc);
  aquacad::Mask out(a.width(), a.height(), 0);
  for (auto [r, c] : pts)
    if (out.contains(r, c)) out(r, c) = 1;
  return out;
}

aquacad::Mask erode_set(const aquacad::Mask& a, const std::vector<std::pair<int, int>>& se) {
  aquacad::Mask out(a.width(), a.height(), 0);
  for (long r = 0; r < static_cast<long>(a.height()); ++r)
    for (long c = 0; c < static_cast<long>(a.width()); ++c) {
      bool all = true;
      for (auto [dr, dc] : se) {
        if (!a.contains(r + dr, c + dc) || !a(r + dr, c + dc)) {
          all = false;
          break;
        }
      }
      out(r, c) = all;
    }
  return out;
}

aquacad::Mask random_blob(std::mt19937_64& rng, std::size_t max_side) {
  std::uniform_int_distribution<std::size_t> side(3, max_side);
  const std::size_t w = side(rng), h = side(rng);
  aquacad::Mask m(w, h, 0);
  std::uniform_int_distribution<int> shapes(1, 5);
  const int k = shapes(rng);
  for (int s = 0; s < k; ++s) {
    std::uniform_real_distribution<double> ur(0, static_cast<double>(h)), uc(0, static_cast<double>(w));
    std::uniform_real_distribution<double> rad(0.5, static_cast<double>(std::max(w, h)) / 3);
    const double cr = ur(rng), cc = uc(rng), rr = rad(rng);
    const bool disc = rng() & 1;
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c) {
        const double dr = r - cr, dc = c - cc;
        if (disc ? dr * dr + dc * dc <= rr * rr : std::abs(dr) <= rr && std::abs(dc) <= rr / 2) m(r, c) = 1;
      }
  }
  // sprinkle noise so that diagonal and ragged edges show up
  std::bernoulli_distribution flip(0.05);
  for (auto& v : m.values())
    if (flip(rng)) v = !v;
  return m;
}

aquacad::Mask random_mask(std::mt19937_64& rng, std::size_t w, std::size_t h, double density) {
  aquacad::Mask m(w, h, 0);
  std::bernoulli_distribution on(density);
  for (auto& v : m.values()) v = on(rng);
  return m;
}

}  // namespace oracle

namespace testutil {

std::filesystem::path fixture_dir() { return AQUACAD_FIXTURE_DIR; }

TempDir::TempDir() {
  std::string templ = (std::filesystem::temp_directory_path() / "aquacad-test-XXXXXX").string();
  if (!::mkdtemp(templ.data())) throw std::runtime_error("mkdtemp failed");
  path_ = templ;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace testutil

#include "rawpipe/demosaic.hpp"

#include "rawpipe/border.hpp"
#include "rawpipe/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace rawpipe {

std::string_view to_string(DemosaicMethod m) {
  switch (m) {
    case DemosaicMethod::bilinear: return "bilinear";
    case DemosaicMethod::kodak: return "kodak";
    case DemosaicMethod::ahd: return "ahd";
  }
  return "?";
}

DemosaicMethod parse_demosaic_method(std::string_view name) {
  for (auto m : {DemosaicMethod::bilinear, DemosaicMethod::kodak, DemosaicMethod::ahd}) {
    if (name == to_string(m)) return m;
  }
  throw ValidationError("unknown demosaic method '" + std::string(name) + "'");
}

namespace {

constexpr int kRed = 0;
constexpr int kGreen = 1;
constexpr int kBlue = 2;

void check_mosaic(const BayerMosaic& m) {
  require(m.rows() >= 2 && m.cols() >= 2 && m.rows() % 2 == 0 && m.cols() % 2 == 0,
          "demosaic: mosaic dimensions must be even and >= 2");
}

/// Plane accessor with parity-preserving mirror borders.
template <typename PlaneT>
struct Mirrored {
  const PlaneT& p;
  [[nodiscard]] double operator()(Index r, Index c) const {
    return static_cast<double>(p(reflect101(r, p.rows()), reflect101(c, p.cols())));
  }
};

template <typename PlaneT>
Mirrored(const PlaneT&) -> Mirrored<PlaneT>;

double cross_mean(const auto& at, Index r, Index c) {
  return 0.25 * (at(r - 1, c) + at(r + 1, c) + at(r, c - 1) + at(r, c + 1));
}

double diagonal_mean(const auto& at, Index r, Index c) {
  return 0.25 * (at(r - 1, c - 1) + at(r - 1, c + 1) + at(r + 1, c - 1) + at(r + 1, c + 1));
}

/// Bilinear estimate of a sparse R or B quantity `at` for channel `k` at a site
/// that does not sample `k`.
double sparse_estimate(const BayerMosaic& m, const auto& at, int k, Index r, Index c) {
  const int site = m.channel_at(r, c);
  if (site == kGreen) {
    if (cfa_channel(m.pattern, r, c + 1) == k) return 0.5 * (at(r, c - 1) + at(r, c + 1));
    return 0.5 * (at(r - 1, c) + at(r + 1, c));
  }
  return diagonal_mean(at, r, c);
}

/// Fills R and B from a full green plane by bilinear interpolation of the
/// color differences (R - G, B - G). Samples pass through untouched.
LinearImage chroma_from_green(const BayerMosaic& m, const PlaneF& green) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  PlaneD diff_r = PlaneD::Zero(rows, cols);
  PlaneD diff_b = PlaneD::Zero(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const int site = m.channel_at(r, c);
      const double d = static_cast<double>(m.data(r, c)) - static_cast<double>(green(r, c));
      if (site == kRed) diff_r(r, c) = d;
      if (site == kBlue) diff_b(r, c) = d;
    }
  }
  const Mirrored at_r{diff_r};
  const Mirrored at_b{diff_b};
  LinearImage out(rows, cols);
  out[kGreen] = green;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const int site = m.channel_at(r, c);
      const double g = green(r, c);
      out[kRed](r, c) = site == kRed ? m.data(r, c)
                                     : static_cast<float>(g + sparse_estimate(m, at_r, kRed, r, c));
      out[kBlue](r, c) = site == kBlue ? m.data(r, c)
                                       : static_cast<float>(g + sparse_estimate(m, at_b, kBlue, r, c));
    }
  }
  return out;
}

}  // namespace

BayerMosaic correct_defective_pixels(const BayerMosaic& m, double threshold) {
  require(threshold > 0.0, "correct_defective_pixels: threshold must be > 0");
  check_mosaic(m);
  if (std::isinf(threshold)) return m;
  static constexpr std::array<std::array<int, 2>, 8> kGreenNeighbours = {
      {{-1, -1}, {-1, 1}, {1, -1}, {1, 1}, {-2, 0}, {2, 0}, {0, -2}, {0, 2}}};
  static constexpr std::array<std::array<int, 2>, 8> kColorNeighbours = {
      {{-2, 0}, {2, 0}, {0, -2}, {0, 2}, {-2, -2}, {-2, 2}, {2, -2}, {2, 2}}};
  const Mirrored at{m.data};
  BayerMosaic out = m;
  std::array<double, 8> values{};
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      const auto& offsets = m.channel_at(r, c) == kGreen ? kGreenNeighbours : kColorNeighbours;
      for (std::size_t i = 0; i < offsets.size(); ++i) values[i] = at(r + offsets[i][0], c + offsets[i][1]);
      std::sort(values.begin(), values.end());
      const double median = 0.5 * (values[3] + values[4]);
      if (std::abs(static_cast<double>(m.data(r, c)) - median) > threshold) {
        out.data(r, c) = static_cast<float>(median);
      }
    }
  }
  return out;
}

namespace {

void check_gains(const WhiteBalanceGains& g) {
  require(g.r > 0.0 && g.g > 0.0 && g.b > 0.0 && std::isfinite(g.r) && std::isfinite(g.g) &&
              std::isfinite(g.b),
          "white_balance: gains must be positive");
}

}  // namespace

BayerMosaic white_balance(const BayerMosaic& m, const WhiteBalanceGains& g) {
  check_gains(g);
  const std::array<double, 3> gains = {g.r, g.g, g.b};
  BayerMosaic out = m;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      const double gain = gains[static_cast<std::size_t>(m.channel_at(r, c))];
      if (gain != 1.0) out.data(r, c) = static_cast<float>(m.data(r, c) * gain);
    }
  }
  return out;
}

LinearImage white_balance(const LinearImage& img, const WhiteBalanceGains& g) {
  check_gains(g);
  const std::array<double, 3> gains = {g.r, g.g, g.b};
  LinearImage out = img;
  for (int c = 0; c < 3; ++c) {
    const double gain = gains[static_cast<std::size_t>(c)];
    if (gain != 1.0) {
      out[c] = img[c].unaryExpr([gain](float v) { return static_cast<float>(v * gain); });
    }
  }
  return out;
}

LinearImage demosaic_bilinear(const BayerMosaic& m) {
  check_mosaic(m);
  const Mirrored at{m.data};
  LinearImage out(m.rows(), m.cols());
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      const int site = m.channel_at(r, c);
      for (int k = 0; k < 3; ++k) {
        float v = 0.0f;
        if (k == site) {
          v = m.data(r, c);
        } else if (k == kGreen) {
          v = static_cast<float>(cross_mean(at, r, c));
        } else {
          v = static_cast<float>(sparse_estimate(m, at, k, r, c));
        }
        out(r, c, k) = v;
      }
    }
  }
  return out;
}

LinearImage demosaic_kodak(const BayerMosaic& m) {
  check_mosaic(m);
  const Mirrored at{m.data};
  PlaneF green(m.rows(), m.cols());
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (m.channel_at(r, c) == kGreen) {
        green(r, c) = m.data(r, c);
        continue;
      }
      const double left = at(r, c - 1);
      const double right = at(r, c + 1);
      const double up = at(r - 1, c);
      const double down = at(r + 1, c);
      const double grad_h = std::abs(left - right);
      const double grad_v = std::abs(up - down);
      double g = 0.0;
      if (grad_h < grad_v) {
        g = 0.5 * (left + right);
      } else if (grad_v < grad_h) {
        g = 0.5 * (up + down);
      } else {
        g = 0.25 * (up + down + left + right);
      }
      green(r, c) = static_cast<float>(g);
    }
  }
  return chroma_from_green(m, green);
}

// ---------------------------------------------------------------------------
// AHD

namespace {

/// Directional green: Hamilton-Adams style second-order filter along one axis,
/// clamped to the range of the two adjacent greens.
PlaneF directional_green(const BayerMosaic& m, bool horizontal) {
  const Mirrored at{m.data};
  PlaneF green(m.rows(), m.cols());
  const Index dr = horizontal ? 0 : 1;
  const Index dc = horizontal ? 1 : 0;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (m.channel_at(r, c) == kGreen) {
        green(r, c) = m.data(r, c);
        continue;
      }
      const double g_prev = at(r - dr, c - dc);
      const double g_next = at(r + dr, c + dc);
      const double x = at(r, c);
      const double x_prev = at(r - 2 * dr, c - 2 * dc);
      const double x_next = at(r + 2 * dr, c + 2 * dc);
      const double estimate = 0.25 * (2.0 * (g_prev + x + g_next) - x_prev - x_next);
      green(r, c) = static_cast<float>(
          std::clamp(estimate, std::min(g_prev, g_next), std::max(g_prev, g_next)));
    }
  }
  return green;
}

struct LabPlanes {
  PlaneD l, a, b;
};

double lab_f(double t) {
  return t > 0.008856 ? std::cbrt(t) : 7.787 * t + 16.0 / 116.0;
}

/// CIELAB from linear sRGB primaries, D65 white.
LabPlanes to_lab(const LinearImage& img) {
  const Index rows = img.rows();
  const Index cols = img.cols();
  LabPlanes lab{PlaneD(rows, cols), PlaneD(rows, cols), PlaneD(rows, cols)};
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const double R = img(r, c, 0);
      const double G = img(r, c, 1);
      const double B = img(r, c, 2);
      const double x = (0.4124564 * R + 0.3575761 * G + 0.1804375 * B) / 0.95047;
      const double y = 0.2126729 * R + 0.7151522 * G + 0.0721750 * B;
      const double z = (0.0193339 * R + 0.1191920 * G + 0.9503041 * B) / 1.08883;
      const double fx = lab_f(x);
      const double fy = lab_f(y);
      const double fz = lab_f(z);
      lab.l(r, c) = 116.0 * fy - 16.0;
      lab.a(r, c) = 500.0 * (fx - fy);
      lab.b(r, c) = 200.0 * (fy - fz);
    }
  }
  return lab;
}

constexpr std::array<std::array<int, 2>, 4> kFourNeighbours = {{{0, -1}, {0, 1}, {-1, 0}, {1, 0}}};

/// Level-set homogeneity counts for the horizontal and vertical candidates.
std::array<Plane<int>, 2> homogeneity_maps(const LabPlanes& h, const LabPlanes& v) {
  const Index rows = h.l.rows();
  const Index cols = h.l.cols();
  std::array<Plane<int>, 2> homo = {Plane<int>::Zero(rows, cols), Plane<int>::Zero(rows, cols)};
  const std::array<const LabPlanes*, 2> cand = {&h, &v};
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      double ldiff[2][4];
      double abdiff[2][4];
      for (int d = 0; d < 2; ++d) {
        const LabPlanes& lab = *cand[static_cast<std::size_t>(d)];
        const Mirrored L{lab.l};
        const Mirrored A{lab.a};
        const Mirrored B{lab.b};
        for (int i = 0; i < 4; ++i) {
          const Index rr = r + kFourNeighbours[static_cast<std::size_t>(i)][0];
          const Index cc = c + kFourNeighbours[static_cast<std::size_t>(i)][1];
          ldiff[d][i] = std::abs(lab.l(r, c) - L(rr, cc));
          const double da = lab.a(r, c) - A(rr, cc);
          const double db = lab.b(r, c) - B(rr, cc);
          abdiff[d][i] = da * da + db * db;
        }
      }
      const double leps =
          std::min(std::max(ldiff[0][0], ldiff[0][1]), std::max(ldiff[1][2], ldiff[1][3]));
      const double abeps =
          std::min(std::max(abdiff[0][0], abdiff[0][1]), std::max(abdiff[1][2], abdiff[1][3]));
      for (int d = 0; d < 2; ++d) {
        int count = 0;
        for (int i = 0; i < 4; ++i) count += (ldiff[d][i] <= leps && abdiff[d][i] <= abeps) ? 1 : 0;
        homo[static_cast<std::size_t>(d)](r, c) = count;
      }
    }
  }
  return homo;
}

float median9(std::array<double, 9>& v) {
  std::nth_element(v.begin(), v.begin() + 4, v.end());
  return static_cast<float>(v[4]);
}

/// One pass of 3x3 median smoothing on R-G and B-G; only interpolated channels change.
LinearImage median_chroma_pass(const BayerMosaic& m, const LinearImage& img) {
  const Index rows = img.rows();
  const Index cols = img.cols();
  PlaneD rg = img[kRed].cast<double>() - img[kGreen].cast<double>();
  PlaneD bg = img[kBlue].cast<double>() - img[kGreen].cast<double>();
  const Mirrored at_rg{rg};
  const Mirrored at_bg{bg};
  LinearImage out = img;
  std::array<double, 9> win{};
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      std::size_t k = 0;
      for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) win[k++] = at_rg(r + i, c + j);
      const double med_rg = median9(win);
      k = 0;
      for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) win[k++] = at_bg(r + i, c + j);
      const double med_bg = median9(win);
      const int site = m.channel_at(r, c);
      if (site == kRed) {
        const double g = static_cast<double>(img(r, c, kRed)) - med_rg;
        out(r, c, kGreen) = static_cast<float>(g);
        out(r, c, kBlue) = static_cast<float>(g + med_bg);
      } else if (site == kBlue) {
        const double g = static_cast<double>(img(r, c, kBlue)) - med_bg;
        out(r, c, kGreen) = static_cast<float>(g);
        out(r, c, kRed) = static_cast<float>(g + med_rg);
      } else {
        const double g = img(r, c, kGreen);
        out(r, c, kRed) = static_cast<float>(g + med_rg);
        out(r, c, kBlue) = static_cast<float>(g + med_bg);
      }
    }
  }
  return out;
}

}  // namespace

AhdResult demosaic_ahd_detailed(const BayerMosaic& m, const AhdOptions& opts) {
  check_mosaic(m);
  require(opts.homogeneity_radius >= 0, "demosaic_ahd: homogeneity radius must be >= 0");
  require(opts.median_passes >= 0, "demosaic_ahd: median passes must be >= 0");
  const LinearImage horiz = chroma_from_green(m, directional_green(m, true));
  const LinearImage vert = chroma_from_green(m, directional_green(m, false));
  const auto homo = homogeneity_maps(to_lab(horiz), to_lab(vert));

  const Index rows = m.rows();
  const Index cols = m.cols();
  const int rad = opts.homogeneity_radius;
  const Mirrored hom_h{homo[0]};
  const Mirrored hom_v{homo[1]};
  AhdResult result{LinearImage(rows, cols), Plane<std::uint8_t>(rows, cols)};
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      double score_h = 0.0;
      double score_v = 0.0;
      for (int i = -rad; i <= rad; ++i) {
        for (int j = -rad; j <= rad; ++j) {
          score_h += hom_h(r + i, c + j);
          score_v += hom_v(r + i, c + j);
        }
      }
      AhdDirection dir = AhdDirection::tie;
      if (score_h > score_v) dir = AhdDirection::horizontal;
      if (score_v > score_h) dir = AhdDirection::vertical;
      result.direction(r, c) = static_cast<std::uint8_t>(dir);
      const int site = m.channel_at(r, c);
      for (int k = 0; k < 3; ++k) {
        float v = 0.0f;
        if (k == site) {
          v = m.data(r, c);
        } else if (dir == AhdDirection::horizontal) {
          v = horiz(r, c, k);
        } else if (dir == AhdDirection::vertical) {
          v = vert(r, c, k);
        } else {
          v = static_cast<float>(0.5 * (static_cast<double>(horiz(r, c, k)) + vert(r, c, k)));
        }
        result.image(r, c, k) = v;
      }
    }
  }
  for (int pass = 0; pass < opts.median_passes; ++pass) {
    result.image = median_chroma_pass(m, result.image);
  }
  return result;
}

LinearImage demosaic_ahd(const BayerMosaic& m, const AhdOptions& opts) {
  return demosaic_ahd_detailed(m, opts).image;
}

LinearImage demosaic(const BayerMosaic& m, DemosaicMethod method, const AhdOptions& ahd) {
  switch (method) {
    case DemosaicMethod::bilinear: return demosaic_bilinear(m);
    case DemosaicMethod::kodak: return demosaic_kodak(m);
    case DemosaicMethod::ahd: return demosaic_ahd(m, ahd);
  }
  throw ValidationError("demosaic: invalid method");
}

}  // namespace rawpipe

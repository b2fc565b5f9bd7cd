#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <utility>

namespace rawpipe {

using Index = Eigen::Index;

/// Single image channel, row-major so that row tiles are contiguous.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using PlaneF = Plane<float>;
using PlaneD = Plane<double>;

/// Color-encoding tags. They make linear and gamma-encoded rasters distinct types.
struct LinearSpace {};
struct SrgbSpace {};

/// Three-channel (R, G, B) raster stored as planar Eigen arrays.
template <typename Scalar, typename Space>
class Image {
 public:
  using scalar_type = Scalar;
  using space_type = Space;
  using plane_type = Plane<Scalar>;

  Image() = default;

  Image(Index rows, Index cols)
      : planes_{plane_type::Zero(rows, cols), plane_type::Zero(rows, cols),
                plane_type::Zero(rows, cols)} {}

  Image(plane_type r, plane_type g, plane_type b)
      : planes_{std::move(r), std::move(g), std::move(b)} {}

  static Image Constant(Index rows, Index cols, Scalar value) {
    return Image(plane_type::Constant(rows, cols, value), plane_type::Constant(rows, cols, value),
                 plane_type::Constant(rows, cols, value));
  }

  static Image Constant(Index rows, Index cols, Scalar r, Scalar g, Scalar b) {
    return Image(plane_type::Constant(rows, cols, r), plane_type::Constant(rows, cols, g),
                 plane_type::Constant(rows, cols, b));
  }

  [[nodiscard]] Index rows() const { return planes_[0].rows(); }
  [[nodiscard]] Index cols() const { return planes_[0].cols(); }
  [[nodiscard]] bool empty() const { return planes_[0].size() == 0; }
  [[nodiscard]] static constexpr int channels() { return 3; }

  plane_type& operator[](int c) { return planes_[static_cast<std::size_t>(c)]; }
  const plane_type& operator[](int c) const { return planes_[static_cast<std::size_t>(c)]; }

  Scalar& operator()(Index r, Index c, int ch) { return (*this)[ch](r, c); }
  Scalar operator()(Index r, Index c, int ch) const { return (*this)[ch](r, c); }

  [[nodiscard]] bool all_finite() const {
    for (const auto& p : planes_) {
      if (!p.allFinite()) return false;
    }
    return true;
  }

  template <typename OtherScalar>
  [[nodiscard]] Image<OtherScalar, Space> cast() const {
    return Image<OtherScalar, Space>(planes_[0].template cast<OtherScalar>(),
                                     planes_[1].template cast<OtherScalar>(),
                                     planes_[2].template cast<OtherScalar>());
  }

  /// Reinterprets the pixel data under another color-encoding tag without touching values.
  template <typename OtherSpace>
  [[nodiscard]] Image<Scalar, OtherSpace> retag() const {
    return Image<Scalar, OtherSpace>(planes_[0], planes_[1], planes_[2]);
  }

  friend bool operator==(const Image& a, const Image& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (int c = 0; c < 3; ++c) {
      if ((a[c] != b[c]).any()) return false;
    }
    return true;
  }

 private:
  std::array<plane_type, 3> planes_;
};

template <typename Scalar>
using LinearImageT = Image<Scalar, LinearSpace>;
template <typename Scalar>
using SrgbImageT = Image<Scalar, SrgbSpace>;

using LinearImage = LinearImageT<float>;
using SrgbImage = SrgbImageT<float>;

/// Applies `fn(plane) -> plane` to each channel.
template <typename Scalar, typename Space, typename Fn>
Image<Scalar, Space> map_planes(const Image<Scalar, Space>& img, Fn&& fn) {
  return Image<Scalar, Space>(fn(img[0]), fn(img[1]), fn(img[2]));
}

template <typename Scalar, typename Space>
[[nodiscard]] double mean_value(const Image<Scalar, Space>& img) {
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) sum += img[c].template cast<double>().sum();
  return sum / (3.0 * static_cast<double>(img.rows() * img.cols()));
}

}  // namespace rawpipe

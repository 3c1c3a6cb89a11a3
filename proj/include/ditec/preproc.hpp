#pragma once

// Sensor modeling: color-space conversion, low-pass filtering and HSV
// distribution statistics. All intensities are normalized reals in [0,1].

#include <array>
#include <cstdint>
#include <span>

#include "ditec/grid.hpp"

namespace ditec {

enum class ColorSpace { RGB, YCbCr, HSV };

/// Three same-shaped intensity planes tagged with their color space.
/// Plane order follows the space: (R,G,B), (Y,Cb,Cr) or (H,S,V).
struct ImagePlanes {
    std::array<Grid<double>, 3> planes;
    ColorSpace space = ColorSpace::RGB;

    std::size_t width() const noexcept { return planes[0].cols(); }
    std::size_t height() const noexcept { return planes[0].rows(); }

    /// Throws ContractViolation if shapes differ, are empty, or a value leaves [0,1].
    void validate() const;

    /// Decodes interleaved 8-bit RGB (row-major, 3 bytes per pixel).
    static ImagePlanes from_rgb8(std::span<const std::uint8_t> rgb, std::size_t width,
                                 std::size_t height);
    static ImagePlanes uniform(std::size_t width, std::size_t height, std::array<double, 3> value,
                               ColorSpace space = ColorSpace::RGB);
};

struct HsvStats {
    double mu_h = 0, sigma_h = 0;
    double mu_s = 0, sigma_s = 0;
    double mu_v = 0, sigma_v = 0;
};

/// Full-range BT.601, clamped to [0,1].
ImagePlanes rgb_to_ycbcr(const ImagePlanes& img);

/// Hexcone HSV with H in [0,1). Achromatic pixels get H = 0.
ImagePlanes rgb_to_hsv(const ImagePlanes& img);

std::array<double, 3> rgb_to_hsv_pixel(double r, double g, double b) noexcept;
std::array<double, 3> hsv_to_rgb_pixel(double h, double s, double v) noexcept;

/// Normalized square Gaussian kernel; `size` must be odd.
Grid<double> gaussian_kernel(int size, double sigma);

/// 2D convolution with edge-replicate borders.
Grid<double> convolve_replicate(const Grid<double>& plane, const Grid<double>& kernel);

/// Per-plane convolution. Kernel must be odd-sided and sum to 1 (within 1e-9).
ImagePlanes lowpass(const ImagePlanes& img, const Grid<double>& kernel);

/// Per-plane mean and population standard deviation.
HsvStats hsv_stats(const ImagePlanes& img);

}  // namespace ditec

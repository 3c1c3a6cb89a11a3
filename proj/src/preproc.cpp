#include "ditec/preproc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ditec {

namespace {

double clamp01(double v) noexcept { return std::clamp(v, 0.0, 1.0); }

void require_space(const ImagePlanes& img, ColorSpace expected, const char* op) {
    require(img.space == expected, std::string(op) + ": wrong input color space");
}

template <class PixelFn>
ImagePlanes map_pixels(const ImagePlanes& img, ColorSpace out_space, PixelFn fn) {
    ImagePlanes out;
    out.space = out_space;
    const std::size_t h = img.height(), w = img.width();
    for (auto& p : out.planes) p = Grid<double>(h, w);
    for (std::size_t i = 0; i < h * w; ++i) {
        auto px = fn(img.planes[0].data()[i], img.planes[1].data()[i], img.planes[2].data()[i]);
        for (int c = 0; c < 3; ++c) out.planes[c].data()[i] = px[c];
    }
    return out;
}

}  // namespace

void ImagePlanes::validate() const {
    const auto h = planes[0].rows(), w = planes[0].cols();
    require(h >= 1 && w >= 1, "ImagePlanes: empty image");
    for (const auto& p : planes) {
        require(p.rows() == h && p.cols() == w, "ImagePlanes: planes differ in shape");
        for (double v : p.values()) {
            require(v >= 0.0 && v <= 1.0, "ImagePlanes: intensity outside [0,1]");
        }
    }
}

ImagePlanes ImagePlanes::from_rgb8(std::span<const std::uint8_t> rgb, std::size_t width,
                                   std::size_t height) {
    require(width >= 1 && height >= 1, "from_rgb8: empty image");
    require(rgb.size() == width * height * 3, "from_rgb8: buffer size mismatch");
    ImagePlanes img;
    img.space = ColorSpace::RGB;
    for (auto& p : img.planes) p = Grid<double>(height, width);
    for (std::size_t i = 0; i < width * height; ++i) {
        for (int c = 0; c < 3; ++c) img.planes[c].data()[i] = rgb[3 * i + c] / 255.0;
    }
    return img;
}

ImagePlanes ImagePlanes::uniform(std::size_t width, std::size_t height,
                                 std::array<double, 3> value, ColorSpace space) {
    ImagePlanes img;
    img.space = space;
    for (int c = 0; c < 3; ++c) img.planes[c] = Grid<double>(height, width, value[c]);
    img.validate();
    return img;
}

ImagePlanes rgb_to_ycbcr(const ImagePlanes& img) {
    require_space(img, ColorSpace::RGB, "rgb_to_ycbcr");
    return map_pixels(img, ColorSpace::YCbCr, [](double r, double g, double b) {
        return std::array<double, 3>{
            clamp01(0.299 * r + 0.587 * g + 0.114 * b),
            clamp01(0.5 - 0.168736 * r - 0.331264 * g + 0.5 * b),
            clamp01(0.5 + 0.5 * r - 0.418688 * g - 0.081312 * b),
        };
    });
}

std::array<double, 3> rgb_to_hsv_pixel(double r, double g, double b) noexcept {
    const double max = std::max({r, g, b});
    const double min = std::min({r, g, b});
    const double chroma = max - min;
    double h = 0.0;
    if (chroma > 0.0) {
        if (max == r) {
            h = (g - b) / chroma;
            if (h < 0.0) h += 6.0;
        } else if (max == g) {
            h = (b - r) / chroma + 2.0;
        } else {
            h = (r - g) / chroma + 4.0;
        }
        h /= 6.0;
        if (h >= 1.0) h -= 1.0;
    }
    const double s = max > 0.0 ? chroma / max : 0.0;
    return {h, s, max};
}

std::array<double, 3> hsv_to_rgb_pixel(double h, double s, double v) noexcept {
    const double sector = h * 6.0;
    const double chroma = v * s;
    const double x = chroma * (1.0 - std::abs(std::fmod(sector, 2.0) - 1.0));
    const double m = v - chroma;
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(sector) % 6) {
        case 0: r = chroma, g = x; break;
        case 1: r = x, g = chroma; break;
        case 2: g = chroma, b = x; break;
        case 3: g = x, b = chroma; break;
        case 4: r = x, b = chroma; break;
        default: r = chroma, b = x; break;
    }
    return {r + m, g + m, b + m};
}

ImagePlanes rgb_to_hsv(const ImagePlanes& img) {
    require_space(img, ColorSpace::RGB, "rgb_to_hsv");
    return map_pixels(img, ColorSpace::HSV, rgb_to_hsv_pixel);
}

Grid<double> gaussian_kernel(int size, double sigma) {
    require(size >= 1 && size % 2 == 1, "gaussian_kernel: size must be odd and positive");
    require(sigma > 0.0, "gaussian_kernel: sigma must be positive");
    Grid<double> k(size, size);
    const int half = size / 2;
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        for (int j = -half; j <= half; ++j) {
            double v = std::exp(-(i * i + j * j) / (2.0 * sigma * sigma));
            k(i + half, j + half) = v;
            sum += v;
        }
    }
    for (double& v : k.values()) v /= sum;
    return k;
}

Grid<double> convolve_replicate(const Grid<double>& plane, const Grid<double>& kernel) {
    const auto h = static_cast<long>(plane.rows());
    const auto w = static_cast<long>(plane.cols());
    const auto kh = static_cast<long>(kernel.rows());
    const auto kw = static_cast<long>(kernel.cols());
    const long oy = kh / 2, ox = kw / 2;
    Grid<double> out(plane.rows(), plane.cols());
    for (long y = 0; y < h; ++y) {
        for (long x = 0; x < w; ++x) {
            double acc = 0.0;
            for (long i = 0; i < kh; ++i) {
                const long sy = std::clamp(y + i - oy, 0L, h - 1);
                for (long j = 0; j < kw; ++j) {
                    const long sx = std::clamp(x + j - ox, 0L, w - 1);
                    // Kernel is flipped; symmetric kernels make this moot.
                    acc += kernel(kh - 1 - i, kw - 1 - j) * plane(sy, sx);
                }
            }
            out(y, x) = acc;
        }
    }
    return out;
}

ImagePlanes lowpass(const ImagePlanes& img, const Grid<double>& kernel) {
    require(!kernel.empty() && kernel.rows() % 2 == 1 && kernel.cols() % 2 == 1,
            "lowpass: kernel sides must be odd");
    const double sum = std::accumulate(kernel.values().begin(), kernel.values().end(), 0.0);
    require(std::abs(sum - 1.0) <= 1e-9, "lowpass: kernel weights must sum to 1");
    ImagePlanes out;
    out.space = img.space;
    for (int c = 0; c < 3; ++c) {
        out.planes[c] = convolve_replicate(img.planes[c], kernel);
        // Negative kernel taps could push values out of range.
        for (double& v : out.planes[c].values()) v = clamp01(v);
    }
    return out;
}

HsvStats hsv_stats(const ImagePlanes& img) {
    require_space(img, ColorSpace::HSV, "hsv_stats");
    auto moments = [](const Grid<double>& p) {
        const double n = static_cast<double>(p.size());
        double mean = 0.0;
        for (double v : p.values()) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : p.values()) var += (v - mean) * (v - mean);
        return std::pair{mean, std::sqrt(var / n)};
    };
    HsvStats s;
    std::tie(s.mu_h, s.sigma_h) = moments(img.planes[0]);
    std::tie(s.mu_s, s.sigma_s) = moments(img.planes[1]);
    std::tie(s.mu_v, s.sigma_v) = moments(img.planes[2]);
    return s;
}

}  // namespace ditec

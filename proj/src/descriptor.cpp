#include "ditec/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace ditec {

namespace {

// basis(k, n) = α_k cos(π k (2n + 1) / 2N), stored k-major.
std::vector<double> dct_basis(std::size_t size) {
    std::vector<double> basis(size * size);
    const double n = static_cast<double>(size);
    for (std::size_t k = 0; k < size; ++k) {
        const double alpha = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (std::size_t i = 0; i < size; ++i) {
            basis[k * size + i] =
                alpha * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
        }
    }
    return basis;
}

}  // namespace

Grid<double> dct2(const Grid<double>& input) {
    const std::size_t rows = input.rows(), cols = input.cols();
    require(rows >= 1 && cols >= 1, "dct2: empty matrix");
    const auto row_basis = dct_basis(rows);
    const auto col_basis = dct_basis(cols);

    // Along columns first, then along rows.
    Grid<double> tmp(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k2 = 0; k2 < cols; ++k2) {
            const double* b = &col_basis[k2 * cols];
            double acc = 0.0;
            for (std::size_t c = 0; c < cols; ++c) acc += input(r, c) * b[c];
            tmp(r, k2) = acc;
        }
    }
    Grid<double> out(rows, cols);
    for (std::size_t k1 = 0; k1 < rows; ++k1) {
        const double* b = &row_basis[k1 * rows];
        for (std::size_t r = 0; r < rows; ++r) {
            const double w = b[r];
            for (std::size_t k2 = 0; k2 < cols; ++k2) out(k1, k2) += w * tmp(r, k2);
        }
    }
    return out;
}

std::size_t diagonal_bin_count(std::size_t n_phi, std::size_t n_rho) noexcept {
    const double norm = std::hypot(static_cast<double>(n_phi), static_cast<double>(n_rho));
    return static_cast<std::size_t>(std::ceil(norm));
}

std::size_t diagonal_bin_index(std::size_t k1, std::size_t k2, std::size_t n_phi,
                               std::size_t n_rho) noexcept {
    const double norm = std::hypot(static_cast<double>(n_phi), static_cast<double>(n_rho));
    const double proj = (static_cast<double>(k1) * n_phi + static_cast<double>(k2) * n_rho) / norm;
    return static_cast<std::size_t>(std::floor(proj));
}

DiagonalBins diagonal_bins(const Grid<double>& dct) {
    const std::size_t n1 = dct.rows(), n2 = dct.cols();
    DiagonalBins out;
    out.bins.resize(diagonal_bin_count(n1, n2));
    for (std::size_t k1 = 0; k1 < n1; ++k1) {
        for (std::size_t k2 = 0; k2 < n2; ++k2) {
            out.bins[diagonal_bin_index(k1, k2, n1, n2)].push_back(dct(k1, k2));
        }
    }
    return out;
}

MuKurtosis mu_kurtosis(std::span<const double> values) {
    require(!values.empty(), "mu_kurtosis: empty list");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    // Constant bins: k is undefined, report 0.
    if (*lo == *hi) return {*lo, 0.0};
    double m2 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= n;
    m4 /= n;
    if (m2 * m2 == 0.0) return {mean, 0.0};
    return {mean, m4 / (m2 * m2)};
}

std::vector<double> compress_channel(const Grid<double>& dct) {
    const DiagonalBins bins = diagonal_bins(dct);
    std::vector<double> out;
    out.reserve(2 * bins.bins.size());
    for (const auto& bin : bins.bins) {
        const MuKurtosis mk = bin.empty() ? MuKurtosis{} : mu_kurtosis(bin);
        out.push_back(mk.mu);
        out.push_back(mk.k);
    }
    return out;
}

DescriptorVector assemble_descriptor(const std::array<std::vector<double>, 3>& channels,
                                     const HsvStats& hsv, const KeepCounts& keep) {
    static constexpr const char* kNames[3] = {"Y", "Cb", "Cr"};
    const std::array<std::size_t, 3> kept = {keep.y, keep.cb, keep.cr};
    const std::array<std::array<double, 2>, 3> substitutes = {{
        {hsv.mu_v, hsv.sigma_v},
        {hsv.mu_h, hsv.sigma_h},
        {hsv.mu_s, hsv.sigma_s},
    }};
    DescriptorVector out;
    for (int c = 0; c < 3; ++c) {
        const auto& values = channels[c];
        require(kept[c] % 2 == 0, "assemble_descriptor: keep counts must be even");
        require(kept[c] <= values.size(),
                std::string("assemble_descriptor: keep count exceeds channel ") + kNames[c]);
        for (std::size_t i = 0; i < kept[c]; ++i) {
            out.values.push_back(i < 2 ? substitutes[c][i] : values[i]);
        }
        out.layout.push_back({kNames[c], kept[c]});
    }
    return out;
}

std::vector<std::string> descriptor_attribute_names(const KeepCounts& keep) {
    static constexpr const char* kNames[3] = {"Y", "Cb", "Cr"};
    static constexpr const char* kHsv[3] = {"v", "h", "s"};
    const std::array<std::size_t, 3> kept = {keep.y, keep.cb, keep.cr};
    std::vector<std::string> names;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < kept[c]; ++i) {
            char buf[48];
            if (i == 0) {
                std::snprintf(buf, sizeof buf, "%s_hsv_%s_mu", kNames[c], kHsv[c]);
            } else if (i == 1) {
                std::snprintf(buf, sizeof buf, "%s_hsv_%s_sigma", kNames[c], kHsv[c]);
            } else {
                std::snprintf(buf, sizeof buf, "%s_b%03zu_%s", kNames[c], i / 2,
                              i % 2 == 0 ? "mu" : "k");
            }
            names.emplace_back(buf);
        }
    }
    return names;
}

std::size_t full_descriptor_length(std::size_t n_phi, std::size_t n_rho, std::size_t n_c,
                                   std::size_t n_f) noexcept {
    return diagonal_bin_count(n_phi, n_rho) * n_c * n_f;
}

double reduction_factor(double n_phi, double n_rho, double n_f) {
    require(n_phi > 0 && n_rho > 0 && n_f > 0, "reduction_factor: arguments must be positive");
    return n_phi * n_rho / (std::hypot(n_phi, n_rho) * n_f);
}

}  // namespace ditec

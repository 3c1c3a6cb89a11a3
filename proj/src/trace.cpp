#include "ditec/trace.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ditec/csv.hpp"
#include "ditec/parallel.hpp"

namespace ditec {

namespace {

constexpr double kPi = std::numbers::pi;

struct CosSin {
    double c, s;
};

// Multiples of π/2 get exact values so that φ = 0 and φ = π give the
// vertical lines x = ρ and x = −ρ without a rounding residue in sin φ.
CosSin exact_cos_sin(double phi) noexcept {
    const double quarter = phi / (kPi / 2);
    const double k = std::round(quarter);
    if (std::abs(quarter - k) < 1e-12) {
        switch (((static_cast<long>(k) % 4) + 4) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return {std::cos(phi), std::sin(phi)};
}

std::size_t clamp_index(double v, std::size_t n) noexcept {
    if (!(v > 0.0)) return 0;
    auto i = static_cast<std::size_t>(v);
    return i >= n ? n - 1 : i;
}

}  // namespace

void TraceParams::validate() const {
    require(n_phi >= 5, "TraceParams: n_phi must be at least 5");
    require(n_rho >= 1, "TraceParams: n_rho must be at least 1");
    require(n_xi >= 2, "TraceParams: n_xi must be at least 2");
    require(q > 0.0 && r > 0.0, "TraceParams: q and r must be positive");
}

double TraceParams::phi_at(int i) const noexcept {
    const double span = phi_range == PhiRange::Full ? 2.0 * kPi : kPi;
    return span * i / n_phi;
}

double TraceParams::rho_at(int j, std::size_t width, std::size_t height) const noexcept {
    const double radius = static_cast<double>(std::min(width, height)) / 2.0;
    if (n_rho == 1) return 0.0;
    const double frac = static_cast<double>(j) / (n_rho - 1);
    return rho_range == RhoRange::Symmetric ? -radius + 2.0 * radius * frac : radius * frac;
}

Resolutions resolutions_from_steps(double delta_phi, double delta_rho, double delta_l,
                                   std::size_t width, std::size_t height) {
    require(delta_phi > 0 && delta_rho > 0 && delta_l > 0,
            "resolutions_from_steps: steps must be positive");
    // The small slack keeps exact ratios such as 2π/(π/2) from flooring to 3.
    auto count = [](double ratio) {
        return std::max(1, static_cast<int>(std::floor(ratio * (1.0 + 1e-12))));
    };
    return {count(2.0 * kPi / delta_phi),
            count(static_cast<double>(std::min(width, height)) / delta_rho), count(1.0 / delta_l)};
}

Chord line_chord(double phi, double rho, std::size_t width, std::size_t height) noexcept {
    const auto [c, s] = exact_cos_sin(phi);
    const double px = rho * c, py = rho * s;
    const double dx = -s, dy = c;
    const double hx = width / 2.0, hy = height / 2.0;
    double tmin = -INFINITY, tmax = INFINITY;
    auto clip = [&](double p, double d, double half) {
        if (d == 0.0) {
            if (std::abs(p) > half) tmax = -INFINITY;
            return;
        }
        double a = (-half - p) / d, b = (half - p) / d;
        if (a > b) std::swap(a, b);
        tmin = std::max(tmin, a);
        tmax = std::min(tmax, b);
    };
    clip(px, dx, hx);
    clip(py, dy, hy);
    Chord chord;
    chord.dx = dx;
    chord.dy = dy;
    if (tmax > tmin) {
        chord.start = {px + tmin * dx, py + tmin * dy};
        chord.length = tmax - tmin;
    }
    return chord;
}

std::vector<Point> line_points(double phi, double rho, int n_xi, std::size_t width,
                               std::size_t height) {
    const Chord chord = line_chord(phi, rho, width, height);
    std::vector<Point> pts;
    if (chord.length <= 0.0 || n_xi <= 0) return pts;
    const double dt = chord.length / n_xi;
    pts.reserve(n_xi);
    for (int k = 0; k < n_xi; ++k) {
        const double t = (k + 0.5) * dt;
        pts.push_back({chord.start.x + t * chord.dx, chord.start.y + t * chord.dy});
    }
    return pts;
}

double functional_radon(std::span<const double> samples, double dt) {
    require(dt > 0.0, "functional_radon: dt must be positive");
    double sum = 0.0;
    for (double v : samples) sum += v;
    return sum * dt;
}

double functional_if2(std::span<const double> samples, double dt, double q, double r) {
    require(dt > 0.0, "functional_if2: dt must be positive");
    require(q > 0.0 && r > 0.0, "functional_if2: q and r must be positive");
    double sum = 0.0;
    if (q == 2.0) {
        for (double v : samples) sum += v * v;
    } else if (q == 1.0) {
        for (double v : samples) sum += std::abs(v);
    } else {
        for (double v : samples) sum += std::pow(std::abs(v), q);
    }
    const double integral = sum * dt;
    return r == 0.5 ? std::sqrt(integral) : std::pow(integral, r);
}

double sample_bilinear(const Grid<double>& plane, double x, double y) noexcept {
    const std::size_t h = plane.rows(), w = plane.cols();
    const double u = std::clamp(x + w / 2.0 - 0.5, 0.0, static_cast<double>(w - 1));
    const double v = std::clamp(h / 2.0 - y - 0.5, 0.0, static_cast<double>(h - 1));
    const auto j0 = static_cast<std::size_t>(u);
    const auto i0 = static_cast<std::size_t>(v);
    const std::size_t j1 = std::min(j0 + 1, w - 1);
    const std::size_t i1 = std::min(i0 + 1, h - 1);
    const double fu = u - j0, fv = v - i0;
    const double top = plane(i0, j0) + fu * (plane(i0, j1) - plane(i0, j0));
    const double bottom = plane(i1, j0) + fu * (plane(i1, j1) - plane(i1, j0));
    return top + fv * (bottom - top);
}

double sample_nearest(const Grid<double>& plane, double x, double y) noexcept {
    const std::size_t h = plane.rows(), w = plane.cols();
    return plane(clamp_index(h / 2.0 - y, h), clamp_index(x + w / 2.0, w));
}

Sinogram trace_transform(const Grid<double>& plane, const TraceParams& params, ChannelId channel,
                         int threads) {
    require(!plane.empty(), "trace_transform: empty plane");
    params.validate();
    const std::size_t w = plane.cols(), h = plane.rows();
    Sinogram out{Grid<double>(params.n_phi, params.n_rho), params, channel};

    parallel_for(static_cast<std::size_t>(params.n_phi), threads, [&](std::size_t i) {
        std::vector<double> samples(params.n_xi);
        const double phi = params.phi_at(static_cast<int>(i));
        for (int j = 0; j < params.n_rho; ++j) {
            const Chord chord = line_chord(phi, params.rho_at(j, w, h), w, h);
            if (chord.length <= 0.0) {
                out.values(i, j) = 0.0;
                continue;
            }
            const double dt = chord.length / params.n_xi;
            const double sx = chord.dx * dt, sy = chord.dy * dt;
            double x = chord.start.x + 0.5 * sx, y = chord.start.y + 0.5 * sy;
            for (int k = 0; k < params.n_xi; ++k) {
                samples[k] = params.interpolation == Interpolation::Bilinear
                                 ? sample_bilinear(plane, x, y)
                                 : sample_nearest(plane, x, y);
                x += sx;
                y += sy;
            }
            out.values(i, j) = params.functional == Functional::Radon
                                   ? functional_radon(samples, dt)
                                   : functional_if2(samples, dt, params.q, params.r);
        }
    });
    return out;
}

void accumulate_line(ContributionMask& mask, double phi, double rho, int n_xi) {
    const std::size_t h = mask.counts.rows(), w = mask.counts.cols();
    for (const Point& p : line_points(phi, rho, n_xi, w, h)) {
        ++mask.counts(clamp_index(h / 2.0 - p.y, h), clamp_index(p.x + w / 2.0, w));
    }
}

ContributionMask contribution_mask(const TraceParams& params, std::size_t width,
                                   std::size_t height) {
    params.validate();
    require(width >= 1 && height >= 1, "contribution_mask: empty raster");
    ContributionMask mask{Grid<std::int64_t>(height, width, 0)};
    for (int i = 0; i < params.n_phi; ++i) {
        const double phi = params.phi_at(i);
        for (int j = 0; j < params.n_rho; ++j) {
            accumulate_line(mask, phi, params.rho_at(j, width, height), params.n_xi);
        }
    }
    return mask;
}

MaskMetrics mask_metrics(const ContributionMask& mask) {
    const auto values = mask.counts.values();
    if (values.empty()) return {};
    const double n = static_cast<double>(values.size());
    std::size_t used = 0;
    double sum = 0.0;
    for (auto c : values) {
        used += c > 0;
        sum += static_cast<double>(c);
    }
    const double mean = sum / n;
    double var = 0.0;
    for (auto c : values) var += (c - mean) * (c - mean);
    return {100.0 * used / n, mean, var / n};
}

std::string format_mask_table(std::span<const MaskRow> rows) {
    std::ostringstream os;
    os << std::setw(8) << "n_phi" << std::setw(8) << "n_rho" << std::setw(8) << "n_xi"
       << std::setw(16) << "% pixels used" << std::setw(12) << "Mean" << std::setw(16) << "Var"
       << '\n';
    for (const auto& row : rows) {
        os << std::setw(8) << row.n_phi << std::setw(8) << row.n_rho << std::setw(8) << row.n_xi
           << std::fixed << std::setprecision(2) << std::setw(16) << row.metrics.coverage_pct
           << std::setw(12) << row.metrics.mean_repetition << std::setw(16)
           << row.metrics.variance << std::defaultfloat << '\n';
    }
    return os.str();
}

void write_sinogram_csv(std::ostream& out, const Sinogram& sinogram) {
    const auto& v = sinogram.values;
    for (std::size_t i = 0; i < v.rows(); ++i) {
        for (std::size_t j = 0; j < v.cols(); ++j) {
            if (j) out << ',';
            out << csv::format_double(v(i, j));
        }
        out << '\n';
    }
}

void write_sinogram_pgm(std::ostream& out, const Sinogram& sinogram) {
    const auto& v = sinogram.values;
    const auto [lo, hi] = std::minmax_element(v.values().begin(), v.values().end());
    const double low = v.empty() ? 0.0 : *lo;
    const double range = v.empty() ? 0.0 : *hi - *lo;
    out << "P5\n" << v.cols() << ' ' << v.rows() << "\n255\n";
    for (double x : v.values()) {
        const double scaled = range > 0.0 ? (x - low) / range * 255.0 : 0.0;
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
    }
}

std::string to_string(Functional f) { return f == Functional::Radon ? "radon" : "if2"; }
std::string to_string(PhiRange r) { return r == PhiRange::Full ? "full" : "half"; }
std::string to_string(RhoRange r) { return r == RhoRange::Symmetric ? "symmetric" : "positive"; }
std::string to_string(Interpolation i) {
    return i == Interpolation::Bilinear ? "bilinear" : "nearest";
}

Functional parse_functional(const std::string& s) {
    if (s == "radon") return Functional::Radon;
    if (s == "if2") return Functional::IF2;
    throw ContractViolation("unknown functional: " + s);
}

PhiRange parse_phi_range(const std::string& s) {
    if (s == "full") return PhiRange::Full;
    if (s == "half") return PhiRange::Half;
    throw ContractViolation("unknown phi range: " + s);
}

RhoRange parse_rho_range(const std::string& s) {
    if (s == "symmetric") return RhoRange::Symmetric;
    if (s == "positive") return RhoRange::Positive;
    throw ContractViolation("unknown rho range: " + s);
}

Interpolation parse_interpolation(const std::string& s) {
    if (s == "bilinear") return Interpolation::Bilinear;
    if (s == "nearest") return Interpolation::Nearest;
    throw ContractViolation("unknown interpolation: " + s);
}

}  // namespace ditec

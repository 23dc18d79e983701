#pragma once

// RGB rasters, PPM output and a row-parallel pixel driver.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gasket {

using Rgb = std::array<std::uint8_t, 3>;

struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major RGB8

    RasterImage() = default;
    RasterImage(int w, int h) : width(w), height(h), pixels(std::size_t(w) * std::size_t(h) * 3, 0) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("image dimensions must be positive");
    }

    Rgb at(int x, int y) const {
        const auto k = (std::size_t(y) * std::size_t(width) + std::size_t(x)) * 3;
        return {pixels[k], pixels[k + 1], pixels[k + 2]};
    }
    void set(int x, int y, Rgb c) {
        const auto k = (std::size_t(y) * std::size_t(width) + std::size_t(x)) * 3;
        pixels[k] = c[0];
        pixels[k + 1] = c[1];
        pixels[k + 2] = c[2];
    }
};

/// Rectangle [x0,x1] x [y0,y1] of the complex plane.
struct Region {
    double x0 = -2, x1 = 2, y0 = -2, y1 = 2;

    void validate() const {
        if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("region must satisfy x0 < x1 and y0 < y1");
    }
};

/// Width is the resolution; height keeps the aspect ratio.
inline std::pair<int, int> raster_size(const Region& r, int res) {
    r.validate();
    if (res <= 0) throw std::invalid_argument("resolution must be positive");
    const int h = std::max(1, int(std::lround(res * (r.y1 - r.y0) / (r.x1 - r.x0))));
    return {res, h};
}

/// Sample point of pixel (i, j): lattice points including both edges of the
/// region, so that e.g. 0 in [-1,3] is hit exactly at res 400.
inline std::complex<double> pixel_point(const Region& r, int w, int h, int i, int j) {
    const double x = r.x0 + (double(i) * (r.x1 - r.x0)) / double(w);
    const double y = r.y1 - (double(j) * (r.y1 - r.y0)) / double(h);
    return {x, y};
}

/// Explicit count, else GASKETLAB_THREADS, else hardware concurrency.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GASKETLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Fills every pixel with shade(i, j); rows are handed out to workers.
inline RasterImage render_rows(int w, int h, int threads, const std::function<Rgb(int, int)>& shade) {
    RasterImage img(w, h);
    std::atomic<int> next_row{0};
    auto work = [&] {
        for (int j = next_row++; j < h; j = next_row++)
            for (int i = 0; i < w; ++i) img.set(i, j, shade(i, j));
    };
    const int n = std::min(resolve_threads(threads), h);
    std::vector<std::thread> pool;
    for (int k = 1; k < n; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return img;
}

inline std::string encode_ppm(const RasterImage& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

inline void write_image(const RasterImage& img, const std::string& path, const std::string& format = "ppm") {
    if (format != "ppm") throw std::invalid_argument("unsupported image format: " + format);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    const auto bytes = encode_ppm(img);
    f.write(bytes.data(), std::streamsize(bytes.size()));
    if (!f) throw std::runtime_error("write failed for " + path);
}

/// FNV-1a over the encoded PPM; used for golden render hashes.
inline std::uint64_t image_hash(const RasterImage& img) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : encode_ppm(img)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace palette {

inline Rgb shade(Rgb base, int step, int maxiter) {
    const double t = maxiter > 0 ? 0.35 + 0.65 * std::exp(-0.15 * step) : 1.0;
    return {std::uint8_t(base[0] * t), std::uint8_t(base[1] * t), std::uint8_t(base[2] * t)};
}

inline const std::array<Rgb, 8> categorical = {Rgb{230, 97, 1},  Rgb{94, 60, 153},  Rgb{27, 158, 119},
                                               Rgb{253, 184, 99}, Rgb{178, 171, 210}, Rgb{102, 166, 30},
                                               Rgb{231, 41, 138}, Rgb{166, 118, 29}};
inline constexpr Rgb limit{0, 0, 0};
inline constexpr Rgb white{255, 255, 255};

}  // namespace palette

}  // namespace gasket

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace oqhn::img {

/// Minimal RGB8 raster with a zlib-backed PNG encoder; y = 0 is the top row.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, row-major

    Image(int w, int h, std::uint8_t r = 255, std::uint8_t g = 255, std::uint8_t b = 255)
        : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("image: bad size");
        for (std::size_t i = 0; i < rgb.size(); i += 3) {
            rgb[i] = r;
            rgb[i + 1] = g;
            rgb[i + 2] = b;
        }
    }

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        if (x < 0 || x >= width || y < 0 || y >= height) return;
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        rgb[i] = r;
        rgb[i + 1] = g;
        rgb[i + 2] = b;
    }

    void fill_rect(int x0, int y0, int w, int h, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b) {
        for (int y = y0; y < y0 + h; ++y)
            for (int x = x0; x < x0 + w; ++x) set(x, y, r, g, b);
    }

    void draw_line(int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b);
    void draw_disc(int cx, int cy, int radius, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b);
};

void write_png(const Image& image, const std::string& path);

}  // namespace oqhn::img

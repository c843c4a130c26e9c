#include "oqhn/png_writer.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <cstring>

namespace oqhn::img {

void Image::draw_line(int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b) {
    // Bresenham
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        set(x0, y0, r, g, b);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

void Image::draw_disc(int cx, int cy, int radius, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b) {
    for (int y = -radius; y <= radius; ++y)
        for (int x = -radius; x <= radius; ++x)
            if (x * x + y * y <= radius * radius) set(cx + x, cy + y, r, g, b);
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back((v >> 24) & 0xff);
    out.push_back((v >> 16) & 0xff);
    out.push_back((v >> 8) & 0xff);
    out.push_back(v & 0xff);
}

void put_chunk(FILE* f, const char type[4], const std::vector<std::uint8_t>& data) {
    std::vector<std::uint8_t> len;
    put_u32(len, static_cast<std::uint32_t>(data.size()));
    std::fwrite(len.data(), 1, 4, f);
    std::fwrite(type, 1, 4, f);
    if (!data.empty()) std::fwrite(data.data(), 1, data.size(), f);
    std::uint32_t crc = crc32(0, reinterpret_cast<const Bytef*>(type), 4);
    if (!data.empty()) crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
    std::vector<std::uint8_t> crcb;
    put_u32(crcb, crc);
    std::fwrite(crcb.data(), 1, 4, f);
}

}  // namespace

void write_png(const Image& image, const std::string& path) {
    // scanlines with filter byte 0
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(image.height) * (1 + 3 * image.width));
    for (int y = 0; y < image.height; ++y) {
        raw.push_back(0);
        const std::uint8_t* row = image.rgb.data() + 3 * static_cast<std::size_t>(y) * image.width;
        raw.insert(raw.end(), row, row + 3 * image.width);
    }

    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(comp_len);
    if (compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw std::runtime_error("png: zlib compression failed");
    comp.resize(comp_len);

    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("png: cannot open " + path);
    static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    std::fwrite(sig, 1, 8, f);

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(image.width));
    put_u32(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(2);   // color type: truecolor
    ihdr.push_back(0);   // compression
    ihdr.push_back(0);   // filter
    ihdr.push_back(0);   // interlace
    put_chunk(f, "IHDR", ihdr);
    put_chunk(f, "IDAT", comp);
    put_chunk(f, "IEND", {});
    std::fclose(f);
}

}  // namespace oqhn::img

// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/image_io.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace rlpt {

namespace {

uint8_t to_srgb_byte(double v) {
    double g = std::pow(clamp01(v), 1.0 / 2.2);
    return static_cast<uint8_t>(std::min(255.0, std::floor(g * 255.0 + 0.5)));
}

}  // namespace

void write_image(const Image& image, const std::string& path, ImageFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");

    if (format == ImageFormat::Pfm) {
        out << "PF\n" << image.width << " " << image.height << "\n-1.0\n";
        std::vector<float> row(static_cast<size_t>(image.width) * 3);
        for (int y = image.height - 1; y >= 0; --y) {
            for (int x = 0; x < image.width; ++x) {
                const Spectrum& c = image.at(x, y);
                row[3 * x + 0] = static_cast<float>(c.r);
                row[3 * x + 1] = static_cast<float>(c.g);
                row[3 * x + 2] = static_cast<float>(c.b);
            }
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size() * sizeof(float)));
        }
    } else {
        out << "P6\n" << image.width << " " << image.height << "\n255\n";
        std::vector<uint8_t> row(static_cast<size_t>(image.width) * 3);
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                const Spectrum& c = image.at(x, y);
                row[3 * x + 0] = to_srgb_byte(c.r);
                row[3 * x + 1] = to_srgb_byte(c.g);
                row[3 * x + 2] = to_srgb_byte(c.b);
            }
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size()));
        }
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_image(const Image& image, const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".ppm") == 0)
        write_image(image, path, ImageFormat::Ppm);
    else
        write_image(image, path, ImageFormat::Pfm);
}

Image read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string magic;
    in >> magic;
    if (magic != "PF") throw std::runtime_error("'" + path + "': not a color PFM file");
    int w, h;
    double scale;
    in >> w >> h >> scale;
    in.get();  // the single whitespace after the scale line
    if (w <= 0 || h <= 0) throw std::runtime_error("'" + path + "': bad dimensions");
    if (scale >= 0) throw std::runtime_error("'" + path + "': big-endian PFM unsupported");

    Image image(w, h);
    std::vector<float> row(static_cast<size_t>(w) * 3);
    for (int y = h - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!in) throw std::runtime_error("'" + path + "': truncated PFM payload");
        for (int x = 0; x < w; ++x)
            image.at(x, y) = Spectrum(row[3 * x + 0], row[3 * x + 1], row[3 * x + 2]);
    }
    return image;
}

}  // namespace rlpt

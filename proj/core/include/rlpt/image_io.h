// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "rlpt/integrator.h"

namespace rlpt {

enum class ImageFormat { Pfm, Ppm };

// PFM: "PF\n<w> <h>\n-1.0\n" followed by rows bottom-to-top of raw
// little-endian 32-bit float RGB triples. PPM: P6, 8-bit, gamma 1/2.2 after
// clamping to [0,1]. Throws std::runtime_error on I/O failure.
void write_image(const Image& image, const std::string& path, ImageFormat format);

// Picks the format from the file extension (.pfm / .ppm).
void write_image(const Image& image, const std::string& path);

Image read_pfm(const std::string& path);

}  // namespace rlpt

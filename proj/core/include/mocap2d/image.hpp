#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mocap2d/common.hpp"

namespace mocap2d::render {

struct Rgba {
    std::uint8_t r = 0, g = 0, b = 0, a = 255;

    bool operator==(const Rgba&) const = default;
};

// Row-major RGBA8, top-left origin.
struct FrameImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 4

    FrameImage() = default;
    FrameImage(int w, int h, Rgba fill = {0, 0, 0, 0});

    Rgba get(int x, int y) const;
    void set(int x, int y, Rgba c);
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
};

void write_png(const FrameImage& image, const std::string& path);
FrameImage read_png(const std::string& path);

// GIF89a with a fixed 6x6x6 color-cube palette; delay in centiseconds.
std::vector<std::uint8_t> encode_gif(const std::vector<FrameImage>& frames,
                                     int delay_cs);

}  // namespace mocap2d::render

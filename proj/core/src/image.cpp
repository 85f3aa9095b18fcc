#include "mocap2d/image.hpp"

#include <cstdio>
#include <cstring>
#include <map>

#include <png.h>

namespace mocap2d::render {

FrameImage::FrameImage(int w, int h, Rgba fill) : width(w), height(h) {
    if (w < 1 || h < 1)
        throw Error("InvalidImageSize", "image dimensions must be >= 1");
    pixels.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 4);
    for (std::size_t i = 0; i < pixels.size(); i += 4) {
        pixels[i] = fill.r;
        pixels[i + 1] = fill.g;
        pixels[i + 2] = fill.b;
        pixels[i + 3] = fill.a;
    }
}

Rgba FrameImage::get(int x, int y) const {
    std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)) * 4;
    return {pixels[i], pixels[i + 1], pixels[i + 2], pixels[i + 3]};
}

void FrameImage::set(int x, int y, Rgba c) {
    if (!in_bounds(x, y)) return;
    std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)) * 4;
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
    pixels[i + 3] = c.a;
}

void write_png(const FrameImage& image, const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp)
        throw Error("IoError", "cannot open '" + path + "' for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw Error("IoError", "PNG write failed for '" + path + "'");
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGBA,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y)
        png_write_row(png, const_cast<png_bytep>(
                               image.pixels.data() +
                               static_cast<std::size_t>(y) *
                                   static_cast<std::size_t>(image.width) * 4));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

FrameImage read_png(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp)
        throw Error("IoError", "cannot open '" + path + "'");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw Error("IoError", "PNG read failed for '" + path + "'");
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    png_set_expand(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_add_alpha(png, 0xFF, PNG_FILLER_AFTER);
    png_read_update_info(png, info);

    FrameImage image(static_cast<int>(png_get_image_width(png, info)),
                     static_cast<int>(png_get_image_height(png, info)));
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    for (int y = 0; y < image.height; ++y)
        rows[static_cast<std::size_t>(y)] =
            image.pixels.data() +
            static_cast<std::size_t>(y) * static_cast<std::size_t>(image.width) * 4;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return image;
}

namespace {

// 6x6x6 color cube; levels 0,51,...,255.
int cube_index(Rgba c) {
    auto level = [](std::uint8_t v) { return (static_cast<int>(v) * 5 + 127) / 255; };
    return 36 * level(c.r) + 6 * level(c.g) + level(c.b);
}

class BitPacker {
public:
    void push(int code, int bits) {
        buffer_ |= static_cast<std::uint32_t>(code) << filled_;
        filled_ += bits;
        while (filled_ >= 8) {
            block_.push_back(static_cast<std::uint8_t>(buffer_ & 0xFF));
            buffer_ >>= 8;
            filled_ -= 8;
            if (block_.size() == 255) flush_block();
        }
    }

    void finish(std::vector<std::uint8_t>& out) {
        if (filled_ > 0) {
            block_.push_back(static_cast<std::uint8_t>(buffer_ & 0xFF));
            if (block_.size() == 255) flush_block();
        }
        if (!block_.empty()) flush_block();
        out_.push_back(0);  // block terminator
        out.insert(out.end(), out_.begin(), out_.end());
    }

private:
    void flush_block() {
        out_.push_back(static_cast<std::uint8_t>(block_.size()));
        out_.insert(out_.end(), block_.begin(), block_.end());
        block_.clear();
    }

    std::uint32_t buffer_ = 0;
    int filled_ = 0;
    std::vector<std::uint8_t> block_;
    std::vector<std::uint8_t> out_;
};

void lzw_encode(const std::vector<std::uint8_t>& indices, std::vector<std::uint8_t>& out) {
    constexpr int min_code_size = 8;
    constexpr int clear_code = 1 << min_code_size;       // 256
    constexpr int eoi_code = clear_code + 1;             // 257

    out.push_back(min_code_size);
    BitPacker packer;

    std::map<std::pair<int, std::uint8_t>, int> table;
    int next_code = eoi_code + 1;
    int code_bits = min_code_size + 1;

    packer.push(clear_code, code_bits);
    int prefix = -1;
    for (std::uint8_t sym : indices) {
        if (prefix < 0) {
            prefix = sym;
            continue;
        }
        auto it = table.find({prefix, sym});
        if (it != table.end()) {
            prefix = it->second;
        } else {
            packer.push(prefix, code_bits);
            table[{prefix, sym}] = next_code++;
            if (next_code > (1 << code_bits) && code_bits < 12) ++code_bits;
            if (next_code == 4096) {
                packer.push(clear_code, code_bits);
                table.clear();
                next_code = eoi_code + 1;
                code_bits = min_code_size + 1;
            }
            prefix = sym;
        }
    }
    if (prefix >= 0) packer.push(prefix, code_bits);
    packer.push(eoi_code, code_bits);
    packer.finish(out);
}

void push_u16(std::vector<std::uint8_t>& out, int v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
}

}  // namespace

std::vector<std::uint8_t> encode_gif(const std::vector<FrameImage>& frames, int delay_cs) {
    if (frames.empty())
        throw Error("InvalidArgument", "GIF needs at least one frame");
    const int width = frames[0].width;
    const int height = frames[0].height;
    for (const auto& f : frames)
        if (f.width != width || f.height != height)
            throw Error("InvalidArgument", "GIF frames must share dimensions");

    std::vector<std::uint8_t> out;
    const char* header = "GIF89a";
    out.insert(out.end(), header, header + 6);
    push_u16(out, width);
    push_u16(out, height);
    out.push_back(0xF7);  // global color table, 256 entries, 8-bit color
    out.push_back(0);     // background color index
    out.push_back(0);     // aspect ratio

    static const std::uint8_t levels[6] = {0, 51, 102, 153, 204, 255};
    for (int r = 0; r < 6; ++r)
        for (int g = 0; g < 6; ++g)
            for (int b = 0; b < 6; ++b) {
                out.push_back(levels[r]);
                out.push_back(levels[g]);
                out.push_back(levels[b]);
            }
    for (int i = 216; i < 256; ++i) {
        out.push_back(0);
        out.push_back(0);
        out.push_back(0);
    }

    // Netscape looping extension: loop forever.
    const std::uint8_t loop_ext[] = {0x21, 0xFF, 0x0B, 'N', 'E', 'T', 'S', 'C', 'A',
                                     'P',  'E',  '2',  '.', '0', 0x03, 0x01, 0x00,
                                     0x00, 0x00};
    out.insert(out.end(), std::begin(loop_ext), std::end(loop_ext));

    for (const auto& frame : frames) {
        // Graphic control extension.
        out.push_back(0x21);
        out.push_back(0xF9);
        out.push_back(0x04);
        out.push_back(0x04);  // disposal: do not dispose
        push_u16(out, delay_cs);
        out.push_back(0);  // no transparent color
        out.push_back(0);

        // Image descriptor, full frame, global palette.
        out.push_back(0x2C);
        push_u16(out, 0);
        push_u16(out, 0);
        push_u16(out, width);
        push_u16(out, height);
        out.push_back(0);

        std::vector<std::uint8_t> indices;
        indices.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                indices.push_back(static_cast<std::uint8_t>(cube_index(frame.get(x, y))));
        lzw_encode(indices, out);
    }
    out.push_back(0x3B);  // trailer
    return out;
}

}  // namespace mocap2d::render

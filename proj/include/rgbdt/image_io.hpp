#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "rgbdt/types.hpp"

namespace rgbdt {

// Single-channel raster with 8- or 16-bit samples, stored widened.
struct GrayImage {
    int width = 0;
    int height = 0;
    int bit_depth = 8;
    std::vector<std::uint16_t> pixels;

    bool operator==(const GrayImage&) const = default;
};

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::array<std::uint8_t, 3>> pixels;

    bool operator==(const RgbImage&) const = default;
};

namespace detail {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return data;
}

inline void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

// ---- NetPBM -------------------------------------------------------------

// Reads one whitespace-delimited header token, skipping '#' comments.
inline std::string pnm_token(const std::vector<std::uint8_t>& data, std::size_t& pos,
                             const std::filesystem::path& path) {
    while (pos < data.size()) {
        const char c = static_cast<char>(data[pos]);
        if (c == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    std::string token;
    while (pos < data.size()) {
        const char c = static_cast<char>(data[pos]);
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') break;
        token.push_back(c);
        ++pos;
    }
    if (token.empty()) {
        throw IoError("truncated header in " + path.string());
    }
    return token;
}

inline int pnm_int(const std::vector<std::uint8_t>& data, std::size_t& pos,
                   const std::filesystem::path& path) {
    const std::string token = pnm_token(data, pos, path);
    try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size() || value < 0) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw IoError("bad header value '" + token + "' in " + path.string());
    }
}

// ---- PNG ----------------------------------------------------------------

inline void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t get_be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

inline void png_chunk(std::vector<std::uint8_t>& out, const char type[4],
                      const std::vector<std::uint8_t>& payload) {
    put_be32(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const auto crc = static_cast<std::uint32_t>(
        ::crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + payload.size())));
    put_be32(out, crc);
}

inline std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& raw) {
    uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> out(bound);
    if (::compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                    Z_DEFAULT_COMPRESSION) != Z_OK) {
        throw IoError("zlib compression failed");
    }
    out.resize(bound);
    return out;
}

inline std::vector<std::uint8_t> zlib_inflate(const std::vector<std::uint8_t>& compressed,
                                              std::size_t raw_size,
                                              const std::filesystem::path& path) {
    std::vector<std::uint8_t> raw(raw_size);
    uLongf dest_len = static_cast<uLongf>(raw_size);
    const int rc = ::uncompress(raw.data(), &dest_len, compressed.data(),
                                static_cast<uLong>(compressed.size()));
    if (rc != Z_OK || dest_len != raw_size) {
        throw IoError("corrupt image data in " + path.string());
    }
    return raw;
}

inline std::uint8_t paeth(std::uint8_t a, std::uint8_t b, std::uint8_t c) {
    const int p = int(a) + int(b) - int(c);
    const int pa = std::abs(p - int(a));
    const int pb = std::abs(p - int(b));
    const int pc = std::abs(p - int(c));
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

// Reverses per-row filtering in place; `bpp` is the filter unit in bytes.
inline void png_unfilter(std::vector<std::uint8_t>& raw, int height, std::size_t stride,
                         std::size_t bpp, const std::filesystem::path& path) {
    std::vector<std::uint8_t> prior(stride, 0);
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        const std::uint8_t filter = row[0];
        std::uint8_t* cur = row + 1;
        switch (filter) {
            case 0:
                break;
            case 1:
                for (std::size_t i = bpp; i < stride; ++i) cur[i] += cur[i - bpp];
                break;
            case 2:
                for (std::size_t i = 0; i < stride; ++i) cur[i] += prior[i];
                break;
            case 3:
                for (std::size_t i = 0; i < stride; ++i) {
                    const std::uint8_t left = i >= bpp ? cur[i - bpp] : 0;
                    cur[i] += static_cast<std::uint8_t>((int(left) + int(prior[i])) / 2);
                }
                break;
            case 4:
                for (std::size_t i = 0; i < stride; ++i) {
                    const std::uint8_t left = i >= bpp ? cur[i - bpp] : 0;
                    const std::uint8_t upleft = i >= bpp ? prior[i - bpp] : 0;
                    cur[i] += paeth(left, prior[i], upleft);
                }
                break;
            default:
                throw IoError("unsupported PNG filter in " + path.string());
        }
        std::memcpy(prior.data(), cur, stride);
    }
}

struct PngRaster {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    int color_type = 0;  // 0 = gray, 2 = rgb
    std::vector<std::uint8_t> samples;  // unfiltered scanline bytes
};

inline constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

inline PngRaster read_png_raster(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> data = read_file(path);
    if (data.size() < 8 || std::memcmp(data.data(), kPngSignature, 8) != 0) {
        throw IoError("not a PNG file: " + path.string());
    }
    PngRaster png;
    std::vector<std::uint8_t> idat;
    bool have_ihdr = false;
    std::size_t pos = 8;
    while (pos + 8 <= data.size()) {
        const std::uint32_t len = get_be32(data.data() + pos);
        if (pos + 12 + len > data.size()) {
            throw IoError("truncated PNG chunk in " + path.string());
        }
        const char* type = reinterpret_cast<const char*>(data.data() + pos + 4);
        const std::uint8_t* payload = data.data() + pos + 8;
        const std::uint32_t expected_crc = get_be32(payload + len);
        const auto actual_crc = static_cast<std::uint32_t>(
            ::crc32(0L, data.data() + pos + 4, static_cast<uInt>(4 + len)));
        if (expected_crc != actual_crc) {
            throw IoError("PNG chunk checksum mismatch in " + path.string());
        }
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw IoError("bad IHDR in " + path.string());
            png.width = static_cast<int>(get_be32(payload));
            png.height = static_cast<int>(get_be32(payload + 4));
            png.bit_depth = payload[8];
            png.color_type = payload[9];
            if (payload[10] != 0 || payload[11] != 0) {
                throw IoError("unsupported PNG compression or filter method in " + path.string());
            }
            if (payload[12] != 0) {
                throw IoError("interlaced PNG not supported: " + path.string());
            }
            if (png.width < 1 || png.height < 1) {
                throw IoError("bad PNG dimensions in " + path.string());
            }
            const bool gray = png.color_type == 0 && (png.bit_depth == 8 || png.bit_depth == 16);
            const bool rgb = png.color_type == 2 && png.bit_depth == 8;
            if (!gray && !rgb) {
                throw IoError("unsupported PNG format (color type " +
                              std::to_string(png.color_type) + ", bit depth " +
                              std::to_string(png.bit_depth) + ") in " + path.string());
            }
            have_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + len;
    }
    if (!have_ihdr || idat.empty()) {
        throw IoError("incomplete PNG: " + path.string());
    }
    const int channels = png.color_type == 2 ? 3 : 1;
    const std::size_t bps = static_cast<std::size_t>(png.bit_depth) / 8;
    const std::size_t stride = static_cast<std::size_t>(png.width) * channels * bps;
    const std::size_t raw_size = static_cast<std::size_t>(png.height) * (stride + 1);
    std::vector<std::uint8_t> raw = zlib_inflate(idat, raw_size, path);
    png_unfilter(raw, png.height, stride, channels * bps, path);
    png.samples.resize(static_cast<std::size_t>(png.height) * stride);
    for (int y = 0; y < png.height; ++y) {
        std::memcpy(png.samples.data() + static_cast<std::size_t>(y) * stride,
                    raw.data() + static_cast<std::size_t>(y) * (stride + 1) + 1, stride);
    }
    return png;
}

inline void write_png_raster(const std::filesystem::path& path, int width, int height,
                             int bit_depth, int color_type,
                             const std::vector<std::uint8_t>& samples) {
    const int channels = color_type == 2 ? 3 : 1;
    const std::size_t stride = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(height) * (stride + 1));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);  // filter: none
        const std::uint8_t* row = samples.data() + static_cast<std::size_t>(y) * stride;
        raw.insert(raw.end(), row, row + stride);
    }
    std::vector<std::uint8_t> ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(width));
    put_be32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(static_cast<std::uint8_t>(bit_depth));
    ihdr.push_back(static_cast<std::uint8_t>(color_type));
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kPngSignature, kPngSignature + 8);
    png_chunk(out, "IHDR", ihdr);
    png_chunk(out, "IDAT", zlib_deflate(raw));
    png_chunk(out, "IEND", {});
    write_file(path, out);
}

}  // namespace detail

// ---- PGM / PPM ----------------------------------------------------------

inline GrayImage read_pgm(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> data = detail::read_file(path);
    std::size_t pos = 0;
    if (detail::pnm_token(data, pos, path) != "P5") {
        throw IoError("not a binary PGM: " + path.string());
    }
    GrayImage img;
    img.width = detail::pnm_int(data, pos, path);
    img.height = detail::pnm_int(data, pos, path);
    const int maxval = detail::pnm_int(data, pos, path);
    if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 65535) {
        throw IoError("bad PGM header in " + path.string());
    }
    img.bit_depth = maxval <= 255 ? 8 : 16;
    ++pos;  // single whitespace after maxval
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    const std::size_t bytes = count * (img.bit_depth / 8);
    if (pos + bytes > data.size()) {
        throw IoError("truncated PGM raster in " + path.string());
    }
    img.pixels.resize(count);
    if (img.bit_depth == 8) {
        for (std::size_t i = 0; i < count; ++i) {
            img.pixels[i] = data[pos + i];
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            img.pixels[i] = static_cast<std::uint16_t>((data[pos + 2 * i] << 8) |
                                                       data[pos + 2 * i + 1]);
        }
    }
    return img;
}

inline void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    const int maxval = img.bit_depth == 16 ? 65535 : 255;
    std::string header = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                         "\n" + std::to_string(maxval) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    for (std::uint16_t v : img.pixels) {
        if (img.bit_depth == 16) {
            out.push_back(static_cast<std::uint8_t>(v >> 8));
        }
        out.push_back(static_cast<std::uint8_t>(v & 0xff));
    }
    detail::write_file(path, out);
}

inline RgbImage read_ppm(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> data = detail::read_file(path);
    std::size_t pos = 0;
    if (detail::pnm_token(data, pos, path) != "P6") {
        throw IoError("not a binary PPM: " + path.string());
    }
    RgbImage img;
    img.width = detail::pnm_int(data, pos, path);
    img.height = detail::pnm_int(data, pos, path);
    const int maxval = detail::pnm_int(data, pos, path);
    if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 255) {
        throw IoError("bad or unsupported PPM header in " + path.string());
    }
    ++pos;
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    if (pos + count * 3 > data.size()) {
        throw IoError("truncated PPM raster in " + path.string());
    }
    img.pixels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        img.pixels[i] = {data[pos + 3 * i], data[pos + 3 * i + 1], data[pos + 3 * i + 2]};
    }
    return img;
}

inline void write_ppm(const RgbImage& img, const std::filesystem::path& path) {
    std::string header =
        "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    for (const auto& px : img.pixels) {
        out.push_back(px[0]);
        out.push_back(px[1]);
        out.push_back(px[2]);
    }
    detail::write_file(path, out);
}

// ---- PNG ----------------------------------------------------------------

inline GrayImage read_png_gray(const std::filesystem::path& path) {
    const detail::PngRaster png = detail::read_png_raster(path);
    if (png.color_type != 0) {
        throw IoError("expected grayscale PNG: " + path.string());
    }
    GrayImage img;
    img.width = png.width;
    img.height = png.height;
    img.bit_depth = png.bit_depth;
    const std::size_t count = static_cast<std::size_t>(png.width) * png.height;
    img.pixels.resize(count);
    if (png.bit_depth == 8) {
        for (std::size_t i = 0; i < count; ++i) img.pixels[i] = png.samples[i];
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            img.pixels[i] = static_cast<std::uint16_t>((png.samples[2 * i] << 8) |
                                                       png.samples[2 * i + 1]);
        }
    }
    return img;
}

inline void write_png(const GrayImage& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> samples;
    samples.reserve(img.pixels.size() * (img.bit_depth / 8));
    for (std::uint16_t v : img.pixels) {
        if (img.bit_depth == 16) {
            samples.push_back(static_cast<std::uint8_t>(v >> 8));
        }
        samples.push_back(static_cast<std::uint8_t>(v & 0xff));
    }
    detail::write_png_raster(path, img.width, img.height, img.bit_depth, 0, samples);
}

inline RgbImage read_png_rgb(const std::filesystem::path& path) {
    const detail::PngRaster png = detail::read_png_raster(path);
    if (png.color_type != 2) {
        throw IoError("expected RGB PNG: " + path.string());
    }
    RgbImage img;
    img.width = png.width;
    img.height = png.height;
    const std::size_t count = static_cast<std::size_t>(png.width) * png.height;
    img.pixels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        img.pixels[i] = {png.samples[3 * i], png.samples[3 * i + 1], png.samples[3 * i + 2]};
    }
    return img;
}

inline void write_png(const RgbImage& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> samples;
    samples.reserve(img.pixels.size() * 3);
    for (const auto& px : img.pixels) {
        samples.push_back(px[0]);
        samples.push_back(px[1]);
        samples.push_back(px[2]);
    }
    detail::write_png_raster(path, img.width, img.height, 8, 2, samples);
}

// ---- extension dispatch ---------------------------------------------------

inline GrayImage read_gray_image(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".pgm") return read_pgm(path);
    if (ext == ".png") return read_png_gray(path);
    throw IoError("unsupported grayscale image extension '" + ext + "' (" + path.string() + ")");
}

inline void write_gray_image(const GrayImage& img, const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".pgm") return write_pgm(img, path);
    if (ext == ".png") return write_png(img, path);
    throw IoError("unsupported grayscale image extension '" + ext + "' (" + path.string() + ")");
}

inline RgbImage read_rgb_image(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".ppm") return read_ppm(path);
    if (ext == ".png") return read_png_rgb(path);
    throw IoError("unsupported RGB image extension '" + ext + "' (" + path.string() + ")");
}

inline void write_rgb_image(const RgbImage& img, const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".ppm") return write_ppm(img, path);
    if (ext == ".png") return write_png(img, path);
    throw IoError("unsupported RGB image extension '" + ext + "' (" + path.string() + ")");
}

// ---- mask bridge ----------------------------------------------------------

// Masks persist as single-channel 8-bit images, 0 background and 255
// foreground. Any nonzero sample reads back as foreground.
inline void write_mask(const ForegroundMask& mask, const std::filesystem::path& path) {
    GrayImage img;
    img.width = mask.width;
    img.height = mask.height;
    img.bit_depth = 8;
    img.pixels.resize(mask.bits.size());
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        img.pixels[i] = mask.bits[i] ? 255 : 0;
    }
    write_gray_image(img, path);
}

inline ForegroundMask read_mask(const std::filesystem::path& path) {
    const GrayImage img = read_gray_image(path);
    ForegroundMask mask;
    mask.width = img.width;
    mask.height = img.height;
    mask.bits.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        mask.bits[i] = img.pixels[i] != 0 ? 1 : 0;
    }
    return mask;
}

}  // namespace rgbdt

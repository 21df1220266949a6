#pragma once

#include <cctype>
#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmt/grayscale.hpp"

namespace dmt {

/// A grayscale image as read from disk: row-major samples, top-left first.
struct PgmImage {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<int> pixels;
};

/// Parses P2 (ASCII) and P5 (binary) PGM data.  Binary rasters with
/// maxval > 255 use two big-endian bytes per sample.  Parse errors carry
/// the byte offset.
inline PgmImage parse_pgm(const std::string& data, const std::string& name) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) {
        return std::runtime_error(name + ": byte " + std::to_string(pos) + ": " + msg);
    };
    auto skip_space = [&] {
        while (pos < data.size()) {
            unsigned char c = static_cast<unsigned char>(data[pos]);
            if (c == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto next_int = [&]() -> long {
        skip_space();
        if (pos >= data.size() || !std::isdigit(static_cast<unsigned char>(data[pos])))
            throw fail("expected an integer");
        long v = 0;
        while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
            v = v * 10 + (data[pos] - '0');
            if (v > 1000000000L) throw fail("integer out of range");
            ++pos;
        }
        return v;
    };

    if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
        throw fail("not a P2/P5 PGM header");
    const bool binary = data[1] == '5';
    pos = 2;

    PgmImage img;
    img.width = static_cast<int>(next_int());
    img.height = static_cast<int>(next_int());
    img.maxval = static_cast<int>(next_int());
    if (img.width < 1 || img.height < 1) throw fail("bad image dimensions");
    if (img.maxval < 1 || img.maxval > 65535) throw fail("maxval out of range");

    const std::size_t count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    img.pixels.reserve(count);
    if (!binary) {
        for (std::size_t i = 0; i < count; ++i) {
            long v = next_int();
            if (v > img.maxval) throw fail("sample exceeds maxval");
            img.pixels.push_back(static_cast<int>(v));
        }
        return img;
    }
    if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos])))
        throw fail("expected single whitespace before binary raster");
    ++pos;
    const int bytes = img.maxval > 255 ? 2 : 1;
    if (data.size() - pos < count * static_cast<std::size_t>(bytes))
        throw fail("truncated raster");
    for (std::size_t i = 0; i < count; ++i) {
        int v;
        if (bytes == 1) {
            v = static_cast<unsigned char>(data[pos++]);
        } else {
            int hi = static_cast<unsigned char>(data[pos++]);
            int lo = static_cast<unsigned char>(data[pos++]);
            v = hi * 256 + lo; // big-endian per the format
        }
        if (v > img.maxval) throw fail("sample exceeds maxval");
        img.pixels.push_back(v);
    }
    return img;
}

inline PgmImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_pgm(data, path);
}

inline std::string write_pgm_p2(const PgmImage& img) {
    std::string out = "P2\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                      "\n" + std::to_string(img.maxval) + "\n";
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out += std::to_string(img.pixels[static_cast<std::size_t>(y * img.width + x)]);
            out += (x + 1 == img.width) ? '\n' : ' ';
        }
    }
    return out;
}

/// An image lifted to its cubical complex with uniquified vertex values.
/// The complex lives behind a stable pointer so views into it survive
/// moves of the bundle.
struct LoadedImage {
    PgmImage raw;
    std::shared_ptr<AmbientComplex> complex;
    GrayscaleData values;
};

inline LoadedImage lift_image(PgmImage img) {
    LoadedImage out;
    out.complex = std::make_shared<AmbientComplex>(AmbientComplex::grid2d(img.width, img.height));
    std::vector<double> vals(img.pixels.begin(), img.pixels.end());
    out.values = uniquify(GrayscaleData(*out.complex, std::move(vals)));
    out.raw = std::move(img);
    return out;
}

inline LoadedImage load_image(const std::string& path) { return lift_image(load_pgm(path)); }

} // namespace dmt

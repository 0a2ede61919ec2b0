#include "mpdenoise/image_io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <vector>

#include "mpdenoise/errors.hpp"

namespace mpdn {
namespace {

using Kind = ImageIoError::Kind;
using Bytes = std::vector<std::uint8_t>;

[[noreturn]] void fail(Kind k, const std::string& msg) { throw ImageIoError(k, msg); }

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(Kind::unreadable, "cannot open file: " + path.string());
    f.seekg(0, std::ios::end);
    const auto n = f.tellg();
    f.seekg(0);
    Bytes out(static_cast<std::size_t>(n));
    if (n > 0) f.read(reinterpret_cast<char*>(out.data()), n);
    if (!f) fail(Kind::unreadable, "read failed: " + path.string());
    return out;
}

void write_file(const std::filesystem::path& path, const Bytes& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(Kind::unwritable, "cannot open file for writing: " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) fail(Kind::unwritable, "write failed: " + path.string());
}

Bytes zlib_inflate(const std::uint8_t* src, std::size_t n, std::size_t expected_hint) {
    Bytes out;
    out.reserve(expected_hint);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) fail(Kind::bad_format, "zlib init failed");
    zs.next_in = const_cast<std::uint8_t*>(src);
    zs.avail_in = static_cast<uInt>(n);
    std::uint8_t buf[1 << 15];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buf;
        zs.avail_out = sizeof buf;
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            fail(Kind::truncated, "zlib stream damaged or truncated");
        }
        out.insert(out.end(), buf, buf + (sizeof buf - zs.avail_out));
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
            inflateEnd(&zs);
            fail(Kind::truncated, "zlib stream ended early");
        }
    }
    inflateEnd(&zs);
    return out;
}

Bytes zlib_deflate(const std::uint8_t* src, std::size_t n) {
    uLongf bound = compressBound(static_cast<uLong>(n));
    Bytes out(bound);
    if (compress2(out.data(), &bound, src, static_cast<uLong>(n), 6) != Z_OK)
        fail(Kind::unwritable, "zlib compression failed");
    out.resize(bound);
    return out;
}

std::uint16_t rd16le(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }
std::uint32_t rd32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void put16le(Bytes& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v & 0xff));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32le(Bytes& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

Image from_samples(const Bytes& raw, int w, int h, int depth, bool big_endian_16, bool invert) {
    const std::size_t px = static_cast<std::size_t>(w) * h;
    const std::size_t need = px * (depth / 8);
    if (raw.size() < need) fail(Kind::truncated, "pixel data shorter than header promises");
    Image img(w, h);
    const float scale = 1.0f / static_cast<float>((1u << depth) - 1u);
    for (std::size_t i = 0; i < px; ++i) {
        std::uint32_t s;
        if (depth == 8) {
            s = raw[i];
        } else {
            const std::uint8_t* p = raw.data() + 2 * i;
            s = big_endian_16 ? static_cast<std::uint32_t>(p[0] << 8 | p[1]) : rd16le(p);
        }
        if (invert) s = ((1u << depth) - 1u) - s;
        img.data[i] = static_cast<float>(s) * scale;
    }
    return img;
}

// ---------------------------------------------------------------------------
// TIFF
// ---------------------------------------------------------------------------

struct TiffField {
    std::uint16_t type = 0;
    std::uint32_t count = 0;
    std::uint32_t value_or_offset = 0;
};

std::vector<std::uint32_t> tiff_values(const Bytes& f, const TiffField& e) {
    const std::size_t unit = e.type == 3 ? 2 : 4; // SHORT or LONG
    if (e.type != 3 && e.type != 4) fail(Kind::bad_format, "unexpected TIFF field type");
    const std::size_t total = unit * e.count;
    std::vector<std::uint32_t> out(e.count);
    std::uint8_t inline_bytes[4];
    const std::uint8_t* src;
    if (total <= 4) {
        std::uint32_t v = e.value_or_offset;
        for (int i = 0; i < 4; ++i) inline_bytes[i] = static_cast<std::uint8_t>((v >> (8 * i)) & 0xff);
        src = inline_bytes;
    } else {
        if (e.value_or_offset + total > f.size()) fail(Kind::truncated, "TIFF field data out of range");
        src = f.data() + e.value_or_offset;
    }
    for (std::uint32_t i = 0; i < e.count; ++i)
        out[i] = unit == 2 ? rd16le(src + 2 * i) : rd32le(src + 4 * i);
    return out;
}

Image load_tiff(const Bytes& f) {
    if (f.size() < 8) fail(Kind::truncated, "TIFF too short");
    if (f[0] == 'M' && f[1] == 'M') fail(Kind::bad_format, "big-endian TIFF not supported");
    if (!(f[0] == 'I' && f[1] == 'I' && rd16le(f.data() + 2) == 42))
        fail(Kind::bad_format, "not a TIFF file");
    const std::uint32_t ifd = rd32le(f.data() + 4);
    if (ifd + 2 > f.size()) fail(Kind::truncated, "TIFF IFD out of range");
    const std::uint16_t nent = rd16le(f.data() + ifd);
    if (ifd + 2 + 12u * nent > f.size()) fail(Kind::truncated, "TIFF IFD truncated");

    std::map<std::uint16_t, TiffField> fields;
    for (std::uint16_t i = 0; i < nent; ++i) {
        const std::uint8_t* p = f.data() + ifd + 2 + 12u * i;
        TiffField e;
        const std::uint16_t tag = rd16le(p);
        e.type = rd16le(p + 2);
        e.count = rd32le(p + 4);
        e.value_or_offset = rd32le(p + 8);
        fields[tag] = e;
    }

    const auto get1 = [&](std::uint16_t tag, std::uint32_t dflt, bool required) -> std::uint32_t {
        auto it = fields.find(tag);
        if (it == fields.end()) {
            if (required) fail(Kind::bad_format, "TIFF missing required tag " + std::to_string(tag));
            return dflt;
        }
        return tiff_values(f, it->second).at(0);
    };

    if (fields.count(322) || fields.count(323)) fail(Kind::bad_format, "tiled TIFF not supported");

    const int w = static_cast<int>(get1(256, 0, true));
    const int h = static_cast<int>(get1(257, 0, true));
    if (w < 1 || h < 1) fail(Kind::bad_format, "TIFF has degenerate dimensions");

    const std::uint32_t samples = get1(277, 1, false);
    if (samples != 1) fail(Kind::multi_channel, "multi-channel TIFF not supported (SamplesPerPixel=" +
                                                   std::to_string(samples) + ")");
    const std::uint32_t depth = get1(258, 1, false);
    if (depth != 8 && depth != 16)
        fail(Kind::bad_depth, "unsupported TIFF bit depth " + std::to_string(depth));
    const std::uint32_t compression = get1(259, 1, false);
    if (compression != 1 && compression != 8)
        fail(Kind::bad_format, "unsupported TIFF compression " + std::to_string(compression));
    const std::uint32_t photometric = get1(262, 1, false);
    if (photometric > 1) fail(Kind::multi_channel, "non-grayscale TIFF photometric interpretation");
    if (fields.count(284) && get1(284, 1, false) != 1)
        fail(Kind::bad_format, "planar TIFF not supported");

    auto so = fields.find(273);
    auto sc = fields.find(279);
    if (so == fields.end() || sc == fields.end()) fail(Kind::bad_format, "TIFF missing strip tags");
    const auto offsets = tiff_values(f, so->second);
    const auto counts = tiff_values(f, sc->second);
    if (offsets.size() != counts.size()) fail(Kind::bad_format, "TIFF strip tag count mismatch");

    const std::size_t expect = static_cast<std::size_t>(w) * h * (depth / 8);
    Bytes raw;
    raw.reserve(expect);
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (static_cast<std::size_t>(offsets[i]) + counts[i] > f.size())
            fail(Kind::truncated, "TIFF strip out of range");
        const std::uint8_t* src = f.data() + offsets[i];
        if (compression == 1) {
            raw.insert(raw.end(), src, src + counts[i]);
        } else {
            const Bytes strip = zlib_inflate(src, counts[i], expect / offsets.size() + 16);
            raw.insert(raw.end(), strip.begin(), strip.end());
        }
    }
    return from_samples(raw, w, h, static_cast<int>(depth), false, photometric == 0);
}

Bytes encode_tiff(const Image& img, int depth) {
    const std::size_t px = img.size();
    const std::size_t nbytes = px * (depth / 8);
    const float maxv = static_cast<float>((1u << depth) - 1u);

    Bytes out;
    out.reserve(nbytes + 256);
    // Header, pixel data at fixed offset 8, IFD after the data.
    out.push_back('I');
    out.push_back('I');
    put16le(out, 42);
    put32le(out, static_cast<std::uint32_t>(8 + nbytes));
    for (std::size_t i = 0; i < px; ++i) {
        float v = img.data[i];
        v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
        const std::uint32_t s = static_cast<std::uint32_t>(std::lround(v * maxv));
        if (depth == 8)
            out.push_back(static_cast<std::uint8_t>(s));
        else
            put16le(out, static_cast<std::uint16_t>(s));
    }

    struct Entry {
        std::uint16_t tag, type;
        std::uint32_t count, value;
    };
    const Entry entries[] = {
        {256, 4, 1, static_cast<std::uint32_t>(img.width)},
        {257, 4, 1, static_cast<std::uint32_t>(img.height)},
        {258, 3, 1, static_cast<std::uint32_t>(depth)},
        {259, 3, 1, 1},                                   // no compression
        {262, 3, 1, 1},                                   // BlackIsZero
        {273, 4, 1, 8},                                   // single strip at offset 8
        {277, 3, 1, 1},                                   // one sample per pixel
        {278, 4, 1, static_cast<std::uint32_t>(img.height)},
        {279, 4, 1, static_cast<std::uint32_t>(nbytes)},
    };
    put16le(out, static_cast<std::uint16_t>(std::size(entries)));
    for (const auto& e : entries) {
        put16le(out, e.tag);
        put16le(out, e.type);
        put32le(out, e.count);
        if (e.type == 3) {
            put16le(out, static_cast<std::uint16_t>(e.value));
            put16le(out, 0);
        } else {
            put32le(out, e.value);
        }
    }
    put32le(out, 0); // no further IFD
    return out;
}

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

const std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void put32be(Bytes& b, std::uint32_t v) {
    for (int i = 3; i >= 0; --i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}
std::uint32_t rd32be(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) << 24 | static_cast<std::uint32_t>(p[1]) << 16 |
           static_cast<std::uint32_t>(p[2]) << 8 | static_cast<std::uint32_t>(p[3]);
}

void png_chunk(Bytes& out, const char type[4], const Bytes& payload) {
    put32be(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const uLong crc = ::crc32(0, out.data() + start, static_cast<uInt>(out.size() - start));
    put32be(out, static_cast<std::uint32_t>(crc));
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    return pb <= pc ? b : c;
}

// Reverse the per-row filters in place; `bpp` = bytes per pixel.
void png_unfilter(Bytes& data, int h, std::size_t stride, std::size_t bpp) {
    std::vector<std::uint8_t> prev(stride, 0);
    for (int y = 0; y < h; ++y) {
        std::uint8_t* row = data.data() + static_cast<std::size_t>(y) * (stride + 1);
        const int filter = row[0];
        std::uint8_t* cur = row + 1;
        switch (filter) {
            case 0:
                break;
            case 1:
                for (std::size_t i = bpp; i < stride; ++i) cur[i] = static_cast<std::uint8_t>(cur[i] + cur[i - bpp]);
                break;
            case 2:
                for (std::size_t i = 0; i < stride; ++i) cur[i] = static_cast<std::uint8_t>(cur[i] + prev[i]);
                break;
            case 3:
                for (std::size_t i = 0; i < stride; ++i) {
                    const int left = i >= bpp ? cur[i - bpp] : 0;
                    cur[i] = static_cast<std::uint8_t>(cur[i] + (left + prev[i]) / 2);
                }
                break;
            case 4:
                for (std::size_t i = 0; i < stride; ++i) {
                    const int left = i >= bpp ? cur[i - bpp] : 0;
                    const int ul = i >= bpp ? prev[i - bpp] : 0;
                    cur[i] = static_cast<std::uint8_t>(cur[i] + paeth(left, prev[i], ul));
                }
                break;
            default:
                fail(Kind::bad_format, "PNG row uses unknown filter " + std::to_string(filter));
        }
        std::memcpy(prev.data(), cur, stride);
    }
}

Image load_png(const Bytes& f) {
    if (f.size() < 8 + 25 || std::memcmp(f.data(), kPngSig, 8) != 0)
        fail(Kind::bad_format, "not a PNG file");

    std::size_t pos = 8;
    int w = 0, h = 0, depth = 0, color = -1;
    Bytes idat;
    bool seen_ihdr = false, seen_iend = false;
    while (pos + 8 <= f.size() && !seen_iend) {
        const std::uint32_t len = rd32be(f.data() + pos);
        if (pos + 12 + len > f.size()) fail(Kind::truncated, "PNG chunk truncated");
        const char* type = reinterpret_cast<const char*>(f.data() + pos + 4);
        const std::uint8_t* payload = f.data() + pos + 8;
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) fail(Kind::bad_format, "PNG IHDR malformed");
            w = static_cast<int>(rd32be(payload));
            h = static_cast<int>(rd32be(payload + 4));
            depth = payload[8];
            color = payload[9];
            if (payload[12] != 0) fail(Kind::bad_format, "interlaced PNG not supported");
            seen_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            seen_iend = true;
        }
        pos += 12 + len;
    }
    if (!seen_ihdr || !seen_iend) fail(Kind::truncated, "PNG missing IHDR/IEND");
    if (color != 0)
        fail(Kind::multi_channel, "PNG color type " + std::to_string(color) + " is not single-channel grayscale");
    if (depth != 8 && depth != 16) fail(Kind::bad_depth, "unsupported PNG bit depth " + std::to_string(depth));
    if (w < 1 || h < 1) fail(Kind::bad_format, "PNG has degenerate dimensions");

    const std::size_t bpp = static_cast<std::size_t>(depth) / 8;
    const std::size_t stride = static_cast<std::size_t>(w) * bpp;
    Bytes rows = zlib_inflate(idat.data(), idat.size(), (stride + 1) * h);
    if (rows.size() < (stride + 1) * h) fail(Kind::truncated, "PNG pixel data incomplete");
    png_unfilter(rows, h, stride, bpp);

    Bytes raw(stride * h);
    for (int y = 0; y < h; ++y)
        std::memcpy(raw.data() + static_cast<std::size_t>(y) * stride,
                    rows.data() + static_cast<std::size_t>(y) * (stride + 1) + 1, stride);
    return from_samples(raw, w, h, depth, true, false); // PNG 16-bit samples are big-endian
}

Bytes encode_png_gray(const Image& img, int depth) {
    const float maxv = static_cast<float>((1u << depth) - 1u);
    const std::size_t bpp = static_cast<std::size_t>(depth) / 8;
    const std::size_t stride = static_cast<std::size_t>(img.width) * bpp;

    Bytes scan((stride + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* row = scan.data() + static_cast<std::size_t>(y) * (stride + 1);
        row[0] = 0; // filter: none
        for (int x = 0; x < img.width; ++x) {
            float v = img.at(x, y);
            v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
            const std::uint32_t s = static_cast<std::uint32_t>(std::lround(v * maxv));
            if (depth == 8) {
                row[1 + x] = static_cast<std::uint8_t>(s);
            } else {
                row[1 + 2 * x] = static_cast<std::uint8_t>(s >> 8);
                row[2 + 2 * x] = static_cast<std::uint8_t>(s & 0xff);
            }
        }
    }

    Bytes ihdr;
    put32be(ihdr, static_cast<std::uint32_t>(img.width));
    put32be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(static_cast<std::uint8_t>(depth));
    ihdr.insert(ihdr.end(), {0, 0, 0, 0}); // gray, deflate, adaptive filters, no interlace

    Bytes out(kPngSig, kPngSig + 8);
    png_chunk(out, "IHDR", ihdr);
    png_chunk(out, "IDAT", zlib_deflate(scan.data(), scan.size()));
    png_chunk(out, "IEND", {});
    return out;
}

} // namespace

Image load_image(const std::filesystem::path& path) {
    const Bytes f = read_file(path);
    if (f.size() >= 8 && std::memcmp(f.data(), kPngSig, 8) == 0) return load_png(f);
    if (f.size() >= 4 && ((f[0] == 'I' && f[1] == 'I') || (f[0] == 'M' && f[1] == 'M')))
        return load_tiff(f);
    fail(Kind::bad_format, "unrecognized image format: " + path.string());
}

void save_image(const Image& img, const std::filesystem::path& path, int depth) {
    if (depth != 8 && depth != 16)
        fail(Kind::bad_depth, "save_image supports depth 8 or 16, got " + std::to_string(depth));
    if (img.width < 1 || img.height < 1) throw DataError("save_image: empty image");
    const auto ext = path.extension().string();
    if (ext == ".png") {
        write_file(path, encode_png_gray(img, depth));
    } else if (ext == ".tif" || ext == ".tiff") {
        write_file(path, encode_tiff(img, depth));
    } else {
        fail(Kind::bad_format, "unknown image extension: " + path.string());
    }
}

void save_rgb_png(const RgbImage& img, const std::filesystem::path& path) {
    const std::size_t stride = static_cast<std::size_t>(img.width) * 3;
    Bytes scan((stride + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* row = scan.data() + static_cast<std::size_t>(y) * (stride + 1);
        row[0] = 0;
        std::memcpy(row + 1, img.data.data() + static_cast<std::size_t>(y) * stride, stride);
    }
    Bytes ihdr;
    put32be(ihdr, static_cast<std::uint32_t>(img.width));
    put32be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);
    ihdr.push_back(2); // truecolor
    ihdr.insert(ihdr.end(), {0, 0, 0});
    Bytes out(kPngSig, kPngSig + 8);
    png_chunk(out, "IHDR", ihdr);
    png_chunk(out, "IDAT", zlib_deflate(scan.data(), scan.size()));
    png_chunk(out, "IEND", {});
    write_file(path, out);
}

} // namespace mpdn

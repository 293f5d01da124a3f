#include "coatflow/core/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "coatflow/core/error.hpp"

namespace coatflow {

namespace {

struct PnmHeader {
    std::string magic;
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t pixel_offset = 0;
};

// Parses a PNM header from a byte buffer: magic, then whitespace/comment
// separated width, height, maxval, then exactly one whitespace byte.
PnmHeader parse_pnm_header(const std::string& bytes, const std::filesystem::path& path) {
    PnmHeader h;
    if (bytes.size() < 2) throw FormatError("malformed header (file too short): " + path.string());
    h.magic = bytes.substr(0, 2);
    std::size_t pos = 2;
    auto next_token = [&]() -> long {
        // skip whitespace and '#' comments
        while (pos < bytes.size()) {
            char c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                break;
            }
        }
        if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
            throw FormatError("malformed header (missing field): " + path.string());
        long v = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1000000000L) throw FormatError("malformed header (field overflow): " + path.string());
            ++pos;
        }
        return v;
    };
    h.width = static_cast<int>(next_token());
    h.height = static_cast<int>(next_token());
    h.maxval = static_cast<int>(next_token());
    if (pos >= bytes.size()) throw FormatError("malformed header (no pixel data): " + path.string());
    ++pos; // single whitespace byte after maxval
    h.pixel_offset = pos;
    if (h.width < 1 || h.height < 1 || h.maxval < 1)
        throw FormatError("malformed header (bad dimensions): " + path.string());
    return h;
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return std::move(ss).str();
}

} // namespace

std::string read_file(const std::filesystem::path& path) { return read_all(path); }

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (!dir.empty()) {
        std::error_code ec;
        fs::create_directories(dir, ec);
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write file: " + tmp.string());
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw IoError("short write: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " -> " + path.string());
}

RgbImage load_image(const std::filesystem::path& path) {
    std::string bytes = read_all(path);
    PnmHeader h = parse_pnm_header(bytes, path);
    if (h.magic != "P6" && h.magic != "P5")
        throw UnsupportedError("unsupported raster magic '" + h.magic + "': " + path.string());
    if (h.maxval != 255)
        throw UnsupportedError("unsupported bit depth (maxval " + std::to_string(h.maxval) +
                               "): " + path.string());
    const int channels = (h.magic == "P6") ? 3 : 1;
    std::size_t need = static_cast<std::size_t>(h.width) * h.height * channels;
    if (bytes.size() - h.pixel_offset < need)
        throw FormatError("truncated pixel data: " + path.string());
    RgbImage img(h.width, h.height);
    const auto* src = reinterpret_cast<const std::uint8_t*>(bytes.data() + h.pixel_offset);
    if (channels == 3) {
        std::copy(src, src + need, img.data.begin());
    } else {
        for (std::size_t i = 0; i < need; ++i) {
            img.data[3 * i] = src[i];
            img.data[3 * i + 1] = src[i];
            img.data[3 * i + 2] = src[i];
        }
    }
    return img;
}

void save_image(const RgbImage& img, const std::filesystem::path& path) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
    write_file_atomic(path, out);
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::string bytes = read_all(path);
    PnmHeader h = parse_pnm_header(bytes, path);
    if (h.magic != "P5")
        throw UnsupportedError("unsupported raster magic '" + h.magic + "': " + path.string());
    if (h.maxval != 255 && h.maxval != 65535)
        throw UnsupportedError("unsupported bit depth (maxval " + std::to_string(h.maxval) +
                               "): " + path.string());
    const int bytes_per = (h.maxval == 255) ? 1 : 2;
    std::size_t n = static_cast<std::size_t>(h.width) * h.height;
    if (bytes.size() - h.pixel_offset < n * bytes_per)
        throw FormatError("truncated pixel data: " + path.string());
    GrayImage img(h.width, h.height);
    const auto* src = reinterpret_cast<const std::uint8_t*>(bytes.data() + h.pixel_offset);
    if (bytes_per == 1) {
        for (std::size_t i = 0; i < n; ++i) img.data[i] = src[i];
    } else {
        for (std::size_t i = 0; i < n; ++i)
            img.data[i] = 256.0 * src[2 * i] + src[2 * i + 1]; // big-endian
    }
    return img;
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.reserve(out.size() + img.data.size());
    for (double v : img.data) {
        double c = std::clamp(v, 0.0, 255.0);
        out.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(c))));
    }
    write_file_atomic(path, out);
}

void save_pgm16(const std::vector<std::uint16_t>& data, int width, int height,
                const std::filesystem::path& path) {
    if (data.size() != static_cast<std::size_t>(width) * height)
        throw InvalidArgument("save_pgm16: data size does not match dimensions");
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n65535\n";
    out.reserve(out.size() + data.size() * 2);
    for (std::uint16_t v : data) {
        out.push_back(static_cast<char>(v >> 8));
        out.push_back(static_cast<char>(v & 0xff));
    }
    write_file_atomic(path, out);
}

BinaryMask load_mask(const std::filesystem::path& path) {
    GrayImage g = load_pgm(path);
    BinaryMask m(g.width, g.height);
    for (std::size_t i = 0; i < g.data.size(); ++i) m.data[i] = g.data[i] >= 128.0 ? 1 : 0;
    return m;
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
    out.reserve(out.size() + mask.data.size());
    for (auto v : mask.data) out.push_back(static_cast<char>(v ? 255 : 0));
    write_file_atomic(path, out);
}

} // namespace coatflow

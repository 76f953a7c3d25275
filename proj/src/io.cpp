#include "idt/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace idt {

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void check_image(const Image& img) {
    if (img.channels.empty() || (img.channels.size() != 1 && img.channels.size() != 3)) {
        throw IoError("image must have 1 or 3 channels");
    }
    for (const auto& c : img.channels) {
        if (!c.same_shape(img.channels.front())) {
            throw IoError("image channels differ in size");
        }
    }
}

Image from_interleaved(const std::uint8_t* px, std::size_t h, std::size_t w, std::size_t nch) {
    Image img;
    img.channels.assign(nch, Matrix(h, w));
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            for (std::size_t c = 0; c < nch; ++c) {
                img.channels[c](i, j) = px[(i * w + j) * nch + c];
            }
        }
    }
    return img;
}

std::vector<std::uint8_t> to_interleaved(const Image& img) {
    const std::size_t h = img.height();
    const std::size_t w = img.width();
    const std::size_t nch = img.channels.size();
    std::vector<std::uint8_t> px(h * w * nch);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            for (std::size_t c = 0; c < nch; ++c) {
                px[(i * w + j) * nch + c] = quantize_pixel(img.channels[c](i, j));
            }
        }
    }
    return px;
}

class PnmHeader {
public:
    explicit PnmHeader(const std::vector<std::uint8_t>& b) : bytes_(b) {}

    std::string token() {
        skip_space_and_comments();
        std::string t;
        while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) {
            t.push_back(static_cast<char>(bytes_[pos_++]));
        }
        if (t.empty()) {
            throw IoError("truncated PNM header");
        }
        return t;
    }

    std::size_t number() {
        const std::string t = token();
        if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            throw IoError("malformed PNM header field '" + t + "'");
        }
        return std::stoul(t);
    }

    // Exactly one whitespace byte separates the header from the raster.
    std::size_t raster_offset() const { return pos_ + 1; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

std::uint16_t get_u16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) {
        out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
    }
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

} // namespace

std::uint8_t quantize_pixel(double v) noexcept {
    if (std::isnan(v)) {
        return 0;
    }
    return static_cast<std::uint8_t>(std::clamp(std::nearbyint(v), 0.0, 255.0));
}

Image quantized(const Image& img) {
    Image out = img;
    for (auto& c : out.channels) {
        for (double& v : c.values()) {
            v = quantize_pixel(v);
        }
    }
    return out;
}

Image to_gray(const Image& img) {
    check_image(img);
    if (img.channels.size() == 1) {
        return img;
    }
    Image g;
    g.channels.push_back(img.channels[0] * 0.299 + img.channels[1] * 0.587 + img.channels[2] * 0.114);
    return g;
}

Image read_pnm(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    PnmHeader hdr(bytes);
    const std::string magic = hdr.token();
    std::size_t nch = 0;
    if (magic == "P5") {
        nch = 1;
    } else if (magic == "P6") {
        nch = 3;
    } else {
        throw IoError(path.string() + ": unsupported PNM variant '" + magic + "' (need P5 or P6)");
    }
    const std::size_t w = hdr.number();
    const std::size_t h = hdr.number();
    const std::size_t maxval = hdr.number();
    if (maxval != 255) {
        throw IoError(path.string() + ": unsupported bit depth (maxval " + std::to_string(maxval) + ")");
    }
    if (w == 0 || h == 0) {
        throw IoError(path.string() + ": empty image");
    }
    const std::size_t off = hdr.raster_offset();
    if (bytes.size() < off + w * h * nch) {
        throw IoError(path.string() + ": truncated raster");
    }
    return from_interleaved(bytes.data() + off, h, w, nch);
}

void write_pnm(const std::filesystem::path& path, const Image& img) {
    check_image(img);
    const std::string header = std::string(img.channels.size() == 1 ? "P5" : "P6") + "\n" +
                               std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    const auto px = to_interleaved(img);
    bytes.insert(bytes.end(), px.begin(), px.end());
    write_bytes(path, bytes);
}

Image read_png(const std::filesystem::path& path) {
    png_image pi;
    std::memset(&pi, 0, sizeof(pi));
    pi.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_file(&pi, path.string().c_str()) == 0) {
        throw IoError(path.string() + ": " + pi.message);
    }
    const bool color = (pi.format & PNG_FORMAT_FLAG_COLOR) != 0;
    pi.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> px(PNG_IMAGE_SIZE(pi));
    if (png_image_finish_read(&pi, nullptr, px.data(), 0, nullptr) == 0) {
        const std::string msg = pi.message;
        png_image_free(&pi);
        throw IoError(path.string() + ": " + msg);
    }
    return from_interleaved(px.data(), pi.height, pi.width, color ? 3 : 1);
}

void write_png(const std::filesystem::path& path, const Image& img) {
    check_image(img);
    png_image pi;
    std::memset(&pi, 0, sizeof(pi));
    pi.version = PNG_IMAGE_VERSION;
    pi.width = static_cast<png_uint_32>(img.width());
    pi.height = static_cast<png_uint_32>(img.height());
    pi.format = img.channels.size() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    const auto px = to_interleaved(img);
    if (png_image_write_to_file(&pi, path.string().c_str(), 0, px.data(), 0, nullptr) == 0) {
        throw IoError(path.string() + ": " + pi.message);
    }
}

Image read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::array<char, 8> sig{};
    in.read(sig.data(), sig.size());
    static constexpr std::array<unsigned char, 8> png_sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    if (in.gcount() == 8 && std::memcmp(sig.data(), png_sig.data(), 8) == 0) {
        return read_png(path);
    }
    if (in.gcount() >= 2 && sig[0] == 'P') {
        return read_pnm(path);
    }
    throw IoError(path.string() + ": unrecognized image format");
}

void write_image(const std::filesystem::path& path, const Image& img) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") {
        write_png(path, img);
    } else {
        write_pnm(path, img);
    }
}

Audio read_wav(const std::filesystem::path& path) {
    const auto b = read_bytes(path);
    if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0 || std::memcmp(b.data() + 8, "WAVE", 4) != 0) {
        throw IoError(path.string() + ": not a RIFF/WAVE file");
    }
    std::uint16_t format = 0;
    std::uint16_t nch = 0;
    std::uint16_t bits = 0;
    std::uint32_t rate = 0;
    const std::uint8_t* data = nullptr;
    std::size_t data_len = 0;
    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        const std::uint8_t* chunk = b.data() + pos;
        const std::size_t len = get_u32(chunk + 4);
        const std::size_t body = pos + 8;
        const std::size_t avail = std::min(len, b.size() - body);
        if (std::memcmp(chunk, "fmt ", 4) == 0 && avail >= 16) {
            format = get_u16(chunk + 8);
            nch = get_u16(chunk + 10);
            rate = get_u32(chunk + 12);
            bits = get_u16(chunk + 22);
            // WAVE_FORMAT_EXTENSIBLE: sub-format GUID starts with the PCM tag
            if (format == 0xFFFE && avail >= 26) {
                format = get_u16(chunk + 32);
            }
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = b.data() + body;
            data_len = avail;
        }
        pos = body + len + (len & 1U);
    }
    if (format != 1 || bits != 16) {
        throw IoError(path.string() + ": unsupported WAV encoding (need 16-bit PCM)");
    }
    if (nch == 0 || data == nullptr) {
        throw IoError(path.string() + ": missing fmt or data chunk");
    }
    Audio a;
    a.sample_rate = rate;
    const std::size_t frames = data_len / (2U * nch);
    a.channels.assign(nch, std::vector<double>(frames));
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t c = 0; c < nch; ++c) {
            const auto raw = static_cast<std::int16_t>(get_u16(data + 2 * (f * nch + c)));
            a.channels[c][f] = static_cast<double>(raw) / 32768.0;
        }
    }
    return a;
}

void write_wav(const std::filesystem::path& path, const Audio& audio) {
    if (audio.channels.empty()) {
        throw IoError("write_wav: no channels");
    }
    const auto nch = static_cast<std::uint16_t>(audio.channels.size());
    const std::size_t frames = audio.frames();
    for (const auto& c : audio.channels) {
        if (c.size() != frames) {
            throw IoError("write_wav: channels differ in length");
        }
    }
    const auto data_len = static_cast<std::uint32_t>(frames * nch * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_len);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_len);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1);
    put_u16(out, nch);
    put_u32(out, audio.sample_rate);
    put_u32(out, audio.sample_rate * nch * 2U);
    put_u16(out, static_cast<std::uint16_t>(nch * 2));
    put_u16(out, 16);
    put_tag(out, "data");
    put_u32(out, data_len);
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t c = 0; c < nch; ++c) {
            const double v = std::nearbyint(audio.channels[c][f] * 32768.0);
            const auto s = static_cast<std::int16_t>(std::clamp(std::isnan(v) ? 0.0 : v, -32768.0, 32767.0));
            put_u16(out, static_cast<std::uint16_t>(s));
        }
    }
    write_bytes(path, out);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    write_bytes(path, std::vector<std::uint8_t>(content.begin(), content.end()));
}

} // namespace idt

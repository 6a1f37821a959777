#include "tsrkit/image.hpp"

#include <string>

#include "tsrkit/errors.hpp"

namespace tsrkit {

namespace {

// Cursor over the header region that skips whitespace and # comments the
// way the netpbm tools do.
struct HeaderCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    bool eof() const { return pos >= bytes.size(); }
    std::uint8_t peek() const { return bytes[pos]; }

    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

    void skip_space_and_comments() {
        while (!eof()) {
            if (is_space(peek())) {
                ++pos;
            } else if (peek() == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    long read_int() {
        skip_space_and_comments();
        if (eof()) throw Error(Errc::truncated, "header ends before all fields are present");
        if (peek() < '0' || peek() > '9')
            throw Error(Errc::malformed_line,
                        "expected integer in header, found byte 0x" + byte_hex(peek()));
        long value = 0;
        while (!eof() && peek() >= '0' && peek() <= '9') {
            value = value * 10 + (peek() - '0');
            if (value > 1'000'000'000)
                throw Error(Errc::malformed_line, "header integer out of range");
            ++pos;
        }
        return value;
    }

    static std::string byte_hex(std::uint8_t c) {
        static const char* digits = "0123456789abcdef";
        return {digits[c >> 4], digits[c & 0xf]};
    }
};

} // namespace

Image decode_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
        std::string magic;
        for (std::size_t i = 0; i < bytes.size() && i < 2; ++i)
            magic += static_cast<char>(bytes[i]);
        throw Error(Errc::unsupported_magic, "'" + magic + "' (only binary P6 is supported)");
    }

    HeaderCursor cur{bytes, 2};
    long width = cur.read_int();
    long height = cur.read_int();
    long maxval = cur.read_int();

    if (width <= 0 || height <= 0)
        throw Error(Errc::malformed_line, "non-positive image dimensions " +
                                              std::to_string(width) + "x" +
                                              std::to_string(height));
    if (maxval != 255)
        throw Error(Errc::unsupported_maxval,
                    std::to_string(maxval) + " (only 255 is supported)");

    // Exactly one whitespace byte separates the header from the pixel data.
    if (cur.eof() || !HeaderCursor::is_space(cur.peek()))
        throw Error(Errc::malformed_line, "missing whitespace after maxval");
    ++cur.pos;

    const std::size_t need = static_cast<std::size_t>(width) * height * 3;
    if (bytes.size() - cur.pos < need)
        throw Error(Errc::truncated, "expected " + std::to_string(need) + " pixel bytes, got " +
                                         std::to_string(bytes.size() - cur.pos));

    Image img(static_cast<int>(width), static_cast<int>(height));
    std::copy(bytes.begin() + cur.pos, bytes.begin() + cur.pos + need, img.pixels.begin());
    return img;
}

std::vector<std::uint8_t> encode_ppm(const Image& image) {
    std::string header = "P6\n" + std::to_string(image.width) + " " +
                         std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + image.pixels.size());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

} // namespace tsrkit

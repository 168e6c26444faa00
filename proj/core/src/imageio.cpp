#include "pixelnorm/imageio.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pixelnorm/error.hpp"
#include "repr.hpp"

namespace pixelnorm {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(const std::string& text, std::size_t& pos) {
    while (pos < text.size()) {
        char c = text[pos];
        if (c == '#') {
            while (pos < text.size() && text[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '#') {
        ++pos;
    }
    return text.substr(start, pos - start);
}

long parse_header_int(const std::string& token, const char* what) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || value < 0) {
        throw DataError(std::string("bad PGM header ") + what + ": '" + token + "'");
    }
    return value;
}

}  // namespace

void write_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");

    file << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    file.write(reinterpret_cast<const char*>(img.pixels.data()),
               static_cast<std::streamsize>(img.pixels.size()));
    if (!file) throw IoError("write failed on " + path);
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    if (file.bad()) throw IoError("read failed on " + path);
    const std::string text = buffer.str();

    std::size_t pos = 0;
    const std::string magic = next_token(text, pos);
    if (magic != "P5") throw BadMagic(magic);

    const long width = parse_header_int(next_token(text, pos), "width");
    const long height = parse_header_int(next_token(text, pos), "height");
    const long maxval = parse_header_int(next_token(text, pos), "maxval");
    if (width < 1 || height < 1) throw DataError("PGM dimensions must be positive");
    if (maxval != 255) throw UnsupportedMaxval(maxval);

    // Exactly one whitespace byte separates the header from the pixel data.
    if (pos >= text.size() || !std::isspace(static_cast<unsigned char>(text[pos]))) {
        throw DataError("missing separator after PGM maxval");
    }
    ++pos;

    GrayImage img(static_cast<std::size_t>(width), static_cast<std::size_t>(height));
    const std::size_t need = img.pixels.size();
    if (text.size() - pos < need) throw TruncatedPixelData(need, text.size() - pos);
    for (std::size_t i = 0; i < need; ++i) {
        img.pixels[i] = static_cast<std::uint8_t>(text[pos + i]);
    }
    return img;
}

SurfaceGrid surface_grid(const GrayImage& img) {
    Matrix z(img.height, img.width);
    for (std::size_t r = 0; r < img.height; ++r) {
        for (std::size_t c = 0; c < img.width; ++c) {
            z(r, c) = static_cast<double>(img.at(r, c));
        }
    }
    return surface_grid(z);
}

SurfaceGrid surface_grid(const Matrix& values) {
    if (values.empty()) throw DataError("surface grid needs a non-empty input");
    SurfaceGrid g;
    g.z = values;
    g.x.resize(values.cols);
    g.y.resize(values.rows);
    for (std::size_t c = 0; c < values.cols; ++c) g.x[c] = c;
    for (std::size_t r = 0; r < values.rows; ++r) g.y[r] = r;
    return g;
}

void write_surface_csv(const SurfaceGrid& g, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");
    file << "x,y,z\n";
    for (std::size_t r = 0; r < g.z.rows; ++r) {
        for (std::size_t c = 0; c < g.z.cols; ++c) {
            file << g.x[c] << ',' << g.y[r] << ',' << shortest_repr(g.z(r, c)) << '\n';
        }
    }
    if (!file) throw IoError("write failed on " + path);
}

void write_surface_matrix(const SurfaceGrid& g, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");
    for (std::size_t r = 0; r < g.z.rows; ++r) {
        for (std::size_t c = 0; c < g.z.cols; ++c) {
            if (c) file << ' ';
            file << shortest_repr(g.z(r, c));
        }
        file << '\n';
    }
    if (!file) throw IoError("write failed on " + path);
}

}  // namespace pixelnorm

#include "kdq/heatmap.hpp"

#include "kdq/error.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <map>
#include <memory>

namespace kdq {

namespace {

struct Rgb {
    std::uint8_t r, g, b;
};

// 5x7 glyphs, one byte per row, bit 4 is the leftmost column.
const std::map<char, std::array<std::uint8_t, 7>>& font() {
    static const std::map<char, std::array<std::uint8_t, 7>> glyphs{
        {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
        {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
        {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
        {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
        {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
        {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}}, {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
        {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}}, {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}},
        {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}}, {' ', {0, 0, 0, 0, 0, 0, 0}},
        {'a', {0x00, 0x00, 0x0E, 0x01, 0x0F, 0x11, 0x0F}}, {'b', {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x1E}},
        {'c', {0x00, 0x00, 0x0E, 0x10, 0x10, 0x11, 0x0E}}, {'d', {0x01, 0x01, 0x0D, 0x13, 0x11, 0x11, 0x0F}},
        {'e', {0x00, 0x00, 0x0E, 0x11, 0x1F, 0x10, 0x0E}}, {'f', {0x06, 0x09, 0x08, 0x1C, 0x08, 0x08, 0x08}},
        {'g', {0x00, 0x0F, 0x11, 0x11, 0x0F, 0x01, 0x0E}}, {'h', {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x11}},
        {'i', {0x04, 0x00, 0x0C, 0x04, 0x04, 0x04, 0x0E}}, {'j', {0x02, 0x00, 0x06, 0x02, 0x02, 0x12, 0x0C}},
        {'k', {0x10, 0x10, 0x12, 0x14, 0x18, 0x14, 0x12}}, {'l', {0x0C, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
        {'m', {0x00, 0x00, 0x1A, 0x15, 0x15, 0x11, 0x11}}, {'n', {0x00, 0x00, 0x16, 0x19, 0x11, 0x11, 0x11}},
        {'o', {0x00, 0x00, 0x0E, 0x11, 0x11, 0x11, 0x0E}}, {'p', {0x00, 0x00, 0x1E, 0x11, 0x1E, 0x10, 0x10}},
        {'q', {0x00, 0x00, 0x0D, 0x13, 0x0F, 0x01, 0x01}}, {'r', {0x00, 0x00, 0x16, 0x19, 0x10, 0x10, 0x10}},
        {'s', {0x00, 0x00, 0x0E, 0x10, 0x0E, 0x01, 0x1E}}, {'t', {0x08, 0x08, 0x1C, 0x08, 0x08, 0x09, 0x06}},
        {'u', {0x00, 0x00, 0x11, 0x11, 0x11, 0x13, 0x0D}}, {'v', {0x00, 0x00, 0x11, 0x11, 0x11, 0x0A, 0x04}},
        {'w', {0x00, 0x00, 0x11, 0x11, 0x15, 0x15, 0x0A}}, {'x', {0x00, 0x00, 0x11, 0x0A, 0x04, 0x0A, 0x11}},
        {'y', {0x00, 0x00, 0x11, 0x11, 0x0F, 0x01, 0x0E}}, {'z', {0x00, 0x00, 0x1F, 0x02, 0x04, 0x08, 0x1F}},
    };
    return glyphs;
}

class Canvas {
public:
    Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<std::size_t>(w) * h, Rgb{255, 255, 255}) {}

    void set(int x, int y, Rgb c) {
        if (x >= 0 && y >= 0 && x < w_ && y < h_) px_[static_cast<std::size_t>(y) * w_ + x] = c;
    }

    void fill(int x0, int y0, int w, int h, Rgb c) {
        for (int y = y0; y < y0 + h; ++y)
            for (int x = x0; x < x0 + w; ++x) set(x, y, c);
    }

    void text(int x, int y, const std::string& s, int scale = 1) {
        const auto& f = font();
        for (char ch : s) {
            const auto it = f.find(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
            if (it != f.end()) {
                for (int row = 0; row < 7; ++row)
                    for (int col = 0; col < 5; ++col)
                        if (it->second[row] & (0x10 >> col)) fill(x + col * scale, y + row * scale, scale, scale, {0, 0, 0});
            }
            x += 6 * scale;
        }
    }

    static int text_width(const std::string& s, int scale = 1) { return static_cast<int>(s.size()) * 6 * scale; }

    int width() const { return w_; }
    int height() const { return h_; }
    const Rgb* row(int y) const { return px_.data() + static_cast<std::size_t>(y) * w_; }

private:
    int w_, h_;
    std::vector<Rgb> px_;
};

Rgb lerp(Rgb a, Rgb b, double t) {
    auto mix = [t](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::lround(x + (y - x) * t));
    };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

// t in [-1, 1] for diverging maps, [0, 1] for sequential ones.
Rgb colour(double t, bool diverging) {
    const Rgb blue{33, 102, 172}, white{247, 247, 247}, red{178, 24, 43};
    t = std::clamp(t, -1.0, 1.0);
    if (!diverging) return lerp(white, red, std::max(t, 0.0));
    return t < 0 ? lerp(white, blue, -t) : lerp(white, red, t);
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void save_png(const Canvas& c, const std::string& path) {
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!fp) throw Error(ErrorKind::IOError, "cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::IOError, "libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::IOError, "libpng failed writing " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, c.width(), c.height(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < c.height(); ++y) {
        png_write_row(png, reinterpret_cast<png_const_bytep>(c.row(y)));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace

void write_heatmap_png(const HeatmapSpec& spec, const std::string& path) {
    if (spec.nx < 1 || spec.ny < 1 || spec.values.size() != static_cast<std::size_t>(spec.nx) * spec.ny) {
        throw Error(ErrorKind::IOError, "heatmap data does not match its dimensions");
    }
    const int cell = std::max(1, 404 / std::max(spec.nx, spec.ny));
    const int pw = cell * spec.nx, ph = cell * spec.ny;
    const int left = 60, top = 30, bottom = 40, bar_gap = 20, bar_w = 16, right = 80;
    Canvas c(left + pw + bar_gap + bar_w + right, top + ph + bottom);

    double limit = 0.0;
    for (double v : spec.values)
        if (std::isfinite(v)) limit = std::max(limit, spec.diverging ? std::abs(v) : v);
    if (limit == 0.0) limit = 1.0;

    for (int iy = 0; iy < spec.ny; ++iy) {
        for (int ix = 0; ix < spec.nx; ++ix) {
            const double v = spec.values[static_cast<std::size_t>(iy) * spec.nx + ix];
            const Rgb col = std::isfinite(v) ? colour(v / limit, spec.diverging) : Rgb{128, 128, 128};
            c.fill(left + ix * cell, top + (spec.ny - 1 - iy) * cell, cell, cell, col);
        }
    }

    // frame
    const Rgb black{0, 0, 0};
    c.fill(left - 1, top - 1, pw + 2, 1, black);
    c.fill(left - 1, top + ph, pw + 2, 1, black);
    c.fill(left - 1, top - 1, 1, ph + 2, black);
    c.fill(left + pw, top - 1, 1, ph + 2, black);

    c.text(left, 8, spec.title, 2);
    const std::string xmin = tick(spec.x_min), xmax = tick(spec.x_max);
    c.text(left, top + ph + 6, xmin);
    c.text(left + pw - Canvas::text_width(xmax), top + ph + 6, xmax);
    c.text(left + pw / 2 - Canvas::text_width(spec.x_label), top + ph + 18, spec.x_label, 2);
    const std::string ymin = tick(spec.y_min), ymax = tick(spec.y_max);
    c.text(left - 6 - Canvas::text_width(ymin), top + ph - 7, ymin);
    c.text(left - 6 - Canvas::text_width(ymax), top, ymax);
    c.text(4, top + ph / 2 - 7, spec.y_label, 2);

    // colour bar
    const int bx = left + pw + bar_gap;
    for (int y = 0; y < ph; ++y) {
        const double t = 1.0 - static_cast<double>(y) / std::max(ph - 1, 1);
        const double s = spec.diverging ? 2.0 * t - 1.0 : t;
        c.fill(bx, top + y, bar_w, 1, colour(s, spec.diverging));
    }
    c.text(bx + bar_w + 4, top, tick(limit));
    c.text(bx + bar_w + 4, top + ph - 7, tick(spec.diverging ? -limit : 0.0));

    save_png(c, path);
}

} // namespace kdq

#ifndef RRLPI_IMAGE_HPP
#define RRLPI_IMAGE_HPP

#include "rrlpi/estimators.hpp"
#include "rrlpi/metrics.hpp"
#include "rrlpi/penalty.hpp"
#include "rrlpi/rng.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace rrlpi {

// H x W RGB image, channels in [0,1], row-major.
struct PixelGrid {
    Index height{};
    Index width{};
    std::vector<double> data; // height*width*3

    double& at(Index r, Index c, Index ch) {
        return data[static_cast<size_t>((r * width + c) * 3 + ch)];
    }
    double at(Index r, Index c, Index ch) const {
        return data[static_cast<size_t>((r * width + c) * 3 + ch)];
    }
    Index pixels() const { return height * width; }
};

namespace detail {

inline int ppm_next_int(std::istream& in) {
    // skips whitespace and '#' comments between tokens
    for (;;) {
        const int c = in.peek();
        if (c == EOF) throw CorruptFile("unexpected end of PPM header");
        if (std::isspace(c)) {
            in.get();
        } else if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else {
            break;
        }
    }
    int v = 0;
    if (!(in >> v)) throw CorruptFile("malformed PPM header");
    return v;
}

inline PixelGrid load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    if (magic != "P3" && magic != "P6") throw UnsupportedFormat("not a P3/P6 PPM");
    const int w = ppm_next_int(in);
    const int h = ppm_next_int(in);
    const int maxval = ppm_next_int(in);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw CorruptFile("bad PPM dimensions");

    PixelGrid grid;
    grid.height = h;
    grid.width = w;
    grid.data.resize(static_cast<size_t>(h) * static_cast<size_t>(w) * 3);
    const double scale = 1.0 / maxval;
    const size_t count = grid.data.size();

    if (magic == "P3") {
        for (size_t i = 0; i < count; ++i) {
            int v = 0;
            if (!(in >> v)) throw CorruptFile("truncated P3 data");
            grid.data[i] = v * scale;
        }
    } else {
        in.get(); // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(count * static_cast<size_t>(bytes));
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<size_t>(in.gcount()) != raw.size())
            throw CorruptFile("truncated P6 data");
        for (size_t i = 0; i < count; ++i) {
            const int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
            grid.data[i] = v * scale;
        }
    }
    return grid;
}

struct PngReadCloser {
    png_structp png{};
    png_infop info{};
    std::FILE* fp{};
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

inline PixelGrid load_png(const std::filesystem::path& path) {
    PngReadCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) throw IoError("cannot open " + path.string());

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8))
        throw CorruptFile("bad PNG signature in " + path.string());

    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("png_create_read_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png))) throw CorruptFile("corrupt PNG " + path.string());

    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_byte color = png_get_color_type(ctx.png, ctx.info);
    const png_byte depth = png_get_bit_depth(ctx.png, ctx.info);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        throw UnsupportedFormat("grayscale PNG not supported");
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (depth == 16) png_set_strip_16(ctx.png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    if (png_get_rowbytes(ctx.png, ctx.info) != static_cast<size_t>(w) * 3)
        throw UnsupportedFormat("expected 8-bit RGB PNG");

    std::vector<unsigned char> raw(static_cast<size_t>(h) * static_cast<size_t>(w) * 3);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 r = 0; r < h; ++r)
        rows[r] = raw.data() + static_cast<size_t>(r) * static_cast<size_t>(w) * 3;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    PixelGrid grid;
    grid.height = static_cast<Index>(h);
    grid.width = static_cast<Index>(w);
    grid.data.resize(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) grid.data[i] = raw[i] / 255.0;
    return grid;
}

struct PngWriteCloser {
    png_structp png{};
    png_infop info{};
    std::FILE* fp{};
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

} // namespace detail

inline PixelGrid load_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open " + path.string());
    unsigned char head[8] = {};
    probe.read(reinterpret_cast<char*>(head), 8);
    probe.close();
    if (head[0] == 'P' && (head[1] == '3' || head[1] == '6')) return detail::load_ppm(path);
    if (png_sig_cmp(head, 0, 8) == 0) return detail::load_png(path);
    throw UnsupportedFormat("unrecognized image format: " + path.string());
}

// Writes a label map as an indexed-palette PNG, one palette slot per label.
inline void save_label_png(const std::filesystem::path& path, const LabelMap& seg) {
    static const unsigned char palette_rgb[][3] = {
        {31, 119, 180}, {255, 127, 14}, {44, 160, 44},   {214, 39, 40},
        {148, 103, 189}, {140, 86, 75},  {227, 119, 194}, {127, 127, 127},
        {188, 189, 34}, {23, 190, 207}, {0, 0, 0},       {255, 255, 255}};
    int max_label = 0;
    for (int l : seg.labels) max_label = std::max(max_label, l);
    if (max_label > 255) throw DomainViolation("too many labels for indexed PNG");

    detail::PngWriteCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "wb");
    if (!ctx.fp) throw IoError("cannot open " + path.string());
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("png_create_write_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError("PNG write failed for " + path.string());

    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(seg.width),
                 static_cast<png_uint_32>(seg.height), 8, PNG_COLOR_TYPE_PALETTE,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_color> palette(static_cast<size_t>(max_label) + 1);
    for (size_t i = 0; i < palette.size(); ++i) {
        const auto& c = palette_rgb[i % 12];
        palette[i] = {c[0], c[1], c[2]};
    }
    png_set_PLTE(ctx.png, ctx.info, palette.data(), static_cast<int>(palette.size()));
    png_write_info(ctx.png, ctx.info);

    std::vector<unsigned char> row(static_cast<size_t>(seg.width));
    for (Index r = 0; r < seg.height; ++r) {
        for (Index c = 0; c < seg.width; ++c)
            row[static_cast<size_t>(c)] = static_cast<unsigned char>(seg.at(r, c));
        png_write_row(ctx.png, row.data());
    }
    png_write_end(ctx.png, nullptr);
}

// Ground-truth ingestion: each distinct color becomes one segment label.
inline LabelMap labels_from_colors(const PixelGrid& grid) {
    LabelMap out;
    out.height = grid.height;
    out.width = grid.width;
    out.labels.resize(static_cast<size_t>(grid.pixels()));
    std::map<std::tuple<int, int, int>, int> color_to_label;
    for (Index r = 0; r < grid.height; ++r) {
        for (Index c = 0; c < grid.width; ++c) {
            const auto key = std::make_tuple(static_cast<int>(std::lround(grid.at(r, c, 0) * 255)),
                                             static_cast<int>(std::lround(grid.at(r, c, 1) * 255)),
                                             static_cast<int>(std::lround(grid.at(r, c, 2) * 255)));
            const auto it =
                color_to_label.emplace(key, static_cast<int>(color_to_label.size()) + 1).first;
            out.labels[static_cast<size_t>(r * grid.width + c)] = it->second;
        }
    }
    return out;
}

struct DownsampleResult {
    DataMatrix features;          // 3 x n block-mean RGB features
    std::vector<Index> index_map; // full-res pixel -> feature column
    Index block{1};
};

// Block-average pooling to roughly target_n pixels; the index map sends every
// full-resolution pixel to its block for label reprojection.
inline DownsampleResult downsample(const PixelGrid& grid, Index target_n = 15000) {
    if (target_n < 1) throw DomainViolation("target_n must be >= 1");
    DownsampleResult out;
    const double ratio = static_cast<double>(grid.pixels()) / static_cast<double>(target_n);
    out.block = std::max<Index>(1, static_cast<Index>(std::ceil(std::sqrt(ratio))));
    const Index bh = (grid.height + out.block - 1) / out.block;
    const Index bw = (grid.width + out.block - 1) / out.block;
    const Index n = bh * bw;

    out.features.values = Matrix::Zero(3, n);
    Vector counts = Vector::Zero(n);
    out.index_map.resize(static_cast<size_t>(grid.pixels()));
    for (Index r = 0; r < grid.height; ++r) {
        for (Index c = 0; c < grid.width; ++c) {
            const Index blk = (r / out.block) * bw + (c / out.block);
            out.index_map[static_cast<size_t>(r * grid.width + c)] = blk;
            for (Index ch = 0; ch < 3; ++ch) out.features.values(ch, blk) += grid.at(r, c, ch);
            counts[blk] += 1.0;
        }
    }
    for (Index b = 0; b < n; ++b) out.features.values.col(b) /= counts[b];
    return out;
}

// Multiplicative noise I + xi*I with xi uniform, zero mean, variance sigma_xi
// (support +/- sqrt(3*sigma_xi)); output clamped to [0,1].
inline PixelGrid corrupt(const PixelGrid& grid, double sigma_xi, std::uint64_t seed) {
    if (sigma_xi < 0.0) throw DomainViolation("noise variance must be >= 0");
    PixelGrid out = grid;
    if (sigma_xi == 0.0) return out;
    const double half = std::sqrt(3.0 * sigma_xi);
    const CounterRng rng(seed);
    for (size_t i = 0; i < out.data.size(); ++i) {
        const double xi = half * (2.0 * rng.uniform(0, static_cast<std::uint64_t>(i)) - 1.0);
        out.data[i] = std::clamp(out.data[i] * (1.0 + xi), 0.0, 1.0);
    }
    return out;
}

struct SegmentationMetrics {
    double f_score{};
    double jaccard{};
    double accuracy{};
};

struct SegmentationResult {
    LabelMap labels;
    double gamma_hat{};
    bool degenerate_spectrum{};
    bool has_metrics{};
    SegmentationMetrics metrics;
};

// Downsampled RGB features -> cosine affinity -> Fiedler estimate -> K-means
// -> labels reprojected to full resolution.
inline SegmentationResult segment(const PixelGrid& grid, int K, EmbeddingKind method,
                                  const GammaSearchConfig& config = {},
                                  Index target_n = 15000, const LabelMap* ground_truth = nullptr) {
    if (K < 2) throw DomainViolation("K must be >= 2");
    const DownsampleResult down = downsample(grid, target_n);
    const AffinityGraph G = cosine_affinity(down.features);

    EmbeddingVector embedding;
    double gamma_hat = 0.0;
    if (method == EmbeddingKind::RRLPI) {
        const AutoGammaResult auto_result = estimate_fiedler_rrlpi(down.features, G, config);
        embedding = auto_result.embedding;
        gamma_hat = auto_result.gamma_hat;
    } else {
        embedding = estimate(method, down.features, G, config.gamma_min, config.huber_c).embedding;
    }

    const LabelVector coarse = kmeans_1d(embedding.y, K);

    SegmentationResult out;
    out.gamma_hat = gamma_hat;
    out.degenerate_spectrum = embedding.degenerate_spectrum;
    out.labels.height = grid.height;
    out.labels.width = grid.width;
    out.labels.labels.resize(static_cast<size_t>(grid.pixels()));
    for (size_t i = 0; i < out.labels.labels.size(); ++i)
        out.labels.labels[i] = coarse.labels[static_cast<size_t>(down.index_map[i])];

    if (ground_truth) {
        out.has_metrics = true;
        out.metrics.f_score = f_score(out.labels, *ground_truth);
        out.metrics.jaccard = jaccard(out.labels, *ground_truth);
        LabelVector est;
        est.labels = out.labels.labels;
        est.K = K;
        std::set<int> gt_set(ground_truth->labels.begin(), ground_truth->labels.end());
        LabelVector truth;
        truth.labels = ground_truth->labels;
        truth.K = static_cast<int>(gt_set.size());
        out.metrics.accuracy = align_labels(est, truth).accuracy;
    }
    return out;
}

} // namespace rrlpi

#endif

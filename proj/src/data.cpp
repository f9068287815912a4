// Copyright 2026 The mcvqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcvqc/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "mcvqc/error.hpp"

namespace mcvqc {

const char* to_string(SplitTag tag) {
    switch (tag) {
        case SplitTag::Train: return "train";
        case SplitTag::Val: return "val";
        case SplitTag::Test: return "test";
    }
    return "?";
}

void Dataset::validate() const {
    require(targets.size() == features.size(), ErrorCode::DimensionMismatch,
            "dataset has " + std::to_string(features.size()) + " feature rows but " +
                std::to_string(targets.size()) + " target rows");
    require(labels.empty() || labels.size() == features.size(), ErrorCode::DimensionMismatch,
            "label count does not match row count");
    require(split.empty() || split.size() == features.size(), ErrorCode::DimensionMismatch,
            "split tags do not cover every row");
    const std::size_t d = dim();
    for (std::size_t i = 0; i < features.size(); ++i) {
        require(features[i].size() == d, ErrorCode::DimensionMismatch,
                "ragged feature row " + std::to_string(i));
        for (double v : features[i]) {
            require(std::isfinite(v), ErrorCode::NonFinite, "non-finite feature in row " + std::to_string(i));
        }
        for (double v : targets[i]) {
            require(std::isfinite(v), ErrorCode::NonFinite, "non-finite target in row " + std::to_string(i));
        }
    }
}

std::vector<std::size_t> Dataset::indices(SplitTag tag) const {
    require(split.size() == features.size(), ErrorCode::InvalidArgument, "dataset has not been split");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < split.size(); ++i) {
        if (split[i] == tag) out.push_back(i);
    }
    return out;
}

Dataset Dataset::subset(SplitTag tag) const {
    Dataset out;
    out.num_classes = num_classes;
    for (std::size_t i : indices(tag)) {
        out.features.push_back(features[i]);
        out.targets.push_back(targets[i]);
        if (!labels.empty()) out.labels.push_back(labels[i]);
        out.split.push_back(tag);
    }
    return out;
}

Dataset as_reconstruction(Dataset ds) {
    ds.targets = ds.features;
    return ds;
}

namespace {

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::Io, "cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& buf, std::size_t off, const std::string& what) {
    require(buf.size() >= off + 4, ErrorCode::Format, what + ": truncated header");
    return (std::uint32_t{buf[off]} << 24) | (std::uint32_t{buf[off + 1]} << 16) |
           (std::uint32_t{buf[off + 2]} << 8) | std::uint32_t{buf[off + 3]};
}

void put_be32(std::ostream& os, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                       static_cast<char>(v)};
    os.write(b, 4);
}

std::string hex(std::uint32_t v) {
    std::ostringstream os;
    os << "0x" << std::hex << v;
    return os.str();
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& path) {
    const auto buf = read_file(path);
    const std::string what = path.string();
    const std::uint32_t magic = read_be32(buf, 0, what);
    require(magic == kIdxImagesMagic, ErrorCode::Format, what + ": bad image magic " + hex(magic));
    IdxImages img;
    img.count = read_be32(buf, 4, what);
    img.rows = read_be32(buf, 8, what);
    img.cols = read_be32(buf, 12, what);
    const std::uint64_t need = std::uint64_t{img.count} * img.rows * img.cols;
    require(buf.size() - 16 >= need, ErrorCode::Format,
            what + ": truncated, expected " + std::to_string(need) + " pixel bytes, found " +
                std::to_string(buf.size() - 16));
    img.pixels.assign(buf.begin() + 16, buf.begin() + 16 + static_cast<std::ptrdiff_t>(need));
    return img;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
    const auto buf = read_file(path);
    const std::string what = path.string();
    const std::uint32_t magic = read_be32(buf, 0, what);
    require(magic == kIdxLabelsMagic, ErrorCode::Format, what + ": bad label magic " + hex(magic));
    const std::uint32_t count = read_be32(buf, 4, what);
    require(buf.size() - 8 >= count, ErrorCode::Format,
            what + ": truncated, expected " + std::to_string(count) + " labels, found " +
                std::to_string(buf.size() - 8));
    return {buf.begin() + 8, buf.begin() + 8 + count};
}

void write_idx_images(const std::filesystem::path& path, const IdxImages& images) {
    require(images.pixels.size() == std::size_t{images.count} * images.rows * images.cols,
            ErrorCode::DimensionMismatch, "pixel buffer does not match the image header");
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorCode::Io, "cannot write '" + path.string() + "'");
    put_be32(out, kIdxImagesMagic);
    put_be32(out, images.count);
    put_be32(out, images.rows);
    put_be32(out, images.cols);
    out.write(reinterpret_cast<const char*>(images.pixels.data()),
              static_cast<std::streamsize>(images.pixels.size()));
}

void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorCode::Io, "cannot write '" + path.string() + "'");
    put_be32(out, kIdxLabelsMagic);
    put_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

Dataset parse_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
    const IdxImages img = read_idx_images(images_path);
    const auto labels = read_idx_labels(labels_path);
    require(labels.size() == img.count, ErrorCode::Format,
            "count mismatch: images=" + std::to_string(img.count) + " labels=" + std::to_string(labels.size()));
    const std::size_t d = std::size_t{img.rows} * img.cols;
    Dataset ds;
    ds.features.reserve(img.count);
    int max_label = 0;
    for (std::size_t i = 0; i < img.count; ++i) {
        std::vector<double> row(d);
        for (std::size_t j = 0; j < d; ++j) row[j] = img.pixels[i * d + j] / 255.0;
        ds.features.push_back(std::move(row));
        ds.targets.push_back({static_cast<double>(labels[i])});
        ds.labels.push_back(labels[i]);
        max_label = std::max<int>(max_label, labels[i]);
    }
    ds.num_classes = img.count ? max_label + 1 : 0;
    return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& s, std::size_t line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    require(pos == s.size() && !s.empty(), ErrorCode::Format,
            "csv line " + std::to_string(line_no) + ": cannot parse '" + s + "'");
    require(std::isfinite(v), ErrorCode::NonFinite, "csv line " + std::to_string(line_no) + ": non-finite value");
    return v;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::Format, path.string() + ": missing header row");
    const auto header = split_csv_line(line);
    const auto it = std::find(header.begin(), header.end(), target_column);
    require(it != header.end(), ErrorCode::Format, path.string() + ": no column named '" + target_column + "'");
    const std::size_t tcol = static_cast<std::size_t>(it - header.begin());
    Dataset ds;
    bool integral = true;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        require(cells.size() == header.size(), ErrorCode::Format,
                "csv line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                    " columns, found " + std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size() - 1);
        double target = 0.0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const double v = parse_cell(cells[c], line_no);
            if (c == tcol) {
                target = v;
            } else {
                row.push_back(v);
            }
        }
        integral = integral && target >= 0 && target == std::floor(target);
        ds.features.push_back(std::move(row));
        ds.targets.push_back({target});
    }
    if (integral) {
        int max_label = -1;
        for (const auto& t : ds.targets) {
            ds.labels.push_back(static_cast<int>(t[0]));
            max_label = std::max(max_label, ds.labels.back());
        }
        ds.num_classes = max_label + 1;
    }
    ds.validate();
    return ds;
}

std::vector<double> scale_to_angles(std::span<const double> features, std::size_t* clamped) {
    std::vector<double> out(features.size());
    std::size_t n_clamped = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double v = features[i];
        if (v < 0.0 || v > 1.0) {
            ++n_clamped;
            v = std::clamp(v, 0.0, 1.0);
        }
        out[i] = v * std::numbers::pi;
    }
    if (n_clamped > 0) {
        std::cerr << "warning: scale_to_angles clamped " << n_clamped << " value(s) into [0, 1]\n";
    }
    if (clamped) *clamped = n_clamped;
    return out;
}

Dataset synthetic_blobs(std::size_t n_samples, std::size_t dim, int n_classes, std::uint64_t seed,
                        double separation) {
    require(n_samples >= 1 && dim >= 1 && n_classes >= 1, ErrorCode::InvalidArgument,
            "blob sizes must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Axis-aligned centers keep every pair of clusters `separation` sigmas apart per axis.
    std::vector<std::vector<double>> centers(n_classes, std::vector<double>(dim, 0.0));
    for (int c = 0; c < n_classes; ++c) {
        if (static_cast<std::size_t>(n_classes) <= dim) {
            centers[c][c] = separation;
        } else {
            for (auto& v : centers[c]) v = separation * gauss(rng);
        }
    }
    Dataset ds;
    ds.num_classes = n_classes;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const int c = static_cast<int>(i % static_cast<std::size_t>(n_classes));
        std::vector<double> row(dim);
        for (std::size_t j = 0; j < dim; ++j) row[j] = centers[c][j] + gauss(rng);
        ds.features.push_back(std::move(row));
        ds.targets.push_back({static_cast<double>(c)});
        ds.labels.push_back(c);
    }
    return ds;
}

Dataset synthetic_spatiotemporal(std::size_t n_samples, std::size_t channels, std::size_t timesteps,
                                 std::uint64_t seed, int n_classes) {
    require(n_samples >= 1 && channels >= 1 && timesteps >= 1 && n_classes >= 1, ErrorCode::InvalidArgument,
            "spatiotemporal sizes must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 0.1);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    Dataset ds;
    ds.num_classes = n_classes;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const int c = static_cast<int>(i % static_cast<std::size_t>(n_classes));
        const double freq = 1.0 + c;
        const double phi = phase(rng);
        std::vector<double> row(channels * timesteps);
        for (std::size_t ch = 0; ch < channels; ++ch) {
            const double amp = 0.4 * (1.0 + static_cast<double>(ch % 3)) / 3.0;
            for (std::size_t t = 0; t < timesteps; ++t) {
                const double s = std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(t) /
                                              static_cast<double>(timesteps) +
                                          phi + 0.3 * static_cast<double>(ch));
                row[ch * timesteps + t] = std::clamp(0.5 + amp * s + gauss(rng), 0.0, 1.0);
            }
        }
        ds.features.push_back(std::move(row));
        ds.targets.push_back({static_cast<double>(c)});
        ds.labels.push_back(c);
    }
    return ds;
}

namespace {

// 5x7 glyphs, one row per byte, bit 4 is the leftmost column.
constexpr std::uint8_t kGlyphs[10][7] = {
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}, {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}, {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}, {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}, {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
};

}  // namespace

Dataset synthetic_digits(std::size_t n_samples, std::uint64_t seed) {
    require(n_samples >= 1, ErrorCode::InvalidArgument, "digit count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> shift_x(0, 3);
    std::uniform_int_distribution<int> shift_y(0, 1);
    std::uniform_real_distribution<double> ink(0.6, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.05);
    Dataset ds;
    ds.num_classes = 10;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const int digit = static_cast<int>(i % 10);
        const int ox = shift_x(rng);
        const int oy = shift_y(rng);
        const double level = ink(rng);
        std::vector<double> img(64, 0.0);
        for (int r = 0; r < 7; ++r) {
            for (int c = 0; c < 5; ++c) {
                bool on = (kGlyphs[digit][r] >> (4 - c)) & 1u;
                if (unit(rng) < 0.05) on = !on;  // stroke dropout and stray ink
                if (on) img[(r + oy) * 8 + (c + ox)] = level;
            }
        }
        // Light horizontal smear, like antialiased pen strokes.
        std::vector<double> smooth(img);
        for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < 8; ++c) {
                const double left = c > 0 ? img[r * 8 + c - 1] : 0.0;
                const double right = c < 7 ? img[r * 8 + c + 1] : 0.0;
                smooth[r * 8 + c] = std::max(img[r * 8 + c], 0.25 * (left + right));
            }
        }
        for (auto& v : smooth) v = std::clamp(v + noise(rng), 0.0, 1.0);
        ds.features.push_back(std::move(smooth));
        ds.targets.push_back({static_cast<double>(digit)});
        ds.labels.push_back(digit);
    }
    return ds;
}

Dataset downsample_mnist(const Dataset& ds) {
    Dataset out = ds;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& src = ds.features[i];
        require(src.size() == 784, ErrorCode::DimensionMismatch,
                "downsample expects 28x28 rows, got " + std::to_string(src.size()));
        std::vector<double> dst(64, 0.0);
        for (int r = 0; r < 28; ++r) {
            for (int c = 0; c < 28; ++c) {
                dst[((r + 2) / 4) * 8 + (c + 2) / 4] += src[r * 28 + c] / 16.0;
            }
        }
        out.features[i] = std::move(dst);
    }
    if (!ds.targets.empty() && ds.targets.front().size() == 784) out.targets = out.features;
    return out;
}

void minmax_normalize(Dataset& ds) {
    const std::size_t d = ds.dim();
    for (std::size_t j = 0; j < d; ++j) {
        double lo = ds.features.front()[j], hi = lo;
        for (const auto& row : ds.features) {
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        const double span = hi - lo;
        for (auto& row : ds.features) row[j] = span > 0.0 ? (row[j] - lo) / span : 0.0;
    }
}

Dataset split(Dataset ds, const std::array<double, 3>& fractions, std::uint64_t seed) {
    const double total = fractions[0] + fractions[1] + fractions[2];
    require(std::abs(total - 1.0) <= 1e-9 && fractions[0] >= 0 && fractions[1] >= 0 && fractions[2] >= 0,
            ErrorCode::InvalidArgument, "split fractions must be nonnegative and sum to 1");
    const std::size_t n = ds.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::llround(fractions[0] * static_cast<double>(n)));
    const auto n_val = std::min(n - n_train,
                                static_cast<std::size_t>(std::llround(fractions[1] * static_cast<double>(n))));
    ds.split.assign(n, SplitTag::Test);
    for (std::size_t p = 0; p < n; ++p) {
        ds.split[order[p]] = p < n_train ? SplitTag::Train : (p < n_train + n_val ? SplitTag::Val : SplitTag::Test);
    }
    return ds;
}

std::vector<std::vector<std::size_t>> batches(const Dataset& ds, SplitTag tag, std::size_t batch_size,
                                              std::uint64_t seed) {
    require(batch_size >= 1, ErrorCode::InvalidArgument, "batch size must be >= 1");
    auto idx = ds.indices(tag);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t b = 0; b < idx.size(); b += batch_size) {
        out.emplace_back(idx.begin() + static_cast<std::ptrdiff_t>(b),
                         idx.begin() + static_cast<std::ptrdiff_t>(std::min(idx.size(), b + batch_size)));
    }
    return out;
}

}  // namespace mcvqc

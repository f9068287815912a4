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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "mcvqc/data.hpp"
#include "mcvqc/error.hpp"

using namespace mcvqc;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
    const fs::path p = fs::path(MCVQC_TEST_TMPDIR) / "data" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no mcvqc::Error thrown";
    return ErrorCode::Io;
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream os(p, std::ios::binary);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

IdxImages two_4x4() {
    IdxImages im;
    im.count = 2;
    im.rows = 4;
    im.cols = 4;
    for (int i = 0; i < 32; ++i) im.pixels.push_back(static_cast<std::uint8_t>(i * 8));
    im.pixels[0] = 0;
    im.pixels[31] = 255;
    return im;
}

}  // namespace

TEST(Idx, HandWrittenHeaderParses) {
    const auto dir = tmp_dir("hand");
    std::vector<std::uint8_t> img{0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 4, 0, 0, 0, 4};
    for (int i = 0; i < 32; ++i) img.push_back(i == 31 ? 255 : 0);
    write_bytes(dir / "img", img);
    write_bytes(dir / "lbl", {0, 0, 8, 1, 0, 0, 0, 2, 7, 3});
    const auto ds = parse_idx(dir / "img", dir / "lbl");
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.dim(), 16u);
    EXPECT_EQ(ds.features[0][0], 0.0);
    EXPECT_EQ(ds.features[1][15], 1.0);
    EXPECT_EQ(ds.labels, (std::vector<int>{7, 3}));
}

TEST(Idx, RoundTripIsByteExact) {
    const auto dir = tmp_dir("roundtrip");
    const auto im = two_4x4();
    write_idx_images(dir / "img", im);
    const std::vector<std::uint8_t> lbl{1, 9};
    write_idx_labels(dir / "lbl", lbl);
    const auto back = read_idx_images(dir / "img");
    EXPECT_EQ(back.count, 2u);
    EXPECT_EQ(back.rows, 4u);
    EXPECT_EQ(back.cols, 4u);
    EXPECT_EQ(back.pixels, im.pixels);
    EXPECT_EQ(read_idx_labels(dir / "lbl"), lbl);
    const auto ds = parse_idx(dir / "img", dir / "lbl");
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 16; ++c) EXPECT_EQ(ds.features[r][c], im.pixels[r * 16 + c] / 255.0);
}

TEST(Idx, Errors) {
    const auto dir = tmp_dir("errors");
    write_idx_images(dir / "img", two_4x4());
    const std::vector<std::uint8_t> three{1, 2, 3};
    write_idx_labels(dir / "lbl3", three);
    try {
        parse_idx(dir / "img", dir / "lbl3");
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Format);
        EXPECT_NE(std::string(e.what()).find("images=2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("labels=3"), std::string::npos);
    }
    write_bytes(dir / "badmagic", {0, 0, 8, 4, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1});
    EXPECT_EQ(code_of([&] { read_idx_images(dir / "badmagic"); }), ErrorCode::Format);
    write_bytes(dir / "short", {0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 4, 0, 0, 0, 4, 1, 2, 3});
    EXPECT_EQ(code_of([&] { read_idx_images(dir / "short"); }), ErrorCode::Format);
    EXPECT_EQ(code_of([&] { read_idx_labels(dir / "img"); }), ErrorCode::Format);
    EXPECT_THROW(read_idx_images(dir / "missing"), Error);
}

TEST(Csv, LoadsTargetColumn) {
    const auto dir = tmp_dir("csv");
    {
        std::ofstream os(dir / "t.csv");
        os << "a,label,b\n0.5,1,0.25\n1.0,0,0.75\n";
    }
    const auto ds = load_csv(dir / "t.csv", "label");
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.features[0], (std::vector<double>{0.5, 0.25}));
    EXPECT_EQ(ds.labels, (std::vector<int>{1, 0}));
    EXPECT_THROW(load_csv(dir / "t.csv", "nope"), Error);
    {
        std::ofstream os(dir / "bad.csv");
        os << "a,label\n0.5,nan\n";
    }
    EXPECT_THROW(load_csv(dir / "bad.csv", "label"), Error);
}

TEST(ScaleToAngles, EndpointsAndClamp) {
    const std::vector<double> x{0.0, 1.0, 0.5};
    const auto a = scale_to_angles(x);
    EXPECT_EQ(a[0], 0.0);
    EXPECT_DOUBLE_EQ(a[1], std::numbers::pi);
    EXPECT_DOUBLE_EQ(a[2], std::numbers::pi / 2);
    std::size_t clamped = 0;
    const std::vector<double> out{-0.2, 1.3, 0.4};
    const auto b = scale_to_angles(out, &clamped);
    EXPECT_EQ(clamped, 2u);
    EXPECT_EQ(b[0], 0.0);
    EXPECT_DOUBLE_EQ(b[1], std::numbers::pi);
}

TEST(Generators, SameSeedBitIdentical) {
    const auto a = synthetic_blobs(50, 4, 3, 7);
    const auto b = synthetic_blobs(50, 4, 3, 7);
    EXPECT_EQ(a.features, b.features);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_NE(a.features, synthetic_blobs(50, 4, 3, 8).features);
    EXPECT_EQ(synthetic_digits(20, 3).features, synthetic_digits(20, 3).features);
    EXPECT_EQ(synthetic_spatiotemporal(10, 8, 6, 1).features, synthetic_spatiotemporal(10, 8, 6, 1).features);
}

TEST(Generators, Shapes) {
    const auto st = synthetic_spatiotemporal(10, 8, 6, 1);
    EXPECT_EQ(st.dim(), 48u);
    EXPECT_EQ(st.size(), 10u);
    const auto dg = synthetic_digits(30, 2);
    EXPECT_EQ(dg.dim(), 64u);
    EXPECT_EQ(dg.num_classes, 10);
    for (const auto& row : dg.features)
        for (double v : row) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
}

TEST(Generators, BlobsAreLinearlySeparable) {
    // Nearest class mean is a linear rule; 10 sigma separation makes it exact.
    const auto ds = synthetic_blobs(300, 5, 4, 11);
    std::vector<std::vector<double>> mu(4, std::vector<double>(5, 0.0));
    std::vector<int> cnt(4, 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        ++cnt[ds.labels[i]];
        for (int j = 0; j < 5; ++j) mu[ds.labels[i]][j] += ds.features[i][j];
    }
    for (int c = 0; c < 4; ++c)
        for (double& v : mu[c]) v /= cnt[c];
    int correct = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        int best = 0;
        double best_d = 1e300;
        for (int c = 0; c < 4; ++c) {
            double d = 0;
            for (int j = 0; j < 5; ++j) d += (ds.features[i][j] - mu[c][j]) * (ds.features[i][j] - mu[c][j]);
            if (d < best_d) best_d = d, best = c;
        }
        correct += best == ds.labels[i];
    }
    EXPECT_EQ(correct, 300);
}

TEST(Downsample, BlockMeans) {
    Dataset ds;
    std::vector<double> img(784, 0.0);
    // Raw pixel (0,0) lands at padded (2,2), inside output block (0,0).
    img[0] = 1.0;
    img[27 * 28 + 27] = 0.5;
    ds.features.push_back(img);
    ds.targets.push_back({0});
    ds.labels = {0};
    ds.num_classes = 10;
    const auto out = downsample_mnist(ds);
    ASSERT_EQ(out.dim(), 64u);
    EXPECT_DOUBLE_EQ(out.features[0][0], 1.0 / 16);
    EXPECT_DOUBLE_EQ(out.features[0][63], 0.5 / 16);
    double total = 0;
    for (double v : out.features[0]) total += v;
    EXPECT_DOUBLE_EQ(total, 1.5 / 16);
}

TEST(Split, ExactCountsAndPartition) {
    auto ds = split(synthetic_blobs(100, 2, 2, 1), {0.6, 0.2, 0.2}, 3);
    EXPECT_EQ(ds.indices(SplitTag::Train).size(), 60u);
    EXPECT_EQ(ds.indices(SplitTag::Val).size(), 20u);
    EXPECT_EQ(ds.indices(SplitTag::Test).size(), 20u);
    EXPECT_EQ(ds.subset(SplitTag::Val).size(), 20u);
    EXPECT_EQ(split(synthetic_blobs(100, 2, 2, 1), {0.6, 0.2, 0.2}, 3).split, ds.split);
    EXPECT_THROW(split(synthetic_blobs(10, 2, 2, 1), {0.6, 0.2, 0.3}, 3), Error);
}

TEST(Batches, CoverSplitExactlyOnce) {
    const auto ds = split(synthetic_blobs(100, 2, 2, 1), {0.6, 0.2, 0.2}, 3);
    const auto bs = batches(ds, SplitTag::Train, 7, 4);
    EXPECT_EQ(bs.size(), 9u);
    std::multiset<std::size_t> seen;
    for (const auto& b : bs) seen.insert(b.begin(), b.end());
    const auto idx = ds.indices(SplitTag::Train);
    EXPECT_EQ(seen, std::multiset<std::size_t>(idx.begin(), idx.end()));
    const auto one = batches(ds, SplitTag::Test, 500, 4);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].size(), 20u);
    EXPECT_EQ(batches(ds, SplitTag::Train, 7, 4), bs);
    EXPECT_THROW(batches(ds, SplitTag::Train, 0, 4), Error);
}

TEST(MinMax, MapsColumnsToUnitRange) {
    auto ds = synthetic_blobs(40, 3, 2, 5);
    minmax_normalize(ds);
    for (std::size_t j = 0; j < 3; ++j) {
        double lo = 1e9, hi = -1e9;
        for (const auto& r : ds.features) lo = std::min(lo, r[j]), hi = std::max(hi, r[j]);
        EXPECT_DOUBLE_EQ(lo, 0.0);
        EXPECT_DOUBLE_EQ(hi, 1.0);
    }
}

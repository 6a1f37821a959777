#pragma once

// Shared test scaffolding: temporary directories, deterministic random
// inputs, small on-disk model fixtures, and a subprocess runner for the CLI.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <stdexcept>

#include "tsrkit/bbox.hpp"
#include "tsrkit/image.hpp"
#include "tsrkit/io.hpp"
#include "tsrkit/tensor.hpp"
#include "tsrkit/weights.hpp"

namespace fixtures {

namespace fs = std::filesystem;

// Uniform in [0, 1) from the top 53 bits; identical on every platform, so
// frozen expectations stay valid (distribution classes are not portable).
inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit(rng);
}

struct TempDir {
    fs::path path;

    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "tsrkit-test-XXXXXX").string();
        if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    fs::path file(const std::string& name) const { return path / name; }
};

inline tsrkit::Image solid_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    tsrkit::Image img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = r;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = b;
        }
    return img;
}

inline tsrkit::Image noise_image(int w, int h, std::uint64_t seed) {
    tsrkit::Image img(w, h);
    std::mt19937_64 rng(seed);
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(rng() & 0xff);
    return img;
}

inline tsrkit::Tensor noise_tensor(int c, int h, int w, std::uint64_t seed, float lo = -1.0f,
                                   float hi = 1.0f) {
    tsrkit::Tensor t(c, h, w);
    std::mt19937_64 rng(seed);
    for (float& v : t.data) v = static_cast<float>(uniform(rng, lo, hi));
    return t;
}

// Integer-cornered box with positive extent inside [0, span] x [0, span].
inline tsrkit::BBox random_int_box(std::mt19937_64& rng, int span) {
    auto coord = [&](int limit) { return static_cast<int>(rng() % static_cast<std::uint64_t>(limit)); };
    const int left = coord(span - 1);
    const int top = coord(span - 1);
    const int right = left + 1 + coord(span - left);
    const int bottom = top + 1 + coord(span - top);
    return {static_cast<double>(left), static_cast<double>(top), static_cast<double>(right),
            static_cast<double>(bottom)};
}

// Up to max_count detections with boxes inside [0, span]^2, classes 0..3,
// confidences in (0, 1).
inline std::vector<tsrkit::Detection> random_detections(std::mt19937_64& rng, int max_count,
                                                        int span) {
    const int n = static_cast<int>(rng() % static_cast<std::uint64_t>(max_count + 1));
    std::vector<tsrkit::Detection> dets;
    dets.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        tsrkit::Detection d;
        d.box = random_int_box(rng, span);
        d.class_id = static_cast<int>(rng() % 4);
        d.confidence = uniform(rng, 0.05, 0.99);
        dets.push_back(d);
    }
    return dets;
}

// ------------------------------------------------------------ toy model

// Smallest end-to-end detector with a fully predictable output: the first
// convolution's batch-norm scale is zero, so its output is zero for every
// image; five 2/2 pools reduce 32x32 to a single cell; a bias-only 1x1 head
// then fixes the region inputs. With objectness_bias = 3 and class_logit = 2
// (4 classes) every image yields exactly one box (8, 8, 24, 24) of class 0.
struct ToyModelFiles {
    fs::path cfg;
    fs::path weights;
};

inline std::string toy_model_cfg_text(int classes) {
    std::string cfg = "[net]\nwidth=32\nheight=32\nchannels=3\n\n"
                      "[convolutional]\nfilters=8\nsize=3\nstride=1\npad=1\n"
                      "batch_normalize=1\nactivation=leaky\n\n";
    for (int i = 0; i < 5; ++i) cfg += "[maxpool]\nsize=2\nstride=2\n\n";
    cfg += "[convolutional]\nfilters=" + std::to_string(5 + classes) +
           "\nsize=1\nstride=1\npad=0\nactivation=linear\n\n"
           "[region]\nanchors = 0.5,0.5\nclasses=" +
           std::to_string(classes) + "\n";
    return cfg;
}

inline ToyModelFiles write_toy_model(const fs::path& dir, int classes, float objectness_bias,
                                     float class_logit) {
    ToyModelFiles files{dir / "toy.cfg", dir / "toy.weights"};
    tsrkit::write_file_text(files.cfg, toy_model_cfg_text(classes));

    tsrkit::WeightStore store;
    tsrkit::ConvParams conv1;
    conv1.out_channels = 8;
    conv1.in_channels = 3;
    conv1.kernel = 3;
    conv1.has_batch_norm = true;
    conv1.weights.assign(8 * 3 * 3 * 3, 0.25f); // folded away by gamma = 0
    conv1.bn_beta.assign(8, 0.0f);
    conv1.bn_gamma.assign(8, 0.0f);
    conv1.bn_mean.assign(8, 0.0f);
    conv1.bn_variance.assign(8, 1.0f);
    store.conv.push_back(conv1);

    tsrkit::ConvParams head;
    head.out_channels = 5 + classes;
    head.in_channels = 8;
    head.kernel = 1;
    head.weights.assign(static_cast<std::size_t>(5 + classes) * 8, 0.0f);
    head.biases.assign(5 + classes, 0.0f);
    head.biases[4] = objectness_bias;
    if (classes > 0) head.biases[5] = class_logit;
    store.conv.push_back(head);

    tsrkit::write_file_bytes(files.weights, tsrkit::serialize_weights(store));
    return files;
}

// --------------------------------------------------- seeded tiny network

// Three processing blocks (3x3 batch-norm conv, 2/2 pool, 1x1 head) ahead
// of a two-anchor region over an 8x8 grid; every parameter is drawn from a
// fixed-seed generator so the network is identical everywhere.
inline std::string tiny_seeded_cfg_text() {
    return "[net]\nwidth=32\nheight=32\nchannels=3\n\n"
           "[convolutional]\nfilters=6\nsize=3\nstride=2\npad=1\n"
           "batch_normalize=1\nactivation=leaky\n\n"
           "[maxpool]\nsize=2\nstride=2\n\n"
           "[convolutional]\nfilters=18\nsize=1\nstride=1\npad=0\nactivation=linear\n\n"
           "[region]\nanchors = 1.0,1.5, 2.0,1.0\nclasses=4\n";
}

inline tsrkit::WeightStore tiny_seeded_store(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto draw = [&](std::size_t n, float lo, float hi) {
        std::vector<float> v(n);
        for (float& x : v) x = static_cast<float>(uniform(rng, lo, hi));
        return v;
    };

    tsrkit::WeightStore store;
    tsrkit::ConvParams conv1;
    conv1.out_channels = 6;
    conv1.in_channels = 3;
    conv1.kernel = 3;
    conv1.has_batch_norm = true;
    conv1.weights = draw(6 * 3 * 3 * 3, -0.5f, 0.5f);
    conv1.bn_beta = draw(6, -0.2f, 0.2f);
    conv1.bn_gamma = draw(6, 0.5f, 1.5f);
    conv1.bn_mean = draw(6, -0.2f, 0.2f);
    conv1.bn_variance = draw(6, 0.5f, 1.5f);
    store.conv.push_back(conv1);

    tsrkit::ConvParams head;
    head.out_channels = 18;
    head.in_channels = 6;
    head.kernel = 1;
    head.weights = draw(18 * 6, -0.5f, 0.5f);
    head.biases = draw(18, -0.5f, 0.5f);
    store.conv.push_back(head);
    return store;
}

// ------------------------------------------------------------ CLI runner

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string shell_quote(const std::string& s) {
    std::string quoted = "'";
    for (char c : s) {
        if (c == '\'') quoted += "'\\''";
        else quoted += c;
    }
    return quoted + "'";
}

// Runs the installed tsr-kit binary with the given argument string; stdout
// and stderr are captured through temporary files. env_prefix, when given,
// is prepended verbatim (e.g. "TSRKIT_LOG=info").
inline CliResult run_cli(const std::string& args, const std::string& stdin_data = "",
                         const std::string& env_prefix = "") {
    TempDir io;
    const fs::path out_path = io.file("out");
    const fs::path err_path = io.file("err");
    const fs::path in_path = io.file("in");
    tsrkit::write_file_text(in_path, stdin_data);

    const std::string cmd = (env_prefix.empty() ? "" : env_prefix + " ") +
                            std::string(TSRKIT_CLI_PATH) + " " + args + " < " +
                            shell_quote(in_path.string()) + " > " +
                            shell_quote(out_path.string()) + " 2> " +
                            shell_quote(err_path.string());
    const int status = std::system(cmd.c_str());

    CliResult result;
    if (status >= 0 && WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    result.out = tsrkit::read_file_text(out_path);
    result.err = tsrkit::read_file_text(err_path);
    return result;
}

inline fs::path config_dir() { return fs::path(TSRKIT_CONFIG_DIR); }

} // namespace fixtures

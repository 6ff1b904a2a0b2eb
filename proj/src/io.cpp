#include "treg/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace treg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void append_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_f32(std::string& buf, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    append_u32(buf, bits);
}

class Reader {
public:
    Reader(const std::string& buf, std::string name) : buf_(buf), name_(std::move(name)) {}

    std::uint32_t u32(const std::string& what) {
        if (pos_ + 4 > buf_.size()) throw DataError(name_ + ": truncated reading " + what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    float f32(const std::string& what) {
        const std::uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }

    bool at_end() const { return pos_ == buf_.size(); }

private:
    const std::string& buf_;
    std::string name_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_pgm(const TactileImage& img, const fs::path& path) {
    img.validate();
    std::string buf = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                      "\n255\n";
    buf.reserve(buf.size() + img.pixels.size());
    for (double p : img.pixels) {
        buf.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * p))));
    }
    write_file(path, buf);
}

TactileImage load_pgm(const fs::path& path) {
    const std::string buf = read_file(path);
    std::size_t pos = 0;

    auto skip_space = [&] {
        while (pos < buf.size()) {
            if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
                ++pos;
            } else if (buf[pos] == '#') {
                while (pos < buf.size() && buf[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    };
    auto next_int = [&](const char* what) {
        skip_space();
        long v = 0;
        bool any = false;
        while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) {
            v = v * 10 + (buf[pos] - '0');
            ++pos;
            any = true;
        }
        if (!any) throw DataError(path.string() + ": missing " + what);
        return v;
    };

    if (buf.size() < 2 || buf[0] != 'P' || buf[1] != '5') {
        throw DataError(path.string() + ": not a binary PGM (P5)");
    }
    pos = 2;
    const long w = next_int("width");
    const long h = next_int("height");
    const long maxval = next_int("maxval");
    if (w < 1 || h < 1) throw DataError(path.string() + ": bad dimensions");
    if (maxval != 255) throw DataError(path.string() + ": expected maxval 255");
    ++pos;  // single whitespace byte after maxval
    if (pos + static_cast<std::size_t>(w) * h > buf.size()) {
        throw DataError(path.string() + ": truncated pixel data");
    }

    TactileImage img = TactileImage::zeros(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        img.pixels[i] = static_cast<unsigned char>(buf[pos + i]) / 255.0;
    }
    return img;
}

namespace {

std::string record_stem(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "rec_%06zu", index);
    return buf;
}

}  // namespace

void save_dataset(const std::vector<GraspRecord>& records, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory: " + dir.string());

    json manifest;
    manifest["records"] = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const GraspRecord& r = records[i];
        const std::string left = record_stem(i) + "_l.pgm";
        const std::string right = record_stem(i) + "_r.pgm";
        save_pgm(r.pair.left, dir / left);
        save_pgm(r.pair.right, dir / right);
        manifest["records"].push_back({
            {"left", left},
            {"right", right},
            {"score", r.score.value},
            {"object_id", r.object_id},
            {"pose", {{"dx", r.pose.offset.dx}, {"dy", r.pose.offset.dy}}},
            {"seed", r.seed},
        });
    }
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<GraspRecord> load_dataset(const fs::path& dir) {
    const fs::path manifest_path = dir / "manifest.json";
    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
        throw DataError(manifest_path.string() + ": malformed manifest: " + e.what());
    }
    if (!manifest.contains("records") || !manifest["records"].is_array()) {
        throw DataError(manifest_path.string() + ": malformed manifest: missing records array");
    }

    std::vector<GraspRecord> records;
    for (const json& item : manifest["records"]) {
        GraspRecord r;
        try {
            r.pair.left = load_pgm(dir / item.at("left").get<std::string>());
            r.pair.right = load_pgm(dir / item.at("right").get<std::string>());
            r.score.value = item.at("score").get<double>();
            r.object_id = item.at("object_id").get<std::string>();
            r.pose.offset.dx = item.at("pose").at("dx").get<double>();
            r.pose.offset.dy = item.at("pose").at("dy").get<double>();
            r.seed = item.at("seed").get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw DataError(manifest_path.string() + ": malformed record: " + e.what());
        }
        if (r.pair.left.width != r.pair.right.width ||
            r.pair.left.height != r.pair.right.height) {
            throw DataError(manifest_path.string() + ": PGM dimension mismatch in record " +
                            std::to_string(records.size()));
        }
        r.score.validate();
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

constexpr std::uint32_t kModelVersion = 1;

struct NamedArray {
    std::vector<std::uint32_t> dims;
    std::vector<double> values;
};

std::vector<NamedArray> params_to_arrays(const QualityModelParams& p) {
    std::vector<NamedArray> arrays;
    for (const ConvLayer& l : p.conv) {
        arrays.push_back({{static_cast<std::uint32_t>(l.out_ch),
                           static_cast<std::uint32_t>(l.in_ch), 3u, 3u},
                          l.kernel});
        arrays.push_back({{static_cast<std::uint32_t>(l.out_ch)}, l.bias});
    }
    arrays.push_back({{static_cast<std::uint32_t>(p.dense_w.size())}, p.dense_w});
    arrays.push_back({{1u}, {p.dense_b}});
    return arrays;
}

}  // namespace

void save_model(const QualityModelParams& params, const fs::path& path) {
    params.validate();
    const std::vector<NamedArray> arrays = params_to_arrays(params);

    std::string buf = "TRGM";
    append_u32(buf, kModelVersion);
    append_u32(buf, static_cast<std::uint32_t>(arrays.size()));
    for (const NamedArray& a : arrays) {
        append_u32(buf, static_cast<std::uint32_t>(a.dims.size()));
        for (std::uint32_t d : a.dims) append_u32(buf, d);
        for (double v : a.values) append_f32(buf, static_cast<float>(v));
    }
    write_file(path, buf);
}

QualityModelParams load_model(const fs::path& path) {
    const std::string buf = read_file(path);
    if (buf.size() < 4 || buf.compare(0, 4, "TRGM") != 0) {
        throw DataError(path.string() + ": bad magic (expected TRGM)");
    }
    Reader rd(buf, path.string());
    rd.u32("magic");
    const std::uint32_t version = rd.u32("version");
    if (version != kModelVersion) {
        throw DataError(path.string() + ": unsupported version " + std::to_string(version));
    }
    const std::uint32_t count = rd.u32("array count");
    if (count < 4 || count % 2 != 0) {
        throw DataError(path.string() + ": unexpected array count " + std::to_string(count));
    }

    std::vector<NamedArray> arrays;
    for (std::uint32_t a = 0; a < count; ++a) {
        const std::string where = "array " + std::to_string(a);
        NamedArray arr;
        const std::uint32_t rank = rd.u32(where + " rank");
        std::size_t total = 1;
        for (std::uint32_t d = 0; d < rank; ++d) {
            arr.dims.push_back(rd.u32(where + " dims"));
            total *= arr.dims.back();
        }
        if (total > (1u << 28)) throw DataError(path.string() + ": oversized " + where);
        arr.values.reserve(total);
        for (std::size_t i = 0; i < total; ++i) {
            arr.values.push_back(rd.f32(where + " data"));
        }
        arrays.push_back(std::move(arr));
    }
    if (!rd.at_end()) throw DataError(path.string() + ": trailing bytes after last array");

    QualityModelParams p;
    const std::size_t n_conv = (arrays.size() - 2) / 2;
    int prev = 1;
    for (std::size_t l = 0; l < n_conv; ++l) {
        const NamedArray& k = arrays[2 * l];
        const NamedArray& b = arrays[2 * l + 1];
        if (k.dims.size() != 4 || k.dims[2] != 3 || k.dims[3] != 3 ||
            k.dims[1] != static_cast<std::uint32_t>(prev) || b.dims.size() != 1 ||
            b.dims[0] != k.dims[0]) {
            throw DataError(path.string() + ": malformed conv layer " + std::to_string(l));
        }
        ConvLayer layer;
        layer.out_ch = static_cast<int>(k.dims[0]);
        layer.in_ch = prev;
        layer.kernel = k.values;
        layer.bias = b.values;
        prev = layer.out_ch;
        p.conv.push_back(std::move(layer));
    }
    const NamedArray& w = arrays[arrays.size() - 2];
    const NamedArray& b = arrays.back();
    if (w.dims.size() != 1 || w.dims[0] != static_cast<std::uint32_t>(2 * prev) ||
        b.dims.size() != 1 || b.dims[0] != 1) {
        throw DataError(path.string() + ": malformed dense arrays");
    }
    p.dense_w = w.values;
    p.dense_b = b.values[0];
    p.validate();
    return p;
}

namespace {

PrimitiveShape parse_shape(const std::string& s, const fs::path& path) {
    if (s == "disk") return PrimitiveShape::disk;
    if (s == "rectangle") return PrimitiveShape::rectangle;
    if (s == "ridge-array" || s == "ridge_array") return PrimitiveShape::ridge_array;
    throw DataError(path.string() + ": unknown primitive shape '" + s + "'");
}

}  // namespace

PipelineConfig load_config(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": malformed config: " + e.what());
    }

    PipelineConfig cfg;
    try {
        if (j.contains("geometry")) {
            const json& g = j["geometry"];
            cfg.world.geom.res_x = g.value("res_x", cfg.world.geom.res_x);
            cfg.world.geom.res_y = g.value("res_y", cfg.world.geom.res_y);
            cfg.world.geom.width_x = g.value("width_x", cfg.world.geom.width_x);
            cfg.world.geom.width_y = g.value("width_y", cfg.world.geom.width_y);
        }
        if (j.contains("shake")) {
            const json& s = j["shake"];
            cfg.world.shake.grip_force = s.value("grip_force", cfg.world.shake.grip_force);
            cfg.world.shake.amplitude = s.value("amplitude", cfg.world.shake.amplitude);
            cfg.world.shake.frequency = s.value("frequency", cfg.world.shake.frequency);
            cfg.world.shake.duration = s.value("duration", cfg.world.shake.duration);
            cfg.world.shake.gravity = s.value("gravity", cfg.world.shake.gravity);
        }
        if (j.contains("world")) {
            const json& w = j["world"];
            cfg.world.max_depth = w.value("max_depth", cfg.world.max_depth);
            cfg.world.render_noise = w.value("render_noise", cfg.world.render_noise);
            cfg.world.noise_scale = w.value("noise_scale", cfg.world.noise_scale);
            cfg.world.mirror_width = w.value("mirror_width", cfg.world.mirror_width);
        }
        if (j.contains("model")) {
            const json& m = j["model"];
            cfg.model.input_size = m.value("input_size", cfg.model.input_size);
            if (m.contains("conv_channels")) {
                cfg.model.conv_channels = m["conv_channels"].get<std::vector<int>>();
            }
            cfg.model.learning_rate = m.value("learning_rate", cfg.model.learning_rate);
            cfg.model.beta1 = m.value("beta1", cfg.model.beta1);
            cfg.model.beta2 = m.value("beta2", cfg.model.beta2);
            cfg.model.epsilon = m.value("epsilon", cfg.model.epsilon);
            cfg.model.epochs = m.value("epochs", cfg.model.epochs);
            cfg.model.batch_size = m.value("batch_size", cfg.model.batch_size);
            cfg.model.init_seed = m.value("init_seed", cfg.model.init_seed);
        }
        if (j.contains("grid")) {
            const json& g = j["grid"];
            cfg.grid.step = g.value("step", cfg.grid.step);
            cfg.grid.max_offset = g.value("max_offset", cfg.grid.max_offset);
        }
        for (const json& jo : j.value("objects", json::array())) {
            SyntheticObject obj;
            obj.id = jo.at("id").get<std::string>();
            obj.mass = jo.at("mass").get<double>();
            obj.friction = jo.at("friction").get<double>();
            for (const json& jp : jo.at("primitives")) {
                Primitive p;
                p.shape = parse_shape(jp.at("shape").get<std::string>(), path);
                const auto center = jp.value("center", std::vector<double>{0.0, 0.0});
                if (center.size() != 2) {
                    throw DataError(path.string() + ": primitive center must have 2 entries");
                }
                p.cx = center[0];
                p.cy = center[1];
                const auto size = jp.at("size").get<std::vector<double>>();
                if (size.empty() || size.size() > 2) {
                    throw DataError(path.string() + ": primitive size must have 1 or 2 entries");
                }
                p.sx = size[0];
                p.sy = size.size() == 2 ? size[1] : size[0];
                p.height = jp.at("height").get<double>();
                p.pitch = jp.value("pitch", p.pitch);
                obj.primitives.push_back(p);
            }
            cfg.objects.push_back(std::move(obj));
        }
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": malformed config: " + e.what());
    }

    try {
        cfg.world.geom.validate();
        cfg.world.shake.validate();
        cfg.model.validate();
        cfg.grid.validate();
        for (const SyntheticObject& obj : cfg.objects) obj.validate(cfg.world.max_depth);
    } catch (const std::invalid_argument& e) {
        throw DataError(path.string() + ": invalid config: " + e.what());
    }
    return cfg;
}

void save_loss_history_csv(const std::vector<double>& epoch_loss, const fs::path& path) {
    std::string buf = "epoch,mean_loss\n";
    char line[64];
    for (std::size_t i = 0; i < epoch_loss.size(); ++i) {
        std::snprintf(line, sizeof line, "%zu,%.17g\n", i, epoch_loss[i]);
        buf += line;
    }
    write_file(path, buf);
}

}  // namespace treg

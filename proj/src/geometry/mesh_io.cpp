#include "mmgen/geometry/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mmgen/core/errors.hpp"

namespace mmgen {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

class MaterialSlots {
public:
    MaterialSlots(TriangleMesh& mesh, const MaterialTable& table) : mesh_(mesh), table_(table) {}

    std::uint32_t slot(const std::string& name) {
        auto it = slots_.find(name);
        if (it != slots_.end()) return it->second;
        const auto& material = table_.at(name);
        const auto s = static_cast<std::uint32_t>(mesh_.materials.size());
        mesh_.materials.push_back(material);
        slots_.emplace(name, s);
        return s;
    }

private:
    TriangleMesh& mesh_;
    const MaterialTable& table_;
    std::unordered_map<std::string, std::uint32_t> slots_;
};

double parse_double(std::string_view token, const std::string& where) {
    double value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw IoError(where + ": invalid number '" + std::string(token) + "'");
    }
    return value;
}

// OBJ face token "i", "i/t", "i//n", "i/t/n"; negative indices are relative.
std::uint32_t parse_obj_index(std::string_view token, std::size_t vertex_count, const std::string& where) {
    const auto slash = token.find('/');
    const auto head = token.substr(0, slash);
    long long idx = 0;
    auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
    if (ec != std::errc() || ptr != head.data() + head.size() || idx == 0) {
        throw IoError(where + ": invalid face index '" + std::string(token) + "'");
    }
    const long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(vertex_count) + idx;
    if (resolved < 0) {
        throw ConfigError(where + ": face references vertex " + std::to_string(idx) + " of " +
                          std::to_string(vertex_count));
    }
    // Forward references are legal in OBJ; bounds are checked after parsing.
    return static_cast<std::uint32_t>(resolved);
}

TriangleMesh load_obj(const std::filesystem::path& path, const MaterialTable& table,
                      const std::string& default_material) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    TriangleMesh mesh;
    MaterialSlots slots(mesh, table);
    std::uint32_t current = slots.slot(default_material);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string_view> tokens;
    std::vector<std::size_t> face_lines;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        tokens.clear();
        std::string_view rest(line);
        while (!rest.empty()) {
            const auto start = rest.find_first_not_of(" \t");
            if (start == std::string_view::npos) break;
            rest.remove_prefix(start);
            const auto end = rest.find_first_of(" \t");
            tokens.push_back(rest.substr(0, end));
            if (end == std::string_view::npos) break;
            rest.remove_prefix(end);
        }
        if (tokens.empty() || tokens[0].front() == '#') continue;
        const std::string where = path.filename().string() + ":" + std::to_string(line_no);
        if (tokens[0] == "v") {
            if (tokens.size() < 4) throw IoError(where + ": vertex needs 3 coordinates");
            mesh.vertices.emplace_back(parse_double(tokens[1], where), parse_double(tokens[2], where),
                                       parse_double(tokens[3], where));
        } else if (tokens[0] == "f") {
            if (tokens.size() < 4) throw IoError(where + ": face needs at least 3 vertices");
            std::vector<std::uint32_t> poly;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                poly.push_back(parse_obj_index(tokens[i], mesh.vertices.size(), where));
            }
            for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
                mesh.faces.push_back({poly[0], poly[i], poly[i + 1]});
                mesh.face_material.push_back(current);
                face_lines.push_back(line_no);
            }
        } else if (tokens[0] == "usemtl") {
            if (tokens.size() < 2) throw IoError(where + ": usemtl needs a name");
            try {
                current = slots.slot(std::string(tokens[1]));
            } catch (const ConfigError& e) {
                throw ConfigError(where + ": " + e.what());
            }
        }
        // vt, vn, o, g, s, mtllib: not needed for reflection modelling
    }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        for (auto idx : mesh.faces[f]) {
            if (idx >= mesh.vertices.size()) {
                throw ConfigError(path.filename().string() + ":" + std::to_string(face_lines[f]) +
                                  ": face references vertex " + std::to_string(idx + 1) + " of " +
                                  std::to_string(mesh.vertices.size()));
            }
        }
    }
    return mesh;
}

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

PlyType ply_type(const std::string& name, const std::string& where) {
    static const std::unordered_map<std::string, PlyType> types = {
        {"char", PlyType::i8},    {"int8", PlyType::i8},     {"uchar", PlyType::u8},   {"uint8", PlyType::u8},
        {"short", PlyType::i16},  {"int16", PlyType::i16},   {"ushort", PlyType::u16}, {"uint16", PlyType::u16},
        {"int", PlyType::i32},    {"int32", PlyType::i32},   {"uint", PlyType::u32},   {"uint32", PlyType::u32},
        {"float", PlyType::f32},  {"float32", PlyType::f32}, {"double", PlyType::f64}, {"float64", PlyType::f64},
    };
    auto it = types.find(name);
    if (it == types.end()) throw IoError(where + ": unknown PLY type '" + name + "'");
    return it->second;
}

std::size_t ply_size(PlyType t) {
    switch (t) {
        case PlyType::i8:
        case PlyType::u8: return 1;
        case PlyType::i16:
        case PlyType::u16: return 2;
        case PlyType::i32:
        case PlyType::u32:
        case PlyType::f32: return 4;
        case PlyType::f64: return 8;
    }
    return 0;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::f32;
    bool is_list = false;
    PlyType count_type = PlyType::u8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

class PlyReader {
public:
    PlyReader(std::istream& in, bool binary, std::string file)
        : in_(in), binary_(binary), file_(std::move(file)) {}

    double read(PlyType type) {
        if (!binary_) return read_ascii();
        unsigned char buf[8];
        const auto n = ply_size(type);
        const auto offset = static_cast<long long>(in_.tellg());
        if (!in_.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n))) {
            throw IoError(file_ + ": truncated binary PLY at byte offset " + std::to_string(offset));
        }
        if constexpr (std::endian::native != std::endian::little) std::reverse(buf, buf + n);
        switch (type) {
            case PlyType::i8: return static_cast<std::int8_t>(buf[0]);
            case PlyType::u8: return buf[0];
            case PlyType::i16: return load<std::int16_t>(buf);
            case PlyType::u16: return load<std::uint16_t>(buf);
            case PlyType::i32: return load<std::int32_t>(buf);
            case PlyType::u32: return load<std::uint32_t>(buf);
            case PlyType::f32: return load<float>(buf);
            case PlyType::f64: return load<double>(buf);
        }
        return 0.0;
    }

    [[nodiscard]] std::string where() const {
        if (binary_) return file_ + ": byte offset " + std::to_string(static_cast<long long>(in_.tellg()));
        return file_ + ":" + std::to_string(line_no_);
    }

    void set_line(std::size_t line_no) { line_no_ = line_no; }

private:
    template <typename T>
    static double load(const unsigned char* buf) {
        T v;
        std::memcpy(&v, buf, sizeof(T));
        return static_cast<double>(v);
    }

    double read_ascii() {
        while (tokens_.empty()) {
            std::string line;
            if (!std::getline(in_, line)) throw IoError(file_ + ": unexpected end of ASCII PLY body");
            ++line_no_;
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) tokens_.push_back(tok);
            std::reverse(tokens_.begin(), tokens_.end());
        }
        const std::string tok = tokens_.back();
        tokens_.pop_back();
        return parse_double(tok, file_ + ":" + std::to_string(line_no_));
    }

    std::istream& in_;
    bool binary_;
    std::string file_;
    std::size_t line_no_ = 0;
    std::vector<std::string> tokens_;
};

TriangleMesh load_ply(const std::filesystem::path& path, const MaterialTable& table,
                      const std::string& default_material) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string file = path.filename().string();
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) throw IoError(file + ": unexpected end of PLY header");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    next_line();
    if (line != "ply") throw IoError(file + ":1: missing 'ply' magic");
    bool binary = false;
    bool have_format = false;
    std::vector<PlyElement> elements;
    for (;;) {
        next_line();
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        const std::string where = file + ":" + std::to_string(line_no);
        if (kw == "end_header") break;
        if (kw == "comment" || kw == "obj_info" || kw.empty()) continue;
        if (kw == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii") {
                binary = false;
            } else if (fmt == "binary_little_endian") {
                binary = true;
            } else {
                throw IoError(where + ": unsupported PLY format '" + fmt + "'");
            }
            have_format = true;
        } else if (kw == "element") {
            PlyElement e;
            long long count = -1;
            ls >> e.name >> count;
            if (!ls || count < 0) throw IoError(where + ": malformed element line");
            e.count = static_cast<std::size_t>(count);
            elements.push_back(std::move(e));
        } else if (kw == "property") {
            if (elements.empty()) throw IoError(where + ": property before element");
            PlyProperty p;
            std::string t;
            ls >> t;
            if (t == "list") {
                std::string ct, it;
                ls >> ct >> it >> p.name;
                p.is_list = true;
                p.count_type = ply_type(ct, where);
                p.type = ply_type(it, where);
            } else {
                p.type = ply_type(t, where);
                ls >> p.name;
            }
            if (p.name.empty()) throw IoError(where + ": property without a name");
            elements.back().properties.push_back(p);
        } else {
            throw IoError(where + ": unexpected header keyword '" + kw + "'");
        }
    }
    if (!have_format) throw IoError(file + ": PLY header lacks a format line");

    TriangleMesh mesh;
    MaterialSlots slots(mesh, table);
    const auto names = table.names();
    const std::uint32_t fallback = slots.slot(default_material);
    PlyReader reader(in, binary, file);
    reader.set_line(line_no);
    for (const auto& e : elements) {
        for (std::size_t i = 0; i < e.count; ++i) {
            Vec3 v = Vec3::Zero();
            std::vector<std::uint32_t> poly;
            std::uint32_t material = fallback;
            for (const auto& p : e.properties) {
                if (p.is_list) {
                    const double n = reader.read(p.count_type);
                    if (n < 0 || n != std::floor(n)) throw IoError(reader.where() + ": bad list length");
                    for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
                        const double idx = reader.read(p.type);
                        if (e.name == "face" && (p.name == "vertex_indices" || p.name == "vertex_index")) {
                            if (idx < 0 || idx != std::floor(idx)) {
                                throw IoError(reader.where() + ": bad vertex index");
                            }
                            poly.push_back(static_cast<std::uint32_t>(idx));
                        }
                    }
                    continue;
                }
                const double value = reader.read(p.type);
                if (e.name == "vertex") {
                    if (p.name == "x") v.x() = value;
                    if (p.name == "y") v.y() = value;
                    if (p.name == "z") v.z() = value;
                } else if (e.name == "face" && p.name == "material") {
                    if (value < 0 || value >= static_cast<double>(names.size())) {
                        throw ConfigError(reader.where() + ": material index out of range");
                    }
                    material = slots.slot(names[static_cast<std::size_t>(value)]);
                }
            }
            if (e.name == "vertex") {
                mesh.vertices.push_back(v);
            } else if (e.name == "face") {
                if (poly.size() < 3) throw IoError(reader.where() + ": face with fewer than 3 vertices");
                for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
                    mesh.faces.push_back({poly[0], poly[k], poly[k + 1]});
                    mesh.face_material.push_back(material);
                }
            }
        }
    }
    return mesh;
}

}  // namespace

TriangleMesh load_mesh(const std::filesystem::path& path, const MaterialTable& table,
                       const std::string& default_material) {
    const auto ext = lower_ext(path);
    TriangleMesh mesh;
    if (ext == ".obj") {
        mesh = load_obj(path, table, default_material);
    } else if (ext == ".ply") {
        mesh = load_ply(path, table, default_material);
    } else {
        throw IoError(path.string() + ": unsupported mesh extension '" + ext + "'");
    }
    mesh.validate();
    drop_degenerate_faces(mesh);
    return mesh;
}

void save_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out.precision(17);
    for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    std::int64_t current = -1;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const std::uint32_t slot = mesh.face_material.empty() ? 0 : mesh.face_material[f];
        if (static_cast<std::int64_t>(slot) != current && slot < mesh.materials.size()) {
            out << "usemtl " << mesh.materials[slot].name << '\n';
            current = slot;
        }
        const auto& face = mesh.faces[f];
        out << "f " << face[0] + 1 << ' ' << face[1] + 1 << ' ' << face[2] + 1 << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mmgen

#include "embtopo/npy.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <string_view>

#include "embtopo/error.hpp"

namespace embtopo {

static_assert(std::endian::native == std::endian::little, "NPY payloads are decoded as native little-endian");

namespace {

constexpr unsigned char kMagic[] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kPreambleBytes = 10;  // magic + version + header length

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedHeader, what); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Finds the value text following 'key': in a Python dict literal. The value ends at the
// next top-level comma or the closing brace.
std::string_view dict_value(std::string_view dict, std::string_view key) {
    const std::string quoted_single = "'" + std::string(key) + "'";
    const std::string quoted_double = "\"" + std::string(key) + "\"";
    auto pos = dict.find(quoted_single);
    std::size_t key_len = quoted_single.size();
    if (pos == std::string_view::npos) {
        pos = dict.find(quoted_double);
        key_len = quoted_double.size();
    }
    if (pos == std::string_view::npos) malformed("header dict lacks key '" + std::string(key) + "'");
    auto rest = dict.substr(pos + key_len);
    rest = trim(rest);
    if (rest.empty() || rest.front() != ':') malformed("expected ':' after key '" + std::string(key) + "'");
    rest.remove_prefix(1);
    int depth = 0;
    std::size_t end = 0;
    for (; end < rest.size(); ++end) {
        const char c = rest[end];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (depth == 0 && (c == ',' || c == '}')) break;
    }
    return trim(rest.substr(0, end));
}

std::vector<std::size_t> parse_shape(std::string_view text) {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')') malformed("shape is not a tuple");
    text = text.substr(1, text.size() - 2);
    std::vector<std::size_t> shape;
    while (!trim(text).empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (item.empty()) malformed("empty shape entry");
        std::size_t value = 0;
        for (char c : item) {
            if (c == 'L') break;  // legacy Python 2 long suffix
            if (!std::isdigit(static_cast<unsigned char>(c))) malformed("non-integer shape entry");
            value = value * 10 + static_cast<std::size_t>(c - '0');
        }
        shape.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return shape;
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingTensorFile, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::size_t element_width(ElementKind kind) noexcept { return kind == ElementKind::Float32 ? 4 : 8; }

std::size_t TensorHeader::element_count() const noexcept {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t TensorHeader::payload_bytes() const noexcept { return element_count() * element_width(element_kind); }

TensorHeader parse_npy_header(std::span<const unsigned char> bytes, std::size_t* payload_offset) {
    if (bytes.size() < kPreambleBytes || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin()))
        malformed("missing NPY magic");
    if (bytes[6] != 1 || bytes[7] != 0)
        malformed("unsupported NPY version " + std::to_string(bytes[6]) + "." + std::to_string(bytes[7]));
    const std::size_t header_len = bytes[8] | (static_cast<std::size_t>(bytes[9]) << 8);
    if (bytes.size() < kPreambleBytes + header_len) malformed("header length exceeds file size");

    const std::string_view dict(reinterpret_cast<const char*>(bytes.data()) + kPreambleBytes, header_len);
    const auto body = trim(dict);
    if (body.empty() || body.front() != '{' || body.back() != '}') malformed("header is not a dict literal");

    TensorHeader header;
    const auto descr = dict_value(body, "descr");
    if (descr == "'<f4'" || descr == "\"<f4\"") {
        header.element_kind = ElementKind::Float32;
    } else if (descr == "'<f8'" || descr == "\"<f8\"") {
        header.element_kind = ElementKind::Float64;
    } else {
        throw Error(ErrorKind::UnsupportedDtype, "descr " + std::string(descr));
    }

    const auto fortran = dict_value(body, "fortran_order");
    if (fortran == "True") throw Error(ErrorKind::UnsupportedDtype, "fortran_order=True is not supported");
    if (fortran != "False") malformed("fortran_order must be a boolean");

    header.shape = parse_shape(dict_value(body, "shape"));
    if (header.shape.size() < 2 || header.shape.size() > 4)
        malformed("tensor rank " + std::to_string(header.shape.size()) + " not in {2,3,4}");
    if (std::find(header.shape.begin(), header.shape.end(), 0u) != header.shape.end())
        malformed("shape entries must be positive");

    if (payload_offset) *payload_offset = kPreambleBytes + header_len;
    return header;
}

TensorHeader read_npy_header(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingTensorFile, "cannot open " + path.string());
    std::vector<unsigned char> preamble(kPreambleBytes);
    in.read(reinterpret_cast<char*>(preamble.data()), kPreambleBytes);
    if (in.gcount() != static_cast<std::streamsize>(kPreambleBytes)) malformed("file shorter than NPY preamble");
    const std::size_t header_len = preamble[8] | (static_cast<std::size_t>(preamble[9]) << 8);
    preamble.resize(kPreambleBytes + header_len);
    in.read(reinterpret_cast<char*>(preamble.data() + kPreambleBytes), static_cast<std::streamsize>(header_len));
    if (in.gcount() != static_cast<std::streamsize>(header_len)) malformed("truncated header");
    return parse_npy_header(preamble);
}

Tensor decode_npy(std::span<const unsigned char> bytes) {
    std::size_t offset = 0;
    Tensor tensor;
    tensor.header = parse_npy_header(bytes, &offset);
    const std::size_t expected = tensor.header.payload_bytes();
    if (bytes.size() - offset < expected)
        throw Error(ErrorKind::TruncatedPayload, "expected " + std::to_string(expected) + " payload bytes, found " +
                                                     std::to_string(bytes.size() - offset));

    const std::size_t count = tensor.header.element_count();
    tensor.values.resize(count);
    const unsigned char* payload = bytes.data() + offset;
    if (tensor.header.element_kind == ElementKind::Float32) {
        for (std::size_t i = 0; i < count; ++i) {
            float f;
            std::memcpy(&f, payload + 4 * i, 4);
            tensor.values[i] = f;
        }
    } else {
        std::memcpy(tensor.values.data(), payload, 8 * count);
    }
    return tensor;
}

Tensor read_tensor(const std::filesystem::path& path) { return decode_npy(slurp(path)); }

std::vector<unsigned char> encode_npy(std::span<const std::size_t> shape, std::span<const double> values,
                                      ElementKind kind) {
    std::string shape_text = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        shape_text += std::to_string(shape[i]);
        if (shape.size() == 1 || i + 1 < shape.size()) shape_text += shape.size() == 1 ? "," : ", ";
    }
    shape_text += ")";
    std::string dict = std::string("{'descr': '") + (kind == ElementKind::Float32 ? "<f4" : "<f8") +
                       "', 'fortran_order': False, 'shape': " + shape_text + ", }";
    // Pad with spaces so that preamble + dict + '\n' is a multiple of 64 bytes.
    const std::size_t unpadded = kPreambleBytes + dict.size() + 1;
    dict.append((64 - unpadded % 64) % 64, ' ');
    dict.push_back('\n');

    const std::size_t count = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
    if (count != values.size())
        throw Error(ErrorKind::InvalidArgument, "value count does not match shape product");

    std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
    out.push_back(1);
    out.push_back(0);
    out.push_back(static_cast<unsigned char>(dict.size() & 0xff));
    out.push_back(static_cast<unsigned char>(dict.size() >> 8));
    out.insert(out.end(), dict.begin(), dict.end());
    const std::size_t payload_start = out.size();
    out.resize(payload_start + count * element_width(kind));
    if (kind == ElementKind::Float32) {
        for (std::size_t i = 0; i < count; ++i) {
            const float f = static_cast<float>(values[i]);
            std::memcpy(out.data() + payload_start + 4 * i, &f, 4);
        }
    } else {
        std::memcpy(out.data() + payload_start, values.data(), 8 * count);
    }
    return out;
}

void write_tensor(const std::filesystem::path& path, std::span<const std::size_t> shape,
                  std::span<const double> values, ElementKind kind) {
    const auto bytes = encode_npy(shape, values, kind);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

}  // namespace embtopo

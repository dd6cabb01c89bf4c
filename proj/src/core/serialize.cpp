#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "specmult/core.hpp"

namespace specmult {

namespace {

std::uint64_t to_le(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return r;
}

void put(std::ofstream& os, double x)
{
    std::uint64_t u;
    std::memcpy(&u, &x, 8);
    u = to_le(u);
    os.write(reinterpret_cast<const char*>(&u), 8);
}

double get(std::ifstream& is)
{
    std::uint64_t u;
    is.read(reinterpret_cast<char*>(&u), 8);
    if (!is) throw IoError("operator binary truncated");
    u = to_le(u);
    double x;
    std::memcpy(&x, &u, 8);
    return x;
}

}  // namespace

void save_operator(const OperatorRep& op, const std::string& base_path)
{
    op.validate();
    std::ofstream bin(base_path + ".bin", std::ios::binary);
    if (!bin) throw IoError("cannot open " + base_path + ".bin for writing");
    for (Eigen::Index i = 0; i < op.matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
            put(bin, op.matrix(i, j).real());
            put(bin, op.matrix(i, j).imag());
        }
    nlohmann::json meta = {{"rows", op.matrix.rows()}, {"cols", op.matrix.cols()}, {"grid_label", op.grid.label}};
    std::ofstream js(base_path + ".json");
    if (!js) throw IoError("cannot open " + base_path + ".json for writing");
    js << meta.dump(2) << "\n";
}

OperatorRep load_operator(const std::string& base_path, const WeightedGrid& grid)
{
    std::ifstream js(base_path + ".json");
    if (!js) throw IoError("cannot open " + base_path + ".json");
    nlohmann::json meta;
    try {
        js >> meta;
    } catch (const std::exception& e) {
        throw IoError(std::string("malformed operator sidecar: ") + e.what());
    }
    const auto rows = meta.at("rows").get<Eigen::Index>();
    const auto cols = meta.at("cols").get<Eigen::Index>();
    if (meta.at("grid_label").get<std::string>() != grid.label) throw ShapeError("operator sidecar grid label differs");
    if (rows != cols || static_cast<std::size_t>(rows) != grid.size()) throw ShapeError("operator sidecar size differs from grid");
    std::ifstream bin(base_path + ".bin", std::ios::binary);
    if (!bin) throw IoError("cannot open " + base_path + ".bin");
    OperatorRep op;
    op.grid = grid;
    op.matrix.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = get(bin);
            const double im = get(bin);
            op.matrix(i, j) = cplx(re, im);
        }
    return op;
}

}  // namespace specmult

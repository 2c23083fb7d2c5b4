#include "fracfilt/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace ff::io {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field_csv(const std::string& path, const lattice::SampledField2D& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "i,j,z1,z2,value\n";
    const auto& g = f.grid;
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            out << i << ',' << j << ',' << format_double(g.node1(i)) << ','
                << format_double(g.node2(j)) << ',' << format_double(f.values(i, j)) << '\n';
}

namespace {
constexpr char kMagic[4] = {'F', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;
} // namespace

void write_field_bin(const std::string& path, const lattice::SampledField2D& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(kMagic, 4);
    std::uint32_t ver = kVersion;
    std::uint64_t n1 = f.grid.n1(), n2 = f.grid.n2();
    double T1 = f.grid.T1(), T2 = f.grid.T2();
    out.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
    out.write(reinterpret_cast<const char*>(&n1), sizeof(n1));
    out.write(reinterpret_cast<const char*>(&n2), sizeof(n2));
    out.write(reinterpret_cast<const char*>(&T1), sizeof(T1));
    out.write(reinterpret_cast<const char*>(&T2), sizeof(T2));
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

lattice::SampledField2D read_field_bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad field file magic: " + path);
    std::uint32_t ver = 0;
    std::uint64_t n1 = 0, n2 = 0;
    double T1 = 0, T2 = 0;
    in.read(reinterpret_cast<char*>(&ver), sizeof(ver));
    if (ver != kVersion) throw std::runtime_error("unsupported field file version");
    in.read(reinterpret_cast<char*>(&n1), sizeof(n1));
    in.read(reinterpret_cast<char*>(&n2), sizeof(n2));
    in.read(reinterpret_cast<char*>(&T1), sizeof(T1));
    in.read(reinterpret_cast<char*>(&T2), sizeof(T2));
    lattice::Grid2D g(T1, T2, n1, n2);
    Matrix v(n1, n2);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated field file: " + path);
    return {g, std::move(v)};
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "z1,z2,sigma,pi,se,n_eff\n";
    for (const auto& r : rows)
        out << format_double(r.z1) << ',' << format_double(r.z2) << ','
            << format_double(r.sigma) << ',' << format_double(r.pi) << ','
            << format_double(r.se) << ',' << format_double(r.n_eff) << '\n';
}

} // namespace ff::io

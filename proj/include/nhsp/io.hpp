// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// Binary checkpoints. One file holds one object (state bundle or flow map)
// in an explicit little-endian layout:
//
//   magic "NHSP" | u32 version (= 1) | u32 dim | u32 n | f64 L
//   | u32 space tag | u32 component count
//   | section tag ("SBND" state bundle, "LMAP" flow map) | f64 t
//   | dim*dim f64 reference matrix A (row-major)
//   | per component: n^dim complex coefficients as (re f64, im f64) pairs
//     in row-major multi-index order
//
// Components are ordered v[0..d) then the d columns of the second block
// (u_a for states, F columns for maps), each column's entries contiguous.
// Round trips are byte-exact: the coefficient payload is the in-memory
// representation, so write∘read∘write is the identity on files.

#ifndef NHSP_IO_HPP
#define NHSP_IO_HPP

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "nhsp/dynamics.hpp"
#include "nhsp/errors.hpp"
#include "nhsp/flow_map.hpp"
#include "nhsp/grid.hpp"

namespace nhsp {

struct CheckpointInfo {
    std::uint32_t version = 0;
    int dim = 0;
    int n = 0;
    double L = 0;
    SpaceTag tag = SpaceTag::euler;
    std::uint32_t components = 0;
    std::string section;  // "SBND" or "LMAP"
    double t = 0;
    std::vector<double> A;
};

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(b, 4);
}

inline void put_f64(std::ostream& out, double x) {
    const std::uint64_t v = std::bit_cast<std::uint64_t>(x);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(b, 8);
}

inline std::uint32_t get_u32(std::istream& in, const char* what) {
    char b[4];
    if (!in.read(b, 4)) throw CheckpointError(std::string("short read in ") + what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

inline double get_f64(std::istream& in, const char* what) {
    char b[8];
    if (!in.read(b, 8)) throw CheckpointError(std::string("short read in ") + what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return std::bit_cast<double>(v);
}

inline void put_tag4(std::ostream& out, const char* tag) { out.write(tag, 4); }

inline std::string get_tag4(std::istream& in, const char* what) {
    char b[4];
    if (!in.read(b, 4)) throw CheckpointError(std::string("short read in ") + what);
    return std::string(b, 4);
}

inline void put_field(std::ostream& out, const SpectralField& f) {
    for (const complex& z : f.c) {
        put_f64(out, z.real());
        put_f64(out, z.imag());
    }
}

inline SpectralField get_field(std::istream& in, const Grid& g, SpaceTag tag) {
    SpectralField f(g, tag);
    for (complex& z : f.c) {
        const double re = get_f64(in, "coefficients");
        const double im = get_f64(in, "coefficients");
        z = complex(re, im);
    }
    return f;
}

inline void write_header(std::ostream& out, const Grid& g, SpaceTag tag, std::uint32_t count,
                         const char* section, double t, const std::vector<double>& A) {
    put_tag4(out, "NHSP");
    put_u32(out, 1u);
    put_u32(out, static_cast<std::uint32_t>(g.dim()));
    put_u32(out, static_cast<std::uint32_t>(g.n()));
    put_f64(out, g.L());
    put_u32(out, static_cast<std::uint32_t>(tag));
    put_u32(out, count);
    put_tag4(out, section);
    put_f64(out, t);
    for (double a : A) put_f64(out, a);
}

inline CheckpointInfo read_header(std::istream& in) {
    CheckpointInfo info;
    if (get_tag4(in, "magic") != "NHSP") throw CheckpointError("bad magic, not a checkpoint");
    info.version = get_u32(in, "version");
    if (info.version != 1u)
        throw CheckpointError("unsupported checkpoint version " + std::to_string(info.version));
    info.dim = static_cast<int>(get_u32(in, "dim"));
    info.n = static_cast<int>(get_u32(in, "n"));
    info.L = get_f64(in, "L");
    if (info.dim != 2 && info.dim != 3)
        throw CheckpointError("checkpoint dim must be 2 or 3, got " + std::to_string(info.dim));
    if (info.n < 2 || info.n % 2 != 0 || !(info.L > 0))
        throw CheckpointError("checkpoint grid shape invalid");
    const std::uint32_t tag = get_u32(in, "space tag");
    if (tag > 1u) throw CheckpointError("unknown space tag " + std::to_string(tag));
    info.tag = static_cast<SpaceTag>(tag);
    info.components = get_u32(in, "component count");
    info.section = get_tag4(in, "section tag");
    if (info.section != "SBND" && info.section != "LMAP")
        throw CheckpointError("unknown section tag '" + info.section + "'");
    const std::uint32_t expected =
        static_cast<std::uint32_t>(info.dim + info.dim * info.dim);
    if (info.components != expected)
        throw CheckpointError("component count " + std::to_string(info.components) +
                              " does not match dim (expected " + std::to_string(expected) + ")");
    info.t = get_f64(in, "time");
    info.A.resize(static_cast<std::size_t>(info.dim) * info.dim);
    for (double& a : info.A) a = get_f64(in, "reference matrix");
    return info;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
    return out;
}

} // namespace detail

inline void write_checkpoint(const std::string& path, const StateBundle& s) {
    const Grid& g = s.grid();
    const int d = g.dim();
    std::ofstream out = detail::open_out(path);
    detail::write_header(out, g, s.v.comp[0].tag,
                         static_cast<std::uint32_t>(d + d * d), "SBND", s.t, s.A);
    for (int i = 0; i < d; ++i) detail::put_field(out, s.v.comp[i]);
    for (int a = 0; a < d; ++a)
        for (int i = 0; i < d; ++i) detail::put_field(out, s.u[a].comp[i]);
    if (!out) throw CheckpointError("write failed for '" + path + "'");
}

inline void write_checkpoint(const std::string& path, const FlowMap& m) {
    const Grid& g = m.grid();
    const int d = g.dim();
    std::ofstream out = detail::open_out(path);
    detail::write_header(out, g, m.displacement.comp[0].tag,
                         static_cast<std::uint32_t>(d + d * d), "LMAP", m.t, m.A);
    for (int i = 0; i < d; ++i) detail::put_field(out, m.displacement.comp[i]);
    for (const auto& f : m.F) detail::put_field(out, f);
    if (!out) throw CheckpointError("write failed for '" + path + "'");
}

inline CheckpointInfo inspect_checkpoint(const std::string& path) {
    std::ifstream in = detail::open_in(path);
    return detail::read_header(in);
}

inline StateBundle read_state_checkpoint(const std::string& path) {
    std::ifstream in = detail::open_in(path);
    const CheckpointInfo info = detail::read_header(in);
    if (info.section != "SBND")
        throw CheckpointError("'" + path + "' holds a " + info.section +
                              " section, not a state bundle");
    const Grid g = make_grid(info.dim, info.n, info.L);
    StateBundle s;
    s.t = info.t;
    s.A = info.A;
    s.v = VectorField(g, info.tag);
    for (int i = 0; i < info.dim; ++i) s.v.comp[i] = detail::get_field(in, g, info.tag);
    s.u.assign(info.dim, VectorField(g, info.tag));
    for (int a = 0; a < info.dim; ++a)
        for (int i = 0; i < info.dim; ++i) s.u[a].comp[i] = detail::get_field(in, g, info.tag);
    return s;
}

inline FlowMap read_map_checkpoint(const std::string& path) {
    std::ifstream in = detail::open_in(path);
    const CheckpointInfo info = detail::read_header(in);
    if (info.section != "LMAP")
        throw CheckpointError("'" + path + "' holds a " + info.section +
                              " section, not a flow map");
    const Grid g = make_grid(info.dim, info.n, info.L);
    FlowMap m;
    m.t = info.t;
    m.A = info.A;
    m.displacement = VectorField(g, info.tag);
    for (int i = 0; i < info.dim; ++i)
        m.displacement.comp[i] = detail::get_field(in, g, info.tag);
    m.F.assign(static_cast<std::size_t>(info.dim) * info.dim, SpectralField(g, info.tag));
    for (auto& f : m.F) f = detail::get_field(in, g, info.tag);
    return m;
}

} // namespace nhsp

#endif // NHSP_IO_HPP

#include "wavebox/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "wavebox/errors.hpp"

namespace wavebox {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_energy_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical newlines
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,E,dissipation_cum,residual\n";
    const ModelSpec& model = *traj.model;
    const double E0 =
        traj.snapshots.empty() ? 0.0 : energy_E(model, traj.snapshots.front());
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const double E = energy_E(model, traj.snapshots[k]);
        const double D = traj.dissipation_cum[k];
        out << format_double(traj.snapshots[k].t) << ',' << format_double(E) << ','
            << format_double(D) << ',' << format_double(E - E0 + D) << '\n';
    }
}

void write_audit_csv(const std::string& path, const AuditReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,measured,bound,ratio\n";
    for (const auto& s : report.samples) {
        const double ratio = s.bound != 0.0 ? s.measured / s.bound : 0.0;
        out << format_double(s.t) << ',' << format_double(s.measured) << ','
            << format_double(s.bound) << ',' << format_double(ratio) << '\n';
    }
}

void write_report_summary(const std::string& path, const std::vector<AuditReport>& reports) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "name,max_residual,tolerance,verdict\n";
    for (const auto& r : reports)
        out << r.name << ',' << format_double(r.max_residual) << ','
            << format_double(r.tolerance) << ',' << r.verdict() << '\n';
}

namespace {

void put_u32(std::string& buf, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct Reader {
    const std::string& data;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > data.size()) throw ParseError(0, "truncated trajectory file");
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data[pos++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t x = 0;
        for (int i = 0; i < 4; ++i)
            x |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
        return x;
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
        return std::bit_cast<double>(bits);
    }
};

constexpr char kMagic[5] = {'W', 'D', 'W', 'V', '1'};

}  // namespace

void save_trajectory(const std::string& path, const Trajectory& traj) {
    const Domain& d = traj.model->domain();
    std::string buf;
    buf.append(kMagic, 5);
    buf.push_back(static_cast<char>(d.dim));
    put_u32(buf, static_cast<std::uint32_t>(d.modes_per_dim));
    for (int j = 0; j < d.dim; ++j) put_f64(buf, d.lengths[j]);
    put_u32(buf, static_cast<std::uint32_t>(traj.snapshots.size()));
    for (const auto& s : traj.snapshots) {
        put_f64(buf, s.t);
        for (double c : s.u.coeffs) put_f64(buf, c);
        for (double c : s.v.coeffs) put_f64(buf, c);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

TrajectoryFile load_trajectory(const std::string& path, int oversample) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r{data};
    r.need(5);
    if (std::memcmp(data.data(), kMagic, 5) != 0)
        throw ParseError(0, "bad magic bytes (not a trajectory snapshot file)");
    r.pos = 5;
    const int dim = r.u8();
    const int N = static_cast<int>(r.u32());
    if (dim < 1 || dim > 3 || N < 1) throw ParseError(0, "corrupt trajectory header");
    std::vector<double> lengths;
    for (int j = 0; j < dim; ++j) lengths.push_back(r.f64());
    const Domain domain(dim, lengths, N, oversample);
    const std::uint32_t count = r.u32();
    TrajectoryFile file{domain, {}};
    const auto M = static_cast<std::size_t>(domain.modes_total());
    for (std::uint32_t s = 0; s < count; ++s) {
        PhaseState st(r.f64(), ModalField(domain), ModalField(domain));
        for (std::size_t i = 0; i < M; ++i) st.u.coeffs[i] = r.f64();
        for (std::size_t i = 0; i < M; ++i) st.v.coeffs[i] = r.f64();
        file.snapshots.push_back(std::move(st));
    }
    return file;
}

}  // namespace wavebox

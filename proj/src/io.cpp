#include "moirepw/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "moirepw/hamiltonian.hpp"

namespace moirepw {

std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_hash_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(ss.str())));
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error("write failed for " + path.string());
}

std::string field_csv(const ScalarField& field) {
    std::string out = field.grid.dim == 1 ? "x,value\n" : "x,y,value\n";
    for (std::size_t p = 0; p < field.values.size(); ++p) {
        RVec x = field.grid.point(p);
        out += format_double(x(0));
        if (field.grid.dim == 2) {
            out += ',';
            out += format_double(x(1));
        }
        out += ',';
        out += format_double(field.values[p]);
        out += '\n';
    }
    return out;
}

std::string spectrum_csv(const Spectrum& spectrum) {
    std::string out = "j,lambda\n";
    for (std::size_t j = 0; j < spectrum.count(); ++j) {
        out += std::to_string(j);
        out += ',';
        out += format_double(spectrum.eigenvalues(j));
        out += '\n';
    }
    return out;
}

std::string idos_csv(const IDoSCurve& counting, const IDoSCurve& weyl_standard,
                     const IDoSCurve& weyl_effective, double c_fit) {
    std::string out = "E,N_counting,N_weyl_standard,N_weyl_effective,c_fit_applied\n";
    for (std::size_t k = 0; k < counting.energies.size(); ++k) {
        out += format_double(counting.energies[k]);
        out += ',';
        out += format_double(counting.values[k]);
        out += ',';
        out += format_double(weyl_standard.values[k]);
        out += ',';
        out += format_double(weyl_effective.values[k]);
        out += ',';
        out += format_double(c_fit);
        out += '\n';
    }
    return out;
}

std::string extrema_csv(const ExtremaList& list, int dim) {
    std::string out = dim == 1 ? "rank,x,value\n" : "rank,x,y,value\n";
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
        const Extremum& e = list.entries[r];
        out += std::to_string(r);
        out += ',';
        out += format_double(e.position(0));
        if (dim == 2) {
            out += ',';
            out += format_double(e.position(1));
        }
        out += ',';
        out += format_double(e.value);
        out += '\n';
    }
    return out;
}

std::string bound_report_csv(const std::vector<BoundRatio>& report) {
    std::string out = "j,lambda,max_ratio\n";
    for (const BoundRatio& r : report) {
        out += std::to_string(r.j);
        out += ',';
        out += format_double(r.lambda);
        out += ',';
        out += format_double(r.max_ratio);
        out += '\n';
    }
    return out;
}

std::string matrix_coord_dump(const HamiltonianMatrix& h) {
    std::string out;
    for (std::size_t i = 0; i < h.mat.n; ++i) {
        for (std::size_t k = h.mat.row_ptr[i]; k < h.mat.row_ptr[i + 1]; ++k) {
            out += std::to_string(i);
            out += ' ';
            out += std::to_string(h.mat.col[k]);
            out += ' ';
            out += format_double(h.mat.val[k].real());
            out += ' ';
            out += format_double(h.mat.val[k].imag());
            out += '\n';
        }
    }
    return out;
}

} // namespace moirepw

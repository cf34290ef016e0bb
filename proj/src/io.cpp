#include "wildtorus/io.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <fstream>
#include <stdexcept>

namespace wt {

static_assert(std::endian::native == std::endian::little,
              "tfield payload is little-endian; big-endian hosts unsupported");

namespace {
int rank_code(Rank r) {
    switch (r) {
        case Rank::scalar: return 0;
        case Rank::vector: return 1;
        case Rank::tensor: return 2;
    }
    return 0;
}
Rank code_rank(int c) {
    if (c == 0) return Rank::scalar;
    if (c == 1) return Rank::vector;
    if (c == 2) return Rank::tensor;
    throw std::runtime_error("tfield: bad rank code");
}
} // namespace

void write_tfield(const std::string& path, const Field& f, double time) {
    nlohmann::json hdr = {{"d", f.grid().d},
                          {"n", f.grid().n},
                          {"rank", rank_code(f.rank())},
                          {"component_count", f.ncomp()},
                          {"time", time}};
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("tfield: cannot open " + path);
    os << hdr.dump() << "\n";
    os.write(reinterpret_cast<const char*>(f.raw().data()),
             static_cast<std::streamsize>(f.raw().size() * sizeof(double)));
    if (!os) throw std::runtime_error("tfield: write failed " + path);
}

TFieldSnapshot read_tfield(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("tfield: cannot open " + path);
    std::string line;
    std::getline(is, line);
    nlohmann::json hdr = nlohmann::json::parse(line);
    GridSpec g(hdr.at("d").get<int>(), hdr.at("n").get<int>());
    Rank r = code_rank(hdr.at("rank").get<int>());
    TFieldSnapshot snap{Field(g, r), hdr.at("time").get<double>()};
    if (snap.field.ncomp() != hdr.at("component_count").get<int>())
        throw std::runtime_error("tfield: component count mismatch");
    is.read(reinterpret_cast<char*>(snap.field.raw().data()),
            static_cast<std::streamsize>(snap.field.raw().size() * sizeof(double)));
    if (!is) throw std::runtime_error("tfield: truncated payload " + path);
    return snap;
}

} // namespace wt

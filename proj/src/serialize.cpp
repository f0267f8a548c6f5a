#include "stc/serialize.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Core>

namespace stc {

namespace {

void need(const Json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field: ") + key);
}

}  // namespace

Json codebook_to_json(const Codebook& cb) {
    Json words = Json::array();
    for (const CMatrix& w : cb.words) {
        Json entries = Json::array();
        for (int r = 0; r < w.rows(); ++r)
            for (int c = 0; c < w.cols(); ++c)
                entries.push_back(Json::array({w(r, c).real(), w(r, c).imag()}));
        words.push_back(std::move(entries));
    }
    return Json{{"family", cb.family},
                {"nt", cb.nt},
                {"T", cb.T},
                {"rate_bits", cb.rate_bits},
                {"normalization", cb.normalization},
                {"seed", cb.seed},
                {"power_scale", cb.power_scale},
                {"words", std::move(words)}};
}

Codebook codebook_from_json(const Json& j) {
    for (const char* key :
         {"family", "nt", "T", "rate_bits", "normalization", "seed", "power_scale", "words"})
        need(j, key);
    Codebook cb;
    cb.family = j.at("family").get<std::string>();
    cb.nt = j.at("nt").get<int>();
    cb.T = j.at("T").get<int>();
    cb.rate_bits = j.at("rate_bits").get<double>();
    cb.normalization = j.at("normalization").get<std::string>();
    cb.seed = j.at("seed").get<std::uint64_t>();
    cb.power_scale = j.at("power_scale").get<double>();
    if (cb.nt < 1 || cb.T < 1) throw std::invalid_argument("codebook: bad shape");
    const std::size_t entries = static_cast<std::size_t>(cb.nt) * cb.T;
    for (const Json& wj : j.at("words")) {
        if (!wj.is_array() || wj.size() != entries)
            throw std::invalid_argument("codebook: word entry count mismatch");
        CMatrix w(cb.nt, cb.T);
        std::size_t k = 0;
        for (int r = 0; r < cb.nt; ++r)
            for (int c = 0; c < cb.T; ++c) {
                const Json& e = wj.at(k++);
                if (!e.is_array() || e.size() != 2)
                    throw std::invalid_argument("codebook: entry must be [re, im]");
                w(r, c) = std::complex<double>(e.at(0).get<double>(), e.at(1).get<double>());
            }
        cb.words.push_back(std::move(w));
    }
    return cb;
}

Json udm_to_json(const UdmFamily& fam) {
    Json mats = Json::array();
    for (const FieldMatrix& m : fam.mats) mats.push_back(m.data());
    return Json{{"p", fam.field.characteristic()},
                {"m", fam.field.degree()},
                {"n", fam.n},
                {"L", fam.L},
                {"provenance", fam.provenance},
                {"verified", fam.verified},
                {"matrices", std::move(mats)}};
}

UdmFamily udm_from_json(const Json& j) {
    for (const char* key : {"p", "m", "n", "L", "provenance", "verified", "matrices"}) need(j, key);
    UdmFamily fam;
    fam.field = Field::make(j.at("p").get<int>(), j.at("m").get<int>());
    fam.n = j.at("n").get<int>();
    fam.L = j.at("L").get<int>();
    fam.provenance = j.at("provenance").get<std::string>();
    fam.verified = j.at("verified").get<bool>();
    if (fam.n < 1 || fam.L < 1) throw std::invalid_argument("udm: bad shape");
    const Json& mats = j.at("matrices");
    if (!mats.is_array() || static_cast<int>(mats.size()) != fam.L)
        throw std::invalid_argument("udm: matrix count must equal L");
    for (const Json& mj : mats) {
        if (!mj.is_array() || static_cast<int>(mj.size()) != fam.n * fam.n)
            throw std::invalid_argument("udm: matrix must hold n*n entries");
        FieldMatrix m(fam.n, fam.n);
        for (int i = 0; i < fam.n * fam.n; ++i) {
            const int v = mj.at(static_cast<std::size_t>(i)).get<int>();
            if (v < 0 || v >= fam.field.size())
                throw std::invalid_argument("udm: entry outside the field");
            m.data()[static_cast<std::size_t>(i)] = v;
        }
        fam.mats.push_back(std::move(m));
    }
    return fam;
}

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

std::string csv_to_string(const CsvTable& table) {
    std::ostringstream out;
    for (const std::string& c : table.comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("csv row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string canonical_dump(const Json& j) { return j.dump(); }

Json make_manifest(const Json& config, std::uint64_t seed,
                   const std::vector<std::string>& outputs) {
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return Json{{"config_hash", hex64(fnv1a64(canonical_dump(config)))},
                {"seed", seed},
                {"rng", CounterRng::name},
                {"versions",
                 Json{{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"cxx_standard", static_cast<long>(__cplusplus)}}},
                {"generated_at", stamp},
                {"outputs", outputs}};
}

}  // namespace stc

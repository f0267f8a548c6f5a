#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stc/constellation.hpp"
#include "stc/udm_family.hpp"

namespace stc {

using Json = nlohmann::json;

// Codewords persist as row-major [re, im] pairs; doubles survive the round
// trip bit for bit.
Json codebook_to_json(const Codebook& cb);
Codebook codebook_from_json(const Json& j);

Json udm_to_json(const UdmFamily& fam);
UdmFamily udm_from_json(const Json& j);

struct CsvTable {
    std::vector<std::string> comments;  // emitted as leading "# ..." lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string csv_to_string(const CsvTable& table);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Sorted-key, whitespace-free dump; the basis of config hashing.
std::string canonical_dump(const Json& j);

// Run provenance: config hash, seed, generator and library versions, output
// list. The timestamp lives here and nowhere else.
Json make_manifest(const Json& config, std::uint64_t seed,
                   const std::vector<std::string>& outputs);

}  // namespace stc

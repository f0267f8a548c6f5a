#pragma once

#include <string>
#include <vector>

#include "stc/galois.hpp"

namespace stc {

// L square n x n matrices over one field. The decodability property: for
// every composition k_1 + ... + k_L = n of nonnegative parts, the matrix made
// of the first k_l rows of each member has rank n. `verified` is set only by
// udm_verify.
struct UdmFamily {
    Field field;
    int n = 0;
    int L = 0;
    std::vector<FieldMatrix> mats;
    std::string provenance;  // identity-pair | tensor-T | L4-F3 | pascal | rs-mds | custom
    bool verified = false;
};

}  // namespace stc

#include "cfdim/hp.hpp"

#include <cstdio>
#include <vector>

namespace cfdim {

std::string HPReal::str(int digits) const {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
}

}  // namespace cfdim

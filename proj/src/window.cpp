#include "tessera/window.hpp"

namespace tessera {

const char* to_string(EdgeMode m) {
    switch (m) {
        case EdgeMode::none: return "none";
        case EdgeMode::plus: return "plus";
        case EdgeMode::periodic: return "periodic";
    }
    return "none";
}

EdgeMode parse_edge_mode(const std::string& s) {
    if (s == "none") return EdgeMode::none;
    if (s == "plus") return EdgeMode::plus;
    if (s == "periodic") return EdgeMode::periodic;
    throw ParameterError("unknown edge mode '" + s + "'");
}

}  // namespace tessera

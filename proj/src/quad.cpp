#include "h10/quad.hpp"
#include "h10/padic.hpp"

namespace h10::quad {

std::string splitting_name(Splitting s) {
    switch (s) {
        case Splitting::Split: return "split";
        case Splitting::Inert: return "inert";
        case Splitting::Ramified: return "ramified";
    }
    return "?";
}

ImagQuadField ImagQuadField::make(const BigInt& d) {
    if (d >= 0) throw Error("ImagQuadField: d must be negative");
    BigInt sf = squarefree_part(d);
    BigInt disc = mod_floor(sf, 4) == 1 ? sf : 4 * sf;
    return {sf, disc};
}

Splitting ImagQuadField::splitting(int64_t ell) const {
    switch (padic::kronecker_symbol(disc_, BigInt(ell))) {
        case 1: return Splitting::Split;
        case -1: return Splitting::Inert;
        default: return Splitting::Ramified;
    }
}

nlohmann::json ImagQuadField::to_json() const {
    return {{"d", static_cast<int64_t>(d_)},
            {"disc", static_cast<int64_t>(disc_)},
            {"height", static_cast<int64_t>(height())}};
}

std::string ImagQuadField::str() const {
    return "Q(sqrt(" + d_.str() + "))";
}

}  // namespace h10::quad

#pragma once

#include "h10/bigint.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace h10::quad {

enum class Splitting { Split, Inert, Ramified };

std::string splitting_name(Splitting s);

/// Imaginary quadratic field Q(sqrt(d)), keyed by the squarefree d < 0.
class ImagQuadField {
public:
    /// Applies squarefree reduction to d; requires d < 0.
    static ImagQuadField make(const BigInt& d);

    const BigInt& d() const { return d_; }
    const BigInt& disc() const { return disc_; }
    BigInt height() const { return -d_; }

    bool is_gaussian() const { return d_ == -1; }  // Q(i)

    Splitting splitting(int64_t ell) const;

    nlohmann::json to_json() const;
    std::string str() const;

private:
    ImagQuadField(BigInt d, BigInt disc) : d_(std::move(d)), disc_(std::move(disc)) {}

    BigInt d_;
    BigInt disc_;
};

}  // namespace h10::quad

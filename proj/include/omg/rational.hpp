#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace omg {

// Exact arbitrary-precision rational. All measure arithmetic and density
// verdicts go through this type; no floating point anywhere.
using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_str(const Rat& r) {
    if (boost::multiprecision::denominator(r) == 1) {
        return boost::multiprecision::numerator(r).str();
    }
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

// Parses "p/q" or "p". Throws std::invalid_argument on malformed input.
inline Rat parse_rat(const std::string& s) {
    auto bad = [&]() { throw std::invalid_argument("malformed rational: '" + s + "'"); };
    if (s.empty()) bad();
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(boost::multiprecision::cpp_int(s));
        }
        const std::string num = s.substr(0, slash);
        const std::string den = s.substr(slash + 1);
        if (num.empty() || den.empty()) bad();
        boost::multiprecision::cpp_int p(num), q(den);
        if (q == 0) bad();
        return Rat(p, q);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rat(0);  // unreachable
}

}  // namespace omg

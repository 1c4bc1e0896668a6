#pragma once

#include <string>

#include "qprot/errors.hpp"

namespace qprot {

// Total angular momentum j stored exactly as 2j. Dimension arithmetic stays integral.
struct HalfInt {
    int twice = 0;

    constexpr HalfInt() = default;
    constexpr explicit HalfInt(int twice_j) : twice(twice_j) {}

    static constexpr HalfInt from_twice(int twice_j) { return HalfInt(twice_j); }
    static constexpr HalfInt integer(int j) { return HalfInt(2 * j); }

    constexpr int dim() const { return twice + 1; }
    constexpr double value() const { return twice / 2.0; }
    constexpr bool is_integer() const { return twice % 2 == 0; }

    constexpr bool operator==(const HalfInt&) const = default;
    constexpr auto operator<=>(const HalfInt&) const = default;
    constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice + o.twice); }
    constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice - o.twice); }

    // Accepts "2", "3/2". Anything else (including non-halves) is rejected.
    static HalfInt parse(const std::string& text) {
        auto bad = [&] { throw ValidationError("cannot parse j from '" + text + "' (use forms like \"2\" or \"3/2\")"); };
        if (text.empty()) bad();
        std::size_t slash = text.find('/');
        try {
            if (slash == std::string::npos) {
                std::size_t used = 0;
                int whole = std::stoi(text, &used);
                if (used != text.size() || whole < 0) bad();
                return HalfInt(2 * whole);
            }
            std::size_t used = 0;
            int num = std::stoi(text.substr(0, slash), &used);
            if (used != slash || num < 0) bad();
            std::string den = text.substr(slash + 1);
            if (den != "2") bad();
            return HalfInt(num);
        } catch (const std::invalid_argument&) {
            bad();
        } catch (const std::out_of_range&) {
            bad();
        }
        return HalfInt(0);  // unreachable
    }

    std::string str() const {
        if (is_integer()) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }
};

inline void require_spin(HalfInt j) {
    if (j.twice < 0) throw ValidationError("negative j");
}

}  // namespace qprot

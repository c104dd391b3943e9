#include "tgeom/types.hpp"

#include <cmath>

namespace tgeom {

std::string to_string(Kind k) {
    switch (k) {
        case Kind::neutral: return "neutral";
        case Kind::future: return "future";
        case Kind::past: return "past";
    }
    return "?";
}

Kind kind_from_string(const std::string& s) {
    if (s == "n" || s == "neutral") return Kind::neutral;
    if (s == "f" || s == "future") return Kind::future;
    if (s == "p" || s == "past") return Kind::past;
    throw InputError("unknown kind '" + s + "' (expected n|f|p)");
}

double Tensor3::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double Tensor3::lower_asymmetry() const {
    double m = 0.0;
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) m = std::max(m, std::abs((*this)(i, k, l) - (*this)(i, l, k)));
    return m;
}

double Tensor4::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
    if (a.d != b.d) throw InputError("tensor dimension mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

double max_abs_diff(const Tensor4& a, const Tensor4& b) {
    if (a.d != b.d) throw InputError("tensor dimension mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

}  // namespace tgeom

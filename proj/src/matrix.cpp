#include "ctk/matrix.hpp"

#include <sstream>

namespace ctk {

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

IntMatrix clear_denominators(const RatMatrix& m, Int* denominator) {
    Int den = 1;
    for (const auto& x : m.data()) den = lcm(den, x.get_den());
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Rat scaled = m(i, j) * den;
            out(i, j) = scaled.get_num();
        }
    if (denominator) *denominator = den;
    return out;
}

Int content(std::span<const Int> v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

IntMatrix primitive_rows(const RatMatrix& m) {
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Int den = 1;
        for (const auto& x : m.row(i)) den = lcm(den, x.get_den());
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rat(m(i, j) * den).get_num();
        Int g = content(out.row(i));
        if (g > 1)
            for (auto& x : out.row(i)) x /= g;
    }
    return out;
}

std::optional<IntMatrix> to_integer(const RatMatrix& m) {
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j).get_den() != 1) return std::nullopt;
            out(i, j) = m(i, j).get_num();
        }
    return out;
}

namespace {

template <class T>
std::string matrix_string(const Matrix<T>& m) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) os << ',';
        os << '[';
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << to_string(m(i, j));
        }
        os << ']';
    }
    os << ']';
    return os.str();
}

}  // namespace

std::string to_string(const IntMatrix& m) { return matrix_string(m); }
std::string to_string(const RatMatrix& m) { return matrix_string(m); }

}  // namespace ctk

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vkl/basis.hpp"
#include "vkl/errors.hpp"

namespace vkl {

using cplx = std::complex<double>;

/// A complex function on the group, constant on rank-N cylinders.  Cell t
/// holds the value on the cylinder of the point with digit expansion t
/// (point index t = sum x_k M_k), so cylinders of rank r are the residue
/// classes mod M_r.  Immutable after construction.
class GridFunction {
public:
    GridFunction(VilenkinBasis basis, std::vector<cplx> values)
        : basis_(std::move(basis)), values_(std::move(values)) {
        require(static_cast<index_t>(values_.size()) == basis_.point_count(),
                errc::incompatible_operands, "value vector length must equal M_N");
        for (const cplx& v : values_)
            require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                    errc::incompatible_operands, "grid values must be finite");
    }

    static GridFunction zero(const VilenkinBasis& basis) {
        return GridFunction(basis, std::vector<cplx>(static_cast<std::size_t>(basis.point_count()), cplx{}));
    }

    static GridFunction constant(const VilenkinBasis& basis, cplx c) {
        return GridFunction(basis, std::vector<cplx>(static_cast<std::size_t>(basis.point_count()), c));
    }

    const VilenkinBasis& basis() const { return basis_; }
    std::span<const cplx> values() const { return values_; }
    cplx value(index_t t) const { return values_.at(static_cast<std::size_t>(t)); }
    index_t size() const { return static_cast<index_t>(values_.size()); }

private:
    VilenkinBasis basis_;
    std::vector<cplx> values_;
};

inline void check_compatible(const GridFunction& a, const GridFunction& b) {
    require(a.basis() == b.basis(), errc::incompatible_operands,
            "operands live on different bases");
}

/// Exact Haar integral: the mean of the cell values.
inline cplx integrate(const GridFunction& f) {
    kahan_sum re, im;
    for (const cplx& v : f.values()) {
        re.add(v.real());
        im.add(v.imag());
    }
    double n = static_cast<double>(f.size());
    return {re.value() / n, im.value() / n};
}

/// Lp quasi-norm over the probability measure; p = infinity gives the
/// max cell modulus.
inline double norm_p(const GridFunction& f, double p) {
    require(p > 0.0, errc::invalid_exponent, "norm exponent must be positive");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const cplx& v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    kahan_sum acc;
    for (const cplx& v : f.values()) acc.add(std::pow(std::abs(v), p));
    return std::pow(acc.value() / static_cast<double>(f.size()), 1.0 / p);
}

inline double norm_1(const GridFunction& f) {
    kahan_sum acc;
    for (const cplx& v : f.values()) acc.add(std::abs(v));
    return acc.value() / static_cast<double>(f.size());
}

inline double norm_2(const GridFunction& f) {
    kahan_sum acc;
    for (const cplx& v : f.values()) acc.add(std::norm(v));
    return std::sqrt(acc.value() / static_cast<double>(f.size()));
}

inline double norm_inf(const GridFunction& f) {
    return norm_p(f, std::numeric_limits<double>::infinity());
}

inline GridFunction add(const GridFunction& a, const GridFunction& b) {
    check_compatible(a, b);
    std::vector<cplx> out(a.values().begin(), a.values().end());
    for (index_t t = 0; t < a.size(); ++t) out[static_cast<std::size_t>(t)] += b.value(t);
    return GridFunction(a.basis(), std::move(out));
}

inline GridFunction sub(const GridFunction& a, const GridFunction& b) {
    check_compatible(a, b);
    std::vector<cplx> out(a.values().begin(), a.values().end());
    for (index_t t = 0; t < a.size(); ++t) out[static_cast<std::size_t>(t)] -= b.value(t);
    return GridFunction(a.basis(), std::move(out));
}

inline GridFunction scale(const GridFunction& f, cplx c) {
    std::vector<cplx> out(f.values().begin(), f.values().end());
    for (cplx& v : out) v *= c;
    return GridFunction(f.basis(), std::move(out));
}

inline GridFunction multiply(const GridFunction& a, const GridFunction& b) {
    check_compatible(a, b);
    std::vector<cplx> out(a.values().begin(), a.values().end());
    for (index_t t = 0; t < a.size(); ++t) out[static_cast<std::size_t>(t)] *= b.value(t);
    return GridFunction(a.basis(), std::move(out));
}

inline GridFunction modulus(const GridFunction& f) {
    std::vector<cplx> out(static_cast<std::size_t>(f.size()));
    for (index_t t = 0; t < f.size(); ++t) out[static_cast<std::size_t>(t)] = std::abs(f.value(t));
    return GridFunction(f.basis(), std::move(out));
}

/// Cellwise maximum of moduli; realizes sup_n |.| in maximal operators.
inline GridFunction sup_envelope(std::span<const GridFunction> fs) {
    require(!fs.empty(), errc::incompatible_operands, "sup_envelope needs at least one operand");
    for (const GridFunction& f : fs) check_compatible(fs.front(), f);
    std::vector<cplx> out(static_cast<std::size_t>(fs.front().size()), cplx{});
    for (const GridFunction& f : fs)
        for (index_t t = 0; t < f.size(); ++t) {
            double m = std::abs(f.value(t));
            if (m > out[static_cast<std::size_t>(t)].real()) out[static_cast<std::size_t>(t)] = m;
        }
    return GridFunction(fs.front().basis(), std::move(out));
}

inline GridFunction operator+(const GridFunction& a, const GridFunction& b) { return add(a, b); }
inline GridFunction operator-(const GridFunction& a, const GridFunction& b) { return sub(a, b); }
inline GridFunction operator*(const GridFunction& a, const GridFunction& b) { return multiply(a, b); }
inline GridFunction operator*(cplx c, const GridFunction& f) { return scale(f, c); }
inline GridFunction operator*(const GridFunction& f, cplx c) { return scale(f, c); }

/// Averages f over each rank-n cylinder (the conditional expectation at
/// rank n).  Cylinders of rank n are residue classes mod M_n.
inline GridFunction restrict_mean(const GridFunction& f, int rank) {
    require(rank >= 0 && rank <= f.basis().resolution(), errc::out_of_range,
            "rank " + std::to_string(rank) + " exceeds resolution");
    index_t block = f.basis().power(rank);
    index_t reps = f.size() / block;
    std::vector<cplx> cell_sum(static_cast<std::size_t>(block), cplx{});
    for (index_t t = 0; t < f.size(); ++t) cell_sum[static_cast<std::size_t>(t % block)] += f.value(t);
    std::vector<cplx> out(static_cast<std::size_t>(f.size()));
    double inv = 1.0 / static_cast<double>(reps);
    for (index_t t = 0; t < f.size(); ++t)
        out[static_cast<std::size_t>(t)] = cell_sum[static_cast<std::size_t>(t % block)] * inv;
    return GridFunction(f.basis(), std::move(out));
}

inline double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    check_compatible(a, b);
    double m = 0.0;
    for (index_t t = 0; t < a.size(); ++t) m = std::max(m, std::abs(a.value(t) - b.value(t)));
    return m;
}

/// 17-significant-digit decimal, enough to round-trip a double exactly.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Debug dump: header "t,re,im", one row per cell in ascending t.
inline void write_csv(const GridFunction& f, std::ostream& os) {
    os << "t,re,im\n";
    for (index_t t = 0; t < f.size(); ++t)
        os << t << ',' << format_double(f.value(t).real()) << ','
           << format_double(f.value(t).imag()) << '\n';
}

inline GridFunction read_csv(const VilenkinBasis& basis, std::istream& is) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), errc::incompatible_operands, "empty dump");
    require(line == "t,re,im", errc::incompatible_operands, "bad dump header: " + line);
    std::vector<cplx> values(static_cast<std::size_t>(basis.point_count()), cplx{});
    index_t expected = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::size_t c1 = line.find(',');
        std::size_t c2 = line.find(',', c1 + 1);
        require(c1 != std::string::npos && c2 != std::string::npos, errc::incompatible_operands,
                "bad dump row: " + line);
        index_t t = std::stoll(line.substr(0, c1));
        require(t == expected, errc::incompatible_operands, "dump rows must ascend from 0");
        double re = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        double im = std::stod(line.substr(c2 + 1));
        values.at(static_cast<std::size_t>(t)) = {re, im};
        ++expected;
    }
    require(expected == basis.point_count(), errc::incompatible_operands,
            "dump row count does not match M_N");
    return GridFunction(basis, std::move(values));
}

}  // namespace vkl

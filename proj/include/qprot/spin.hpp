#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qprot/errors.hpp"
#include "qprot/half_int.hpp"

namespace qprot {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;

namespace tol {
inline constexpr double structural = 1e-10;   // operator identities, eigen-equations
inline constexpr double normalization = 1e-12;
inline constexpr double group_law = 1e-9;
inline constexpr double phase_equal = 1e-10;  // |<a|b>| > 1 - phase_equal
}  // namespace tol

// Unit vector; may remember the axis label it came from (for I/O echoes).
struct Axis {
    double nx = 0.0, ny = 0.0, nz = 1.0;
    char label = 0;  // 'x', 'y', 'z', or 0 for a free direction

    static Axis x() { return {1.0, 0.0, 0.0, 'x'}; }
    static Axis y() { return {0.0, 1.0, 0.0, 'y'}; }
    static Axis z() { return {0.0, 0.0, 1.0, 'z'}; }

    static Axis of_label(char c) {
        switch (c) {
            case 'x': return x();
            case 'y': return y();
            case 'z': return z();
        }
        throw ValidationError(std::string("unknown axis label '") + c + "'");
    }

    // Accepts vectors within 1e-9 of unit length and renormalizes; rejects the rest.
    static Axis of(double nx, double ny, double nz) {
        double n = std::sqrt(nx * nx + ny * ny + nz * nz);
        if (std::abs(n - 1.0) > 1e-9) throw ValidationError("axis is not a unit vector (norm " + std::to_string(n) + ")");
        return {nx / n, ny / n, nz / n, 0};
    }

    double polar() const { return std::acos(std::clamp(nz, -1.0, 1.0)); }
    double azimuth() const { return (nx == 0.0 && ny == 0.0) ? 0.0 : std::atan2(ny, nx); }
};

namespace detail {

inline double factorial(int n) {
    static const auto table = [] {
        std::array<double, 171> f{};
        f[0] = 1.0;
        for (int i = 1; i < 171; ++i) f[i] = f[i - 1] * i;
        return f;
    }();
    return table[static_cast<std::size_t>(n)];
}

}  // namespace detail

// m values in the fixed ordering m = j, j-1, ..., -j. Entry i has 2m = twice_j - 2i.
inline double m_of_index(HalfInt j, int i) { return (j.twice - 2 * i) / 2.0; }

// d^j_{m'm}(beta) = <j,m'| exp(-i beta J_y) |j,m>, explicit factorial sum.
inline RMat wigner_d(HalfInt j, double beta) {
    require_spin(j);
    const int d = j.dim();
    const double c = std::cos(beta / 2.0), s = std::sin(beta / 2.0);
    RMat out(d, d);
    for (int r = 0; r < d; ++r) {
        const int tmp = j.twice - 2 * r;  // 2m'
        for (int col = 0; col < d; ++col) {
            const int tm = j.twice - 2 * col;  // 2m
            const int jpmp = (j.twice + tmp) / 2, jmmp = (j.twice - tmp) / 2;
            const int jpm = (j.twice + tm) / 2, jmm = (j.twice - tm) / 2;
            const int dm = (tmp - tm) / 2;  // m' - m
            const double pre = std::sqrt(detail::factorial(jpmp) * detail::factorial(jmmp) *
                                         detail::factorial(jpm) * detail::factorial(jmm));
            const int klo = std::max(0, -dm), khi = std::min(jpm, jmmp);
            double acc = 0.0;
            for (int k = klo; k <= khi; ++k) {
                const double den = detail::factorial(jpm - k) * detail::factorial(k) *
                                   detail::factorial(jmmp - k) * detail::factorial(dm + k);
                const double sign = ((dm + k) % 2 != 0) ? -1.0 : 1.0;
                acc += sign * std::pow(c, j.twice + (tm - tmp) / 2 - 2 * k) * std::pow(s, dm + 2 * k) / den;
            }
            out(r, col) = pre * acc;
        }
    }
    return out;
}

// J_z diagonal, J_x/J_y from the ladder coefficients sqrt(j(j+1) - m(m+1)).
inline Mat angular_momentum(HalfInt j, char axis_label) {
    require_spin(j);
    const int d = j.dim();
    Mat out = Mat::Zero(d, d);
    if (axis_label == 'z') {
        for (int i = 0; i < d; ++i) out(i, i) = m_of_index(j, i);
        return out;
    }
    if (axis_label != 'x' && axis_label != 'y')
        throw ValidationError(std::string("unknown axis label '") + axis_label + "'");
    const double jj = j.value() * (j.value() + 1.0);
    for (int i = 1; i < d; ++i) {
        const double m = m_of_index(j, i);  // J_+ raises |j,m> to |j,m+1>, row i-1
        const double cplus = std::sqrt(jj - m * (m + 1.0));
        if (axis_label == 'x') {
            out(i - 1, i) = cplus / 2.0;
            out(i, i - 1) = cplus / 2.0;
        } else {
            out(i - 1, i) = cd(0.0, -cplus / 2.0);
            out(i, i - 1) = cd(0.0, cplus / 2.0);
        }
    }
    return out;
}

inline Mat angular_momentum_along(HalfInt j, const Axis& n) {
    return n.nx * angular_momentum(j, 'x') + n.ny * angular_momentum(j, 'y') + n.nz * angular_momentum(j, 'z');
}

// Columns are |j,m>_n for m = j..-j, via U(n) = R_z(azimuth) R_y(polar) acting on the
// z basis: diag(e^{-im*azimuth}) times the Wigner-d matrix. Deterministic phases.
inline Mat eigenbasis_matrix(HalfInt j, const Axis& n) {
    const int d = j.dim();
    const RMat dmat = wigner_d(j, n.polar());
    const double az = n.azimuth();
    Mat u(d, d);
    for (int r = 0; r < d; ++r) {
        const cd phase = std::polar(1.0, -m_of_index(j, r) * az);
        for (int col = 0; col < d; ++col) u(r, col) = phase * dmat(r, col);
    }
    return u;
}

// exp(-i theta n.J) through the rotated eigenbasis: exact e^{-im theta} phases.
inline Mat rotation(HalfInt j, const Axis& n, double theta) {
    const Mat u = eigenbasis_matrix(j, n);
    const int d = j.dim();
    Vec phases(d);
    for (int i = 0; i < d; ++i) phases(i) = std::polar(1.0, -m_of_index(j, i) * theta);
    return u * phases.asDiagonal() * u.adjoint();
}

struct PureState {
    HalfInt j;
    Axis basis = Axis::z();
    Vec amps;  // m descending

    static PureState make(HalfInt j, Axis basis, Vec amps, double norm_tol = tol::normalization) {
        require_spin(j);
        if (amps.size() != j.dim()) throw ValidationError("amplitude count does not match 2j+1");
        const double n2 = amps.squaredNorm();
        if (std::abs(n2 - 1.0) > norm_tol)
            throw ValidationError("state is not normalized (|norm^2 - 1| = " + std::to_string(std::abs(n2 - 1.0)) + ")");
        return {j, basis, std::move(amps)};
    }

    static PureState make_normalized(HalfInt j, Axis basis, Vec amps) {
        const double n = amps.norm();
        if (n == 0.0) throw ValidationError("zero state vector");
        return {j, basis, amps / n};
    }

    // Amplitudes re-expressed in the z eigenbasis.
    Vec to_z() const {
        if (basis.label == 'z') return amps;
        return eigenbasis_matrix(j, basis) * amps;
    }
};

inline PureState z_eigenstate(HalfInt j, int twice_m) {
    Vec a = Vec::Zero(j.dim());
    const int idx = (j.twice - twice_m) / 2;
    if (idx < 0 || idx >= j.dim() || (j.twice - twice_m) % 2 != 0) throw ValidationError("invalid m for this j");
    a(idx) = 1.0;
    return PureState::make(j, Axis::z(), std::move(a));
}

inline cd inner(const PureState& a, const PureState& b) {
    if (a.j != b.j) throw ValidationError("inner product between different spins");
    return a.to_z().dot(b.to_z());  // Eigen conjugates the left argument
}

inline PureState apply_operator(const Mat& op, const PureState& s) {
    const Vec z = s.to_z();
    if (op.cols() != z.size()) throw ValidationError("operator/state dimension mismatch");
    return PureState::make(s.j, Axis::z(), op * z, 1e-9);
}

inline cd expectation_complex(const Mat& op, const Vec& z) {
    if (op.cols() != z.size()) throw ValidationError("operator/state dimension mismatch");
    return z.dot(op * z);
}

inline cd expectation_complex(const Mat& op, const PureState& s) { return expectation_complex(op, s.to_z()); }

inline double expectation(const Mat& op, const Vec& z) { return expectation_complex(op, z).real(); }

inline double expectation(const Mat& op, const PureState& s) {
    return expectation_complex(op, s).real();
}

inline bool equal_up_to_phase(const PureState& a, const PureState& b, double eps = tol::phase_equal) {
    return std::abs(inner(a, b)) > 1.0 - eps;
}

inline double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Mat& a, double eps = tol::structural) {
    return max_abs_diff(a, a.adjoint()) < eps;
}

inline bool is_unitary(const Mat& a, double eps = tol::structural) {
    return max_abs_diff(a.adjoint() * a, Mat::Identity(a.cols(), a.cols())) < eps;
}

}  // namespace qprot

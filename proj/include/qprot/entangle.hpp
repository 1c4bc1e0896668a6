#pragma once

#include <Eigen/Eigenvalues>
#include <map>
#include <vector>

#include "qprot/spin.hpp"

namespace qprot {

namespace detail {

inline Mat ladder_minus(HalfInt j) {
    const int d = j.dim();
    const double jj = j.value() * (j.value() + 1.0);
    Mat out = Mat::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) {
        const double m = m_of_index(j, i);  // J_- |j,m> = sqrt(j(j+1)-m(m-1)) |j,m-1>
        out(i + 1, i) = std::sqrt(jj - m * (m - 1.0));
    }
    return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    return out;
}

}  // namespace detail

// Coupled basis of two spins, built by ladder recursion from each stretched state.
// blocks[tj] has the |j,m> columns (m descending) in the product basis, whose index
// is i1 * d2 + i2 with m1 = j1 - i1 and m2 = j2 - i2. Condon-Shortley signs.
struct CGTable {
    HalfInt j1, j2;
    std::map<int, Mat, std::greater<int>> blocks;

    CGTable(HalfInt j1_, HalfInt j2_) : j1(j1_), j2(j2_) {
        require_spin(j1);
        require_spin(j2);
        const int d1 = j1.dim(), d2 = j2.dim();
        const Mat jm = detail::kron(detail::ladder_minus(j1), Mat::Identity(d2, d2)) +
                       detail::kron(Mat::Identity(d1, d1), detail::ladder_minus(j2));
        for (int tj = j1.twice + j2.twice; tj >= std::abs(j1.twice - j2.twice); tj -= 2) {
            const int dj = tj + 1;
            Mat block(d1 * d2, dj);
            Vec top = Vec::Zero(d1 * d2);
            if (tj == j1.twice + j2.twice) {
                top(0) = 1.0;  // |j1,j1>|j2,j2>
            } else {
                // m = j subspace: product states with i1 + i2 = r; the new top state is
                // the unique direction orthogonal to every higher-j state at this m.
                const int r = (j1.twice + j2.twice - tj) / 2;
                std::vector<Vec> higher;
                for (const auto& [tjh, bh] : blocks) higher.push_back(bh.col((tjh - tj) / 2));
                const int i1_lo = std::max(0, r - (d2 - 1)), i1_hi = std::min(d1 - 1, r);
                for (int i1 = i1_lo; i1 <= i1_hi; ++i1) {
                    Vec cand = Vec::Zero(d1 * d2);
                    cand(i1 * d2 + (r - i1)) = 1.0;
                    for (const Vec& h : higher) cand -= h * h.dot(cand);
                    if (cand.norm() > 1e-8) {
                        top = cand / cand.norm();
                        break;
                    }
                }
                // Condon-Shortley: coefficient on the highest-m1 product state positive.
                for (int i1 = i1_lo; i1 <= i1_hi; ++i1) {
                    const cd c = top(i1 * d2 + (r - i1));
                    if (std::abs(c) > 1e-12) {
                        top *= std::abs(c) / c;
                        break;
                    }
                }
            }
            block.col(0) = top;
            for (int col = 1; col < dj; ++col) {
                Vec next = jm * block.col(col - 1);
                block.col(col) = next / next.norm();
            }
            blocks.emplace(tj, std::move(block));
        }
    }
};

// <j,m | j1,m1; j2,m2>. Out-of-range or non-conserved quantum numbers give 0;
// malformed j (negative, parity mismatch) is an error. All twice-integer arguments.
inline double clebsch_gordan(HalfInt j1, HalfInt j2, HalfInt j, int tm, int tm1, int tm2) {
    if (j1.twice < 0 || j2.twice < 0 || j.twice < 0) throw ValidationError("negative j in Clebsch-Gordan");
    if ((j.twice + j1.twice + j2.twice) % 2 != 0) throw ValidationError("j parity mismatch in Clebsch-Gordan");
    if ((tm - j.twice) % 2 != 0 || (tm1 - j1.twice) % 2 != 0 || (tm2 - j2.twice) % 2 != 0)
        throw ValidationError("m parity mismatch in Clebsch-Gordan");
    if (tm1 + tm2 != tm) return 0.0;
    if (std::abs(tm) > j.twice || std::abs(tm1) > j1.twice || std::abs(tm2) > j2.twice) return 0.0;
    if (j.twice > j1.twice + j2.twice || j.twice < std::abs(j1.twice - j2.twice)) return 0.0;
    static thread_local std::map<std::pair<int, int>, CGTable> cache;
    auto it = cache.find({j1.twice, j2.twice});
    if (it == cache.end()) it = cache.emplace(std::make_pair(j1.twice, j2.twice), CGTable(j1, j2)).first;
    const Mat& block = it->second.blocks.at(j.twice);
    const int i1 = (j1.twice - tm1) / 2, i2 = (j2.twice - tm2) / 2, col = (j.twice - tm) / 2;
    return block(i1 * (j2.twice + 1) + i2, col).real();
}

struct CompositeState {
    Vec amps;               // product basis, row-major over parts, each m descending
    std::vector<int> dims;  // 2j_i + 1 per part
};

// Lift a spin-j state into the top irrep of a 2- or 3-part tensor product.
inline CompositeState embed(const PureState& s, const std::vector<HalfInt>& parts) {
    if (parts.size() != 2 && parts.size() != 3) throw ValidationError("embed supports 2 or 3 parts");
    int total = 0;
    std::vector<int> dims;
    for (HalfInt p : parts) {
        require_spin(p);
        total += p.twice;
        dims.push_back(p.dim());
    }
    if (total != s.j.twice)
        throw ValidationError("state j must equal the sum of part spins (top irrep embedding)");
    const Vec a = s.to_z();
    if (parts.size() == 2) {
        const CGTable table(parts[0], parts[1]);
        return {table.blocks.at(s.j.twice) * a, dims};
    }
    const HalfInt j12 = parts[0] + parts[1];
    const CGTable left(parts[0], parts[1]);
    const CGTable with_third(j12, parts[2]);
    const Mat lift = detail::kron(left.blocks.at(j12.twice), Mat::Identity(dims[2], dims[2]));
    return {lift * (with_third.blocks.at(s.j.twice) * a), dims};
}

struct DensityMatrix {
    Mat rho;

    int dim() const { return static_cast<int>(rho.rows()); }

    void validate(double eps = 1e-10) const {
        if (rho.rows() != rho.cols()) throw ValidationError("density matrix not square");
        if (!is_hermitian(rho, eps)) throw ValidationError("density matrix not Hermitian");
        if (std::abs(rho.trace().real() - 1.0) > eps || std::abs(rho.trace().imag()) > eps)
            throw ValidationError("density matrix trace is not 1");
        Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -eps) throw ValidationError("density matrix not PSD");
    }
};

// Reduce a composite pure state to the subsystems listed in `keep` (ascending).
inline DensityMatrix partial_trace(const CompositeState& c, const std::vector<int>& keep) {
    const int parts = static_cast<int>(c.dims.size());
    long expect = 1;
    for (int d : c.dims) expect *= d;
    if (c.amps.size() != expect) throw ValidationError("composite vector length inconsistent with dims");
    std::vector<int> traced;
    for (int i = 0; i < parts; ++i)
        if (std::find(keep.begin(), keep.end(), i) == keep.end()) traced.push_back(i);
    for (int k : keep)
        if (k < 0 || k >= parts) throw ValidationError("keep index out of range");

    std::vector<long> stride(parts, 1);
    for (int i = parts - 2; i >= 0; --i) stride[i] = stride[i + 1] * c.dims[i + 1];
    long kd = 1, td = 1;
    for (int k : keep) kd *= c.dims[k];
    for (int t : traced) td *= c.dims[t];

    auto offset = [&](const std::vector<int>& subsys, long flat) {
        long off = 0;
        for (int s = static_cast<int>(subsys.size()) - 1; s >= 0; --s) {
            off += (flat % c.dims[subsys[s]]) * stride[subsys[s]];
            flat /= c.dims[subsys[s]];
        }
        return off;
    };

    Mat rho = Mat::Zero(kd, kd);
    for (long a = 0; a < kd; ++a)
        for (long b = 0; b < kd; ++b) {
            cd acc = 0.0;
            for (long t = 0; t < td; ++t) {
                const long ot = offset(traced, t);
                acc += c.amps(offset(keep, a) + ot) * std::conj(c.amps(offset(keep, b) + ot));
            }
            rho(a, b) = acc;
        }
    return {std::move(rho)};
}

inline double entanglement_entropy(const DensityMatrix& dm) {
    dm.validate();
    Eigen::SelfAdjointEigenSolver<Mat> es(dm.rho, Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam > 0.0) h -= lam * std::log(lam);
    }
    return h;
}

// Amplitudes of the composite on the spin-j block of the two-part coupled basis.
inline Vec block_amplitudes(const CGTable& table, const Vec& composite, HalfInt j) {
    return table.blocks.at(j.twice).adjoint() * composite;
}

struct OverlapPair {
    cd direct;
    cd reduced;
};

// <Psi| e^{-i theta n.J_total} |Psi> two ways: dense exponential on the composite, and
// the irrep reduction sum_j sum_m p^j_m e^{-im theta}. Two-part composites.
inline OverlapPair composite_overlap_reduction(const CompositeState& c, const CGTable& decomposition,
                                               const Axis& axis, double theta) {
    if (c.dims.size() != 2) throw ValidationError("reduction identity implemented for two parts");
    const Mat jn = detail::kron(angular_momentum_along(decomposition.j1, axis), Mat::Identity(c.dims[1], c.dims[1])) +
                   detail::kron(Mat::Identity(c.dims[0], c.dims[0]), angular_momentum_along(decomposition.j2, axis));
    Eigen::SelfAdjointEigenSolver<Mat> es(jn);
    Vec phases(jn.rows());
    for (int i = 0; i < jn.rows(); ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * theta);
    const Mat r = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    OverlapPair out;
    out.direct = c.amps.dot(r * c.amps);

    out.reduced = 0.0;
    for (const auto& [tj, block] : decomposition.blocks) {
        const HalfInt j{tj};
        const Vec b = block.adjoint() * c.amps;
        const Vec in_axis = eigenbasis_matrix(j, axis).adjoint() * b;
        for (int i = 0; i < in_axis.size(); ++i)
            out.reduced += std::norm(in_axis(i)) * std::polar(1.0, -m_of_index(j, i) * theta);
    }
    return out;
}

}  // namespace qprot

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "esd/complex_matrix.hpp"
#include "esd/errors.hpp"

namespace esd {

/// Eigenvalues of a square matrix, unordered on construction.
struct Spectrum {
    std::vector<Complex> values;

    std::vector<Complex> sorted_by_real_descending() const {
        std::vector<Complex> v = values;
        std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
            return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
        });
        return v;
    }

    Complex sum() const {
        return std::accumulate(values.begin(), values.end(), Complex{0.0, 0.0});
    }
};

namespace detail {

inline void householder_hessenberg(ComplexMatrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double colnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) colnorm += std::norm(h(i, k));
        colnorm = std::sqrt(colnorm);
        if (colnorm <= 0.0) continue;

        // v = x + e^{i arg(x0)} |x| e0, reflector P = I - 2 v v^dag / (v^dag v)
        std::vector<Complex> v(n - k - 1);
        for (std::size_t i = k + 1; i < n; ++i) v[i - k - 1] = h(i, k);
        const Complex x0 = v[0];
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0, 0.0};
        v[0] += phase * colnorm;
        double vnorm2 = 0.0;
        for (const Complex& c : v) vnorm2 += std::norm(c);
        if (vnorm2 <= 0.0) continue;

        // rows k+1..n-1: H <- P H
        for (std::size_t j = 0; j < n; ++j) {
            Complex dot{0.0, 0.0};
            for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i - k - 1]) * h(i, j);
            dot *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i - k - 1] * dot;
        }
        // cols k+1..n-1: H <- H P
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot{0.0, 0.0};
            for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j - k - 1];
            dot *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[j - k - 1]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{0.0, 0.0};
    }
}

inline std::pair<Complex, Complex> eig2x2(const Complex& a, const Complex& b, const Complex& c,
                                          const Complex& d) {
    const Complex half_tr = (a + d) * 0.5;
    const Complex disc = std::sqrt((a - d) * (a - d) * 0.25 + b * c);
    return {half_tr + disc, half_tr - disc};
}

} // namespace detail

/// All eigenvalues of a square complex matrix (Hessenberg reduction plus
/// shifted QR iteration with Givens rotations). Algebraic multiplicity is
/// respected; no eigenvectors. Throws NonSquare, and ConvergenceFailure if
/// the iteration cap is exceeded.
inline Spectrum eigenvalues(const ComplexMatrix& a) {
    if (!a.square()) throw NonSquare("eigenvalues: matrix not square");
    const std::size_t n = a.rows();
    Spectrum spec;
    spec.values.resize(n);
    if (n == 1) {
        spec.values[0] = a(0, 0);
        return spec;
    }

    ComplexMatrix h = a;
    detail::householder_hessenberg(h);

    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(h.max_abs(), 1e-300);
    int hi = static_cast<int>(n) - 1;
    int iters_on_block = 0;
    const int iter_cap_per_block = 60;

    while (hi >= 0) {
        if (hi == 0) {
            spec.values[0] = h(0, 0);
            break;
        }
        // deflate negligible subdiagonals, find the active block [lo..hi]
        int lo = hi;
        while (lo > 0) {
            double tol = eps * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo)));
            if (tol == 0.0) tol = eps * scale;
            if (std::abs(h(lo, lo - 1)) <= tol) {
                h(lo, lo - 1) = Complex{0.0, 0.0};
                break;
            }
            --lo;
        }
        if (lo == hi) {
            spec.values[hi] = h(hi, hi);
            --hi;
            iters_on_block = 0;
            continue;
        }
        if (lo == hi - 1) {
            auto [l1, l2] = detail::eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
            spec.values[hi] = l1;
            spec.values[lo] = l2;
            hi -= 2;
            iters_on_block = 0;
            continue;
        }

        if (++iters_on_block > iter_cap_per_block) {
            throw ConvergenceFailure("eigenvalues: QR iteration cap exceeded");
        }

        // Wilkinson shift: trailing-2x2 eigenvalue closest to h(hi,hi);
        // occasional ad hoc shift to break symmetric stalls.
        Complex mu;
        if (iters_on_block % 12 == 0 && iters_on_block > 0) {
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
        } else {
            auto [l1, l2] =
                detail::eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            mu = std::abs(l1 - h(hi, hi)) <= std::abs(l2 - h(hi, hi)) ? l1 : l2;
        }

        for (int k = lo; k <= hi; ++k) h(k, k) -= mu;

        // QR by Givens on the Hessenberg block, then RQ; block is decoupled
        // so updates can stay inside [lo..hi].
        std::vector<double> cs(static_cast<std::size_t>(hi - lo));
        std::vector<Complex> sn(static_cast<std::size_t>(hi - lo));
        for (int k = lo; k < hi; ++k) {
            const Complex x = h(k, k);
            const Complex y = h(k + 1, k);
            const double r = std::sqrt(std::norm(x) + std::norm(y));
            double c;
            Complex s;
            if (r <= 0.0) {
                c = 1.0;
                s = Complex{0.0, 0.0};
            } else if (std::abs(x) == 0.0) {
                c = 0.0;
                s = Complex{1.0, 0.0};
            } else {
                const Complex phase = x / std::abs(x);
                c = std::abs(x) / r;
                s = phase * std::conj(y) / r;
            }
            cs[static_cast<std::size_t>(k - lo)] = c;
            sn[static_cast<std::size_t>(k - lo)] = s;
            for (int j = k; j <= hi; ++j) {
                const Complex t1 = h(k, j);
                const Complex t2 = h(k + 1, j);
                h(k, j) = c * t1 + s * t2;
                h(k + 1, j) = -std::conj(s) * t1 + c * t2;
            }
        }
        for (int k = lo; k < hi; ++k) {
            const double c = cs[static_cast<std::size_t>(k - lo)];
            const Complex s = sn[static_cast<std::size_t>(k - lo)];
            const int top = std::min(k + 2, hi);
            for (int i = lo; i <= top; ++i) {
                const Complex t1 = h(i, k);
                const Complex t2 = h(i, k + 1);
                h(i, k) = c * t1 + std::conj(s) * t2;
                h(i, k + 1) = -s * t1 + c * t2;
            }
        }
        for (int k = lo; k <= hi; ++k) h(k, k) += mu;
    }
    return spec;
}

/// Eigenvalues (ascending) and an orthonormal eigenbasis (columns) of a
/// Hermitian matrix, by cyclic complex Jacobi rotations. Accurate for the
/// tiny dimensions used here and, unlike the QR path, returns vectors.
struct HermitianEigh {
    std::vector<double> values;
    ComplexMatrix vectors;
};

inline HermitianEigh hermitian_eigh(const ComplexMatrix& a, double hermiticity_tol = 1e-9) {
    if (!a.square()) throw NonSquare("hermitian_eigh: matrix not square");
    if (!is_hermitian(a, hermiticity_tol)) {
        throw InvalidParams("hermitian_eigh: matrix not Hermitian within tolerance");
    }
    const std::size_t n = a.rows();
    ComplexMatrix m = (a + dagger(a)) * Complex{0.5, 0.0};
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(m.max_abs(), 1e-300);
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double b = std::abs(m(p, q));
                if (b <= 1e-15 * scale) continue;
                rotated = true;
                const Complex phase = m(p, q) / b;
                const double alpha = m(p, p).real();
                const double delta = m(q, q).real();
                const double tau = (delta - alpha) / (2.0 * b);
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // combined rotation J = diag(phase,1) * [[c,s],[-s,c]] on (p,q)
                const Complex jpp = phase * c;
                const Complex jpq = phase * s;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex mk_p = m(k, p);
                    const Complex mk_q = m(k, q);
                    m(k, p) = mk_p * jpp + mk_q * (-s);
                    m(k, q) = mk_p * jpq + mk_q * c;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex mp_k = m(p, k);
                    const Complex mq_k = m(q, k);
                    m(p, k) = std::conj(jpp) * mp_k + (-s) * mq_k;
                    m(q, k) = std::conj(jpq) * mp_k + c * mq_k;
                }
                m(p, q) = Complex{0.0, 0.0};
                m(q, p) = Complex{0.0, 0.0};
                m(p, p) = Complex{m(p, p).real(), 0.0};
                m(q, q) = Complex{m(q, q).real(), 0.0};
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vk_p = v(k, p);
                    const Complex vk_q = v(k, q);
                    v(k, p) = vk_p * jpp + vk_q * (-s);
                    v(k, q) = vk_p * jpq + vk_q * c;
                }
            }
        }
        if (!rotated) break;
        if (sweep == max_sweeps - 1) {
            throw ConvergenceFailure("hermitian_eigh: Jacobi sweep cap exceeded");
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&m](std::size_t i, std::size_t j) { return m(i, i).real() < m(j, j).real(); });

    HermitianEigh out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = m(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

inline double min_eigenvalue_hermitian(const ComplexMatrix& a, double hermiticity_tol = 1e-9) {
    return hermitian_eigh(a, hermiticity_tol).values.front();
}

/// Singular values (descending) by one-sided Jacobi on the columns. Singular
/// values are perfectly conditioned, so even the tiny ones come out with
/// absolute accuracy near machine epsilon.
inline std::vector<double> singular_values(const ComplexMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    ComplexMatrix w = a;
    const double scale = std::max(w.max_abs(), 1e-300);

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                Complex apq{0.0, 0.0};
                for (std::size_t i = 0; i < m; ++i) {
                    app += std::norm(w(i, p));
                    aqq += std::norm(w(i, q));
                    apq += std::conj(w(i, p)) * w(i, q);
                }
                const double b = std::abs(apq);
                // negligible columns contribute nothing resolvable to sigma
                const double floor2 = 1e-18 * scale;
                if (app <= floor2 * floor2 || aqq <= floor2 * floor2) continue;
                if (b <= 1e-14 * std::sqrt(app * aqq)) continue;
                rotated = true;
                const Complex phase = apq / b;
                const double tau = (aqq - app) / (2.0 * b);
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex jpp = phase * c;
                const Complex jpq = phase * s;
                for (std::size_t i = 0; i < m; ++i) {
                    const Complex wip = w(i, p);
                    const Complex wiq = w(i, q);
                    w(i, p) = wip * jpp + wiq * (-s);
                    w(i, q) = wip * jpq + wiq * c;
                }
            }
        }
        if (!rotated) break;
        if (sweep == max_sweeps - 1) {
            throw ConvergenceFailure("singular_values: Jacobi sweep cap exceeded");
        }
    }

    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < m; ++i) col += std::norm(w(i, j));
        sv[j] = std::sqrt(col);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

} // namespace esd

#include "rci/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rci/errors.hpp"

namespace rci {

namespace {

constexpr int kMaxQrSweeps = 500;
constexpr int kMaxJacobiSweeps = 100;

void require_square(const RealMatrix& a, const char* who) {
    if (!a.is_square()) {
        throw DimensionError(std::string(who) + ": expected a square matrix, got " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()));
    }
}

void require_finite(const RealMatrix& a, const char* who) {
    if (!a.all_finite()) throw NumericError(std::string(who) + ": non-finite entry");
}

double sign_of(double mag, double s) { return s >= 0.0 ? std::abs(mag) : -std::abs(mag); }

// Householder reduction to upper Hessenberg form, in place.
void reduce_to_hessenberg(RealMatrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    Vec v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha += h(i, k) * h(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        alpha = -sign_of(alpha, h(k + 1, k));
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = h(i, k);
            if (i == k + 1) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;
        // H <- (I - 2 v v^T / |v|^2) H
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        // H <- H (I - 2 v v^T / |v|^2)
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
std::vector<std::complex<double>> hessenberg_qr(RealMatrix& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
    const double eps = std::numeric_limits<double>::epsilon();
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

    int nn = n - 1;
    double t = 0.0;
    double p = 0.0, q = 0.0, r = 0.0, s = 0.0, x = 0.0, y = 0.0, z = 0.0, ww = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l > 0; --l) {
                s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) <= eps * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            x = a(nn, nn);
            if (l == nn) {
                w[static_cast<std::size_t>(nn)] = x + t;
                --nn;
            } else {
                y = a(nn - 1, nn - 1);
                ww = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + ww;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        w[static_cast<std::size_t>(nn - 1)] = w[static_cast<std::size_t>(nn)] = x + z;
                        if (z != 0.0) w[static_cast<std::size_t>(nn)] = x - ww / z;
                    } else {
                        w[static_cast<std::size_t>(nn)] = {x + p, -z};
                        w[static_cast<std::size_t>(nn - 1)] = {x + p, z};
                    }
                    nn -= 2;
                } else {
                    if (its >= kMaxQrSweeps) throw NumericError("eigenvalues: QR iteration did not converge");
                    if (its > 0 && its % 10 == 0) {
                        // exceptional shift
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    for (; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                                        std::abs(a(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        a(i + 2, i) = 0.0;
                        if (i != m) a(i + 2, i - 1) = 0.0;
                    }
                    for (int k = m; k < nn; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k + 1 != nn) r = a(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k + 1 != nn) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k + 1 != nn) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l + 1 < nn);
    }
    return w;
}

} // namespace

SymmetricMatrix::SymmetricMatrix(RealMatrix m) : m_(std::move(m)) {
    require_square(m_, "SymmetricMatrix");
    const double tol = 1e-12 * (1.0 + m_.max_abs());
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = i + 1; j < m_.cols(); ++j)
            if (std::abs(m_(i, j) - m_(j, i)) > tol) throw NumericError("SymmetricMatrix: input is not symmetric");
}

SymmetricMatrix SymmetricMatrix::symmetrize(const RealMatrix& m) {
    require_square(m, "SymmetricMatrix::symmetrize");
    RealMatrix s = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) s(i, j) = s(j, i) = 0.5 * (m(i, j) + m(j, i));
    return SymmetricMatrix(std::move(s));
}

std::vector<std::complex<double>> eigenvalues(const RealMatrix& a) {
    require_square(a, "eigenvalues");
    require_finite(a, "eigenvalues");
    if (a.rows() == 1) return {a(0, 0)};
    RealMatrix h = a;
    reduce_to_hessenberg(h);
    auto w = hessenberg_qr(h);
    for (const auto& z : w)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericError("eigenvalues: non-finite result");
    return w;
}

std::vector<double> eig_real_parts(const RealMatrix& a) {
    const auto w = eigenvalues(a);
    std::vector<double> re;
    re.reserve(w.size());
    for (const auto& z : w) re.push_back(z.real());
    std::sort(re.begin(), re.end(), std::greater<>());
    return re;
}

double spectral_abscissa(const RealMatrix& a) { return eig_real_parts(a).front(); }

bool is_hurwitz(const RealMatrix& a, double margin) {
    if (!(margin >= 0.0)) throw ParameterError("is_hurwitz: margin must be >= 0");
    return spectral_abscissa(a) < -margin;
}

std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& s) {
    RealMatrix a = s.matrix();
    require_finite(a, "symmetric_eigenvalues");
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        double off = 0.0, diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diag += a(i, i) * a(i, i);
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (off <= 1e-32 * (diag + off) || off == 0.0) {
            std::vector<double> ev(n);
            for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
            std::sort(ev.begin(), ev.end());
            return ev;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = sign_of(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }
    throw NumericError("symmetric_eigenvalues: Jacobi sweeps did not converge");
}

double lambda_max(const SymmetricMatrix& s) { return symmetric_eigenvalues(s).back(); }
double lambda_min(const SymmetricMatrix& s) { return symmetric_eigenvalues(s).front(); }

bool is_positive_definite(const SymmetricMatrix& s) {
    const auto ev = symmetric_eigenvalues(s);
    return ev.front() > 1e-10 * (1.0 + ev.back());
}

std::vector<double> singular_values(const RealMatrix& in) {
    require_finite(in, "singular_values");
    // One-sided Jacobi on the columns; use the transpose when wide.
    RealMatrix a = in.rows() >= in.cols() ? in : in.transpose();
    const std::size_t m = a.rows(), n = a.cols();
    const double eps = std::numeric_limits<double>::epsilon();
    bool rotated = true;
    for (int sweep = 0; sweep < kMaxJacobiSweeps && rotated; ++sweep) {
        rotated = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    alpha += a(k, i) * a(k, i);
                    beta += a(k, j) * a(k, j);
                    gamma += a(k, i) * a(k, j);
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = sign_of(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < m; ++k) {
                    const double ai = a(k, i), aj = a(k, j);
                    a(k, i) = c * ai - s * aj;
                    a(k, j) = s * ai + c * aj;
                }
            }
        }
    }
    if (rotated) throw NumericError("singular_values: Jacobi sweeps did not converge");
    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += a(k, j) * a(k, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

double spectral_norm(const RealMatrix& a) { return singular_values(a).front(); }

double min_singular_value(const RealMatrix& a) {
    require_square(a, "min_singular_value");
    return singular_values(a).back();
}

double condition_number(const SymmetricMatrix& q) {
    const auto ev = symmetric_eigenvalues(q);
    if (!(ev.front() > 1e-10 * (1.0 + ev.back()))) {
        throw DefinitenessError("condition_number: matrix is not positive definite (lambda_min = " +
                                std::to_string(ev.front()) + ")");
    }
    return ev.back() / ev.front();
}

Vec lu_solve(const RealMatrix& a_in, std::span<const double> b) {
    require_square(a_in, "lu_solve");
    if (b.size() != a_in.rows()) throw DimensionError("lu_solve: right-hand side size mismatch");
    RealMatrix a = a_in;
    Vec x(b.begin(), b.end());
    const std::size_t n = a.rows();
    const double scale = std::max(a.max_abs(), std::numeric_limits<double>::min());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) <= 1e-14 * scale) throw NumericError("lu_solve: matrix is singular to working precision");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(x[k], x[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            x[i] -= f * x[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double s = x[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

RealMatrix inverse(const RealMatrix& a) {
    require_square(a, "inverse");
    const std::size_t n = a.rows();
    RealMatrix inv(n, n);
    Vec e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        const Vec col = lu_solve(a, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

SymmetricMatrix solve_lyapunov(const RealMatrix& a, const SymmetricMatrix& c) {
    require_square(a, "solve_lyapunov");
    require_finite(a, "solve_lyapunov");
    const std::size_t n = a.rows();
    if (c.dim() != n) throw DimensionError("solve_lyapunov: A and C dimensions differ");
    if (!is_hurwitz(a, 0.0)) throw StabilityError("solve_lyapunov: A is not Hurwitz");
    const auto cev = symmetric_eigenvalues(c);
    if (cev.front() < -1e-12 * (1.0 + std::abs(cev.back())))
        throw DefinitenessError("solve_lyapunov: C is not positive semidefinite");

    // Column-major vec: index(i, j) = i + j n.
    const std::size_t nn = n * n;
    RealMatrix kron(nn, nn);
    Vec rhs(nn);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = i + j * n;
            rhs[row] = -c(i, j);
            // (I (x) A^T): couples Q(k, j) with weight A(k, i)
            for (std::size_t k = 0; k < n; ++k) kron(row, k + j * n) += a(k, i);
            // (A^T (x) I): couples Q(i, l) with weight A(l, j)
            for (std::size_t l = 0; l < n; ++l) kron(row, i + l * n) += a(l, j);
        }
    }
    Vec vq;
    try {
        vq = lu_solve(kron, rhs);
    } catch (const NumericError&) {
        throw StabilityError("solve_lyapunov: vectorized system is singular");
    }
    RealMatrix q(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) q(i, j) = vq[i + j * n];
    if (!q.all_finite()) throw NumericError("solve_lyapunov: non-finite solution");
    auto qs = SymmetricMatrix::symmetrize(q);
    if (cev.front() > 1e-10 * (1.0 + cev.back()) && !is_positive_definite(qs))
        throw StabilityError("solve_lyapunov: solution is indefinite");
    return qs;
}

double lyapunov_residual(const RealMatrix& a, const SymmetricMatrix& q, const SymmetricMatrix& c) {
    const RealMatrix r = a.transpose() * q.matrix() + q.matrix() * a + c.matrix();
    return spectral_norm(r);
}

} // namespace rci

#include "qp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {

double kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    double sq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        sq += d * d;
    }
    return std::exp(-gamma * sq);
}

struct Problem {
    std::size_t n = 0;
    double C = 0.0;
    double eps = 0.0;
    std::vector<double> gram;  // n x n
    std::vector<double> y;

    // u holds (alpha[0..n), alpha*[0..n)); constraint vector a is (+1.., -1..).
    double sign(std::size_t k) const { return k < n ? 1.0 : -1.0; }

    std::vector<double> beta_of(const std::vector<double>& u) const {
        std::vector<double> beta(n);
        for (std::size_t i = 0; i < n; ++i) beta[i] = u[i] - u[n + i];
        return beta;
    }

    double value(const std::vector<double>& u) const {
        const std::vector<double> beta = beta_of(u);
        double quad = 0.0, lin = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double kb = 0.0;
            for (std::size_t j = 0; j < n; ++j) kb += gram[i * n + j] * beta[j];
            quad += beta[i] * kb;
            lin += eps * (u[i] + u[n + i]) - y[i] * beta[i];
        }
        return 0.5 * quad + lin;
    }

    std::vector<double> gradient(const std::vector<double>& u) const {
        const std::vector<double> beta = beta_of(u);
        std::vector<double> g(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            double kb = 0.0;
            for (std::size_t j = 0; j < n; ++j) kb += gram[i * n + j] * beta[j];
            g[i] = kb + eps - y[i];
            g[n + i] = -kb + eps + y[i];
        }
        return g;
    }
};

// Exact projection onto {0 <= u <= C, sum(a) - sum(a*) = 0} by bisecting the
// hyperplane multiplier; the constraint residual is monotone in lambda.
std::vector<double> project(const Problem& p, const std::vector<double>& z) {
    const auto clipped = [&](double lambda, std::vector<double>* out) {
        double h = 0.0;
        for (std::size_t k = 0; k < 2 * p.n; ++k) {
            const double v = std::clamp(z[k] - lambda * p.sign(k), 0.0, p.C);
            if (out) (*out)[k] = v;
            h += p.sign(k) * v;
        }
        return h;
    };
    double zmax = 0.0;
    for (double v : z) zmax = std::max(zmax, std::abs(v));
    double lo = -(zmax + p.C + 1.0), hi = zmax + p.C + 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double h = clipped(mid, nullptr);
        if (h > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15 * (1.0 + std::abs(mid))) break;
    }
    std::vector<double> out(2 * p.n);
    clipped(0.5 * (lo + hi), &out);
    return out;
}

// Dense symmetric-indefinite solve (partial pivoting) for the polish system.
bool solve_linear(std::vector<double> A, std::vector<double> b, std::size_t m,
                  std::vector<double>* x) {
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        double best = std::abs(A[perm[col] * m + col]);
        for (std::size_t r = col + 1; r < m; ++r) {
            const double v = std::abs(A[perm[r] * m + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best < 1e-13) return false;
        std::swap(perm[col], perm[pivot]);
        const double diag = A[perm[col] * m + col];
        for (std::size_t r = col + 1; r < m; ++r) {
            const double f = A[perm[r] * m + col] / diag;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < m; ++c) A[perm[r] * m + c] -= f * A[perm[col] * m + c];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    x->assign(m, 0.0);
    for (std::size_t ri = m; ri-- > 0;) {
        double acc = b[perm[ri]];
        for (std::size_t c = ri + 1; c < m; ++c) acc -= A[perm[ri] * m + c] * (*x)[c];
        (*x)[ri] = acc / A[perm[ri] * m + ri];
    }
    return true;
}

// Freeze near-bound coordinates, solve the equality-constrained QP on the
// free set exactly, then accept only if the full KKT system checks out.
bool try_polish(const Problem& p, const std::vector<double>& u_in,
                std::vector<double>* u_out, double* bias_out) {
    const std::size_t m = 2 * p.n;
    const double margin = 1e-7 * std::max(1.0, p.C);
    std::vector<int> state(m);  // 0 = at zero, 1 = free, 2 = at C
    std::vector<std::size_t> free_idx;
    for (std::size_t k = 0; k < m; ++k) {
        if (u_in[k] <= margin) {
            state[k] = 0;
        } else if (u_in[k] >= p.C - margin) {
            state[k] = 2;
        } else {
            state[k] = 1;
            free_idx.push_back(k);
        }
    }

    // Build Q u + q restricted to the free set; Q = [[K,-K],[-K,K]],
    // q = (eps - y, eps + y).
    const auto Q = [&](std::size_t r, std::size_t c) {
        const double v = p.gram[(r % p.n) * p.n + (c % p.n)];
        return p.sign(r) * p.sign(c) * v;
    };
    const auto q = [&](std::size_t k) {
        return k < p.n ? p.eps - p.y[k] : p.eps + p.y[k - p.n];
    };

    const std::size_t nf = free_idx.size();
    std::vector<double> u = u_in;
    for (std::size_t k = 0; k < m; ++k) {
        if (state[k] == 0) u[k] = 0.0;
        if (state[k] == 2) u[k] = p.C;
    }
    double nu = 0.0;
    if (nf > 0) {
        const std::size_t dim = nf + 1;
        std::vector<double> A(dim * dim, 0.0), rhs(dim, 0.0), sol;
        for (std::size_t r = 0; r < nf; ++r) {
            for (std::size_t c = 0; c < nf; ++c) A[r * dim + c] = Q(free_idx[r], free_idx[c]);
            A[r * dim + r] += 1e-12;  // ridge: K can be singular
            A[r * dim + nf] = p.sign(free_idx[r]);
            A[nf * dim + r] = p.sign(free_idx[r]);
            double acc = -q(free_idx[r]);
            for (std::size_t k = 0; k < m; ++k) {
                if (state[k] == 2) acc -= Q(free_idx[r], k) * p.C;
            }
            rhs[r] = acc;
        }
        double fixed_sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (state[k] == 2) fixed_sum += p.sign(k) * p.C;
        }
        rhs[nf] = -fixed_sum;
        if (!solve_linear(std::move(A), std::move(rhs), dim, &sol)) return false;
        for (std::size_t r = 0; r < nf; ++r) u[free_idx[r]] = sol[r];
        nu = sol[nf];
    } else {
        // No free coordinates: nu is only constrained by inequalities below;
        // pick the midpoint of the feasible interval.
        const std::vector<double> g = p.gradient(u);
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < m; ++k) {
            // At zero: g + nu*sign >= 0. At C: g + nu*sign <= 0.
            if (state[k] == 0) {
                if (p.sign(k) > 0) lo = std::max(lo, -g[k]);
                else hi = std::min(hi, g[k]);
            } else {
                if (p.sign(k) > 0) hi = std::min(hi, -g[k]);
                else lo = std::max(lo, g[k]);
            }
        }
        if (lo > hi) return false;
        nu = 0.5 * (lo + hi);
        if (!std::isfinite(nu)) nu = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
    }

    const double tol = 1e-8 * std::max(1.0, p.C);
    double feas = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        if (u[k] < -tol || u[k] > p.C + tol) return false;
        u[k] = std::clamp(u[k], 0.0, p.C);
        feas += p.sign(k) * u[k];
    }
    if (std::abs(feas) > 1e-8) return false;
    const std::vector<double> g = p.gradient(u);
    for (std::size_t k = 0; k < m; ++k) {
        const double stat = g[k] + nu * p.sign(k);
        if (state[k] == 1 && std::abs(stat) > tol) return false;
        if (state[k] == 0 && stat < -tol) return false;
        if (state[k] == 2 && stat > tol) return false;
    }
    *u_out = u;
    *bias_out = nu;
    return true;
}

double bias_from_intervals(const Problem& p, const std::vector<double>& beta) {
    // Independent midpoint-of-feasible-interval rule on the beta form.
    double gup = std::numeric_limits<double>::infinity();
    double gdn = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.n; ++i) {
        double kb = 0.0;
        for (std::size_t j = 0; j < p.n; ++j) kb += p.gram[i * p.n + j] * beta[j];
        const double g0 = kb - p.y[i];
        if (beta[i] < p.C) gup = std::min(gup, g0 + (beta[i] >= 0.0 ? p.eps : -p.eps));
        if (beta[i] > -p.C) gdn = std::max(gdn, g0 + (beta[i] > 0.0 ? p.eps : -p.eps));
    }
    return -0.5 * (gup + gdn);
}

}  // namespace

Solution solve_epsilon_svr_dual(const std::vector<jamcast::EncodedSample>& samples,
                                const jamcast::SvrHyperparams& hp) {
    Problem p;
    p.n = samples.size();
    if (p.n == 0) throw std::invalid_argument("oracle: empty sample set");
    p.C = hp.C;
    p.eps = hp.epsilon;
    p.y.resize(p.n);
    p.gram.resize(p.n * p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
        p.y[i] = samples[i].target;
        for (std::size_t j = 0; j < p.n; ++j) {
            p.gram[i * p.n + j] =
                kernel(samples[i].features, samples[j].features, hp.gamma);
        }
    }

    // Lipschitz constant of the gradient: 2 * lambda_max(K) (power iteration).
    std::vector<double> v(p.n, 1.0), kv(p.n);
    double lam = 1.0;
    for (int it = 0; it < 60; ++it) {
        for (std::size_t i = 0; i < p.n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < p.n; ++j) acc += p.gram[i * p.n + j] * v[j];
            kv[i] = acc;
        }
        double norm = 0.0;
        for (double x : kv) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-300) break;
        lam = norm;
        for (std::size_t i = 0; i < p.n; ++i) v[i] = kv[i] / norm;
    }
    const double L = 2.0 * lam * 1.05 + 1e-9;

    const std::size_t m = 2 * p.n;
    std::vector<double> x(m, 0.0), yk(m, 0.0);
    double fx = p.value(x);
    double t = 1.0;
    Solution sol;
    constexpr std::size_t kMaxIter = 200000;
    for (std::size_t iter = 1; iter <= kMaxIter; ++iter) {
        sol.iterations = iter;
        std::vector<double> g = p.gradient(yk);
        std::vector<double> z(m);
        for (std::size_t k = 0; k < m; ++k) z[k] = yk[k] - g[k] / L;
        std::vector<double> x_new = project(p, z);
        double f_new = p.value(x_new);
        if (f_new > fx) {
            // Restart momentum from the last monotone iterate.
            t = 1.0;
            yk = x;
            g = p.gradient(yk);
            for (std::size_t k = 0; k < m; ++k) z[k] = yk[k] - g[k] / L;
            x_new = project(p, z);
            f_new = p.value(x_new);
        }
        const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        double step = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double d = x_new[k] - x[k];
            step = std::max(step, std::abs(d));
            yk[k] = x_new[k] + (t - 1.0) / t_new * d;
        }
        x = std::move(x_new);
        fx = f_new;
        t = t_new;

        const bool settled = step < 1e-12 * std::max(1.0, p.C);
        if (iter % 250 == 0 || settled || iter == kMaxIter) {
            std::vector<double> u_pol;
            double bias = 0.0;
            if (try_polish(p, x, &u_pol, &bias)) {
                sol.beta = p.beta_of(u_pol);
                sol.bias = bias;
                sol.objective = -p.value(u_pol);
                sol.polished = true;
                return sol;
            }
            if (settled) break;
        }
    }

    sol.beta = p.beta_of(x);
    sol.bias = bias_from_intervals(p, sol.beta);
    sol.objective = -fx;
    sol.polished = false;
    return sol;
}

double predict(const std::vector<jamcast::EncodedSample>& samples, const Solution& sol,
               std::span<const double> x, double gamma) {
    double acc = sol.bias;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (sol.beta[i] == 0.0) continue;
        acc += sol.beta[i] * kernel(samples[i].features, x, gamma);
    }
    return acc;
}

}  // namespace oracle

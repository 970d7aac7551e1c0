#include "jamcast/svr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "jamcast/errors.hpp"
#include "jamcast/numio.hpp"

namespace jamcast {

void validate_hyperparams(const SvrHyperparams& hp) {
    if (!(hp.C > 0.0) || !std::isfinite(hp.C)) {
        throw ValidationError("hyperparam C must be > 0");
    }
    if (!(hp.epsilon >= 0.0) || !std::isfinite(hp.epsilon)) {
        throw ValidationError("hyperparam epsilon must be >= 0");
    }
    if (!(hp.gamma > 0.0) || !std::isfinite(hp.gamma)) {
        throw ValidationError("hyperparam gamma must be > 0");
    }
    if (!(hp.tol > 0.0) || !std::isfinite(hp.tol)) {
        throw ValidationError("hyperparam tol must be > 0");
    }
    if (hp.max_passes <= 0) {
        throw ValidationError("hyperparam max_passes must be positive");
    }
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size()) {
        throw ShapeError("rbf_kernel: dimension mismatch");
    }
    if (!(gamma > 0.0)) {
        throw DomainError("rbf_kernel: gamma must be > 0");
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        sq += d * d;
    }
    return std::exp(-gamma * sq);
}

namespace {

constexpr double kSvThreshold = 1e-12;  // |beta| above this is a support vector

void check_training_input(const std::vector<EncodedSample>& samples) {
    if (samples.size() < 2) {
        throw InsufficientDataError("train_svr needs at least 2 samples");
    }
    const std::size_t dim = samples.front().features.size();
    if (dim == 0) throw InsufficientDataError("train_svr: zero-dimensional features");
    for (const auto& s : samples) {
        if (s.features.size() != dim) {
            throw ShapeError("train_svr: inconsistent feature dimensions");
        }
        if (!std::isfinite(s.target)) {
            throw ValidationError("train_svr: non-finite target");
        }
        for (double v : s.features) {
            if (!std::isfinite(v)) {
                throw ValidationError("train_svr: non-finite feature");
            }
        }
    }
}

// Dense Gram matrix; n stays small enough here (<= a few thousand rows).
std::vector<double> gram_matrix(const std::vector<EncodedSample>& samples, double gamma) {
    const std::size_t n = samples.size();
    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        gram[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = rbf_kernel(samples[i].features, samples[j].features, gamma);
            gram[i * n + j] = k;
            gram[j * n + i] = k;
        }
    }
    return gram;
}

double objective_from_scratch(const std::vector<double>& gram,
                              const std::vector<EncodedSample>& samples,
                              double epsilon, const std::vector<double>& beta) {
    const std::size_t n = beta.size();
    double quad = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (beta[i] == 0.0) continue;
        const double* row = gram.data() + i * n;
        double kb = 0.0;
        for (std::size_t j = 0; j < n; ++j) kb += row[j] * beta[j];
        quad += beta[i] * kb;
        lin += beta[i] * samples[i].target - epsilon * std::abs(beta[i]);
    }
    return -0.5 * quad + lin;
}

struct WorkingPair {
    int up = -1;      // argmin of the increase-direction derivative
    int down = -1;    // argmax of the decrease-direction derivative
    double gap = 0.0; // violation: g_down - g_up
};

// One-sided KKT scan over the cached smooth gradient (K beta - y).
WorkingPair select_pair(const std::vector<double>& beta, const std::vector<double>& grad0,
                        double C, double epsilon) {
    WorkingPair wp;
    double gup_min = std::numeric_limits<double>::infinity();
    double gdn_max = -std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(beta.size());
    for (int i = 0; i < n; ++i) {
        if (beta[i] < C) {
            const double g = grad0[i] + (beta[i] >= 0.0 ? epsilon : -epsilon);
            if (g < gup_min) {
                gup_min = g;
                wp.up = i;
            }
        }
        if (beta[i] > -C) {
            const double g = grad0[i] + (beta[i] > 0.0 ? epsilon : -epsilon);
            if (g > gdn_max) {
                gdn_max = g;
                wp.down = i;
            }
        }
    }
    wp.gap = gdn_max - gup_min;
    return wp;
}

// Exact minimizer of the piecewise-quadratic 1-D subproblem in delta, where
// beta_i += delta and beta_j -= delta. Kinks sit where either coefficient
// crosses zero; each segment is a convex parabola (eta >= 0 for RBF).
double solve_pair_step(double bi, double bj, double g0i, double g0j, double eta,
                       double C, double epsilon, double* improvement) {
    const double lo = std::max(-C - bi, bj - C);
    const double hi = std::min(C - bi, bj + C);
    const auto cost = [&](double d) {
        return 0.5 * eta * d * d + d * (g0i - g0j) +
               epsilon * (std::abs(bi + d) - std::abs(bi)) +
               epsilon * (std::abs(bj - d) - std::abs(bj));
    };

    double knots[4] = {lo, hi, hi, hi};
    int nk = 2;
    if (-bi > lo && -bi < hi) knots[nk++] = -bi;
    if (bj > lo && bj < hi) knots[nk++] = bj;
    std::sort(knots, knots + nk);

    double best_d = 0.0;
    double best_c = 0.0;  // delta = 0 is always feasible
    const auto consider = [&](double d) {
        const double c = cost(d);
        if (c < best_c) {
            best_c = c;
            best_d = d;
        }
    };
    for (int k = 0; k < nk; ++k) consider(knots[k]);
    for (int k = 0; k + 1 < nk; ++k) {
        const double a = knots[k], b = knots[k + 1];
        if (!(b > a)) continue;
        const double m = 0.5 * (a + b);
        const double si = (bi + m) >= 0.0 ? 1.0 : -1.0;
        const double sj = (bj - m) > 0.0 ? 1.0 : -1.0;
        if (eta > 1e-300) {
            const double d = -(g0i - g0j + epsilon * (si - sj)) / eta;
            if (d > a && d < b) consider(d);
        }
    }
    *improvement = -best_c;
    return best_d;
}

}  // namespace

SvrModel train_svr(const std::vector<EncodedSample>& samples, const SvrHyperparams& hp,
                   std::uint64_t seed, TrainingTrace* trace) {
    (void)seed;  // selection is deterministic; kept for interface stability
    validate_hyperparams(hp);
    check_training_input(samples);

    const int n = static_cast<int>(samples.size());
    const std::vector<double> gram = gram_matrix(samples, hp.gamma);

    std::vector<double> beta(n, 0.0);
    std::vector<double> grad0(n);  // (K beta)_i - y_i, bias excluded
    for (int i = 0; i < n; ++i) grad0[i] = -samples[i].target;

    const std::int64_t max_updates =
        static_cast<std::int64_t>(hp.max_passes) * static_cast<std::int64_t>(n);
    std::int64_t updates = 0;
    double best_violation = std::numeric_limits<double>::infinity();

    WorkingPair wp = select_pair(beta, grad0, hp.C, hp.epsilon);
    while (wp.gap > hp.tol) {
        best_violation = std::min(best_violation, wp.gap);
        if (updates >= max_updates) {
            throw ConvergenceError(
                "train_svr: no convergence after " + std::to_string(updates) +
                    " pair updates (best KKT violation " + format_double(best_violation) + ")",
                best_violation);
        }
        const int i = wp.up, j = wp.down;
        const double eta = gram[i * n + i] + gram[j * n + j] - 2.0 * gram[i * n + j];
        double improvement = 0.0;
        const double delta = solve_pair_step(beta[i], beta[j], grad0[i], grad0[j], eta,
                                             hp.C, hp.epsilon, &improvement);
        if (!(improvement > 0.0)) {
            throw ConvergenceError(
                "train_svr: numeric stall at KKT violation " + format_double(wp.gap),
                std::min(best_violation, wp.gap));
        }
        beta[i] += delta;
        beta[j] -= delta;
        const double* col_i = gram.data() + static_cast<std::size_t>(i) * n;
        const double* col_j = gram.data() + static_cast<std::size_t>(j) * n;
        for (int k = 0; k < n; ++k) grad0[k] += delta * (col_i[k] - col_j[k]);
        ++updates;
        if (updates % 8192 == 0) {
            // Periodic refresh bounds drift from the incremental updates.
            for (int k = 0; k < n; ++k) {
                const double* row = gram.data() + static_cast<std::size_t>(k) * n;
                double kb = 0.0;
                for (int l = 0; l < n; ++l) kb += row[l] * beta[l];
                grad0[k] = kb - samples[k].target;
            }
        }
        if (trace) {
            trace->dual_objectives.push_back(
                objective_from_scratch(gram, samples, hp.epsilon, beta));
        }
        wp = select_pair(beta, grad0, hp.C, hp.epsilon);
    }

    // Bias from the midpoint of the feasible multiplier interval.
    double gup_min = std::numeric_limits<double>::infinity();
    double gdn_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if (beta[i] < hp.C) {
            gup_min = std::min(gup_min, grad0[i] + (beta[i] >= 0.0 ? hp.epsilon : -hp.epsilon));
        }
        if (beta[i] > -hp.C) {
            gdn_max = std::max(gdn_max, grad0[i] + (beta[i] > 0.0 ? hp.epsilon : -hp.epsilon));
        }
    }

    SvrModel model;
    model.bias = -0.5 * (gup_min + gdn_max);
    model.hyperparams = hp;
    model.scaler = identity_scaler(static_cast<int>(samples.front().features.size()));
    model.feature_layout_tag = kFeatureLayoutTag;
    for (int i = 0; i < n; ++i) {
        if (std::abs(beta[i]) > kSvThreshold) {
            model.support_vectors.push_back(samples[i].features);
            model.support_vector_indices.push_back(i);
            model.dual_coefs.push_back(beta[i]);
        }
    }
    if (trace) {
        trace->dual_coefs = beta;
        trace->pair_updates = static_cast<std::size_t>(updates);
        trace->final_violation = wp.gap;
    }
    return model;
}

double predict(const SvrModel& model, std::span<const double> x) {
    const std::size_t dim =
        model.support_vectors.empty() ? model.scaler.mean.size()
                                      : model.support_vectors.front().size();
    if (dim != 0 && x.size() != dim) {
        throw ShapeError("predict: feature dimension does not match model");
    }
    double acc = model.bias;
    for (std::size_t k = 0; k < model.support_vectors.size(); ++k) {
        acc += model.dual_coefs[k] *
               rbf_kernel(model.support_vectors[k], x, model.hyperparams.gamma);
    }
    return acc;
}

double dual_objective(const std::vector<EncodedSample>& samples,
                      const SvrHyperparams& hp, const std::vector<double>& dual_coefs) {
    validate_hyperparams(hp);
    if (samples.size() != dual_coefs.size() || samples.empty()) {
        throw ShapeError("dual_objective: coefficient count must match sample count");
    }
    double sum = 0.0;
    for (double b : dual_coefs) {
        if (!std::isfinite(b)) throw ValidationError("dual_objective: non-finite coefficient");
        if (std::abs(b) > hp.C + 1e-12) {
            throw ValidationError("dual_objective: |coef| exceeds C");
        }
        sum += b;
    }
    if (std::abs(sum) > 1e-9) {
        throw ValidationError("dual_objective: coefficients must sum to 0 within 1e-9");
    }
    const std::size_t n = samples.size();
    double quad = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (dual_coefs[i] == 0.0) continue;
        double kb = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (dual_coefs[j] == 0.0) continue;
            kb += dual_coefs[j] *
                  rbf_kernel(samples[i].features, samples[j].features, hp.gamma);
        }
        quad += dual_coefs[i] * kb;
        lin += dual_coefs[i] * samples[i].target - hp.epsilon * std::abs(dual_coefs[i]);
    }
    return -0.5 * quad + lin;
}

double kkt_violation(const SvrModel& model, const std::vector<EncodedSample>& samples) {
    const std::size_t n = samples.size();
    if (n == 0) throw ShapeError("kkt_violation: empty sample set");
    std::vector<double> beta(n, 0.0);
    for (std::size_t k = 0; k < model.support_vector_indices.size(); ++k) {
        const std::int64_t idx = model.support_vector_indices[k];
        if (idx < 0 || static_cast<std::size_t>(idx) >= n) {
            throw ShapeError("kkt_violation: support vector index outside sample set");
        }
        beta[static_cast<std::size_t>(idx)] += model.dual_coefs[k];
    }
    const double C = model.hyperparams.C;
    const double eps = model.hyperparams.epsilon;
    const double bound_eps = 1e-12 * std::max(1.0, C);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = samples[i].target - predict(model, samples[i].features);
        const double b = beta[i];
        double v;
        if (std::abs(b) <= bound_eps) {
            v = std::max(0.0, std::abs(r) - eps);   // inside or on the tube
        } else if (b >= C - bound_eps) {
            v = std::max(0.0, eps - r);             // at upper bound: r >= eps
        } else if (b <= -C + bound_eps) {
            v = std::max(0.0, r + eps);             // at lower bound: r <= -eps
        } else if (b > 0.0) {
            v = std::abs(r - eps);                  // free: exactly on tube edge
        } else {
            v = std::abs(r + eps);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

// --- serialization ----------------------------------------------------------

namespace {

constexpr const char* kModelMagic = "jamcast-svr v1";

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string expect_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(std::string("model file: unexpected end of file, expected ") + what);
    }
    return line;
}

std::vector<double> parse_vector(const std::vector<std::string>& toks, std::size_t from,
                                 std::size_t count, const char* what) {
    if (toks.size() != from + count) {
        throw ParseError(std::string("model file: wrong field count in ") + what);
    }
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = parse_double(toks[from + k]);
    return out;
}

}  // namespace

void save_model(const SvrModel& model, std::ostream& out) {
    out << kModelMagic << '\n';
    out << "feature_layout " << model.feature_layout_tag << '\n';
    out << "c " << format_double(model.hyperparams.C) << '\n';
    out << "epsilon " << format_double(model.hyperparams.epsilon) << '\n';
    out << "gamma " << format_double(model.hyperparams.gamma) << '\n';
    out << "tol " << format_double(model.hyperparams.tol) << '\n';
    out << "max_passes " << model.hyperparams.max_passes << '\n';
    out << "bias " << format_double(model.bias) << '\n';
    out << "dim " << model.scaler.mean.size() << '\n';
    out << "scaler_mean";
    for (double v : model.scaler.mean) out << ' ' << format_double(v);
    out << '\n';
    out << "scaler_scale";
    for (double v : model.scaler.scale) out << ' ' << format_double(v);
    out << '\n';
    out << "support_vectors " << model.support_vectors.size() << '\n';
    for (std::size_t k = 0; k < model.support_vectors.size(); ++k) {
        out << "sv " << model.support_vector_indices[k] << ' '
            << format_double(model.dual_coefs[k]);
        for (double v : model.support_vectors[k]) out << ' ' << format_double(v);
        out << '\n';
    }
    out << "end\n";
}

SvrModel load_model(std::istream& in) {
    if (expect_line(in, "magic header") != kModelMagic) {
        throw ParseError("model file: bad magic header");
    }
    SvrModel model;
    const auto header = [&](const char* key) {
        auto toks = split_ws(expect_line(in, key));
        if (toks.size() < 2 || toks[0] != key) {
            throw ParseError(std::string("model file: expected field '") + key + "'");
        }
        return toks;
    };
    model.feature_layout_tag = header("feature_layout")[1];
    model.hyperparams.C = parse_double(header("c")[1]);
    model.hyperparams.epsilon = parse_double(header("epsilon")[1]);
    model.hyperparams.gamma = parse_double(header("gamma")[1]);
    model.hyperparams.tol = parse_double(header("tol")[1]);
    model.hyperparams.max_passes = static_cast<int>(parse_int64(header("max_passes")[1]));
    model.bias = parse_double(header("bias")[1]);
    const auto dim = static_cast<std::size_t>(parse_int64(header("dim")[1]));
    model.scaler.mean = parse_vector(header("scaler_mean"), 1, dim, "scaler_mean");
    model.scaler.scale = parse_vector(header("scaler_scale"), 1, dim, "scaler_scale");
    const auto n_sv = static_cast<std::size_t>(parse_int64(header("support_vectors")[1]));
    for (std::size_t k = 0; k < n_sv; ++k) {
        auto toks = split_ws(expect_line(in, "sv line"));
        if (toks.size() != 3 + dim || toks[0] != "sv") {
            throw ParseError("model file: malformed sv line " + std::to_string(k));
        }
        model.support_vector_indices.push_back(parse_int64(toks[1]));
        model.dual_coefs.push_back(parse_double(toks[2]));
        model.support_vectors.push_back(parse_vector(toks, 3, dim, "sv line"));
    }
    if (expect_line(in, "end marker") != "end") {
        throw ParseError("model file: missing end marker");
    }
    validate_hyperparams(model.hyperparams);
    return model;
}

std::string model_to_string(const SvrModel& model) {
    std::ostringstream out;
    save_model(model, out);
    return out.str();
}

void save_model_file(const SvrModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open model file for writing: " + path);
    save_model(model, out);
    if (!out) throw Error("failed writing model file: " + path);
}

SvrModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path);
    return load_model(in);
}

}  // namespace jamcast

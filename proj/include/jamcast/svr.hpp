#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jamcast/featureset.hpp"

namespace jamcast {

struct SvrHyperparams {
    double C = 10.0;                       // box constraint, > 0
    double epsilon = 0.1;                  // insensitive-tube half-width, >= 0
    double gamma = 1.0 / kFeatureDim;      // RBF width, > 0
    double tol = 1e-3;                     // KKT tolerance, > 0
    int max_passes = 1000;                 // budget: max_passes * n pair updates
};

void validate_hyperparams(const SvrHyperparams& hp);

// Trained epsilon-SVR. dual_coefs[k] is beta_i = alpha_i - alpha_i* for the
// training sample at support_vector_indices[k]; the decision function is
// f(x) = sum_k dual_coefs[k] * K(sv_k, x) + bias.
struct SvrModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<std::int64_t> support_vector_indices;  // positions in the training set
    std::vector<double> dual_coefs;
    double bias = 0.0;
    SvrHyperparams hyperparams;
    ScalerParams scaler;  // identity unless the training pipeline embeds one
    std::string feature_layout_tag = kFeatureLayoutTag;
};

// Per-update diagnostics, filled when a trace sink is passed to train_svr.
struct TrainingTrace {
    std::vector<double> dual_objectives;  // maximization-form value after each pair update
    std::vector<double> dual_coefs;       // final beta over the full training set
    std::size_t pair_updates = 0;
    double final_violation = 0.0;         // working-pair KKT gap at exit
};

// exp(-gamma * ||x - y||^2), in (0, 1].
double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

// Sequential minimal optimization on the single-vector dual (beta form):
//   maximize  -1/2 beta' K beta - epsilon * sum|beta_i| + sum y_i beta_i
//   s.t.      sum beta_i = 0,  |beta_i| <= C.
// Working pair: maximal KKT-violating pair, ties broken by lowest index, so
// training is deterministic. `seed` is accepted for interface stability; the
// deterministic selection rule does not consume it.
SvrModel train_svr(const std::vector<EncodedSample>& samples, const SvrHyperparams& hp,
                   std::uint64_t seed, TrainingTrace* trace = nullptr);

// Raw (unclipped) decision function on an already-scaled feature vector.
double predict(const SvrModel& model, std::span<const double> x);

// Dual objective (maximization form) at the given coefficients.
double dual_objective(const std::vector<EncodedSample>& samples,
                      const SvrHyperparams& hp, const std::vector<double>& dual_coefs);

// Maximum per-sample KKT complementarity violation; 0 means exact optimality.
double kkt_violation(const SvrModel& model, const std::vector<EncodedSample>& samples);

// Self-describing text format; round-trips predictions bitwise.
void save_model(const SvrModel& model, std::ostream& out);
SvrModel load_model(std::istream& in);
std::string model_to_string(const SvrModel& model);
void save_model_file(const SvrModel& model, const std::string& path);
SvrModel load_model_file(const std::string& path);

}  // namespace jamcast

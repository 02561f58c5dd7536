#pragma once

#include "slra/envelope.hpp"
#include "slra/subspace.hpp"

#include <string>
#include <vector>

namespace slra {

enum class ScheduleKind { harmonic, fixed, mod_ada, inv_sqrt, custom };

/// Dual step sizes alpha_n, n >= 0.
///   harmonic  1/(n+1)
///   fixed     alpha
///   mod_ada   2/(n+1)^2 + alpha
///   inv_sqrt  min(1, 1/sqrt(n+1))
///   custom    values[n], the last value repeating past the end
struct StepSchedule {
    ScheduleKind kind = ScheduleKind::harmonic;
    double alpha = 0.0;
    std::vector<double> values;

    double step(long n) const;

    static StepSchedule harmonic() { return {ScheduleKind::harmonic, 0.0, {}}; }
    static StepSchedule fixed(double a) { return {ScheduleKind::fixed, a, {}}; }
    static StepSchedule mod_ada(double a) { return {ScheduleKind::mod_ada, a, {}}; }
    static StepSchedule inv_sqrt() { return {ScheduleKind::inv_sqrt, 0.0, {}}; }
    static StepSchedule custom(std::vector<double> v) { return {ScheduleKind::custom, 0.0, std::move(v)}; }
};

std::string to_string(ScheduleKind kind);

struct ScheduleDiagnostic {
    bool ok = false;
    std::vector<double> ratios;  ///< r_N = sum alpha_n^2 / sum alpha_n, N = 1..horizon
};

/// Finite-horizon look at sum alpha_n^2 / sum alpha_n -> 0. ok when the ratio
/// decreases over the last half and either r_h < 0.1 or r_h <= 0.6 r_sqrt(h).
/// A heuristic; it cannot certify the limit. Throws DomainError for steps
/// outside (0, 1].
ScheduleDiagnostic validate_schedule(const StepSchedule& s, long horizon);

enum class Variant { da, ada, mod_ada };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct SolverConfig {
    Variant variant = Variant::da;
    StepSchedule schedule = StepSchedule::harmonic();
    double alpha_reg = 0.0;
    long max_iters = 1000;       ///< number of multiplier updates; records n = 0..max_iters
    double stop_tol = 1e-6;      ///< feasibility residual; 0 disables
    double step_tol = 0.0;       ///< if > 0, convergence also needs |Lambda^n - Lambda^{n-1}| < step_tol
    double rank_tol = kDefaultRankTol;
    bool track_objectives = true;  ///< compute primal values (one extra SVD per iteration)
    bool record_lambdas = false;

    static SolverConfig da(StepSchedule s = StepSchedule::harmonic());
    static SolverConfig ada(double alpha);
    static SolverConfig mod_ada(double alpha);
};

void validate_config(const SolverConfig& cfg);

/// Record n describes Lambda^n and the minimizer X^{n+1} it produces.
struct IterationRecord {
    long n = 0;
    double primal = 0.0;         ///< objective at P_M X^{n+1} (NaN when not tracked)
    double dual = 0.0;           ///< dual value at Lambda^n
    double feas_residual = 0.0;  ///< |X^{n+1} - P_M X^{n+1}|
    double lambda_norm = 0.0;    ///< |Lambda^n|
    double step_norm = 0.0;      ///< |Lambda^n - Lambda^{n-1}|, 0 at n = 0
    long best_n = 0;             ///< argmax of dual over 0..n
    double step_size = 0.0;      ///< alpha_n used for Lambda^{n+1}
};

struct SolverTrace {
    std::vector<IterationRecord> records;
    std::vector<Mat> lambdas;  ///< Lambda^n, filled when record_lambdas is set

    bool empty() const { return records.empty(); }
    const IterationRecord& back() const { return records.back(); }
};

enum class Termination { converged, max_iters };

struct SolverResult {
    Mat x_star;       ///< P_M X at the best dual iterate (DA) or at the last iterate (ADA, mod-ADA)
    Mat x_last;       ///< P_M X^{n+1} for the last record
    Mat lambda_star;  ///< Lambda at the best iterate (DA) or the last Lambda (ADA, mod-ADA)
    SolverTrace trace;
    Termination termination = Termination::max_iters;
    bool degenerate_warning = false;

    bool converged() const { return termination == Termination::converged; }
};

std::string status_string(const SolverResult& r);

/// Numerical failure inside run(), carrying the trace recorded so far.
class SolverFailure : public NumericalError {
public:
    SolverFailure(const std::string& what, SolverTrace trace)
        : NumericalError(what), trace_(std::move(trace)) {}
    const SolverTrace& trace() const { return trace_; }

private:
    SolverTrace trace_;
};

/// Dual ascent with Lambda^0 = 0:
///   X^{n+1} = argmin N(X) + <X, Lambda^n> (+ alpha/2 |X|^2)
///   Lambda^{n+1} = Lambda^n + alpha_n P_{M^perp} X^{n+1}
/// Dual column: DA -N*(-Lambda); ADA the restricted dual h; mod-ADA the
/// augmented dual min_X N**(X) + <X, Lambda> + alpha/2 |X|^2.
SolverResult run(const Objective& objective, const SubspaceOp& subspace, const SolverConfig& cfg);

struct LambdaBoundReport {
    double c1 = 0.0;
    double c2 = 0.0;
    double r0 = 0.0;
    double p_max = 0.0;
    bool ok = true;
    long checked = 0;
    long first_violation = -1;
    double worst_margin = 0.0;  ///< max over n of |Lambda^{n+1}| - bound (<= 0 when ok)
};

/// Boundedness check for DA traces:
///   |Lambda^{n+1}| <= max(sqrt(R0^2 + alpha_n p_max), |Lambda^n|)
/// with c1 = 3|F| + 2 sqrt(K) sigma0, c2 = |F|^2, p(R) = -R^2/2 + c1 R + c2.
LambdaBoundReport check_lambda_bound(const SolverTrace& trace, const Mat& data, double sigma0);

struct RateReport {
    std::vector<double> gap;         ///< d_n = max dual - dual_n
    std::vector<double> scaled_gap;  ///< n d_n
    long increment_violations = 0;   ///< iterations with dual_{n+1} - dual_n < |dLambda|^2 / alpha - tol
    double worst_increment_slack = 0.0;
    bool tail_decreasing = true;     ///< n d_n at the end <= at the start of the last quartile
};

RateReport ada_rate_report(const SolverTrace& trace, double alpha, double tol = 1e-9);

/// |Lambda^n - Lambda_last| over the last half of a trace recorded with
/// record_lambdas; returns the number of increases beyond tol.
long fejer_violations(const SolverTrace& trace, double tol);

} // namespace slra

#include "slra/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slra {

double StepSchedule::step(long n) const {
    if (n < 0) throw DomainError("StepSchedule::step: n must be >= 0");
    const double k = static_cast<double>(n + 1);
    switch (kind) {
    case ScheduleKind::harmonic: return 1.0 / k;
    case ScheduleKind::fixed: return alpha;
    case ScheduleKind::mod_ada: return 2.0 / (k * k) + alpha;
    case ScheduleKind::inv_sqrt: return std::min(1.0, 1.0 / std::sqrt(k));
    case ScheduleKind::custom:
        if (values.empty()) throw DomainError("StepSchedule: custom schedule has no values");
        return values[std::min<std::size_t>(static_cast<std::size_t>(n), values.size() - 1)];
    }
    return 0.0;
}

std::string to_string(ScheduleKind kind) {
    switch (kind) {
    case ScheduleKind::harmonic: return "harmonic";
    case ScheduleKind::fixed: return "fixed";
    case ScheduleKind::mod_ada: return "mod_ada";
    case ScheduleKind::inv_sqrt: return "inv_sqrt";
    case ScheduleKind::custom: return "custom";
    }
    return "?";
}

ScheduleDiagnostic validate_schedule(const StepSchedule& s, long horizon) {
    if (horizon < 10) throw DomainError("validate_schedule: horizon must be >= 10");
    ScheduleDiagnostic out;
    out.ratios.reserve(static_cast<std::size_t>(horizon));
    double sum = 0.0;
    double sum2 = 0.0;
    for (long n = 0; n < horizon; ++n) {
        const double a = s.step(n);
        if (!(a > 0.0 && a <= 1.0)) {
            throw DomainError("validate_schedule: step " + std::to_string(a) + " at n = " +
                              std::to_string(n) + " outside (0, 1]");
        }
        sum += a;
        sum2 += a * a;
        out.ratios.push_back(sum2 / sum);
    }
    const auto& r = out.ratios;
    bool decreasing = true;
    for (std::size_t i = r.size() / 2 + 1; i < r.size(); ++i) {
        if (r[i] > r[i - 1]) {
            decreasing = false;
            break;
        }
    }
    const double last = r.back();
    const auto root = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(horizon))));
    const bool fast = last < 0.1 || last <= 0.6 * r[root - 1];
    out.ok = decreasing && fast && last < r.front();
    return out;
}

std::string to_string(Variant v) {
    switch (v) {
    case Variant::da: return "da";
    case Variant::ada: return "ada";
    case Variant::mod_ada: return "mod_ada";
    }
    return "?";
}

Variant variant_from_string(const std::string& name) {
    if (name == "da") return Variant::da;
    if (name == "ada") return Variant::ada;
    if (name == "mod_ada" || name == "mod-ada") return Variant::mod_ada;
    throw DomainError("unknown solver variant '" + name + "' (expected da, ada or mod_ada)");
}

SolverConfig SolverConfig::da(StepSchedule s) {
    SolverConfig c;
    c.variant = Variant::da;
    c.schedule = std::move(s);
    return c;
}

SolverConfig SolverConfig::ada(double alpha) {
    SolverConfig c;
    c.variant = Variant::ada;
    c.schedule = StepSchedule::fixed(alpha);
    c.alpha_reg = alpha;
    return c;
}

SolverConfig SolverConfig::mod_ada(double alpha) {
    SolverConfig c;
    c.variant = Variant::mod_ada;
    c.schedule = StepSchedule::mod_ada(alpha);
    c.alpha_reg = alpha;
    return c;
}

void validate_config(const SolverConfig& cfg) {
    if (cfg.max_iters < 0) throw DomainError("SolverConfig: max_iters must be >= 0");
    if (!(cfg.stop_tol >= 0.0)) throw DomainError("SolverConfig: stop_tol must be >= 0");
    if (!(cfg.step_tol >= 0.0)) throw DomainError("SolverConfig: step_tol must be >= 0");
    if (!(cfg.rank_tol > 0.0 && cfg.rank_tol < 1.0)) throw DomainError("SolverConfig: rank_tol must lie in (0, 1)");
    switch (cfg.variant) {
    case Variant::da:
        if (cfg.alpha_reg != 0.0) throw DomainError("SolverConfig: DA takes alpha_reg = 0");
        if (cfg.schedule.kind != ScheduleKind::harmonic && cfg.schedule.kind != ScheduleKind::inv_sqrt) {
            const long horizon = cfg.schedule.kind == ScheduleKind::custom
                                     ? std::max<long>(10, static_cast<long>(cfg.schedule.values.size()))
                                     : 10000;
            if (!validate_schedule(cfg.schedule, horizon).ok) {
                throw DomainError("SolverConfig: " + to_string(cfg.schedule.kind) +
                                  " schedule does not satisfy sum a_n^2 / sum a_n -> 0 for DA");
            }
        }
        break;
    case Variant::ada:
        if (!(cfg.alpha_reg > 0.0)) throw DomainError("SolverConfig: ADA needs alpha_reg > 0");
        if (cfg.schedule.kind != ScheduleKind::fixed || cfg.schedule.alpha != cfg.alpha_reg) {
            throw DomainError("SolverConfig: ADA needs a fixed schedule with step alpha_reg");
        }
        break;
    case Variant::mod_ada:
        if (!(cfg.alpha_reg > 0.0)) throw DomainError("SolverConfig: mod-ADA needs alpha_reg > 0");
        if (cfg.schedule.kind != ScheduleKind::mod_ada || cfg.schedule.alpha != cfg.alpha_reg) {
            throw DomainError("SolverConfig: mod-ADA needs a mod_ada schedule with asymptotic step alpha_reg");
        }
        break;
    }
}

std::string status_string(const SolverResult& r) {
    std::string s = r.converged() ? "converged" : "max_iters";
    if (r.degenerate_warning) s += "+degenerate_warning";
    return s;
}

SolverResult run(const Objective& objective, const SubspaceOp& subspace, const SolverConfig& cfg) {
    validate_config(cfg);
    if (objective.rows() != subspace.rows() || objective.cols() != subspace.cols()) {
        throw ShapeError("run: objective is " + std::to_string(objective.rows()) + "x" +
                         std::to_string(objective.cols()) + ", subspace is " + subspace.label());
    }
    const bool augmented = cfg.variant != Variant::da;
    const double alpha = augmented ? cfg.alpha_reg : 0.0;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    SolverResult res;
    SolverTrace& trace = res.trace;
    Mat lambda = Mat::Zero(objective.rows(), objective.cols());
    double best_dual = -std::numeric_limits<double>::infinity();
    long best_n = 0;
    double last_step_norm = 0.0;

    // ADA restricted dual at Lambda^n needs X^n.
    TiltedMinimizer prev;
    double prev_px_norm2 = 0.0;

    try {
        for (long n = 0;; ++n) {
            TiltedMinimizer m = objective.tilted_minimizer(lambda, alpha);
            res.degenerate_warning = res.degenerate_warning || m.degenerate;
            const Mat px = subspace.project(m.x);
            const Mat residual = m.x - px;
            const double px_norm2 = px.squaredNorm();

            IterationRecord rec;
            rec.n = n;
            rec.feas_residual = residual.norm();
            rec.lambda_norm = lambda.norm();
            rec.step_norm = last_step_norm;

            switch (cfg.variant) {
            case Variant::da: rec.dual = m.envelope + frobenius_inner(m.x, lambda); break;
            case Variant::ada:
                if (n == 0) {
                    // h(0) has no closed form; g(0) <= h(0) keeps both the
                    // increment bound and weak duality.
                    rec.dual = objective.dual_value(lambda);
                } else {
                    rec.dual = prev.envelope + 0.5 * alpha * prev_px_norm2 + frobenius_inner(prev.x, lambda);
                }
                break;
            case Variant::mod_ada:
                rec.dual = m.envelope + frobenius_inner(m.x, lambda) + 0.5 * alpha * m.x.squaredNorm();
                break;
            }
            rec.primal = cfg.track_objectives ? objective.envelope_value(px) + 0.5 * alpha * px_norm2 : nan;

            if (rec.dual > best_dual) {
                best_dual = rec.dual;
                best_n = n;
                if (cfg.variant == Variant::da) {
                    res.x_star = px;
                    res.lambda_star = lambda;
                }
            }
            rec.best_n = best_n;
            rec.step_size = cfg.schedule.step(n);
            if (cfg.record_lambdas) trace.lambdas.push_back(lambda);
            trace.records.push_back(rec);
            res.x_last = px;

            const bool feasible = cfg.stop_tol > 0.0 && rec.feas_residual < cfg.stop_tol &&
                                  (cfg.step_tol == 0.0 || (n > 0 && rec.step_norm < cfg.step_tol));
            if (feasible) {
                res.termination = Termination::converged;
                break;
            }
            if (n >= cfg.max_iters) {
                res.termination = Termination::max_iters;
                break;
            }

            const Mat delta = rec.step_size * residual;
            lambda += delta;
            last_step_norm = delta.norm();
            const double drift = subspace.project(lambda).norm();
            if (drift > 1e-10 * (1.0 + lambda.norm())) {
                throw NumericalError("run: multiplier left the orthogonal complement (|P Lambda| = " +
                                     std::to_string(drift) + ")");
            }
            if (!lambda.allFinite()) throw NumericalError("run: non-finite multiplier");
            prev = std::move(m);
            prev_px_norm2 = px_norm2;
        }
    } catch (const NumericalError& e) {
        throw SolverFailure(e.what(), std::move(trace));
    }

    if (cfg.variant != Variant::da) {
        res.x_star = res.x_last;
        res.lambda_star = lambda;
    }
    return res;
}

LambdaBoundReport check_lambda_bound(const SolverTrace& trace, const Mat& data, double sigma0) {
    LambdaBoundReport rep;
    const double k = static_cast<double>(std::min(data.rows(), data.cols()));
    const double fn = data.norm();
    rep.c1 = 3.0 * fn + 2.0 * std::sqrt(k) * sigma0;
    rep.c2 = fn * fn;
    rep.r0 = rep.c1 + std::sqrt(rep.c1 * rep.c1 + 2.0 * rep.c2);
    rep.p_max = 0.5 * rep.c1 * rep.c1 + rep.c2;
    rep.worst_margin = -std::numeric_limits<double>::infinity();
    const auto& r = trace.records;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double a = r[i].step_size;
        const double bound = std::max(std::sqrt(rep.r0 * rep.r0 + a * rep.p_max), r[i].lambda_norm);
        const double margin = r[i + 1].lambda_norm - bound;
        rep.worst_margin = std::max(rep.worst_margin, margin);
        ++rep.checked;
        if (margin > 1e-12 * bound && rep.ok) {
            rep.ok = false;
            rep.first_violation = static_cast<long>(i);
        }
    }
    if (rep.checked == 0) rep.worst_margin = 0.0;
    return rep;
}

RateReport ada_rate_report(const SolverTrace& trace, double alpha, double tol) {
    if (!(alpha > 0.0)) throw DomainError("ada_rate_report: alpha must be positive");
    RateReport rep;
    const auto& r = trace.records;
    if (r.empty()) return rep;
    double h_max = -std::numeric_limits<double>::infinity();
    for (const auto& rec : r) h_max = std::max(h_max, rec.dual);
    rep.worst_increment_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i) {
        rep.gap.push_back(h_max - r[i].dual);
        rep.scaled_gap.push_back(static_cast<double>(r[i].n) * rep.gap.back());
        if (i == 0) continue;
        const double slack = (r[i].dual - r[i - 1].dual) - r[i].step_norm * r[i].step_norm / alpha;
        rep.worst_increment_slack = std::min(rep.worst_increment_slack, slack);
        if (slack < -tol) ++rep.increment_violations;
    }
    if (r.size() == 1) rep.worst_increment_slack = 0.0;
    const std::size_t q = (3 * r.size()) / 4;
    rep.tail_decreasing = rep.scaled_gap.back() <= rep.scaled_gap[q];
    return rep;
}

long fejer_violations(const SolverTrace& trace, double tol) {
    const auto& l = trace.lambdas;
    if (l.size() < 2) return 0;
    const Mat& last = l.back();
    long bad = 0;
    double prev = (l[l.size() / 2] - last).norm();
    for (std::size_t i = l.size() / 2 + 1; i < l.size(); ++i) {
        const double d = (l[i] - last).norm();
        if (d > prev + tol) ++bad;
        prev = d;
    }
    return bad;
}

} // namespace slra

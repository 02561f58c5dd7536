#include "slra/esprit.hpp"
#include "slra/experiments.hpp"
#include "slra/signals.hpp"
#include "slra/solvers.hpp"
#include "slra/subspace.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace slra;

namespace {

py::dict trace_dict(const SolverTrace& t) {
    const auto n = static_cast<Index>(t.records.size());
    Eigen::VectorXd primal(n), dual(n), feas(n), lnorm(n), step(n);
    Eigen::VectorXi best(n);
    for (Index i = 0; i < n; ++i) {
        const auto& r = t.records[static_cast<std::size_t>(i)];
        primal[i] = r.primal;
        dual[i] = r.dual;
        feas[i] = r.feas_residual;
        lnorm[i] = r.lambda_norm;
        step[i] = r.step_norm;
        best[i] = static_cast<int>(r.best_n);
    }
    py::dict d;
    d["primal"] = primal;
    d["dual"] = dual;
    d["feas_residual"] = feas;
    d["lambda_norm"] = lnorm;
    d["step_norm"] = step;
    d["best_n"] = best;
    return d;
}

py::dict solve(const Mat& data, const std::string& variant, double alpha, double sigma0, int rank_hint,
               long max_iters, double stop_tol) {
    SolveOptions o;
    o.variant = variant_from_string(variant);
    o.alpha = alpha;
    o.sigma0 = sigma0;
    o.rank_hint = rank_hint;
    o.max_iters = max_iters;
    o.stop_tol = stop_tol;
    const HankelSpec spec{data.rows(), data.cols()};
    SolveOutcome r;
    {
        py::gil_scoped_release release;
        r = solve_hankel(data, spec, o);
    }
    py::dict d;
    d["x"] = r.result.x_star;
    d["rank"] = r.rank;
    d["sigma0"] = r.sigma0;
    d["primal"] = r.primal;
    d["dual"] = r.dual;
    d["status"] = status_string(r.result);
    d["trace"] = trace_dict(r.result.trace);
    return d;
}

py::dict esprit(const CVec& f, int p, Index rows, double delta) {
    const HankelSpec spec{rows, f.size() - rows + 1};
    const EspritEstimate e = esprit_estimate(f, p, spec, SampleGrid{0.0, static_cast<long>(f.size()), 1.0}, delta);
    py::dict d;
    d["zetas"] = e.zetas;
    d["coeffs"] = e.coeffs;
    d["reconstruction"] = e.reconstruction;
    return d;
}

} // namespace

PYBIND11_MODULE(_slra, m) {
    m.doc() = "Structured low-rank approximation by dual ascent";

    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("f_alpha", &f_alpha, py::arg("x"), py::arg("sigma0"), py::arg("alpha"));
    m.def("singular_values", &singular_values, py::arg("a"));
    m.def("numerical_rank", py::overload_cast<const Mat&, double>(&numerical_rank), py::arg("a"),
          py::arg("rel_tol") = kDefaultRankTol);
    m.def("hankel_project", [](const Mat& x) { return hankel_project(x, HankelSpec{x.rows(), x.cols()}); },
          py::arg("x"));
    m.def("hankel_from_vector", [](const CVec& v, Index rows) {
        return hankel_from_vector(v, HankelSpec{rows, v.size() - rows + 1});
    }, py::arg("v"), py::arg("rows"));
    m.def("vector_from_hankel", [](const Mat& x) { return vector_from_hankel(x, HankelSpec{x.rows(), x.cols()}); },
          py::arg("x"));
    m.def("gen_cos_sum", py::overload_cast<std::uint64_t, long>(&gen_cos_sum), py::arg("seed"),
          py::arg("count") = kCosSumSamples);
    m.def("sample_model_json", [](const std::string& text) { return sample_signal(model_from_json(text)); },
          py::arg("text"), "Evaluate a model given as JSON text on its grid.");
    m.def("esprit", &esprit, py::arg("f"), py::arg("p"), py::arg("rows"), py::arg("delta") = 1.0);
    m.def("solve", &solve, py::arg("data"), py::arg("variant") = "da", py::arg("alpha") = 0.1,
          py::arg("sigma0") = 0.0, py::arg("rank_hint") = 1, py::arg("max_iters") = 1000, py::arg("stop_tol") = 1e-6,
          "Low-rank Hankel approximation of a data matrix.");
    m.def("toy", [](long iters) {
        std::vector<std::pair<double, double>> rows;
        for (const auto& r : run_toy(iters)) rows.emplace_back(r.x, r.lambda);
        return rows;
    }, py::arg("iters") = 5);
}

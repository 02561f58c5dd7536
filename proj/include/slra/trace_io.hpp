#pragma once

#include "slra/solvers.hpp"

#include <filesystem>
#include <iosfwd>

namespace slra {

/// Columns n,primal,dual,feas_residual,lambda_norm,step_norm,best_n with a
/// header row; floats use 17 significant digits.
void write_trace_csv(std::ostream& os, const SolverTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace);

/// Inverse of write_trace_csv. step_size is not stored and reads back as NaN.
SolverTrace read_trace_csv(std::istream& is);
SolverTrace read_trace_csv(const std::filesystem::path& path);

} // namespace slra

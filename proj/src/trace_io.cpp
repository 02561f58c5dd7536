#include "slra/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace slra {

namespace {

constexpr const char* kHeader = "n,primal,dual,feas_residual,lambda_norm,step_norm,best_n";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

} // namespace

void write_trace_csv(std::ostream& os, const SolverTrace& trace) {
    os << kHeader << '\n';
    for (const auto& r : trace.records) {
        os << r.n << ',' << fmt(r.primal) << ',' << fmt(r.dual) << ',' << fmt(r.feas_residual) << ','
           << fmt(r.lambda_norm) << ',' << fmt(r.step_norm) << ',' << r.best_n << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_trace_csv(os, trace);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

SolverTrace read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("trace csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw FormatError("trace csv: unexpected header '" + line + "'");
    SolverTrace trace;
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 7) {
            throw FormatError("trace csv: line " + std::to_string(lineno) + " has " +
                                     std::to_string(cells.size()) + " fields");
        }
        try {
            IterationRecord r;
            r.n = std::stol(cells[0]);
            r.primal = std::stod(cells[1]);
            r.dual = std::stod(cells[2]);
            r.feas_residual = std::stod(cells[3]);
            r.lambda_norm = std::stod(cells[4]);
            r.step_norm = std::stod(cells[5]);
            r.best_n = std::stol(cells[6]);
            r.step_size = std::numeric_limits<double>::quiet_NaN();
            trace.records.push_back(r);
        } catch (const std::logic_error&) {
            throw FormatError("trace csv: bad number on line " + std::to_string(lineno));
        }
    }
    return trace;
}

SolverTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open " + path.string());
    return read_trace_csv(is);
}

} // namespace slra

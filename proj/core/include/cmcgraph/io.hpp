#ifndef CMCGRAPH_IO_HPP
#define CMCGRAPH_IO_HPP

#include <string>
#include <vector>

#include "cmcgraph/continuation.hpp"
#include "cmcgraph/geometry.hpp"
#include "cmcgraph/oracles.hpp"

namespace cmc {

/// Process exit codes of the command-line runner.
enum ExitCode {
    kExitOk = 0,
    kExitConfig = 1,
    kExitHypothesis = 2,
    kExitSolver = 3,
    kExitContinuation = 4,
    kExitIo = 5,
};

struct FourierMode {
    int k = 0;
    double a = 0.0;  // cos coefficient
    double b = 0.0;  // sin coefficient
};

/// Boundary datum: constant plus a truncated Fourier series in azimuth.
struct BoundarySpec {
    double constant = 0.0;
    std::vector<FourierMode> modes;
};

enum class SubsolutionKind { Constant, Cap, File };

struct SubsolutionSpec {
    SubsolutionKind kind = SubsolutionKind::Constant;
    double constant = 0.0;
    OffsetSphere sphere;  // kind == Cap
    SphereBranch branch = SphereBranch::Far;
    std::string file;  // kind == File
};

struct RunConfig {
    Vec3 axis{0.0, 0.0, 1.0};
    double theta_max = 0.0;        // one of theta_max ...
    double boundary_radius = 0.0;  // ... or r (theta_max = asin r)
    int n_theta = 64;
    int n_phi = 128;
    BoundarySpec phi;
    SubsolutionSpec ubar;
    double H_target = 0.0;
    double residual_tol = 1e-10;
    int max_newton_iters = 50;
    double t_step_init = 0.1;
    double t_step_min = 1e-4;
    double rhs_C = 0.0;          // optional override of the searched constant
    double rhs_eps = 0.0;        // optional override of the derived constant
    double barrier_strip = 0.0;  // 0 picks theta_max / 5
    std::string out_dir = "out";
    bool quiet = false;
};

/// Key-value config file: one `key = value` per line, '#' starts a comment.
RunConfig load_config(const std::string& path);

/// Applies one `key=value` override (the same keys as the config file).
void apply_override(RunConfig& config, const std::string& key_value);

/// Parses "NTHETA,NPHI".
void apply_grid_spec(RunConfig& config, const std::string& spec);

PolarGrid make_grid(const RunConfig& config);
BoundaryValues make_boundary(const RunConfig& config, const PolarGrid& grid);
ScalarField make_subsolution(const RunConfig& config, const PolarGrid& grid);

/// Executes the full pipeline and writes solution.csv, trace.csv,
/// certificates.txt and surface.obj into the output directory.
int run(const RunConfig& config);

/// (theta, phi, u) rows with a grid-defining header; 17 significant digits,
/// bit-exact across a write/read round trip.
void write_field_csv(const std::string& path, const ScalarField& u);
ScalarField read_field_csv(const std::string& path);

void write_trace_csv(const std::string& path, const ContinuationTrace& trace);

void write_certificates_report(const std::string& path, const CmcSolution& solution);

/// Wavefront OBJ of the graph e^u x: pole fan plus rings of split quads.
void export_mesh_obj(const std::string& path, const ScalarField& u);

}  // namespace cmc

#endif

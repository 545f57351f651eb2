#include "cmcgraph/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cmcgraph/errors.hpp"

namespace cmc {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value for '" + key + "': " + s);
    }
}

int parse_int(const std::string& s, const std::string& key) {
    double v = parse_double(s, key);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw std::invalid_argument("'" + key + "' must be an integer");
    return i;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void apply_key(RunConfig& c, const std::string& key, const std::string& value) {
    std::istringstream vs(value);
    if (key == "axis") {
        if (!(vs >> c.axis.x >> c.axis.y >> c.axis.z))
            throw std::invalid_argument("axis expects three reals");
    } else if (key == "theta_max") {
        c.theta_max = parse_double(value, key);
        c.boundary_radius = 0.0;
    } else if (key == "r") {
        c.boundary_radius = parse_double(value, key);
        c.theta_max = 0.0;
    } else if (key == "n_theta") {
        c.n_theta = parse_int(value, key);
    } else if (key == "n_phi") {
        c.n_phi = parse_int(value, key);
    } else if (key == "phi") {
        c.phi.constant = parse_double(value, key);
    } else if (key == "phi_mode") {
        FourierMode m;
        if (!(vs >> m.k >> m.a >> m.b)) throw std::invalid_argument("phi_mode expects: k a_k b_k");
        c.phi.modes.push_back(m);
    } else if (key == "ubar") {
        c.ubar.kind = SubsolutionKind::Constant;
        c.ubar.constant = parse_double(value, key);
    } else if (key == "ubar_cap") {
        std::string branch;
        c.ubar.kind = SubsolutionKind::Cap;
        if (!(vs >> c.ubar.sphere.center_offset >> c.ubar.sphere.radius >> branch))
            throw std::invalid_argument("ubar_cap expects: center_offset radius near|far");
        if (branch == "near")
            c.ubar.branch = SphereBranch::Near;
        else if (branch == "far")
            c.ubar.branch = SphereBranch::Far;
        else
            throw std::invalid_argument("ubar_cap branch must be 'near' or 'far'");
    } else if (key == "ubar_file") {
        c.ubar.kind = SubsolutionKind::File;
        c.ubar.file = value;
    } else if (key == "H") {
        c.H_target = parse_double(value, key);
    } else if (key == "residual_tol") {
        c.residual_tol = parse_double(value, key);
    } else if (key == "max_newton_iters") {
        c.max_newton_iters = parse_int(value, key);
    } else if (key == "t_step_init") {
        c.t_step_init = parse_double(value, key);
    } else if (key == "t_step_min") {
        c.t_step_min = parse_double(value, key);
    } else if (key == "rhs_C") {
        c.rhs_C = parse_double(value, key);
    } else if (key == "rhs_eps") {
        c.rhs_eps = parse_double(value, key);
    } else if (key == "barrier_strip") {
        c.barrier_strip = parse_double(value, key);
    } else if (key == "out") {
        c.out_dir = value;
    } else if (key == "quiet") {
        c.quiet = parse_int(value, key) != 0;
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    RunConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

void apply_override(RunConfig& config, const std::string& key_value) {
    size_t eq = key_value.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must look like KEY=VALUE: " + key_value);
    apply_key(config, trim(key_value.substr(0, eq)), trim(key_value.substr(eq + 1)));
}

void apply_grid_spec(RunConfig& config, const std::string& spec) {
    size_t comma = spec.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("grid spec must look like NTHETA,NPHI");
    config.n_theta = parse_int(trim(spec.substr(0, comma)), "n_theta");
    config.n_phi = parse_int(trim(spec.substr(comma + 1)), "n_phi");
}

PolarGrid make_grid(const RunConfig& config) {
    Vec3 axis = config.axis.normalized();
    CapDomain domain = config.boundary_radius > 0.0
                           ? CapDomain::from_boundary_radius(axis, config.boundary_radius)
                           : CapDomain(axis, config.theta_max);
    return PolarGrid(domain, config.n_theta, config.n_phi);
}

BoundaryValues make_boundary(const RunConfig& config, const PolarGrid& grid) {
    BoundaryValues phi(grid, config.phi.constant);
    for (int j = 0; j < grid.n_phi(); ++j) {
        double az = j * grid.dphi();
        for (const FourierMode& m : config.phi.modes)
            phi[j] += m.a * std::cos(m.k * az) + m.b * std::sin(m.k * az);
    }
    return phi;
}

ScalarField make_subsolution(const RunConfig& config, const PolarGrid& grid) {
    switch (config.ubar.kind) {
        case SubsolutionKind::Constant: return ScalarField(grid, config.ubar.constant);
        case SubsolutionKind::Cap: return cap_solution(config.ubar.sphere, config.ubar.branch, grid);
        case SubsolutionKind::File: {
            ScalarField u = read_field_csv(config.ubar.file);
            if (u.grid() != grid)
                throw std::invalid_argument("subsolution file grid does not match the run grid");
            return u;
        }
    }
    throw std::invalid_argument("unhandled subsolution kind");
}

void write_field_csv(const std::string& path, const ScalarField& u) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    const PolarGrid& g = u.grid();
    const Vec3& axis = g.domain().axis();
    out << "# cmcgraph field\n";
    out << "# axis = " << fmt17(axis.x) << ' ' << fmt17(axis.y) << ' ' << fmt17(axis.z) << '\n';
    out << "# theta_max = " << fmt17(g.domain().theta_max()) << '\n';
    out << "# n_theta = " << g.n_theta() << '\n';
    out << "# n_phi = " << g.n_phi() << '\n';
    out << "theta,phi,u\n";
    for (int p = 0; p < u.size(); ++p)
        out << fmt17(g.theta(p)) << ',' << fmt17(g.phi(p)) << ',' << fmt17(u[p]) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

ScalarField read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open field file: " + path);
    Vec3 axis;
    double theta_max = 0.0;
    int n_theta = 0, n_phi = 0;
    std::string line;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.rfind("# axis = ", 0) == 0) {
            std::istringstream s(line.substr(9));
            s >> axis.x >> axis.y >> axis.z;
        } else if (line.rfind("# theta_max = ", 0) == 0) {
            theta_max = std::strtod(line.c_str() + 14, nullptr);
        } else if (line.rfind("# n_theta = ", 0) == 0) {
            n_theta = std::atoi(line.c_str() + 12);
        } else if (line.rfind("# n_phi = ", 0) == 0) {
            n_phi = std::atoi(line.c_str() + 10);
        } else if (!line.empty() && line[0] != '#' && line != "theta,phi,u") {
            size_t last = line.rfind(',');
            if (last == std::string::npos) throw IoError("malformed field row: " + line);
            values.push_back(std::strtod(line.c_str() + last + 1, nullptr));
        }
    }
    if (n_theta == 0 || n_phi == 0 || theta_max == 0.0)
        throw IoError("field file misses its grid header: " + path);
    PolarGrid grid(CapDomain(axis, theta_max), n_theta, n_phi);
    if (static_cast<int>(values.size()) != grid.node_count())
        throw IoError("field file has wrong node count: " + path);
    ScalarField u(grid);
    for (int p = 0; p < u.size(); ++p) u[p] = values[static_cast<size_t>(p)];
    return u;
}

void write_trace_csv(const std::string& path, const ContinuationTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "stage,t,iterations,residual,min_margin,min_margin_interior,boundary_normal_"
           "derivative\n";
    for (const TraceRow& row : trace.rows) {
        out << to_string(row.stage) << ',' << fmt17(row.t) << ',' << row.iterations << ','
            << fmt17(row.residual) << ',' << fmt17(row.min_margin) << ','
            << fmt17(row.min_margin_interior) << ',' << fmt17(row.boundary_normal_derivative)
            << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace {

void describe_certificate(std::ostream& out, const char* name, const BarrierCertificate& cert) {
    out << name << ":\n";
    if (cert.kind == BarrierKind::Height) {
        out << "  constants: C = " << fmt17(cert.C) << ", A = " << fmt17(cert.A)
            << ", base = " << fmt17(cert.base) << '\n';
        out << "  implied height bound L = " << fmt17(cert.implied_bound) << '\n';
    } else {
        out << "  constants: C = " << fmt17(cert.C) << ", K = " << fmt17(cert.K)
            << ", mu = " << fmt17(cert.mu) << ", strip = " << fmt17(cert.eps_strip) << '\n';
        out << "  implied boundary gradient bound = " << fmt17(cert.implied_bound) << '\n';
    }
    out << "  min margin of the operator on the region = " << fmt17(cert.min_margin)
        << " at node " << cert.worst_node << '\n';
    out << "  valid: " << (cert.valid ? "yes" : "no") << '\n';
}

}  // namespace

void write_certificates_report(const std::string& path, const CmcSolution& solution) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "homotopy constants: C = " << fmt17(solution.constants.C)
        << ", eps = " << fmt17(solution.constants.eps) << '\n';
    out << "radial monotonicity checks (d/drho of rho * rhs, min over samples):\n";
    for (const RhoMonotonicityReport& rep : solution.constants.reports) {
        out << "  family = " << to_string(rep.family) << ", t = " << fmt17(rep.t)
            << ", min = " << fmt17(rep.min_derivative)
            << (rep.applicable ? (rep.pass ? ", pass" : ", FAIL") : ", not applicable (t = 1)")
            << '\n';
    }
    describe_certificate(out, "height barrier", solution.height_certificate);
    describe_certificate(out, "boundary gradient barrier", solution.gradient_certificate);
    out << "enclosure: min (u - w) = " << fmt17(solution.enclosure.min_above_barrier)
        << ", min (ubar - u) = " << fmt17(solution.enclosure.min_below_subsolution)
        << (solution.enclosure.ok ? " (ok)" : " (VIOLATED)") << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void export_mesh_obj(const std::string& path, const ScalarField& u) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    const PolarGrid& g = u.grid();
    out << "# radial graph surface, " << g.node_count() << " vertices\n";
    for (int p = 0; p < g.node_count(); ++p) {
        Vec3 v = embed(g, p, std::exp(u[p]));
        out << "v " << fmt17(v.x) << ' ' << fmt17(v.y) << ' ' << fmt17(v.z) << '\n';
    }
    auto idx = [&](int ring, int j) { return g.node(ring, j) + 1; };  // OBJ is 1-based
    for (int j = 0; j < g.n_phi(); ++j)
        out << "f 1 " << idx(1, j) << ' ' << idx(1, j + 1) << '\n';
    for (int i = 1; i < g.n_theta(); ++i) {
        for (int j = 0; j < g.n_phi(); ++j) {
            out << "f " << idx(i, j) << ' ' << idx(i + 1, j) << ' ' << idx(i + 1, j + 1) << '\n';
            out << "f " << idx(i, j) << ' ' << idx(i + 1, j + 1) << ' ' << idx(i, j + 1) << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

int run(const RunConfig& config) {
    namespace fs = std::filesystem;
    try {
        PolarGrid grid = make_grid(config);
        BoundaryValues phi = make_boundary(config, grid);
        ScalarField ubar = make_subsolution(config, grid);

        PipelineConfig pipeline;
        pipeline.plan.solve.residual_tol = config.residual_tol;
        pipeline.plan.solve.max_newton_iters = config.max_newton_iters;
        pipeline.plan.solve.log_iterations = !config.quiet;
        pipeline.plan.t_step_init = config.t_step_init;
        pipeline.plan.t_step_min = config.t_step_min;
        pipeline.barrier_eps_strip = config.barrier_strip;
        pipeline.C_override = config.rhs_C;
        pipeline.eps_override = config.rhs_eps;

        CmcSolution sol = solve_cmc(grid, phi, ubar, config.H_target, pipeline);

        std::error_code ec;
        fs::create_directories(config.out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + config.out_dir);
        write_field_csv(config.out_dir + "/solution.csv", sol.u);
        write_trace_csv(config.out_dir + "/trace.csv", sol.trace);
        write_certificates_report(config.out_dir + "/certificates.txt", sol);
        export_mesh_obj(config.out_dir + "/surface.obj", sol.u);

        if (sol.status != PipelineStatus::Ok) {
            std::cerr << "continuation failed ("
                      << (sol.status == PipelineStatus::StageOneFailed ? "stage one" : "stage two")
                      << ", " << (sol.failed_stage_status == StageStatus::BadStart
                                      ? "start iterate does not solve the t = 0 problem"
                                      : "step underflow")
                      << "); partial trace written\n";
            return sol.failed_stage_status == StageStatus::BadStart ? kExitSolver
                                                                    : kExitContinuation;
        }
        if (!config.quiet) {
            std::cout << "solved: residual = " << sol.final_residual
                      << ", min (ubar - u) interior = "
                      << sol.trace.rows.back().min_margin_interior << ", outputs in "
                      << config.out_dir << "\n";
        }
        return kExitOk;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violated: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const SearchExhaustedError& e) {
        std::cerr << "constant search exhausted: " << e.what() << '\n';
        return kExitSolver;
    } catch (const SingularSystemError& e) {
        std::cerr << "linear solver: " << e.what() << '\n';
        return kExitSolver;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace cmc

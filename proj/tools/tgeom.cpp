// Command-line front end: reads a JSON world spec, runs one computation, writes CSV or JSON.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tgeom/calculus.hpp"
#include "tgeom/degeneracy.hpp"
#include "tgeom/io.hpp"
#include "tgeom/lines.hpp"
#include "tgeom/tubes.hpp"

using namespace tgeom;
using nlohmann::json;

namespace {

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

Vec point_arg(const World& w, const std::vector<double>& v, const std::string& name) {
    if (static_cast<int>(v.size()) != w.dim())
        throw InputError(name + " has " + std::to_string(v.size()) + " entries, world has dim " + std::to_string(w.dim()));
    return to_vec(v);
}

void emit(const std::string& out, const std::string& content) {
    if (out.empty() || out == "-")
        std::cout << content;
    else
        write_file_atomic(out, content);
}

std::string csv_row(const std::vector<double>& cells) {
    std::string s;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += format_real(cells[i]);
    }
    return s + '\n';
}

std::string coord_header(int d) {
    std::string s;
    for (int i = 0; i < d; ++i) s += ",x" + std::to_string(i);
    return s;
}

int error_exit(int code, const std::string& type, const std::string& message) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tgeom: world-function geometry computations"};
    app.require_subcommand(1);
    std::string world_path, out;
    int threads = 1;
    app.add_option("--threads", threads, "worker threads for grid sampling")->envname("TGEOM_THREADS")->check(CLI::PositiveNumber);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--world", world_path, "world spec JSON file")->required();
        sub->add_option("--out", out, "output path (stdout when omitted)");
    };

    // tube-section
    auto* ts = app.add_subcommand("tube-section", "radii of an axisymmetric first-order tube over a tau grid");
    common(ts);
    std::vector<double> y;
    std::string kind_s = "n";
    double tau_min = -1, tau_max = 2;
    int tau_steps = 40;
    ts->add_option("--y", y, "skeleton end point P1 (P0 is the origin)")->required()->delimiter(',');
    ts->add_option("--kind", kind_s, "n|f|p");
    ts->add_option("--tau-min", tau_min);
    ts->add_option("--tau-max", tau_max);
    ts->add_option("--tau-steps", tau_steps, "number of intervals")->check(CLI::PositiveNumber);
    ts->add_option("--threads", threads, "worker threads")->envname("TGEOM_THREADS")->check(CLI::PositiveNumber);

    // gradient-line
    auto* gl = app.add_subcommand("gradient-line", "gradient line between two points");
    common(gl);
    std::vector<double> from, to;
    int steps = 100;
    std::string method = "implicit", form = "tilde";
    gl->add_option("--kind", kind_s, "n|f|p");
    gl->add_option("--from", from)->required()->delimiter(',');
    gl->add_option("--to", to)->required()->delimiter(',');
    gl->add_option("--steps", steps)->check(CLI::PositiveNumber);
    gl->add_option("--method", method)->check(CLI::IsMember({"implicit", "ode"}));
    gl->add_option("--form", form, "ODE connection: tilde|fine")->check(CLI::IsMember({"tilde", "fine"}));

    // broken-tube
    auto* bt = app.add_subcommand("broken-tube", "chain of equal segments with adjacent segments parallel");
    common(bt);
    double mu = 0.1;
    std::vector<double> seed_from, seed_to;
    bt->add_option("--kind", kind_s, "n|f|p");
    bt->add_option("--mu", mu)->check(CLI::PositiveNumber);
    bt->add_option("--steps", steps)->check(CLI::PositiveNumber);
    bt->add_option("--seed-from", seed_from)->required()->delimiter(',');
    bt->add_option("--seed-to", seed_to, "direction of the first segment")->required()->delimiter(',');

    // check
    auto* ck = app.add_subcommand("check", "euclideaness or degeneration report");
    common(ck);
    std::string which;
    std::vector<double> at;
    int n_order = 0, probe_count = 50;
    unsigned seed = 12345;
    ck->add_option("which", which, "euclideaness|degeneration")->required()->check(CLI::IsMember({"euclideaness", "degeneration"}));
    ck->add_option("--at", at, "base point for degeneration (origin by default)")->delimiter(',');
    ck->add_option("--n", n_order, "order n for euclideaness (world dim by default)");
    ck->add_option("--probes", probe_count, "number of probe points")->check(CLI::PositiveNumber);
    ck->add_option("--seed", seed, "probe seed");

    // coefficients, curvature
    auto* co = app.add_subcommand("coefficients", "coincidence-limit coefficients at a point");
    common(co);
    co->add_option("--at", at)->required()->delimiter(',');
    auto* cu = app.add_subcommand("curvature", "curvature tensors at a point");
    common(cu);
    std::vector<double> xp_arg;
    cu->add_option("--at", at)->required()->delimiter(',');
    cu->add_option("--xp", xp_arg, "second point for two-point tensors (at + 0.05 by default)")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return error_exit(1, "usage", e.what());
    }

    try {
        const World w = make_world(load_world_spec(world_path));
        const int d = w.dim();
        const Kind kind = kind_from_string(kind_s);

        if (*ts) {
            if (!(tau_max > tau_min)) throw InputError("tau-max must exceed tau-min");
            std::vector<double> grid;
            for (int k = 0; k <= tau_steps; ++k) grid.push_back(tau_min + (tau_max - tau_min) * k / tau_steps);
            const auto rows = sample_axisymmetric_tube(w, point_arg(w, y, "--y"), kind, grid, threads);
            std::string csv = "tau,r_inner,r_outer,n_roots\n";
            for (const auto& r : rows) {
                const double nan = std::nan("");
                csv += csv_row({r.tau, r.radii.empty() ? nan : r.radii.front(), r.radii.empty() ? nan : r.radii.back(),
                                double(r.radii.size())});
            }
            emit(out, csv);
        } else if (*gl) {
            const Vec xA = point_arg(w, from, "--from"), xB = point_arg(w, to, "--to");
            Trajectory t;
            if (method == "implicit") {
                std::vector<double> grid;
                for (int k = 0; k <= steps; ++k) grid.push_back(double(k) / steps);
                t = gradient_line_implicit(w, kind, xA, xB, grid);
            } else {
                t = gradient_line_ode(w, kind, xA, implicit_tangent(w, kind, xA, xB), 0.0, 1.0, steps, ode_form_from_string(form));
            }
            for (const auto& m : t.warnings) std::cerr << json{{"warning", m}}.dump() << '\n';
            std::string csv = "tau" + coord_header(d) + ",residual" + (method == "ode" ? ",energy" : "") + "\n";
            for (size_t i = 0; i < t.points.size(); ++i) {
                std::vector<double> row{t.params[i]};
                for (int k = 0; k < d; ++k) row.push_back(t.points[i][k]);
                row.push_back(t.residuals[i]);
                if (method == "ode") row.push_back(t.energy[i]);
                csv += csv_row(row);
            }
            emit(out, csv);
        } else if (*bt) {
            const Vec P0 = point_arg(w, seed_from, "--seed-from");
            const Vec dir = point_arg(w, seed_to, "--seed-to") - P0;
            const BrokenTube chain = build_broken_tube(w, kind, P0, broken_tube_seed(w, kind, P0, dir, mu), mu, steps);
            std::string csv = "index" + coord_header(d) + ",length_error,parallel_residual\n";
            for (size_t i = 0; i < chain.vertices.size(); ++i) {
                std::vector<double> row{double(i)};
                for (int k = 0; k < d; ++k) row.push_back(chain.vertices[i][k]);
                row.push_back(i == 0 ? 0.0 : chain.length_error[i - 1]);
                row.push_back(i < 2 ? 0.0 : chain.parallel_residual[i - 2]);
                csv += csv_row(row);
            }
            if (chain.multiplicity) std::cerr << json{{"warning", "a second solution branch was found at some step"}}.dump() << '\n';
            emit(out, csv);
        } else if (*ck) {
            DegeneracyReport r;
            if (which == "euclideaness") {
                const int n = n_order > 0 ? n_order : d;
                r = euclideaness_check(w, n, default_basis(d), default_probes(d, probe_count, seed));
            } else {
                const Vec x = at.empty() ? Vec(Vec::Zero(d)) : point_arg(w, at, "--at");
                r = degeneration_check(w, x, default_probe_dirs(d));
            }
            emit(out, report_to_json(r).dump(2) + "\n");
        } else if (*co) {
            const Vec x = point_arg(w, at, "--at");
            const CoincidenceCoefficients c = coincidence_coefficients(w, x);
            const json j{{"world", world_spec_to_json(*w.spec())},
                         {"at", vec_to_json(x)},
                         {"a", vec_to_json(c.a)},
                         {"g", mat_to_json(c.g)},
                         {"g_inv", mat_to_json(c.g_inv)},
                         {"g_tilde", mat_to_json(c.g_tilde)},
                         {"sigma_future", mat_to_json(c.sigma_f)},
                         {"sigma_past", mat_to_json(c.sigma_p)},
                         {"a3", tensor_to_json(c.a3)},
                         {"g3", tensor_to_json(c.g3)},
                         {"gamma", tensor_to_json(c.gamma)},
                         {"beta", tensor_to_json(c.beta)},
                         {"gamma_tilde_future", tensor_to_json(c.gamma_tilde_f)},
                         {"gamma_tilde_past", tensor_to_json(c.gamma_tilde_p)}};
            emit(out, j.dump(2) + "\n");
        } else if (*cu) {
            const Vec x = point_arg(w, at, "--at");
            const Vec xp = xp_arg.empty() ? Vec(x.array() + 0.05) : point_arg(w, xp_arg, "--xp");
            const CurvatureBundle c = curvature(w, x, xp);
            const json j{{"world", world_spec_to_json(*w.spec())},
                         {"at", vec_to_json(x)},
                         {"xp", vec_to_json(xp)},
                         {"g", mat_to_json(c.g)},
                         {"g_tilde", mat_to_json(c.g_tilde)},
                         {"riemann", tensor_to_json(c.riemann)},
                         {"riemann_tilde_future", tensor_to_json(c.riemann_tilde_f)},
                         {"riemann_tilde_past", tensor_to_json(c.riemann_tilde_p)},
                         {"f_coincident", tensor_to_json(c.f_coincident)},
                         {"f_tilde_coincident", tensor_to_json(c.f_tilde)},
                         {"f_tilde_two_point", tensor_to_json(c.f_tilde_twopoint)}};
            emit(out, j.dump(2) + "\n");
        }
        return 0;
    } catch (const InputError& e) {
        return error_exit(1, "input", e.what());
    } catch (const json::exception& e) {
        return error_exit(1, "json", e.what());
    } catch (const SolverError& e) {
        return error_exit(2, "solver", e.what());
    } catch (const ComplexBranchError& e) {
        return error_exit(2, "complex_branch", e.what());
    } catch (const std::exception& e) {
        return error_exit(2, "internal", e.what());
    }
}

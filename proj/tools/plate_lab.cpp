#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json_writer.hpp"
#include "platelab/forms/problem.hpp"
#include "platelab/geometry/perturbation.hpp"
#include "platelab/reference/disk.hpp"
#include "platelab/reference/rectangle.hpp"
#include "platelab/ritz/solver.hpp"
#include "platelab/shape/density.hpp"
#include "platelab/shape/families.hpp"
#include "platelab/shape/fd.hpp"
#include "platelab/shape/lemmas.hpp"
#include "platelab/shape/radiality.hpp"

namespace {

using namespace platelab;
using plate_lab_cli::format_double;
using plate_lab_cli::ordered_json;

enum ExitCode { exit_ok = 0, exit_internal = 1, exit_invalid = 2, exit_solver = 3, exit_breach = 4 };

struct RunConfig {
    std::string problem = "dirichlet";
    bool problem_given = false;
    double tau = 1.0;
    double sigma = 0.3;
    std::optional<double> disk;
    std::optional<double> star;
    std::vector<double> cos_coeffs, sin_coeffs;
    std::vector<double> rectangle;
    std::string solver = "auto";
    int degree = 16;
    int radial = 48, angular = 128, boundary = 256;
    int count = 5;
    std::string format = "json";
    bool format_given = false;
    std::string output = "-";
    bool assert_mode = false;
    std::optional<double> tol;
    bool no_quotient = false;

    int cluster = 1;
    std::vector<int> orders;
    std::string perturbation = "dilation";
    std::vector<double> steps{1e-3, 5e-4};
    std::string density_csv;
    bool as_printed = false;

    std::vector<double> radii{0.25, 0.5, 0.75, 1.0};
    std::vector<int> members;
    bool allow_partial = false;

    std::string which = "all";
    std::string preset = "all";

    std::vector<double> stretch;
    std::string pair = "1,2";
    std::vector<double> range;
};

// ---------------------------------------------------------------- parsing helpers

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

int to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvalidInput(what + ": expected an integer, got '" + s + "'");
    }
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvalidInput(what + ": expected a number, got '" + s + "'");
    }
}

forms::PlateParams params_of(const RunConfig& c) { return {c.tau, c.sigma}; }

bool uses_rectangle(const RunConfig& c) { return !c.rectangle.empty(); }

geometry::StarChart chart_of(const RunConfig& c) {
    if (uses_rectangle(c)) throw InvalidInput("this command needs a star-shaped chart, not --rectangle");
    if (c.disk && c.star) throw InvalidInput("--disk and --star are mutually exclusive");
    if (c.disk) {
        if (!c.cos_coeffs.empty() || !c.sin_coeffs.empty())
            throw InvalidInput("--cos/--sin need --star, not --disk");
        return geometry::StarChart::disk(*c.disk);
    }
    if (c.star) return geometry::StarChart(*c.star, c.cos_coeffs, c.sin_coeffs);
    if (!c.cos_coeffs.empty() || !c.sin_coeffs.empty()) return geometry::StarChart(1.0, c.cos_coeffs, c.sin_coeffs);
    return geometry::StarChart::disk(1.0);
}

forms::QuadratureSizes quad_of(const RunConfig& c) {
    forms::QuadratureSizes q{c.radial, c.angular, c.boundary};
    q.validate();
    return q;
}

std::string solver_of(const RunConfig& c, const geometry::StarChart& chart) {
    if (c.solver == "auto") return chart.is_disk() ? "bessel" : "ritz";
    if (c.solver == "bessel" && !chart.is_disk()) throw InvalidInput("--solver bessel requires a disk chart");
    return c.solver;
}

geometry::NormalPerturbation perturbation_of(const std::string& spec) {
    if (spec == "dilation") return geometry::NormalPerturbation::constant(1.0);
    const auto parts = split(spec, ':');
    if (parts.size() < 2 || parts.size() > 3)
        throw InvalidInput("--perturbation: expected dilation, const:C, cos:M[:A] or sin:M[:A], got '" + spec + "'");
    if (parts[0] == "const") {
        if (parts.size() != 2) throw InvalidInput("--perturbation const takes one value");
        return geometry::NormalPerturbation::constant(to_double(parts[1], "--perturbation"));
    }
    const int m = to_int(parts[1], "--perturbation");
    if (m < 1 || m > geometry::max_fourier_order)
        throw InvalidInput("--perturbation: mode number must be in 1.." + std::to_string(geometry::max_fourier_order));
    const double amp = parts.size() == 3 ? to_double(parts[2], "--perturbation") : 1.0;
    if (parts[0] == "cos") return geometry::NormalPerturbation::cosine(m, amp);
    if (parts[0] == "sin") return geometry::NormalPerturbation::sine(m, amp);
    throw InvalidInput("--perturbation: unknown kind '" + parts[0] + "'");
}

void validate_common(const RunConfig& c) {
    if (c.format != "json" && c.format != "csv") throw InvalidInput("--format must be json or csv");
    if (c.solver != "auto" && c.solver != "bessel" && c.solver != "ritz")
        throw InvalidInput("--solver must be bessel or ritz");
    if (c.count < 1) throw InvalidInput("--count must be >= 1");
    if (c.degree < 0) throw InvalidInput("--degree must be >= 0");
    if (!c.rectangle.empty() && c.rectangle.size() != 2) throw InvalidInput("--rectangle takes two side lengths");
    quad_of(c);
    if (uses_rectangle(c)) {
        if (c.problem_given && c.problem != "navier")
            throw InvalidInput("--rectangle only supports the navier problem");
        if (!(c.rectangle[0] > 0.0) || !(c.rectangle[1] > 0.0))
            throw InvalidInput("--rectangle: side lengths must be positive");
        if (c.tau < 0.0) throw InvalidInput("tau must be non-negative");
        return;
    }
    const auto problem = forms::BoundaryProblem::of(forms::parse_problem(c.problem));
    forms::validate(params_of(c), problem);
    chart_of(c);
}

forms::BoundaryProblem problem_of(const RunConfig& c) {
    return forms::BoundaryProblem::of(forms::parse_problem(c.problem));
}

// ---------------------------------------------------------------- reporting

ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    if (uses_rectangle(c)) {
        j["problem"] = "navier";
        j["tau"] = c.tau;
        j["chart"] = {{"type", "rectangle"}, {"a", c.rectangle[0]}, {"b", c.rectangle[1]}};
        return j;
    }
    const auto chart = chart_of(c);
    j["problem"] = forms::to_string(problem_of(c).kind);
    j["tau"] = c.tau;
    j["sigma"] = c.sigma;
    ordered_json ch;
    ch["type"] = chart.is_disk() ? "disk" : "star";
    ch["radius"] = chart.base_radius();
    if (!chart.is_disk()) {
        ch["cos"] = chart.cos_coeffs();
        ch["sin"] = chart.sin_coeffs();
    }
    j["chart"] = ch;
    const auto solver = solver_of(c, chart);
    j["solver"] = solver;
    if (solver == "ritz") {
        j["degree"] = c.degree;
        j["quadrature"] = {{"radial", c.radial}, {"angular", c.angular}, {"boundary", c.boundary}};
        if (c.no_quotient) j["quotient"] = false;
    }
    return j;
}

struct Output {
    ordered_json json;
    std::vector<std::vector<std::string>> csv;  ///< first row is the header
    bool pass = true;
    std::vector<std::string> breaches;
};

void emit(const RunConfig& c, const Output& out) {
    std::ostringstream os;
    if (c.format == "csv") {
        for (const auto& row : out.csv) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << "\n";
        }
    } else {
        plate_lab_cli::write_json(os, out.json);
        os << "\n";
    }
    if (c.output == "-") {
        std::cout << os.str();
        std::cout.flush();
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw InvalidInput("cannot open output file '" + c.output + "'");
    f << os.str();
}

ordered_json header(const std::string& command, const RunConfig& c) {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = command;
    j["config"] = config_json(c);
    return j;
}

void check(Output& out, bool ok, const std::string& what) {
    if (!ok) {
        out.pass = false;
        out.breaches.push_back(what);
    }
}

// ---------------------------------------------------------------- cluster access

std::string member_label(const reference::DiskMode& m) {
    return "n=" + std::to_string(m.n) + (m.parity == reference::Parity::cos ? " cos" : " sin");
}
std::string member_label(const ritz::RitzSolution&) { return "ritz"; }

/// Runs f(clusters, chart) with Bessel or Ritz clusters.
template <class F>
void with_clusters(const RunConfig& c, std::size_t count, F&& f) {
    const auto chart = chart_of(c);
    const auto problem = problem_of(c);
    const auto p = params_of(c);
    if (solver_of(c, chart) == "bessel") {
        if (c.no_quotient) throw InvalidInput("--no-quotient needs --solver ritz");
        f(reference::disk_spectrum(p, problem, chart.base_radius(), count), chart);
        return;
    }
    auto basis = std::make_shared<const forms::RitzBasis>(ritz::default_basis(chart, problem, c.degree));
    ritz::RitzOptions opts{quad_of(c), !c.no_quotient};
    f(ritz::ritz_solve(p, problem, basis, count, opts).clusters, chart);
}

template <class Member>
const reference::EigenCluster<Member>& pick_cluster(const std::vector<reference::EigenCluster<Member>>& cs, int k) {
    if (k < 1) throw InvalidInput("--cluster is 1-based");
    if (static_cast<std::size_t>(k) > cs.size())
        throw SolverFailure("only " + std::to_string(cs.size()) + " clusters were resolved");
    return cs[k - 1];
}

template <class Member>
ordered_json cluster_json(const reference::EigenCluster<Member>& c, int index) {
    ordered_json j;
    j["index"] = index;
    j["lambda"] = c.lambda;
    j["multiplicity"] = c.size();
    ordered_json eig = ordered_json::array(), pos = ordered_json::array(), labels = ordered_json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
        eig.push_back(shape::member_lambda(c.members[i]));
        pos.push_back(c.indices[i] + 1);
        labels.push_back(member_label(c.members[i]));
    }
    j["eigenvalues"] = eig;
    j["positions"] = pos;
    j["members"] = labels;
    return j;
}

/// t ↦ eigenvalues of the family R + t f for the configured solver.
shape::SpectrumProvider family_of(const RunConfig& c, const geometry::NormalPerturbation& f, std::size_t count,
                                  std::size_t eig_count) {
    const auto chart = chart_of(c);
    const auto problem = problem_of(c);
    const auto p = params_of(c);
    if (solver_of(c, chart) == "bessel") {
        if (!f.profile.cos_coeffs.empty() || !f.profile.sin_coeffs.empty())
            throw InvalidInput("the bessel solver only follows dilations; use --solver ritz for this perturbation");
        const double speed = f.profile.c0, radius = chart.base_radius();
        return [=](double t) {
            return shape::flatten(reference::disk_spectrum(p, problem, radius + speed * t, count));
        };
    }
    ritz::RitzOptions opts{quad_of(c), !c.no_quotient};
    return shape::ritz_family(p, problem, chart, f, c.degree, eig_count, opts);
}

// ---------------------------------------------------------------- commands

Output cmd_spectrum(const RunConfig& c) {
    Output out;
    out.json = header("spectrum", c);
    out.csv.push_back({"cluster", "position", "lambda", "multiplicity", "label"});
    ordered_json clusters = ordered_json::array();
    if (uses_rectangle(c)) {
        const auto modes = reference::rectangle_navier_spectrum(c.rectangle[0], c.rectangle[1], c.tau,
                                                                static_cast<std::size_t>(c.count) * 8 + 8);
        std::vector<double> eigs;
        for (const auto& m : modes) eigs.push_back(m.lambda);
        const auto groups = reference::cluster(eigs);
        for (std::size_t k = 0; k < groups.size() && k < static_cast<std::size_t>(c.count); ++k) {
            ordered_json j;
            double mean = 0.0;
            ordered_json ev = ordered_json::array(), pos = ordered_json::array(), labels = ordered_json::array();
            for (std::size_t i : groups[k]) {
                mean += eigs[i];
                ev.push_back(eigs[i]);
                pos.push_back(i + 1);
                labels.push_back("(" + std::to_string(modes[i].m) + "," + std::to_string(modes[i].n) + ")");
            }
            mean /= static_cast<double>(groups[k].size());
            j["index"] = k + 1;
            j["lambda"] = mean;
            j["multiplicity"] = groups[k].size();
            j["eigenvalues"] = ev;
            j["positions"] = pos;
            j["members"] = labels;
            for (std::size_t i = 0; i < groups[k].size(); ++i)
                out.csv.push_back({std::to_string(k + 1), std::to_string(groups[k][i] + 1),
                                   format_double(eigs[groups[k][i]]), std::to_string(groups[k].size()),
                                   labels[i].get<std::string>()});
            clusters.push_back(j);
        }
    } else {
        with_clusters(c, c.count, [&](const auto& cs, const geometry::StarChart&) {
            for (std::size_t k = 0; k < cs.size(); ++k) {
                clusters.push_back(cluster_json(cs[k], static_cast<int>(k + 1)));
                for (std::size_t i = 0; i < cs[k].size(); ++i)
                    out.csv.push_back({std::to_string(k + 1), std::to_string(cs[k].indices[i] + 1),
                                       format_double(shape::member_lambda(cs[k].members[i])),
                                       std::to_string(cs[k].size()), member_label(cs[k].members[i])});
            }
        });
    }
    out.json["clusters"] = clusters;
    return out;
}

Output cmd_hadamard(const RunConfig& c) {
    const double tol = c.tol.value_or(1e-5);
    const auto f = perturbation_of(c.perturbation);
    const auto problem = problem_of(c);
    const auto p = params_of(c);
    shape::FdOptions fd_opts{c.steps};
    Output out;
    out.json = header("hadamard", c);
    out.json["perturbation"] = c.perturbation;
    out.csv.push_back({"s", "formula_value", "fd_value", "rel_err", "scaled_err"});
    const std::size_t count = static_cast<std::size_t>(std::max(c.count, c.cluster + 1));
    with_clusters(c, count, [&](const auto& cs, const geometry::StarChart& chart) {
        const auto& cl = pick_cluster(cs, c.cluster);
        shape::DensityOptions dopts;
        dopts.traces.quad = quad_of(c);
        dopts.traces.grid_size = c.boundary;
        if (c.as_printed) dopts.variant = shape::DensityVariant::as_printed;
        const auto g = shape::g_density(problem, p, cl, chart, dopts);
        std::size_t eig_count = 0;
        for (const auto& x : cs) eig_count += x.size();
        const auto family = family_of(c, f, count, eig_count);
        const auto sel = shape::ClusterSelector::of(cl);
        std::vector<int> orders = c.orders;
        if (orders.empty())
            for (int s = 1; s <= static_cast<int>(cl.size()); ++s) orders.push_back(s);
        out.json["cluster"] = cluster_json(cl, c.cluster);
        out.json["density_variant"] = c.as_printed ? "as_printed" : "corrected";
        ordered_json reports = ordered_json::array();
        for (int s : orders) {
            const double formula = shape::hadamard_derivative(g, s, f);
            const auto fd = shape::fd_eigen_derivative(family, sel, s, fd_opts);
            const auto r = shape::make_report(formula, fd, shape::hadamard_scale(g, s, f), s, sel, cl.lambda);
            ordered_json j;
            j["s"] = s;
            j["formula_value"] = r.formula_value;
            j["fd_value"] = r.fd_value;
            j["rel_err"] = r.rel_err;
            j["scale"] = r.scale;
            j["scaled_err"] = r.scaled_err;
            j["steps"] = r.steps;
            j["fd_raw"] = r.fd_raw;
            reports.push_back(j);
            out.csv.push_back({std::to_string(s), format_double(r.formula_value), format_double(r.fd_value),
                               format_double(r.rel_err), format_double(r.scaled_err)});
            check(out, r.rel_err <= tol, "s=" + std::to_string(s) + " rel_err " + format_double(r.rel_err));
        }
        out.json["reports"] = reports;
        if (!c.density_csv.empty()) {
            std::ofstream d(c.density_csv, std::ios::binary);
            if (!d) throw InvalidInput("cannot open density file '" + c.density_csv + "'");
            d << "theta";
            for (std::size_t l = 0; l < g.members(); ++l) d << ",G" << l + 1;
            d << ",sum\n";
            for (std::size_t q = 0; q < g.theta.size(); ++q) {
                d << format_double(g.theta[q]);
                for (std::size_t l = 0; l < g.members(); ++l) d << "," << format_double(g.values[l][q]);
                d << "," << format_double(g.sum[q]) << "\n";
            }
        }
    });
    out.json["tolerance"] = tol;
    out.json["pass"] = out.pass;
    return out;
}

Output cmd_criticality(const RunConfig& c) {
    const double tol = c.tol.value_or(1e-6);
    Output out;
    out.json = header("criticality", c);
    out.csv.push_back({"cluster", "lambda", "c_mean", "max_abs_dev", "rel_residual"});
    const std::size_t count = static_cast<std::size_t>(std::max(c.count, c.cluster));
    with_clusters(c, count, [&](const auto& cs, const geometry::StarChart& chart) {
        const auto& cl = pick_cluster(cs, c.cluster);
        shape::DensityOptions dopts;
        dopts.traces.quad = quad_of(c);
        dopts.traces.grid_size = c.boundary;
        const auto r = shape::criticality_residual(problem_of(c), params_of(c), chart, cl, dopts);
        out.json["cluster"] = cluster_json(cl, c.cluster);
        out.json["c_mean"] = r.c_mean;
        out.json["max_abs_dev"] = r.max_abs_dev;
        out.json["rel_residual"] = r.rel_residual;
        out.csv.push_back({std::to_string(c.cluster), format_double(cl.lambda), format_double(r.c_mean),
                           format_double(r.max_abs_dev), format_double(r.rel_residual)});
        check(out, r.rel_residual <= tol, "rel_residual " + format_double(r.rel_residual));
    });
    out.json["tolerance"] = tol;
    out.json["pass"] = out.pass;
    return out;
}

Output cmd_radiality(const RunConfig& c) {
    const double tol = c.tol.value_or(1e-8);
    Output out;
    out.json = header("radiality", c);
    out.csv.push_back({"radius", "v2", "grad2", "lap2", "hess2"});
    const std::size_t count = static_cast<std::size_t>(std::max(c.count, c.cluster));
    with_clusters(c, count, [&](const auto& cs, const geometry::StarChart& chart) {
        const auto& cl = pick_cluster(cs, c.cluster);
        shape::RadialityOptions opts;
        for (int m : c.members) {
            if (m < 1) throw InvalidInput("--members are 1-based");
            opts.members.push_back(static_cast<std::size_t>(m - 1));
        }
        opts.allow_partial = c.allow_partial;
        opts.quad = quad_of(c);
        const auto profs = shape::radiality_profiles(cl, params_of(c), chart, c.radii, opts);
        out.json["cluster"] = cluster_json(cl, c.cluster);
        out.json["partial"] = !opts.members.empty() && opts.members.size() < cl.size();
        ordered_json rows = ordered_json::array();
        for (const auto& pr : profs) {
            ordered_json j;
            j["radius"] = pr.radius;
            ordered_json v;
            for (int k = 0; k < 4; ++k) v[shape::radiality_sum_names[k]] = pr.variation[k];
            j["variation"] = v;
            rows.push_back(j);
            out.csv.push_back({format_double(pr.radius), format_double(pr.variation[0]), format_double(pr.variation[1]),
                               format_double(pr.variation[2]), format_double(pr.variation[3])});
            check(out, pr.max_variation() <= tol,
                  "radius " + format_double(pr.radius) + " variation " + format_double(pr.max_variation()));
        }
        out.json["profiles"] = rows;
    });
    out.json["tolerance"] = tol;
    out.json["pass"] = out.pass;
    return out;
}

Output cmd_lemma(const RunConfig& c) {
    const double tol = c.tol.value_or(1e-7);
    std::vector<shape::Lemma> lemmas;
    if (c.which == "all")
        lemmas.assign(shape::all_lemmas.begin(), shape::all_lemmas.end());
    else
        for (const auto& s : split(c.which, ',')) lemmas.push_back(shape::parse_lemma(s));
    std::vector<int> presets;
    if (c.preset == "all")
        for (int k = 1; k <= shape::lemma_preset_count; ++k) presets.push_back(k);
    else
        for (const auto& s : split(c.preset, ',')) presets.push_back(to_int(s, "--preset"));
    for (int k : presets)
        if (k < 1 || k > shape::lemma_preset_count)
            throw InvalidInput("--preset must be in 1.." + std::to_string(shape::lemma_preset_count));
    const auto chart = chart_of(c);
    shape::LemmaOptions opts;
    opts.quad = quad_of(c);
    if (c.as_printed) opts.variant = shape::LemmaVariant::as_printed;
    if (c.steps != std::vector<double>{1e-3, 5e-4}) opts.fd.steps = c.steps;

    Output out;
    out.json = header("lemma", c);
    out.json["variant"] = c.as_printed ? "as_printed" : "corrected";
    out.csv.push_back({"lemma", "preset", "lhs_fd", "rhs_formula", "rel_err"});
    ordered_json rows = ordered_json::array();
    for (auto l : lemmas)
        for (int k : presets) {
            const auto r = shape::lemma_check(l, k, chart, opts);
            ordered_json j;
            j["lemma"] = shape::to_string(l);
            j["preset"] = k;
            j["lhs_fd"] = r.lhs_fd;
            j["rhs_formula"] = r.rhs_formula;
            j["rel_err"] = r.rel_err;
            rows.push_back(j);
            out.csv.push_back({shape::to_string(l), std::to_string(k), format_double(r.lhs_fd),
                               format_double(r.rhs_formula), format_double(r.rel_err)});
            check(out, r.rel_err <= tol, shape::to_string(l) + " preset " + std::to_string(k));
        }
    out.json["checks"] = rows;
    out.json["tolerance"] = tol;
    out.json["pass"] = out.pass;
    return out;
}

std::vector<double> sweep(const std::vector<double>& spec, const std::string& flag) {
    if (spec.size() != 3) throw InvalidInput(flag + " takes START STOP N");
    const double n = spec[2];
    if (!(n >= 2) || n != std::floor(n)) throw InvalidInput(flag + ": N must be an integer >= 2");
    std::vector<double> ts;
    for (int i = 0; i < static_cast<int>(n); ++i) ts.push_back(spec[0] + (spec[1] - spec[0]) * i / (n - 1));
    return ts;
}

Output cmd_branches(const RunConfig& c) {
    const double tol = c.tol.value_or(1e-9);
    Output out;
    ordered_json rows = ordered_json::array();
    if (!c.stretch.empty()) {
        if (c.problem_given && c.problem != "navier")
            throw InvalidInput("--rectangle-stretch only supports the navier problem");
        if (c.tau < 0.0) throw InvalidInput("tau must be non-negative");
        const auto ids = split(c.pair, ',');
        if (ids.size() != 2) throw InvalidInput("--pair takes M,N");
        const int m = to_int(ids[0], "--pair"), n = to_int(ids[1], "--pair");
        if (m < 1 || n < 1 || m == n) throw InvalidInput("--pair needs distinct positive mode numbers");
        const auto ss = sweep(c.stretch, "--rectangle-stretch");
        out.json["schema"] = 1;
        out.json["command"] = "branches";
        out.json["config"] = {{"problem", "navier"}, {"tau", c.tau}, {"family", "rectangle-stretch"},
                              {"pair", {m, n}}};
        out.csv.push_back({"s", "lambda_1", "lambda_2", "Lambda_1", "Lambda_2"});
        std::vector<std::array<double, 2>> big;
        for (double s : ss) {
            const double a = reference::stretched_square_lambda(m, n, s, c.tau);
            const double b = reference::stretched_square_lambda(n, m, s, c.tau);
            const double lo = std::min(a, b), hi = std::max(a, b);
            const double e1 = shape::elementary_symmetric({lo, hi}, 1), e2 = shape::elementary_symmetric({lo, hi}, 2);
            big.push_back({e1, e2});
            rows.push_back({{"s", s}, {"lambda", {lo, hi}}, {"Lambda", {e1, e2}}});
            out.csv.push_back({format_double(s), format_double(lo), format_double(hi), format_double(e1),
                               format_double(e2)});
        }
        // Λ_{F,s} is even in the stretch parameter
        for (std::size_t i = 0; i < ss.size(); ++i) {
            const std::size_t j = ss.size() - 1 - i;
            if (std::abs(ss[i] + ss[j]) > 1e-12 * (1.0 + std::abs(ss[i]))) continue;
            for (int k = 0; k < 2; ++k)
                check(out, std::abs(big[i][k] - big[j][k]) <= tol * std::abs(big[i][k]),
                      "asymmetric Lambda at s=" + format_double(ss[i]));
        }
    } else {
        if (c.range.empty()) throw InvalidInput("branches needs --rectangle-stretch or --range");
        const auto ts = sweep(c.range, "--range");
        const auto f = perturbation_of(c.perturbation);
        out.json = header("branches", c);
        out.json["perturbation"] = c.perturbation;
        const std::size_t count = static_cast<std::size_t>(std::max(c.count, c.cluster + 1));
        with_clusters(c, count, [&](const auto& cs, const geometry::StarChart&) {
            const auto& cl = pick_cluster(cs, c.cluster);
            std::size_t eig_count = 0;
            for (const auto& x : cs) eig_count += x.size();
            const auto family = family_of(c, f, count, eig_count);
            const auto sel = shape::ClusterSelector::of(cl);
            std::vector<std::string> head{"t"};
            for (std::size_t k = 0; k < sel.size; ++k) head.push_back("lambda_" + std::to_string(sel.first + k + 1));
            for (std::size_t s = 1; s <= sel.size; ++s) head.push_back("Lambda_" + std::to_string(s));
            out.csv.push_back(head);
            for (double t : ts) {
                const auto eigs = family(t);
                if (eigs.size() < sel.first + sel.size) throw SolverFailure("branches: spectrum too short");
                std::vector<double> lam(eigs.begin() + sel.first, eigs.begin() + sel.first + sel.size);
                std::vector<std::string> row{format_double(t)};
                ordered_json e = ordered_json::array();
                for (double v : lam) row.push_back(format_double(v));
                for (std::size_t s = 1; s <= sel.size; ++s) {
                    const double v = shape::elementary_symmetric(lam, static_cast<int>(s));
                    e.push_back(v);
                    row.push_back(format_double(v));
                }
                rows.push_back({{"t", t}, {"lambda", lam}, {"Lambda", e}});
                out.csv.push_back(row);
            }
        });
    }
    out.json["rows"] = rows;
    out.json["pass"] = out.pass;
    return out;
}

// ---------------------------------------------------------------- CLI wiring

const std::vector<std::string> commands{"spectrum", "hadamard", "criticality", "radiality", "lemma", "branches"};

std::string token_of(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) return format_double(v.get<double>());
    throw InvalidInput("config: unsupported value " + v.dump());
}

/// Rewrites argv with the options of a JSON config file placed before the
/// command-line options, which therefore take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw InvalidInput("--config needs a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!path) return rest;
    std::ifstream in(*path);
    if (!in) throw InvalidInput("cannot read config file '" + *path + "'");
    ordered_json cfg;
    try {
        cfg = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw InvalidInput("config file '" + *path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw InvalidInput("config file must hold a JSON object");
    std::vector<std::string> tokens;
    std::optional<std::string> command;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (it.key() == "command") {
            command = token_of(it.value());
            continue;
        }
        const std::string flag = "--" + it.key();
        const auto& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) tokens.push_back(flag);
        } else if (v.is_array()) {
            tokens.push_back(flag);
            for (const auto& x : v) tokens.push_back(token_of(x));
        } else {
            tokens.push_back(flag);
            tokens.push_back(token_of(v));
        }
    }
    auto pos = std::find_if(rest.begin(), rest.end(),
                            [](const std::string& a) { return std::find(commands.begin(), commands.end(), a) != commands.end(); });
    if (pos == rest.end()) {
        if (!command) throw InvalidInput("no command given on the command line or in the config file");
        rest.insert(rest.begin(), *command);
        pos = rest.begin();
    }
    rest.insert(pos + 1, tokens.begin(), tokens.end());
    return rest;
}

void add_common(CLI::App* app, RunConfig& c) {
    app->add_option("--problem", c.problem, "dirichlet | navier | neumann | steklov-ks | steklov-bp")
        ->each([&](const std::string&) { c.problem_given = true; });
    app->add_option("--tau", c.tau, "lateral tension (>= 0)");
    app->add_option("--sigma", c.sigma, "Poisson ratio in (-1, 1)");
    app->add_option("--disk", c.disk, "disk radius");
    app->add_option("--star", c.star, "base radius of a Fourier star chart");
    app->add_option("--cos", c.cos_coeffs, "relative cosine coefficients a_1..a_m of the chart")->delimiter(',');
    app->add_option("--sin", c.sin_coeffs, "relative sine coefficients b_1..b_m of the chart")->delimiter(',');
    app->add_option("--rectangle", c.rectangle, "rectangle side lengths A B (navier only)")->expected(2);
    app->add_option("--solver", c.solver, "bessel | ritz (default: bessel on disks, ritz otherwise)");
    app->add_option("--degree", c.degree, "Ritz basis degree");
    app->add_option("--radial", c.radial, "radial Gauss nodes");
    app->add_option("--angular", c.angular, "angular nodes of the volume rule");
    app->add_option("--boundary", c.boundary, "boundary nodes");
    app->add_option("--count", c.count, "number of clusters");
    app->add_option("--format", c.format, "json | csv")->each([&](const std::string&) { c.format_given = true; });
    app->add_option("--output,-o", c.output, "output path ('-' for stdout)");
    app->add_flag("--assert", c.assert_mode, "exit with status 4 when a verification threshold is breached");
    app->add_option("--tol", c.tol, "verification threshold");
    app->add_flag("--no-quotient", c.no_quotient, "keep constants in the free problems (Ritz debug mode)");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Plate eigenvalue and shape-derivative laboratory"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue clusters");
    auto* hadamard = app.add_subcommand("hadamard", "shape derivative formula against finite differences");
    auto* criticality = app.add_subcommand("criticality", "constancy of the shape-gradient density");
    auto* radiality = app.add_subcommand("radiality", "angular variation of the eigenspace sums on a disk");
    auto* lemma = app.add_subcommand("lemma", "first-variation identities of the forms");
    auto* branches = app.add_subcommand("branches", "eigenvalue branches along a one-parameter family");
    for (auto* s : {spectrum, hadamard, criticality, radiality, lemma, branches}) add_common(s, c);

    for (auto* s : {hadamard, criticality, radiality, branches}) s->add_option("--cluster", c.cluster, "1-based cluster");
    hadamard->add_option("--s", c.orders, "orders s (default: all)")->delimiter(',');
    for (auto* s : {hadamard, branches})
        s->add_option("--perturbation", c.perturbation, "dilation | const:C | cos:M[:A] | sin:M[:A]");
    for (auto* s : {hadamard, lemma})
        s->add_option("--steps", c.steps, "finite-difference steps")->delimiter(',');
    hadamard->add_option("--density-csv", c.density_csv, "also write (theta, G values) to this file");
    for (auto* s : {hadamard, lemma}) s->add_flag("--as-printed", c.as_printed, "use the uncorrected variant");
    radiality->add_option("--radii", c.radii, "radii")->delimiter(',');
    radiality->add_option("--members", c.members, "1-based member subset")->delimiter(',');
    radiality->add_flag("--allow-partial", c.allow_partial, "accept a strict subset of the cluster");
    lemma->add_option("--which", c.which, "dM,dB,dL,dDet,dJ1,dJ2,dJ3 or all");
    lemma->add_option("--preset", c.preset, "1..5, comma list, or all");
    branches->add_option("--rectangle-stretch", c.stretch, "S0 S1 N: rectangle (0,e^s)x(0,e^-s)")->expected(3);
    branches->add_option("--pair", c.pair, "mode pair M,N of the square");
    branches->add_option("--range", c.range, "T0 T1 N for the chart family R + t f")->expected(3);

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const Error& e) {
        std::cerr << "plate_lab: " << e.what() << "\n";
        return exit_invalid;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_invalid;
    }

    try {
        if (branches->parsed() && !c.format_given) c.format = "csv";
        validate_common(c);
        Output out;
        if (spectrum->parsed()) out = cmd_spectrum(c);
        if (hadamard->parsed()) out = cmd_hadamard(c);
        if (criticality->parsed()) out = cmd_criticality(c);
        if (radiality->parsed()) out = cmd_radiality(c);
        if (lemma->parsed()) out = cmd_lemma(c);
        if (branches->parsed()) out = cmd_branches(c);
        emit(c, out);
        if (c.assert_mode && !out.pass) {
            for (const auto& b : out.breaches) std::cerr << "plate_lab: threshold breached: " << b << "\n";
            return exit_breach;
        }
        return exit_ok;
    } catch (const InvalidInput& e) {
        std::cerr << "plate_lab: invalid configuration: " << e.what() << "\n";
        return exit_invalid;
    } catch (const SolverFailure& e) {
        std::cerr << "plate_lab: solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const std::exception& e) {
        std::cerr << "plate_lab: internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

#include "optocirc/app.hpp"

#include "optocirc/bell.hpp"
#include "optocirc/core_model.hpp"
#include "optocirc/elimination.hpp"
#include "optocirc/full_model.hpp"
#include "optocirc/scattering.hpp"

#include <cmath>
#include <sstream>

namespace optocirc {

namespace {

struct ResolvedModel {
    EffectiveModel em;
    std::optional<LinearizedModel> lm;
    std::optional<MeanField> mf;
};

int model_sections(const RunConfig& cfg) {
    return static_cast<int>(cfg.physical.has_value()) + static_cast<int>(cfg.phenomenological.has_value())
           + static_cast<int>(cfg.linearized.has_value());
}

SolverConfig solver_of(const RunConfig& cfg) { return cfg.solver.value_or(SolverConfig{}); }

ResolvedModel resolve(const RunConfig& cfg, const std::string& cmd, std::vector<std::string>& notes) {
    if (model_sections(cfg) != 1)
        throw ConfigError("'" + cmd + "' needs exactly one of [physical], [linearized], [phenomenological]");
    ResolvedModel r;
    if (cfg.physical) {
        const SolverConfig s = solver_of(cfg);
        MeanFieldOptions mo;
        mo.tol = s.tol;
        mo.max_iter = s.max_iter;
        r.mf = solve_mean_field(*cfg.physical, mo);
        if (r.mf->multistable())
            notes.push_back("warning: drive lies in a multistable window (" + std::to_string(r.mf->fixed_point_count)
                            + " fixed points); using the converged branch");
        r.lm = linearize(*cfg.physical, *r.mf);
        r.em = eliminate(*r.lm);
    } else if (cfg.linearized) {
        r.lm = cfg.linearized->lm;
        r.em = eliminate(*r.lm);
    } else {
        r.em = phenomenological_model(cfg.phenomenological->couplings, cfg.phenomenological->rates);
    }
    return r;
}

std::vector<double> grid_for(const RunConfig& cfg, const RunOptions& opts, const EffectiveModel& em) {
    if (opts.grid) return grid_points(*opts.grid);
    if (cfg.grid) return grid_points(*cfg.grid);
    return grid_points(default_grid(em));
}

std::string pair_name(int o, int i) { return std::string(port_names[o]) + "_" + port_names[i]; }

void add_complex(Table& t, const std::string& name, Complex z, const std::string& status = "") {
    t.rows.push_back({name, z.real(), z.imag(), status});
}

void add_real(Table& t, const std::string& name, double v, const std::string& status = "") {
    t.rows.push_back({name, v, 0.0, status});
}

RunResult effective_params(const RunConfig& cfg) {
    RunResult res;
    const ResolvedModel r = resolve(cfg, "effective-params", res.notes);
    Table t;
    t.header = {"quantity", "re", "im", "status"};
    if (r.mf) {
        add_complex(t, "alpha1", r.mf->alpha1);
        add_complex(t, "alpha2", r.mf->alpha2);
        add_complex(t, "beta1", r.mf->beta1);
        add_complex(t, "beta2", r.mf->beta2);
        add_real(t, "delta_c1_prime", r.mf->delta_c1_prime);
        add_real(t, "mean_field_residual", r.mf->residual);
        t.rows.push_back({std::string("fixed_points"), static_cast<double>(r.mf->fixed_point_count), 0.0,
                          std::string(r.mf->multistable() ? "multistable" : "")});
    }
    if (r.lm) {
        add_complex(t, "G1", r.lm->G1);
        add_complex(t, "G2", r.lm->G2);
        add_complex(t, "cJ", r.lm->cJ);
    }
    const EffectiveModel& em = r.em;
    add_real(t, "delta_eff", em.delta_eff);
    add_real(t, "omega_eff1", em.omega_eff1);
    add_real(t, "omega_eff2", em.omega_eff2);
    add_real(t, "kappa_eff", em.kappa_eff);
    add_real(t, "gamma_eff1", em.gamma_eff1);
    add_real(t, "gamma_eff2", em.gamma_eff2);
    add_complex(t, "Gp1", em.Gp1);
    add_complex(t, "Gp2", em.Gp2);
    add_complex(t, "Gpp1", em.Gpp1);
    add_complex(t, "Gpp2", em.Gpp2);
    add_complex(t, "V1", em.V1);
    add_complex(t, "V2", em.V2);
    if (r.lm) {
        add_real(t, "xi_c", em.xi.xi_c);
        add_real(t, "xi_m1", em.xi.xi_m1);
        add_real(t, "xi_m2", em.xi.xi_m2);
        add_complex(t, "xi_1", em.xi.xi_1);
        add_complex(t, "xi_2", em.xi.xi_2);
        add_complex(t, "xi", em.xi.xi);
        const ValidityReport v = validity_report(*r.lm, solver_of(cfg).validity_threshold);
        for (const ValidityRatio& ratio : v.ratios) {
            add_real(t, "ratio_" + ratio.name, ratio.value, ratio.warn ? "warn" : "pass");
            if (ratio.warn)
                res.notes.push_back("warning: elimination premise " + ratio.name + " = " + format_double(ratio.value)
                                    + " exceeds " + format_double(v.threshold));
        }
        const HermiticityDefects h = effective_hamiltonian_couplings(em);
        add_real(t, "hermiticity_defect_G1", h.G1);
        add_real(t, "hermiticity_defect_G2", h.G2);
        add_real(t, "hermiticity_defect_V", h.V);
    }
    res.tables.push_back({"main", std::move(t)});
    return res;
}

RunResult spectrum_cmd(const RunConfig& cfg, const RunOptions& opts) {
    RunResult res;
    const ResolvedModel r = resolve(cfg, "spectrum", res.notes);
    const StabilityReport st = stability_check(build_M(r.em));
    if (!st.stable)
        res.notes.push_back("warning: effective drift matrix is unstable (margin " + format_double(st.margin)
                            + "); the spectrum does not describe a steady state");
    const TransmissionSpectrum sp = spectrum(r.em, grid_for(cfg, opts, r.em));
    Table t;
    t.header.push_back("omega");
    for (int o = 0; o < 3; ++o)
        for (int i = 0; i < 3; ++i) t.header.push_back("T_" + pair_name(o, i));
    for (int o = 0; o < 3; ++o)
        for (int i = 0; i < 3; ++i) {
            t.header.push_back("gamma_re_" + pair_name(o, i));
            t.header.push_back("gamma_im_" + pair_name(o, i));
        }
    for (std::size_t k = 0; k < sp.omegas.size(); ++k) {
        std::vector<Cell> row{sp.omegas[k]};
        for (int o = 0; o < 3; ++o)
            for (int i = 0; i < 3; ++i) row.emplace_back(sp.T[k](o, i));
        for (int o = 0; o < 3; ++o)
            for (int i = 0; i < 3; ++i) {
                row.emplace_back(sp.gamma[k](o, i).real());
                row.emplace_back(sp.gamma[k](o, i).imag());
            }
        t.rows.push_back(std::move(row));
    }
    res.tables.push_back({"main", std::move(t)});
    return res;
}

RunResult sweep_cmd(const RunConfig& cfg) {
    RunResult res;
    if (!cfg.sweep) throw ConfigError("'sweep' needs a [sweep] section");
    if (model_sections(cfg) != 1)
        throw ConfigError("'sweep' needs exactly one of [physical], [linearized], [phenomenological]");
    SweepTemplate tmpl;
    if (cfg.phenomenological) {
        tmpl = *cfg.phenomenological;
    } else {
        const ResolvedModel r = resolve(cfg, "sweep", res.notes);
        tmpl = *r.lm;
    }
    const SweepResult sr = sweep(tmpl, cfg.sweep->axes, cfg.sweep->metric, cfg.sweep->threads);
    Table t;
    for (const SweepAxis& ax : sr.axes) t.header.push_back(ax.name);
    t.header.push_back(sr.metric);
    const std::size_t inner = sr.axes.size() == 2 ? sr.axes[1].n : 1;
    for (std::size_t k = 0; k < sr.values.size(); ++k) {
        std::vector<Cell> row{sr.axis_values[0][k / inner]};
        if (sr.axes.size() == 2) row.emplace_back(sr.axis_values[1][k % inner]);
        row.emplace_back(sr.values[k]);
        t.rows.push_back(std::move(row));
    }
    res.tables.push_back({"main", std::move(t)});
    return res;
}

RunResult bell_cmd(const RunConfig& cfg) {
    RunResult res;
    const BellConfig b = cfg.bell.value_or(BellConfig{});
    const std::vector<double> thetas = grid_points({b.theta_min, b.theta_max, b.theta_n});
    const std::vector<double> alphas = grid_points({b.alpha2_min, b.alpha2_max, b.alpha2_n});
    const BellScan scan = violation_scan(thetas, alphas);

    Table t;
    t.header = {"theta", "alpha2", "abs_B", "violation"};
    for (std::size_t it = 0; it < thetas.size(); ++it)
        for (std::size_t ia = 0; ia < alphas.size(); ++ia)
            t.rows.push_back({thetas[it], alphas[ia], scan.value(it, ia),
                              static_cast<long long>(scan.violation[it * alphas.size() + ia])});
    res.tables.push_back({"main", std::move(t)});

    // Oracle comparison: the closed form against the operator expectation on
    // the product state |φ>|φ>, φ = sqrt(1-α2^2)|0> + α2|1>, with all four
    // measurement vectors along (θ, 0). The coefficient expression is
    // evaluated with the same amplitudes.
    Table o;
    o.header = {"case", "theta", "alpha2", "closed_form", "general_formula", "operator_oracle", "closed_minus_oracle"};
    const double th = b.oracle_theta;
    const MeasurementVector v = measurement(th, 0.0);
    double worst_gap = 0.0;
    for (double a2 : {0.0, 0.25, 0.5, 1.0 / std::sqrt(2.0), 0.9, 1.0}) {
        const double a1 = std::sqrt(1.0 - a2 * a2);
        const Eigen::Vector3cd phi_state(a1, a2, 0.0);
        const Eigen::MatrixXcd psi = product_state(phi_state, phi_state);
        const double closed = chsh_closed_form(th, a2);
        const double general = chsh_general(th, th, 0.0, 0.0, a1, a2, a1, a2);
        const double oracle = chsh_operator_oracle(psi, v, v, v, v, b.n_trunc);
        worst_gap = std::max(worst_gap, closed - oracle);
        o.rows.push_back({std::string("product_state"), th, a2, closed, general, oracle, closed - oracle});
    }
    {
        // (|00> + |11>)/sqrt(2) with the standard optimal measurement settings.
        Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(2, 2);
        psi(0, 0) = 1.0 / std::sqrt(2.0);
        psi(1, 1) = 1.0 / std::sqrt(2.0);
        const double val = chsh_operator_oracle(psi, measurement(0.0), measurement(pi / 2.0), measurement(pi / 4.0),
                                                measurement(pi / 4.0, pi), b.n_trunc);
        o.rows.push_back({std::string("bell_pair_optimal"), std::string(""), std::string(""), std::string(""),
                          std::string(""), val, std::string("")});
    }
    res.tables.push_back({"oracle", std::move(o)});

    const BellPeak peak = refine_peak(scan);
    std::ostringstream note;
    note << "closed-form peak " << format_double(peak.value) << " at theta = " << format_double(peak.theta)
         << ", alpha2 = " << format_double(peak.alpha2) << "; " << scan.violation_count() << " of "
         << scan.values.size() << " grid points exceed 2";
    res.notes.push_back(note.str());
    res.notes.push_back("note: with a = a', b = b' the operator expectation is bounded by 2 for every normalized "
                        "state, while the closed form reaches 2.5; largest closed-minus-oracle gap in the table: "
                        + format_double(worst_gap));
    return res;
}

RunResult validate_cmd(const RunConfig& cfg, const RunOptions& opts) {
    RunResult res;
    if (cfg.phenomenological && model_sections(cfg) == 1)
        throw ConfigError("'validate' needs a microscopic model ([physical] or [linearized])");
    const ResolvedModel r = resolve(cfg, "validate", res.notes);
    const AgreementReport rep = compare_models(*r.lm, grid_for(cfg, opts, r.em));
    Table t;
    t.header = {"out", "in", "max_abs", "max_rel", "peak_effective", "peak_full", "peak_rel"};
    for (const PairDeviation& d : rep.pairs)
        t.rows.push_back({std::string(port_names[index(d.pair.out)]), std::string(port_names[index(d.pair.in)]),
                          d.max_abs, d.max_rel, d.peak_effective, d.peak_full, d.peak_rel});
    res.tables.push_back({"main", std::move(t)});
    const ValidityReport v = validity_report(*r.lm, solver_of(cfg).validity_threshold);
    for (const ValidityRatio& ratio : v.ratios)
        if (ratio.warn)
            res.notes.push_back("warning: elimination premise " + ratio.name + " = " + format_double(ratio.value)
                                + " exceeds " + format_double(v.threshold) + "; large deviations are expected");
    res.notes.push_back("a2<-b1 peak deviation: " + format_double(rep.at({Port::a2, Port::b1}).peak_rel));
    return res;
}

RunResult circulator_cmd(const RunConfig& cfg) {
    RunResult res;
    if (!cfg.phenomenological) throw ConfigError("'circulator-search' needs a [phenomenological] section");
    const SearchConfig s = cfg.search.value_or(SearchConfig{});
    const double magnitude = s.magnitude.value_or(cfg.phenomenological->couplings.G10);
    CirculatorSearchOptions so;
    so.phase_points = s.phase_points;
    so.omega_points = s.omega_points;
    const CirculatorSearch cs = find_circulator_point(cfg.phenomenological->rates, magnitude, so);
    Table t;
    t.header = {"direction", "magnitude", "loop_phase", "loop_phase_deg", "omega", "forward_T", "backward_T",
                "isolation_db"};
    auto add = [&](const char* dir, const std::vector<CirculatorOptimum>& v) {
        for (const CirculatorOptimum& c : v)
            t.rows.push_back({std::string(dir), c.magnitude, c.loop_phase, c.loop_phase * 180.0 / pi, c.omega,
                              c.forward, c.backward, c.isolation_db});
    };
    add("b1_to_a2", cs.forward_optima);
    add("a2_to_b1", cs.reverse_optima);
    res.tables.push_back({"main", std::move(t)});
    return res;
}

} // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::configuration: return exit_usage;
    case ErrorKind::io: return exit_io;
    case ErrorKind::domain: return exit_domain;
    case ErrorKind::singular: return exit_singular;
    case ErrorKind::iteration_failure: return exit_iteration;
    case ErrorKind::truncation: return exit_truncation;
    }
    return exit_other;
}

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> n{"effective-params", "spectrum", "sweep", "bell", "validate",
                                            "circulator-search"};
    return n;
}

RunResult run_subcommand(const std::string& name, const RunConfig& cfg, const RunOptions& opts) {
    if (name == "effective-params") return effective_params(cfg);
    if (name == "spectrum") return spectrum_cmd(cfg, opts);
    if (name == "sweep") return sweep_cmd(cfg);
    if (name == "bell") return bell_cmd(cfg);
    if (name == "validate") return validate_cmd(cfg, opts);
    if (name == "circulator-search") return circulator_cmd(cfg);
    const std::string hint = closest_match(name, subcommand_names());
    throw ConfigError("unknown subcommand '" + name + "'" + (hint.empty() ? std::string() : "; did you mean '" + hint + "'?"));
}

std::string auxiliary_path(const std::string& path, const std::string& role) {
    const std::string ext = ".csv";
    if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
        return path.substr(0, path.size() - ext.size()) + "_" + role + ext;
    return path + "_" + role + ext;
}

std::string emit_tables(const RunResult& res, const std::string& path) {
    std::string text;
    for (const NamedTable& nt : res.tables) {
        if (path.empty()) {
            if (!text.empty()) text += '\n';
            text += render_csv(nt.table);
        } else {
            write_table(nt.table, nt.role == "main" ? path : auxiliary_path(path, nt.role));
        }
    }
    return text;
}

} // namespace optocirc

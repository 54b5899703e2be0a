#include "plns/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "plns/errors.hpp"
#include "plns/norms.hpp"
#include "plns/operators.hpp"
#include "plns/potential.hpp"

namespace plns {

namespace {

struct WaveVec {
    std::array<int, 3> k{0, 0, 0};
    int norm2 = 0;
};

// Canonical wavevectors (first nonzero component positive, so that the
// cos/sin pair at k and -k is not emitted twice), |k_a| <= n/4, sorted by
// |k|^2 then lexicographically.
std::vector<WaveVec> enumerate_wavevectors(int dim, int n) {
    const int kmax = n / 4;
    std::vector<WaveVec> out;
    std::array<int, 3> k{0, 0, 0};
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
        lo[a] = -kmax;
        hi[a] = kmax;
    }
    for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
        for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
            for (k[2] = lo[2]; k[2] <= hi[2]; ++k[2]) {
                int first = 0;
                for (int a = 0; a < dim; ++a)
                    if (k[a] != 0) {
                        first = k[a];
                        break;
                    }
                if (first <= 0) continue;  // zero vector or non-canonical sign
                WaveVec w;
                w.k = k;
                w.norm2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                out.push_back(w);
            }
    std::sort(out.begin(), out.end(), [](const WaveVec& a, const WaveVec& b) {
        if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
        return a.k < b.k;
    });
    return out;
}

std::array<std::size_t, 3> axis_strides(const PeriodicGrid& g) {
    std::array<std::size_t, 3> s{0, 0, 0};
    std::size_t cur = 1;
    for (int a = g.dim - 1; a >= 0; --a) {
        s[a] = cur;
        cur *= static_cast<std::size_t>(g.n);
    }
    return s;
}

double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

double max_axis_speed_sum(const VectorField& u) {
    double m = 0.0;
    const std::size_t np = u.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        double s = 0.0;
        for (int c = 0; c < u.ncomp(); ++c) s += std::fabs(u.at(pt, c));
        m = std::max(m, s);
    }
    return m;
}

} // namespace

GalerkinBasis build_basis(int dim, int nmodes, const PeriodicGrid& grid) {
    if (dim != grid.dim) throw InvalidInput("build_basis: dim does not match the grid");
    if (nmodes < 1) throw InvalidInput("build_basis: need at least one mode");

    const auto waves = enumerate_wavevectors(dim, grid.n);
    const std::size_t capacity =
        static_cast<std::size_t>(dim) + 2 * static_cast<std::size_t>(dim) * waves.size();
    if (static_cast<std::size_t>(nmodes) > capacity) {
        std::ostringstream os;
        os << "build_basis: " << nmodes << " modes requested but the grid supports only "
           << capacity << " band-limited modes (wavenumbers up to n/4)";
        throw InvalidInput(os.str());
    }

    GalerkinBasis basis{grid, nmodes, {}, {}, {}, {}};
    const double measure = std::pow(kTwoPi, grid.dim);

    // Constant unit vectors first.
    for (int a = 0; a < dim && static_cast<int>(basis.modes.size()) < nmodes; ++a) {
        VectorField m(grid, dim);
        const std::size_t np = grid.num_points();
        for (std::size_t pt = 0; pt < np; ++pt) m.at(pt, a) = 1.0;
        basis.modes.push_back(std::move(m));
        basis.gram_diag.push_back(measure);
    }

    for (const WaveVec& w : waves) {
        if (static_cast<int>(basis.modes.size()) >= nmodes) break;
        const std::size_t np = grid.num_points();
        for (int a = 0; a < dim; ++a) {
            for (int trig = 0; trig < 2; ++trig) {  // 0: cos, 1: sin
                if (static_cast<int>(basis.modes.size()) >= nmodes) break;
                VectorField m(grid, dim);
                for (std::size_t pt = 0; pt < np; ++pt) {
                    const auto x = grid.point(pt);
                    const double phase = w.k[0] * x[0] + w.k[1] * x[1] + w.k[2] * x[2];
                    m.at(pt, a) = trig == 0 ? std::cos(phase) : std::sin(phase);
                }
                basis.modes.push_back(std::move(m));
                basis.gram_diag.push_back(0.5 * measure);
            }
        }
    }

    for (const VectorField& m : basis.modes) {
        basis.grads.push_back(gradient(m));
        basis.divs.push_back(divergence_vec(m));
    }
    return basis;
}

VectorField velocity(const GalerkinBasis& basis, const std::vector<double>& coeffs) {
    if (static_cast<int>(coeffs.size()) != basis.nmodes)
        throw InvalidInput("velocity: coefficient count does not match the basis");
    VectorField u(basis.grid, basis.grid.dim);
    const std::size_t np = basis.grid.num_points();
    for (int r = 0; r < basis.nmodes; ++r) {
        const double c = coeffs[r];
        if (c == 0.0) continue;
        const VectorField& m = basis.modes[r];
        for (std::size_t pt = 0; pt < np; ++pt)
            for (int a = 0; a < u.ncomp(); ++a) u.at(pt, a) += c * m.at(pt, a);
    }
    return u;
}

std::vector<double> project_velocity(const GalerkinBasis& basis, const VectorField& u) {
    if (!(u.grid() == basis.grid) || u.ncomp() != basis.grid.dim)
        throw InvalidInput("project_velocity: field shape mismatch");
    std::vector<double> coeffs(basis.nmodes);
    for (int r = 0; r < basis.nmodes; ++r)
        coeffs[r] = inner(u, basis.modes[r]) / basis.gram_diag[r];
    return coeffs;
}

Eigen::MatrixXd mass_operator(const ScalarField& rho, const GalerkinBasis& basis, double delta) {
    if (!(rho.grid() == basis.grid) || rho.ncomp() != 1)
        throw InvalidInput("mass_operator: density shape mismatch");
    if (delta > 0.0 && rho.min_value() < delta) {
        std::ostringstream os;
        os << "mass_operator: density below floor (min " << rho.min_value() << " < delta "
           << delta << ")";
        throw DensityFloorViolation(os.str());
    }

    const int n = basis.nmodes;
    Eigen::MatrixXd m(n, n);
    const std::size_t np = basis.grid.num_points();
    const double vol = basis.grid.cell_volume();
    for (int r = 0; r < n; ++r)
        for (int s = r; s < n; ++s) {
            double acc = 0.0;
            const VectorField& mr = basis.modes[r];
            const VectorField& ms = basis.modes[s];
            for (std::size_t pt = 0; pt < np; ++pt) {
                double dot = 0.0;
                for (int a = 0; a < basis.grid.dim; ++a) dot += mr.at(pt, a) * ms.at(pt, a);
                acc += rho.at(pt, 0) * dot;
            }
            m(r, s) = acc * vol;
            m(s, r) = m(r, s);
        }

    if (delta > 0.0) {
        const double min_gram = *std::min_element(basis.gram_diag.begin(), basis.gram_diag.end());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success || es.eigenvalues()[0] < 0.5 * delta * min_gram) {
            std::ostringstream os;
            os << "mass_operator: positivity margin lost (min eigenvalue "
               << (es.info() == Eigen::Success ? es.eigenvalues()[0] : 0.0) << " < "
               << 0.5 * delta * min_gram << ")";
            throw NumericalBreakdown(os.str());
        }
    }
    return m;
}

Eigen::VectorXd rhs_operator(const ScalarField& rho, const VectorField& u,
                             const GalerkinBasis& basis, const ExponentField& p, double t,
                             const VectorField* f, double gamma) {
    const PeriodicGrid& g = basis.grid;
    const int d = g.dim;
    if (!(rho.grid() == g) || rho.ncomp() != 1 || !(u.grid() == g) || u.ncomp() != d)
        throw InvalidInput("rhs_operator: state shape mismatch");
    if (f != nullptr && (!(f->grid() == g) || f->ncomp() != d))
        throw InvalidInput("rhs_operator: forcing shape mismatch");

    const ScalarField pvals = p.on_grid(g, t);
    const TensorField du = sym_gradient(u);
    const TensorField stress = stress_field(du, pvals);
    const std::size_t np = g.num_points();

    // T = rho u (x) u - S(Du), and the pressure rho^gamma.
    TensorField flux(g, d * d);
    ScalarField pressure(g, 1);
    for (std::size_t pt = 0; pt < np; ++pt) {
        const double r = rho.at(pt, 0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                flux.at(pt, i * d + j) = r * u.at(pt, i) * u.at(pt, j) - stress.at(pt, i * d + j);
        pressure.at(pt, 0) = std::pow(r, gamma);
    }

    Eigen::VectorXd b(basis.nmodes);
    for (int r = 0; r < basis.nmodes; ++r) {
        const VectorField& mode = basis.modes[r];
        const Field& grad = basis.grads[r];
        const ScalarField& div = basis.divs[r];
        double acc = 0.0;
        for (std::size_t pt = 0; pt < np; ++pt) {
            double v = pressure.at(pt, 0) * div.at(pt, 0);
            if (f != nullptr) {
                double dot = 0.0;
                for (int a = 0; a < d; ++a) dot += f->at(pt, a) * mode.at(pt, a);
                v += rho.at(pt, 0) * dot;
            }
            for (int c = 0; c < d * d; ++c) v += flux.at(pt, c) * grad.at(pt, c);
            acc += v;
        }
        b[r] = acc * g.cell_volume();
    }
    return b;
}

TransportResult transport_step(const ScalarField& rho, const VectorField& u, double dt,
                               double delta, double cfl_safety, TransportScheme scheme) {
    const PeriodicGrid& g = rho.grid();
    if (rho.ncomp() != 1 || !(u.grid() == g) || u.ncomp() != g.dim)
        throw InvalidInput("transport_step: field shape mismatch");
    if (!(dt > 0.0)) throw InvalidInput("transport_step: dt must be positive");

    const double speed = max_axis_speed_sum(u);
    if (dt * speed / g.h > cfl_safety * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "transport_step: CFL bound exceeded (dt*max|u|/h = " << dt * speed / g.h << " > "
           << cfl_safety << ")";
        throw CflViolation(os.str());
    }

    const auto strides = axis_strides(g);
    const std::size_t n = static_cast<std::size_t>(g.n);
    const std::size_t np = g.num_points();
    const double lambda = dt / g.h;

    ScalarField out = rho;
    std::vector<double> fluxes(np);
    for (int a = 0; a < g.dim; ++a) {
        const std::size_t stride = strides[a];
        auto shift = [&](std::size_t pt, int offset) {
            const std::size_t pos = (pt / stride) % n;
            const std::size_t moved = (pos + n + static_cast<std::size_t>(offset)) % n;
            return pt + (moved - pos) * stride;
        };
        for (std::size_t pt = 0; pt < np; ++pt) {
            const std::size_t nxt = shift(pt, 1);
            const double uface = 0.5 * (u.at(pt, a) + u.at(nxt, a));
            double upwind;
            if (scheme == TransportScheme::upwind) {
                upwind = uface >= 0.0 ? rho.at(pt, 0) : rho.at(nxt, 0);
            } else {
                const double r0 = rho.at(shift(pt, -1), 0);
                const double r1 = rho.at(pt, 0);
                const double r2 = rho.at(nxt, 0);
                const double r3 = rho.at(shift(pt, 2), 0);
                if (uface >= 0.0)
                    upwind = r1 + 0.5 * minmod(r1 - r0, r2 - r1);
                else
                    upwind = r2 - 0.5 * minmod(r2 - r1, r3 - r2);
            }
            fluxes[pt] = uface * upwind;
        }
        for (std::size_t pt = 0; pt < np; ++pt)
            out.at(pt, 0) -= lambda * (fluxes[pt] - fluxes[shift(pt, -1)]);
    }

    TransportResult res{std::move(out), false, 0.0};
    res.rho_min = res.rho.min_value();
    res.floor_violated = res.rho_min < delta;
    return res;
}

GalerkinState step(const GalerkinState& state, double dt, const SimConfig& config,
                   const GalerkinBasis& basis) {
    if (!(dt > 0.0)) throw InvalidInput("step: dt must be positive");

    auto floor_error = [&](const TransportResult& tr, const char* where) {
        std::ostringstream os;
        os << "density floor violated during " << where << " at t=" << state.t << " (min rho "
           << tr.rho_min << " < delta " << config.delta << ")";
        return DensityFloorViolation(os.str());
    };

    TransportResult tr1 = transport_step(state.rho, state.u, 0.5 * dt, config.delta,
                                         config.cfl_safety, config.transport);
    if (tr1.floor_violated) throw floor_error(tr1, "the first half transport");

    Eigen::MatrixXd m = mass_operator(tr1.rho, basis, config.delta);
    Eigen::LDLT<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalBreakdown("step: mass operator factorization failed");
    auto solve = [&](const Eigen::VectorXd& b) {
        Eigen::VectorXd x = solver.solve(b);
        if (!x.allFinite())
            throw NumericalBreakdown("step: mass operator solve produced non-finite values");
        return x;
    };
    auto rhs_at = [&](double t, const std::vector<double>& coeffs) {
        const VectorField uu = velocity(basis, coeffs);
        std::optional<VectorField> fv;
        const VectorField* fp = nullptr;
        if (config.forcing) {
            fv = config.forcing(t);
            fp = &*fv;
        }
        return rhs_operator(tr1.rho, uu, basis, config.exponent, t, fp, config.gamma);
    };

    const int n = basis.nmodes;
    Eigen::Map<const Eigen::VectorXd> c0(state.coeffs.data(), n);
    Eigen::VectorXd c_new(n);
    if (config.integrator == Integrator::explicit_rk2) {
        const Eigen::VectorXd k1 = solve(rhs_at(state.t, state.coeffs));
        std::vector<double> cmid(state.coeffs);
        for (int i = 0; i < n; ++i) cmid[i] += dt * k1[i];
        const Eigen::VectorXd k2 = solve(rhs_at(state.t + dt, cmid));
        c_new = c0 + 0.5 * dt * (k1 + k2);
    } else {
        // Backward-Euler fixed point; accepted after the increment stalls.
        c_new = c0;
        for (int it = 0; it < 50; ++it) {
            std::vector<double> cc(c_new.data(), c_new.data() + n);
            const Eigen::VectorXd next = c0 + dt * solve(rhs_at(state.t + dt, cc));
            const double inc = (next - c_new).lpNorm<Eigen::Infinity>();
            c_new = next;
            if (inc < 1e-10) break;
        }
    }

    std::vector<double> coeffs_new(c_new.data(), c_new.data() + n);
    VectorField u_new = velocity(basis, coeffs_new);
    TransportResult tr2 = transport_step(tr1.rho, u_new, 0.5 * dt, config.delta,
                                         config.cfl_safety, config.transport);
    if (tr2.floor_violated) throw floor_error(tr2, "the second half transport");

    return GalerkinState{state.t + dt, std::move(tr2.rho), std::move(coeffs_new),
                         std::move(u_new)};
}

VectorField coefficient_derivative(const GalerkinState& state, const SimConfig& config,
                                   const GalerkinBasis& basis) {
    Eigen::MatrixXd m = mass_operator(state.rho, basis, config.delta);
    Eigen::LDLT<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalBreakdown("coefficient_derivative: mass operator factorization failed");
    std::optional<VectorField> fv;
    const VectorField* fp = nullptr;
    if (config.forcing) {
        fv = config.forcing(state.t);
        fp = &*fv;
    }
    const Eigen::VectorXd b =
        rhs_operator(state.rho, state.u, basis, config.exponent, state.t, fp, config.gamma);
    const Eigen::VectorXd cdot = solver.solve(b);
    if (!cdot.allFinite())
        throw NumericalBreakdown("coefficient_derivative: non-finite coefficient derivative");
    return velocity(basis, std::vector<double>(cdot.data(), cdot.data() + basis.nmodes));
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::completed: return "completed";
        case StopReason::density_floor: return "density-floor";
        case StopReason::indicator_overflow: return "indicator-overflow";
        case StopReason::nan_detected: return "nan-detected";
        case StopReason::numerical_breakdown: return "numerical-breakdown";
    }
    return "unknown";
}

RunResult run(const SimConfig& config) {
    const PeriodicGrid& g = config.grid;
    if (!(config.dt > 0.0)) throw InvalidInput("run: dt must be positive");
    if (!(config.t_end > 0.0)) throw InvalidInput("run: T_end must be positive");
    if (!(config.delta > 0.0)) throw InvalidInput("run: density floor delta must be positive");
    if (!(config.gamma > 1.0)) throw InvalidInput("run: gamma must exceed 1");
    if (config.theorem_mode && config.gamma < 1.5 - 1e-12)
        throw InvalidInput("run: gamma below 3/2");

    ExponentField p = config.exponent;  // local copy caches extrema
    p.extrema(ExponentSampling{g, 0.0, config.t_end, 33, 4});
    const ExponentReport rep =
        p.validate(config.theorem_mode ? ExponentMode::theorem : ExponentMode::potential);
    if (!rep.ok) throw InvalidInput("run: exponent field rejected: " + rep.to_string());
    const double p_minus = p.p_minus();

    const GalerkinBasis basis = build_basis(g.dim, config.nmodes, g);

    ScalarField rho = config.rho0 ? *config.rho0 : ScalarField(g, 1, 1.0);
    if (!(rho.grid() == g) || rho.ncomp() != 1) throw InvalidInput("run: rho0 shape mismatch");
    if (!rho.all_finite()) throw InvalidInput("run: rho0 must be finite");
    if (rho.min_value() < config.delta)
        throw InvalidInput("run: rho0 must not start below the density floor delta");
    if (config.u0 && config.m0) throw InvalidInput("run: provide u0 or m0, not both");

    std::vector<double> coeffs(basis.nmodes, 0.0);
    if (config.u0) {
        coeffs = project_velocity(basis, *config.u0);
    } else if (config.m0) {
        if (!(config.m0->grid() == g) || config.m0->ncomp() != g.dim)
            throw InvalidInput("run: m0 shape mismatch");
        Eigen::VectorXd b(basis.nmodes);
        for (int r = 0; r < basis.nmodes; ++r) b[r] = inner(*config.m0, basis.modes[r]);
        Eigen::MatrixXd m = mass_operator(rho, basis, config.delta);
        Eigen::LDLT<Eigen::MatrixXd> solver(m);
        if (solver.info() != Eigen::Success)
            throw NumericalBreakdown("run: momentum projection solve failed");
        const Eigen::VectorXd c = solver.solve(b);
        coeffs.assign(c.data(), c.data() + basis.nmodes);
    }

    GalerkinState state{0.0, std::move(rho), coeffs, velocity(basis, coeffs)};

    auto forcing_at = [&](double t) -> std::optional<VectorField> {
        if (!config.forcing) return std::nullopt;
        return config.forcing(t);
    };

    const double inf = std::numeric_limits<double>::infinity();
    auto record_state = [&](const GalerkinState& s, double energy_residual) {
        DiagnosticsRecord r;
        const ScalarField pv = p.on_grid(g, s.t);
        r.t = s.t;
        r.mass = integral(s.rho);
        r.kinetic = kinetic_energy(s.rho, s.u);
        r.internal = internal_energy(s.rho, config.gamma);
        r.dissipation_rate = dissipation_rate(s.u, pv);
        const auto fv = forcing_at(s.t);
        r.work_rate = work_rate(s.rho, s.u, fv ? &*fv : nullptr);
        r.i_phi = i_phi(s.u, pv);
        const VectorField du_dt = coefficient_derivative(s, config, basis);
        r.j_phi = j_phi(s.u, du_dt, pv);
        const ScalarField dt_u = dtilde(s.u);
        for (double q : config.dtilde_q) r.dtilde_lq.push_back(lq_norm(dt_u, q));
        const Field gu = gradient(s.u);
        r.grad_u_l3 = lq_norm(gu, 3.0);
        r.rho_linf = lq_norm(s.rho, inf);
        const double gq = g.dim == 1 ? inf : (g.dim == 2 ? 4.0 : 3.0);
        r.gn_ratio = gn_ratio(s.u, 0, 1, gq, 2.0, 2.0, 0.5);
        r.poincare_ratio = poincare_ratio(s.rho, s.u);
        r.energy_residual = energy_residual;
        r.rho_min = s.rho.min_value();
        r.rho_max = s.rho.max_value();
        r.divu_linf = lq_norm(divergence_vec(s.u), inf);
        r.grad_u_linf = lq_norm(gu, inf);
        double srd = 0.0;
        for (std::size_t pt = 0; pt < g.num_points(); ++pt) {
            double m2 = du_dt.magnitude(pt);
            srd += s.rho.at(pt, 0) * m2 * m2;
        }
        r.sqrt_rho_dtu_l2 = std::sqrt(srd * g.cell_volume());
        r.rho_w13p = w1q_norm(s.rho, 3.0 * p_minus);
        r.korn_ratio = korn_ratio(s.u, 2.0);
        r.gij_ratio = gij_ratio(s.u, s.u, 2.0, p_minus, pv);
        const double sob = 3.0 * p_minus / (p_minus + 1.0);
        const double w2 = std::pow(std::pow(lq_norm(s.u, sob), sob) +
                                       std::pow(lq_norm(gu, sob), sob) +
                                       std::pow(lq_norm(gradient(gu), sob), sob),
                                   1.0 / sob);
        r.ine_ratio = std::pow(w2, p_minus) / (r.i_phi + 1.0);
        return r;
    };

    RunResult out;
    out.trajectory.push_back(state);
    out.records.push_back(record_state(state, 0.0));
    {
        const auto [b1, b2] = blowup_indicators(out.records);
        out.records.back().blowup1 = b1;
        out.records.back().blowup2 = b2;
    }

    const double t_eps = 1e-12 * std::max(1.0, config.t_end);
    try {
        while (state.t < config.t_end - t_eps) {
            const double speed = max_axis_speed_sum(state.u);
            double dt_step = std::min(config.dt, config.t_end - state.t);
            dt_step = std::min(dt_step, g.h / (speed + 1.0));
            if (speed > 0.0) dt_step = std::min(dt_step, config.cfl_safety * g.h / speed);

            std::optional<GalerkinState> next;
            for (int attempt = 0; attempt < 40 && !next; ++attempt) {
                try {
                    next = step(state, dt_step, config, basis);
                } catch (const CflViolation&) {
                    dt_step *= 0.5;
                    if (!(dt_step > 1e-15))
                        throw NumericalBreakdown("run: CFL-stable step size underflow");
                }
            }
            if (!next) throw NumericalBreakdown("run: CFL retry limit exhausted");
            ++out.steps;

            if (!next->rho.all_finite() || !next->u.all_finite()) {
                std::ostringstream os;
                os << "non-finite state after step " << out.steps << " (t=" << next->t << ")";
                out.stop = StopReason::nan_detected;
                out.stop_detail = os.str();
                break;
            }

            const auto fv = forcing_at(next->t);
            const double eres =
                energy_balance(next->rho, next->u, state.rho, state.u, p.on_grid(g, next->t),
                               fv ? &*fv : nullptr, config.gamma, dt_step);
            state = std::move(*next);
            out.records.push_back(record_state(state, eres));
            const auto [b1, b2] = blowup_indicators(out.records);
            out.records.back().blowup1 = b1;
            out.records.back().blowup2 = b2;

            if (config.snapshot_cadence > 0 && out.steps % config.snapshot_cadence == 0)
                out.trajectory.push_back(state);

            if (b1 > config.blowup1_max) {
                std::ostringstream os;
                os << "blow-up indicator " << b1 << " exceeded the threshold "
                   << config.blowup1_max << " at t=" << state.t;
                out.stop = StopReason::indicator_overflow;
                out.stop_detail = os.str();
                break;
            }
        }
    } catch (const DensityFloorViolation& e) {
        out.stop = StopReason::density_floor;
        out.stop_detail = e.what();
    } catch (const NumericalBreakdown& e) {
        out.stop = StopReason::numerical_breakdown;
        out.stop_detail = e.what();
    }

    if (out.trajectory.empty() || out.trajectory.back().t != state.t)
        out.trajectory.push_back(state);
    out.final_time = state.t;
    return out;
}

} // namespace plns

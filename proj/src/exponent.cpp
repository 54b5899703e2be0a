#include "plns/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plns/errors.hpp"

namespace plns {

std::string ExponentReport::to_string() const {
    if (ok) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        const auto& v = violations[i];
        if (i) os << "; ";
        os << "violation \"" << v.bound << "\" (value " << v.worst_value << " at t=" << v.t
           << ", x=(" << v.x[0] << ", " << v.x[1] << ", " << v.x[2] << "))";
    }
    return os.str();
}

ExponentField ExponentField::constant(double p) {
    ExponentField e;
    e.kind_ = ExponentKind::constant;
    e.constant_ = p;
    e.have_extrema_ = true;
    e.p_minus_ = e.p_plus_ = p;
    e.lipschitz_ = 0.0;
    return e;
}

ExponentField ExponentField::preset(const std::string& name, double base, double amplitude) {
    ExponentField e;
    e.kind_ = ExponentKind::preset;
    e.base_ = base;
    e.amplitude_ = amplitude;
    if (name == "sin_x")
        e.preset_ = Preset::sin_x;
    else if (name == "sin_xy")
        e.preset_ = Preset::sin_xy;
    else if (name == "sin_tx")
        e.preset_ = Preset::sin_tx;
    else
        throw InvalidInput("unknown exponent preset \"" + name + "\"");
    return e;
}

ExponentField ExponentField::gridded(std::vector<Snapshot> frames) {
    if (frames.empty()) throw InvalidInput("gridded exponent needs at least one frame");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].field.ncomp() != 1)
            throw InvalidInput("gridded exponent frames must be scalar fields");
        if (!(frames[i].field.grid() == frames[0].field.grid()))
            throw InvalidInput("gridded exponent frames must share one grid");
        if (i > 0 && !(frames[i].t > frames[i - 1].t))
            throw InvalidInput("gridded exponent frames must have increasing times");
    }
    ExponentField e;
    e.kind_ = ExponentKind::gridded;
    e.frames_ = std::move(frames);
    return e;
}

double ExponentField::frame_value(std::size_t frame, const std::array<double, 3>& x) const {
    const Field& f = frames_[frame].field;
    const PeriodicGrid& g = f.grid();
    std::array<int, 3> base{0, 0, 0};
    std::array<double, 3> w{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) {
        double s = x[a] / g.h;
        double fl = std::floor(s);
        base[a] = static_cast<int>(fl);
        w[a] = s - fl;
    }
    double v = 0.0;
    const int corners = 1 << g.dim;
    for (int c = 0; c < corners; ++c) {
        double weight = 1.0;
        std::array<int, 3> idx{0, 0, 0};
        for (int a = 0; a < g.dim; ++a) {
            const int bit = (c >> a) & 1;
            idx[a] = base[a] + bit;
            weight *= bit ? w[a] : 1.0 - w[a];
        }
        v += weight * f.at(g.index(idx), 0);
    }
    return v;
}

std::array<double, 3> ExponentField::frame_grad(std::size_t frame,
                                                const std::array<double, 3>& x) const {
    const Field& f = frames_[frame].field;
    const PeriodicGrid& g = f.grid();
    std::array<int, 3> base{0, 0, 0};
    std::array<double, 3> w{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) {
        double s = x[a] / g.h;
        double fl = std::floor(s);
        base[a] = static_cast<int>(fl);
        w[a] = s - fl;
    }
    std::array<double, 3> grad{0.0, 0.0, 0.0};
    const int corners = 1 << g.dim;
    for (int c = 0; c < corners; ++c) {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = 0; a < g.dim; ++a) idx[a] = base[a] + ((c >> a) & 1);
        const double fv = f.at(g.index(idx), 0);
        for (int da = 0; da < g.dim; ++da) {
            double weight = 1.0;
            for (int a = 0; a < g.dim; ++a) {
                const int bit = (c >> a) & 1;
                if (a == da)
                    weight *= bit ? 1.0 / g.h : -1.0 / g.h;
                else
                    weight *= bit ? w[a] : 1.0 - w[a];
            }
            grad[da] += weight * fv;
        }
    }
    return grad;
}

namespace {

// Returns (lower frame, upper frame, time weight in [0,1]); clamps outside.
struct TimeBracket {
    std::size_t lo, hi;
    double w;
    double dt_denom;  // t_hi - t_lo, 0 when clamped
};

TimeBracket bracket(const std::vector<Snapshot>& frames, double t) {
    if (t <= frames.front().t) return {0, 0, 0.0, 0.0};
    if (t >= frames.back().t)
        return {frames.size() - 1, frames.size() - 1, 0.0, 0.0};
    std::size_t hi = 1;
    while (frames[hi].t < t) ++hi;
    const std::size_t lo = hi - 1;
    const double denom = frames[hi].t - frames[lo].t;
    return {lo, hi, (t - frames[lo].t) / denom, denom};
}

} // namespace

double ExponentField::value(double t, const std::array<double, 3>& x) const {
    switch (kind_) {
        case ExponentKind::constant:
            return constant_;
        case ExponentKind::preset:
            switch (preset_) {
                case Preset::sin_x: return base_ + amplitude_ * std::sin(x[0]);
                case Preset::sin_xy: return base_ + amplitude_ * std::sin(x[0]) * std::sin(x[1]);
                case Preset::sin_tx: return base_ + amplitude_ * std::sin(x[0] - t);
            }
            return base_;
        case ExponentKind::gridded: {
            const TimeBracket b = bracket(frames_, t);
            if (b.lo == b.hi) return frame_value(b.lo, x);
            return (1.0 - b.w) * frame_value(b.lo, x) + b.w * frame_value(b.hi, x);
        }
    }
    return constant_;
}

std::array<double, 3> ExponentField::grad_x(double t, const std::array<double, 3>& x) const {
    switch (kind_) {
        case ExponentKind::constant:
            return {0.0, 0.0, 0.0};
        case ExponentKind::preset:
            switch (preset_) {
                case Preset::sin_x: return {amplitude_ * std::cos(x[0]), 0.0, 0.0};
                case Preset::sin_xy:
                    return {amplitude_ * std::cos(x[0]) * std::sin(x[1]),
                            amplitude_ * std::sin(x[0]) * std::cos(x[1]), 0.0};
                case Preset::sin_tx: return {amplitude_ * std::cos(x[0] - t), 0.0, 0.0};
            }
            return {0.0, 0.0, 0.0};
        case ExponentKind::gridded: {
            const TimeBracket b = bracket(frames_, t);
            const auto glo = frame_grad(b.lo, x);
            if (b.lo == b.hi) return glo;
            const auto ghi = frame_grad(b.hi, x);
            return {(1.0 - b.w) * glo[0] + b.w * ghi[0], (1.0 - b.w) * glo[1] + b.w * ghi[1],
                    (1.0 - b.w) * glo[2] + b.w * ghi[2]};
        }
    }
    return {0.0, 0.0, 0.0};
}

double ExponentField::dt(double t, const std::array<double, 3>& x) const {
    switch (kind_) {
        case ExponentKind::constant:
            return 0.0;
        case ExponentKind::preset:
            switch (preset_) {
                case Preset::sin_x:
                case Preset::sin_xy: return 0.0;
                case Preset::sin_tx: return -amplitude_ * std::cos(x[0] - t);
            }
            return 0.0;
        case ExponentKind::gridded: {
            const TimeBracket b = bracket(frames_, t);
            if (b.lo == b.hi) return 0.0;  // clamped outside the window
            return (frame_value(b.hi, x) - frame_value(b.lo, x)) / b.dt_denom;
        }
    }
    return 0.0;
}

ScalarField ExponentField::on_grid(const PeriodicGrid& grid, double t) const {
    ScalarField out(grid, 1);
    const std::size_t np = grid.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) out.at(pt, 0) = value(t, grid.point(pt));
    return out;
}

Field ExponentField::grad_on_grid(const PeriodicGrid& grid, double t) const {
    Field out(grid, grid.dim);
    const std::size_t np = grid.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        const auto g = grad_x(t, grid.point(pt));
        for (int a = 0; a < grid.dim; ++a) out.at(pt, a) = g[a];
    }
    return out;
}

ScalarField ExponentField::dt_on_grid(const PeriodicGrid& grid, double t) const {
    ScalarField out(grid, 1);
    const std::size_t np = grid.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) out.at(pt, 0) = dt(t, grid.point(pt));
    return out;
}

std::pair<double, double> ExponentField::extrema(const ExponentSampling& s) {
    if (kind_ == ExponentKind::constant) return {p_minus_, p_plus_};
    if (s.time_samples < 1) throw InvalidInput("exponent sampling needs at least one time");
    if (s.refine < 1) throw InvalidInput("exponent sampling refinement must be >= 1");
    if (s.t_end < s.t_begin) throw InvalidInput("exponent sampling: t_end < t_begin");

    p_minus_ = 1e300;
    p_plus_ = -1e300;
    lipschitz_ = 0.0;

    auto visit = [&](double t, const std::array<double, 3>& x) {
        const double v = value(t, x);
        if (v < p_minus_) {
            p_minus_ = v;
            argmin_t_ = t;
            argmin_x_ = x;
        }
        if (v > p_plus_) {
            p_plus_ = v;
            argmax_t_ = t;
            argmax_x_ = x;
        }
        const auto g = grad_x(t, x);
        const double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
        lipschitz_ = std::max(lipschitz_, gn + std::fabs(dt(t, x)));
    };

    if (kind_ == ExponentKind::gridded) {
        // Value extrema are attained at frame times and grid nodes, exactly.
        const PeriodicGrid& g = frames_[0].field.grid();
        const std::size_t np = g.num_points();
        for (const auto& fr : frames_)
            for (std::size_t pt = 0; pt < np; ++pt) visit(fr.t, g.point(pt));
        // Derivative sup additionally probed at cell midpoints (the gradient
        // of the interpolant is piecewise constant per cell).
        const double hh = 0.5 * g.h;
        for (const auto& fr : frames_)
            for (std::size_t pt = 0; pt < np; ++pt) {
                auto x = g.point(pt);
                for (int a = 0; a < g.dim; ++a) x[a] += hh;
                visit(fr.t, x);
            }
        have_extrema_ = true;
        return {p_minus_, p_plus_};
    }

    // Analytic presets: dense sampling at the documented refinement.
    PeriodicGrid fine(s.grid.dim, s.grid.n * s.refine);
    const std::size_t np = fine.num_points();
    for (int it = 0; it < s.time_samples; ++it) {
        const double t = s.time_samples == 1
                             ? s.t_begin
                             : s.t_begin + (s.t_end - s.t_begin) * it / (s.time_samples - 1);
        for (std::size_t pt = 0; pt < np; ++pt) visit(t, fine.point(pt));
    }
    have_extrema_ = true;
    return {p_minus_, p_plus_};
}

double ExponentField::p_minus() const {
    if (!have_extrema_) throw InvalidInput("exponent extrema not computed");
    return p_minus_;
}

double ExponentField::p_plus() const {
    if (!have_extrema_) throw InvalidInput("exponent extrema not computed");
    return p_plus_;
}

double ExponentField::lipschitz_bound() const {
    if (!have_extrema_) throw InvalidInput("exponent extrema not computed");
    return lipschitz_;
}

ExponentReport ExponentField::validate(ExponentMode mode) const {
    if (!have_extrema_) throw InvalidInput("exponent extrema not computed");
    ExponentReport rep;
    const double lower = mode == ExponentMode::theorem ? 7.0 / 5.0 : 1.0;
    const char* lower_name = mode == ExponentMode::theorem ? "p- <= 7/5" : "p- <= 1";
    if (!(p_minus_ > lower))
        rep.violations.push_back({lower_name, p_minus_, argmin_t_, argmin_x_});
    if (!(p_plus_ <= 2.0))
        rep.violations.push_back({"p+ > 2", p_plus_, argmax_t_, argmax_x_});
    rep.ok = rep.violations.empty();
    return rep;
}

} // namespace plns
